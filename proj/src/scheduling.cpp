#include "pastlab/scheduling.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <vector>

namespace pastlab {

ConstantScheduler::ConstantScheduler(Direction d) : d_(d) {
  if (!is_nondet(d)) throw std::invalid_argument("constant scheduler needs Ln or Rn");
}

Direction FunctionScheduler::decide(const History& w, SiteId) {
  Direction d = fn_(w);
  if (!is_nondet(d)) throw std::logic_error("scheduler function returned " + std::string(to_string(d)));
  return d;
}

Direction TableScheduler::decide(const History& w, SiteId) {
  if (w.size() > s_.size) return Direction::Ln;
  auto it = s_.table.find(w.str());
  return it == s_.table.end() ? Direction::Ln : it->second;
}

// ---------------------------------------------------------------------------

BoundedScheduler::BoundedScheduler(std::shared_ptr<Scheduler> inner, std::size_t k)
    : inner_(std::move(inner)), k_(k) {
  if (k_ == 0) throw std::invalid_argument("bounded scheduler needs k >= 1");
}

Direction BoundedScheduler::decide(const History& w, SiteId site) {
  std::string key = w.str();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second.answer;

  // Run state of this branch: the entry recorded at the latest nondeterministic
  // decision along w (those prefixes were queried earlier on the same branch).
  std::shared_ptr<const Runs> runs;
  for (std::size_t i = w.size(); i-- > 0;) {
    if (!is_nondet(w[i])) continue;
    auto it = memo_.find(w.prefix(i).str());
    if (it != memo_.end()) runs = it->second.runs;
    break;
  }
  auto next = runs ? std::make_shared<Runs>(*runs) : std::make_shared<Runs>();

  Direction want = inner_->decide(w, site);
  auto r = next->find(site);
  if (r != next->end() && r->second.last == want && r->second.length >= k_)
    want = want == Direction::Ln ? Direction::Rn : Direction::Ln;
  if (r != next->end() && r->second.last == want)
    ++r->second.length;
  else
    (*next)[site] = Run{want, 1};

  memo_.emplace(std::move(key), Entry{want, std::move(next)});
  return want;
}

// ---------------------------------------------------------------------------

Direction InteractiveScheduler::decide(const History& w, SiteId) {
  std::string key = w.str();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  for (;;) {
    out_ << "history [" << key << "] choose L or R: " << std::flush;
    std::string answer;
    if (!(in_ >> answer)) throw InputExhausted();
    Direction d;
    if (answer == "L" || answer == "l" || answer == "Ln") d = Direction::Ln;
    else if (answer == "R" || answer == "r" || answer == "Rn") d = Direction::Rn;
    else {
      out_ << "please answer L or R\n";
      continue;
    }
    memo_.emplace(key, d);
    return d;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::shared_ptr<Scheduler> random_scheduler(std::uint64_t seed) {
  return std::make_shared<FunctionScheduler>([seed](const History& w) {
    std::uint64_t h = mix(seed);
    for (Direction d : w.items()) h = mix(h ^ (static_cast<std::uint64_t>(d) + 1));
    h = mix(h ^ w.size());
    return (h & 1) ? Direction::Rn : Direction::Ln;
  });
}

std::vector<PartialSchedule> enumerate_partial_schedules(std::size_t size,
                                                         const std::vector<History>& histories,
                                                         std::size_t cap) {
  std::vector<std::string> keys;
  for (const History& h : histories) {
    if (h.size() > size) throw std::invalid_argument("history longer than schedule size");
    keys.push_back(h.str());
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (keys.size() >= 63 || (std::size_t{1} << keys.size()) > cap)
    throw EnumerationTooLarge("2^" + std::to_string(keys.size()) +
                              " partial schedules exceed the cap of " + std::to_string(cap));
  std::vector<PartialSchedule> out;
  std::size_t total = std::size_t{1} << keys.size();
  out.reserve(total);
  for (std::size_t mask = 0; mask < total; ++mask) {
    PartialSchedule s;
    s.size = size;
    for (std::size_t i = 0; i < keys.size(); ++i)
      s.table.emplace(keys[i], (mask >> i) & 1 ? Direction::Rn : Direction::Ln);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct NeedDecision {
  std::string history;
};

class Probe : public TableScheduler {
 public:
  using TableScheduler::TableScheduler;
  Direction decide(const History& w, SiteId site) override {
    if (w.size() <= schedule().size) {
      std::string key = w.str();
      if (!schedule().table.count(key)) throw NeedDecision{std::move(key)};
    }
    return TableScheduler::decide(w, site);
  }
  bool shareable() const override { return false; }
};

}  // namespace

std::size_t for_each_partial_schedule(std::size_t size, std::size_t cap,
                                      const std::function<bool(TableScheduler&)>& visit) {
  std::vector<PartialSchedule> stack;
  stack.push_back(PartialSchedule{size, {}});
  std::size_t complete = 0;
  while (!stack.empty()) {
    PartialSchedule current = std::move(stack.back());
    stack.pop_back();
    Probe probe(current);
    try {
      bool go_on = visit(probe);
      ++complete;
      if (!go_on) break;
    } catch (const NeedDecision& need) {
      if (complete + stack.size() + 2 > cap)
        throw EnumerationTooLarge("more than " + std::to_string(cap) + " strategies");
      PartialSchedule right = current;
      right.table.emplace(need.history, Direction::Rn);
      current.table.emplace(need.history, Direction::Ln);
      stack.push_back(std::move(right));
      stack.push_back(std::move(current));
    }
  }
  return complete;
}

std::shared_ptr<Scheduler> parse_scheduler_spec(const std::string& spec) {
  if (spec == "const:Ln" || spec == "Ln") return std::make_shared<ConstantScheduler>(Direction::Ln);
  if (spec == "const:Rn" || spec == "Rn") return std::make_shared<ConstantScheduler>(Direction::Rn);
  if (spec.rfind("random:", 0) == 0)
    return random_scheduler(std::stoull(spec.substr(7)));
  if (spec.rfind("bounded:", 0) == 0) {
    auto colon = spec.find(':', 8);
    if (colon == std::string::npos) throw std::invalid_argument("bounded:K:<scheduler> expected");
    std::size_t k = std::stoul(spec.substr(8, colon - 8));
    return std::make_shared<BoundedScheduler>(parse_scheduler_spec(spec.substr(colon + 1)), k);
  }
  throw std::invalid_argument("unknown scheduler '" + spec + "'");
}

}  // namespace pastlab
