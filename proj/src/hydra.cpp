#include "pastlab/hydra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pastlab/scheduling.hpp"

namespace pastlab {

// ---------------------------------------------------------------------------
// Tree structure

HydraState HydraState::parse(std::string_view text) {
  HydraState h;
  std::size_t i = 0;
  auto ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\n' || text[i] == '\t')) ++i;
  };
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("hydra: " + what + " at offset " + std::to_string(i));
  };
  std::function<long(long, int)> node = [&](long parent, int depth) -> long {
    if (depth > 10000) fail("nesting too deep");
    ws();
    if (i >= text.size() || text[i] != '(') fail("expected '('");
    ++i;
    long id = static_cast<long>(h.nodes_.size());
    h.nodes_.push_back(HydraNode{parent, {}, 1, true});
    for (;;) {
      ws();
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      long child = node(id, depth + 1);
      h.nodes_[id].children.push_back(child);
      ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        ws();
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) fail("expected multiplicity");
        Integer m(std::string(text.substr(start, i - start)), 10);
        if (m < 1) fail("multiplicity must be positive");
        h.nodes_[child].multiplicity = m;
      }
    }
    return id;
  };
  node(-1, 0);
  ws();
  if (i != text.size()) fail("trailing input");
  return h;
}

HydraState HydraState::line(int edges) {
  std::string s(static_cast<std::size_t>(edges + 1), '(');
  s += std::string(static_cast<std::size_t>(edges + 1), ')');
  return parse(s);
}

std::string HydraState::str() const {
  std::function<void(long, std::string&)> rec = [&](long v, std::string& out) {
    out += '(';
    for (long c : nodes_[v].children) {
      rec(c, out);
      if (nodes_[c].multiplicity != 1) out += "*" + nodes_[c].multiplicity.get_str();
    }
    out += ')';
  };
  std::string out;
  rec(0, out);
  return out;
}

std::string HydraState::canonical() const {
  std::function<std::string(long)> rec = [&](long v) {
    std::map<std::string, Integer> groups;
    for (long c : nodes_[v].children) groups[rec(c)] += nodes_[c].multiplicity;
    std::string out = "(";
    for (const auto& [sub, m] : groups) {
      out += sub;
      if (m != 1) out += "*" + m.get_str();
    }
    return out + ")";
  };
  return rec(0);
}

bool HydraState::is_head(long id) const {
  if (id <= 0 || id >= static_cast<long>(nodes_.size())) return false;
  const HydraNode& n = nodes_[id];
  return n.alive && n.children.empty();
}

std::vector<long> HydraState::heads() const {
  std::vector<long> out;
  for (long id = 1; id < static_cast<long>(nodes_.size()); ++id)
    if (is_head(id)) out.push_back(id);
  return out;
}

Integer HydraState::head_count() const {
  std::function<Integer(long)> rec = [&](long v) -> Integer {
    if (nodes_[v].children.empty()) return v == 0 ? Integer(0) : Integer(1);
    Integer total = 0;
    for (long c : nodes_[v].children) total += rec(c) * nodes_[c].multiplicity;
    return total;
  };
  return rec(0);
}

int HydraState::depth(long id) const {
  int d = 0;
  while (nodes_.at(id).parent >= 0) {
    id = nodes_[id].parent;
    ++d;
  }
  return d;
}

std::size_t HydraState::node_count() const {
  std::function<Integer(long)> rec = [&](long v) -> Integer {
    Integer total = 1;
    for (long c : nodes_[v].children) total += rec(c) * nodes_[c].multiplicity;
    return total;
  };
  Integer n = rec(0);
  return n.fits_ulong_p() ? n.get_ui() : static_cast<std::size_t>(-1);
}

Ordinal HydraState::ordinal() const {
  std::function<Ordinal(long)> rec = [&](long v) {
    Ordinal acc;
    for (long c : nodes_[v].children)
      acc = natural_sum(acc, Ordinal::term(rec(c), nodes_[c].multiplicity));
    return acc;
  };
  return rec(0);
}

std::vector<std::pair<long, long>> HydraState::clone_subtree(long src, long new_parent,
                                                             const Integer& multiplicity) {
  // Ascending ids are a topological order (parents before children).
  std::vector<long> members;
  std::function<void(long)> collect = [&](long v) {
    members.push_back(v);
    for (long c : nodes_[v].children) collect(c);
  };
  collect(src);
  std::sort(members.begin(), members.end());
  std::map<long, long> fresh;
  std::vector<std::pair<long, long>> mapping;
  for (long old : members) {
    long id = static_cast<long>(nodes_.size());
    long parent = old == src ? new_parent : fresh.at(nodes_[old].parent);
    Integer m = old == src ? multiplicity : nodes_[old].multiplicity;
    nodes_.push_back(HydraNode{parent, {}, m, true});
    nodes_[parent].children.push_back(id);
    fresh[old] = id;
    mapping.emplace_back(old, id);
  }
  return mapping;
}

long HydraState::concretize(long head) {
  if (!is_head(head)) throw std::invalid_argument("node " + std::to_string(head) + " is not a head");
  std::vector<long> path;
  for (long v = head; v > 0; v = nodes_[v].parent) path.push_back(v);
  std::reverse(path.begin(), path.end());
  for (std::size_t i = 0; i < path.size(); ++i) {
    long a = path[i];
    if (nodes_[a].multiplicity == 1) continue;
    auto mapping = clone_subtree(a, nodes_[a].parent, 1);
    nodes_[a].multiplicity -= 1;
    std::map<long, long> m(mapping.begin(), mapping.end());
    for (std::size_t j = i; j < path.size(); ++j) path[j] = m.at(path[j]);
  }
  return path.back();
}

void HydraState::remove_head(long concrete_head) {
  HydraNode& n = nodes_.at(concrete_head);
  if (n.multiplicity != 1) throw std::logic_error("head is shared; concretize first");
  auto& siblings = nodes_[n.parent].children;
  siblings.erase(std::find(siblings.begin(), siblings.end(), concrete_head));
  n.alive = false;
}

HydraState HydraState::expanded(std::size_t max_nodes) const {
  if (node_count() > max_nodes)
    throw std::invalid_argument("hydra has more than " + std::to_string(max_nodes) + " nodes");
  HydraState out;
  out.capacity_ = capacity_;
  out.nodes_.push_back(HydraNode{-1, {}, 1, true});
  std::function<void(long, long)> rec = [&](long v, long into) {
    for (long c : nodes_[v].children) {
      for (Integer k = 0; k < nodes_[c].multiplicity; ++k) {
        long id = static_cast<long>(out.nodes_.size());
        out.nodes_.push_back(HydraNode{into, {}, 1, true});
        out.nodes_[into].children.push_back(id);
        rec(c, id);
      }
    }
  };
  rec(0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Rounds

std::vector<RoundOutcome> play_round(const HydraState& h, long leaf, int e) {
  if (!h.is_head(leaf)) throw std::invalid_argument("node " + std::to_string(leaf) + " is not a head");
  if (e < 0) throw std::invalid_argument("negative evolution count");
  HydraState next = h;
  long concrete = next.concretize(leaf);
  long parent = next.node(concrete).parent;
  long grandparent = next.node(parent).parent;
  next.remove_head(concrete);

  std::vector<RoundOutcome> out;
  if (grandparent < 0) {
    if (e != 0) throw std::invalid_argument("a head on the root cannot evolve");
    out.push_back(RoundOutcome{std::move(next), Rational(1), true, 0, std::nullopt});
    return out;
  }
  for (int i = 1; i <= e; ++i) out.push_back(RoundOutcome{h, pow2(-i), false, i, std::nullopt});
  Integer n = h.capacity();
  mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), 2 * static_cast<unsigned long>(e));
  next.set_capacity(n);
  next.clone_subtree(parent, grandparent, Integer(n - 1));
  out.push_back(RoundOutcome{std::move(next), pow2(-e), true, e, std::nullopt});
  return out;
}

std::vector<Ordinal> successors_T(const HydraState& h, long leaf, int e_max) {
  std::vector<Ordinal> out;
  for (int e = 0; e <= e_max; ++e) out.push_back(play_round(h, leaf, e).back().state.ordinal());
  return out;
}

// ---------------------------------------------------------------------------
// Hercules

HerculesStrategy HerculesStrategy::parse(const std::string& spec) {
  HerculesStrategy s;
  if (spec == "leftmost-deepest") return s;
  if (spec.rfind("random:", 0) == 0) {
    s.kind = Kind::Random;
    s.seed = std::stoull(spec.substr(7));
    return s;
  }
  if (spec.rfind("scripted:", 0) == 0) {
    s.kind = Kind::Scripted;
    std::stringstream ss(spec.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) s.script.push_back(std::stol(item));
    return s;
  }
  throw std::invalid_argument("unknown Hercules strategy '" + spec + "'");
}

long leftmost_deepest(const HydraState& h) {
  long best = -1;
  int best_depth = -1;
  for (long v : h.heads()) {
    int d = h.depth(v);
    if (d > best_depth) {
      best_depth = d;
      best = v;
    }
  }
  if (best < 0) throw std::invalid_argument("hydra has no heads");
  return best;
}

unsigned random_pick(std::uint64_t seed, std::size_t round) {
  std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + round + 1;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return static_cast<unsigned>(x % 1024);
}

namespace {
constexpr std::size_t kRandomRounds = 64;
}

long choose_head(const HerculesStrategy& s, const HydraState& h, std::size_t round) {
  switch (s.kind) {
    case HerculesStrategy::Kind::LeftmostDeepest:
      return leftmost_deepest(h);
    case HerculesStrategy::Kind::Scripted:
      if (round < s.script.size() && h.is_head(s.script[round])) return s.script[round];
      return leftmost_deepest(h);
    case HerculesStrategy::Kind::Random: {
      if (round >= kRandomRounds) return leftmost_deepest(h);
      auto hs = h.heads();
      if (hs.empty()) throw std::invalid_argument("hydra has no heads");
      return hs[random_pick(s.seed, round) % hs.size()];
    }
  }
  return leftmost_deepest(h);
}

// ---------------------------------------------------------------------------
// pGCL encoding. Slot i holds one node: h_a<i> alive flag, h_p<i> parent slot.
// Slots are never reused, so parents always sit in lower slots.

namespace {

using namespace ast;

AExprPtr V(const std::string& name) { return var(name); }
AExprPtr N(long n) { return lit(Rational(n)); }
std::string slot(const char* prefix, int i) { return std::string(prefix) + std::to_string(i); }
ProgramPtr set(const std::string& v, AExprPtr e) { return assign(v, std::move(e)); }
BExprPtr eq(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Eq, std::move(a), std::move(b)); }
ProgramPtr when(BExprPtr g, ProgramPtr body) { return branch(std::move(g), std::move(body), empty()); }
ProgramPtr coin_or_exit() { return prob(skip(), lit(Rational(1, 2)), exit()); }

ProgramPtr leftmost_deepest_code(int w) {
  std::vector<ProgramPtr> s = {set("h_best", N(-1)), set("h_leaf", N(-1))};
  for (int i = 1; i < w; ++i)
    s.push_back(when(and_(eq(V(slot("h_l", i)), N(1)),
                          cmp(CmpOp::Gt, V(slot("h_d", i)), V("h_best"))),
                     seq({set("h_best", V(slot("h_d", i))), set("h_leaf", N(i))})));
  return seq(s);
}

}  // namespace

HydraProgram compile_to_pgcl(const HydraState& h0, const HerculesStrategy& strat, int width) {
  if (width < 2) throw std::invalid_argument("encoding width must be at least 2");
  HydraState h = h0.expanded(static_cast<std::size_t>(width));
  const int w = width;
  const auto& nodes = h.nodes();
  // Expanded ids are already dense and topological; map alive nodes to slots.
  std::map<long, int> slot_of;
  for (long id = 0; id < static_cast<long>(nodes.size()); ++id)
    if (nodes[id].alive) slot_of[id] = static_cast<int>(slot_of.size());

  std::vector<ProgramPtr> init = {set("h_n", lit(Rational(h.capacity()))),
                                  set("h_top", N(static_cast<long>(slot_of.size()))),
                                  set("h_p0", N(-1)), set("h_a0", N(1))};
  for (const auto& [id, s] : slot_of) {
    if (id == 0) continue;
    init.push_back(set(slot("h_p", s), N(slot_of.at(nodes[id].parent))));
    init.push_back(set(slot("h_a", s), N(1)));
  }

  std::vector<ProgramPtr> body;
  // Heads left?
  body.push_back(set("h_cnt", N(0)));
  for (int i = 1; i < w; ++i)
    body.push_back(when(eq(V(slot("h_a", i)), N(1)), set("h_cnt", add(V("h_cnt"), N(1)))));
  body.push_back(when(eq(V("h_cnt"), N(0)), exit()));
  // Leaf flags.
  for (int i = 1; i < w; ++i) {
    body.push_back(set(slot("h_l", i), V(slot("h_a", i))));
    for (int j = i + 1; j < w; ++j)
      body.push_back(when(and_(eq(V(slot("h_a", j)), N(1)), eq(V(slot("h_p", j)), N(i))),
                          set(slot("h_l", i), N(0))));
  }
  // Depths.
  for (int i = 1; i < w; ++i) {
    std::vector<ProgramPtr> chain;
    for (int j = 0; j < i; ++j)
      chain.push_back(when(eq(V(slot("h_p", i)), N(j)),
                           set(slot("h_d", i), add(V(slot("h_d", j)), N(1)))));
    body.push_back(when(eq(V(slot("h_a", i)), N(1)), seq(chain)));
  }
  // Hercules.
  switch (strat.kind) {
    case HerculesStrategy::Kind::LeftmostDeepest:
      body.push_back(leftmost_deepest_code(w));
      break;
    case HerculesStrategy::Kind::Scripted: {
      body.push_back(set("h_leaf", N(-1)));
      for (std::size_t r = 0; r < strat.script.size(); ++r) {
        auto it = slot_of.find(strat.script[r]);
        if (r == 0 && (it == slot_of.end() || !h.is_head(strat.script[r])))
          throw std::invalid_argument("scripted head " + std::to_string(strat.script[r]) +
                                      " is not a head of the initial hydra");
        if (it == slot_of.end()) continue;
        int s = it->second;
        body.push_back(when(and_(eq(V("h_r"), N(static_cast<long>(r))), eq(V(slot("h_l", s)), N(1))),
                            set("h_leaf", N(s))));
      }
      body.push_back(when(cmp(CmpOp::Lt, V("h_leaf"), N(0)), leftmost_deepest_code(w)));
      break;
    }
    case HerculesStrategy::Kind::Random: {
      std::vector<ProgramPtr> pick = {set("h_k", N(0))};
      for (std::size_t r = 0; r < kRandomRounds; ++r)
        pick.push_back(when(eq(V("h_r"), N(static_cast<long>(r))),
                            set("h_k", N(random_pick(strat.seed, r)))));
      pick.push_back(set("h_nl", N(0)));
      for (int i = 1; i < w; ++i)
        pick.push_back(when(eq(V(slot("h_l", i)), N(1)), set("h_nl", add(V("h_nl"), N(1)))));
      pick.push_back(loop(cmp(CmpOp::Ge, V("h_k"), V("h_nl")), set("h_k", sub(V("h_k"), V("h_nl")))));
      pick.push_back(set("h_leaf", N(-1)));
      for (int i = 1; i < w; ++i)
        pick.push_back(when(eq(V(slot("h_l", i)), N(1)),
                            seq({when(eq(V("h_k"), N(0)), set("h_leaf", N(i))),
                                 set("h_k", sub(V("h_k"), N(1)))})));
      body.push_back(branch(cmp(CmpOp::Lt, V("h_r"), N(static_cast<long>(kRandomRounds))),
                            seq(pick), leftmost_deepest_code(w)));
      break;
    }
  }
  // Parent and grandparent of the chosen head, then the chop.
  body.push_back(set("h_par", N(0)));
  for (int i = 1; i < w; ++i)
    body.push_back(when(eq(V("h_leaf"), N(i)), set("h_par", V(slot("h_p", i)))));
  body.push_back(set("h_gp", N(-1)));
  for (int i = 1; i < w; ++i)
    body.push_back(when(eq(V("h_par"), N(i)), set("h_gp", V(slot("h_p", i)))));
  for (int i = 1; i < w; ++i)
    body.push_back(when(eq(V("h_leaf"), N(i)), set(slot("h_a", i), N(0))));

  // Regrowth below the grandparent.
  std::vector<ProgramPtr> grow;
  ProgramPtr evolve_choice = nondet(set("h_e", N(0)), set("h_e", N(1)));
  grow.push_back(evolve_choice);
  grow.push_back(loop(eq(V("h_e"), N(1)),
                      seq({coin_or_exit(), set("h_n", mul(V("h_n"), N(4))), evolve_choice})));
  for (int i = 1; i < w; ++i) {
    std::vector<ProgramPtr> chain = {set(slot("h_s", i), N(0))};
    std::vector<ProgramPtr> inner;
    for (int j = 1; j < i; ++j)
      inner.push_back(when(eq(V(slot("h_p", i)), N(j)), set(slot("h_s", i), V(slot("h_s", j)))));
    inner.push_back(when(eq(V("h_par"), N(i)), set(slot("h_s", i), N(1))));
    chain.push_back(when(eq(V(slot("h_a", i)), N(1)), seq(inner)));
    grow.push_back(seq(chain));
  }
  std::vector<ProgramPtr> copy;
  for (int i = 1; i < w; ++i) {
    std::vector<ProgramPtr> parent_chain;
    for (int j = 1; j < i; ++j)
      parent_chain.push_back(when(eq(V(slot("h_p", i)), N(j)), set("h_tmp", V(slot("h_m", j)))));
    std::vector<ProgramPtr> write;
    for (int t = 1; t < w; ++t)
      write.push_back(when(eq(V("h_new"), N(t)),
                           seq({set(slot("h_p", t), V("h_tmp")), set(slot("h_a", t), N(1))})));
    copy.push_back(when(
        eq(V(slot("h_s", i)), N(1)),
        seq({when(cmp(CmpOp::Ge, V("h_top"), N(w)), seq({set("h_ovf", N(1)), exit()})),
             set("h_new", V("h_top")), set("h_top", add(V("h_top"), N(1))),
             set(slot("h_m", i), V("h_new")),
             branch(eq(V("h_par"), N(i)), set("h_tmp", V("h_gp")), seq(parent_chain)),
             seq(write)})));
  }
  copy.push_back(set("h_c", sub(V("h_c"), N(1))));
  grow.push_back(set("h_c", sub(V("h_n"), N(1))));
  grow.push_back(loop(cmp(CmpOp::Gt, V("h_c"), N(0)), seq(copy)));
  body.push_back(when(cmp(CmpOp::Ge, V("h_gp"), N(0)), seq(grow)));
  body.push_back(set("h_r", add(V("h_r"), N(1))));

  ProgramPtr main_loop = loop(truth(true), seq(body));
  init.push_back(main_loop);
  return HydraProgram{seq(init), main_loop, w};
}

HydraState decode_hydra(const Valuation& v, int width) {
  std::string text;
  // Rebuild through the parser-free path: collect parents, then emit parens.
  std::vector<std::vector<int>> children(static_cast<std::size_t>(width));
  for (int i = 1; i < width; ++i) {
    if (v.get(slot("h_a", i)) != 1) continue;
    Rational p = v.get(slot("h_p", i));
    if (p.get_den() != 1 || p < 0 || p >= i) throw std::invalid_argument("corrupt hydra encoding");
    children[p.get_num().get_si()].push_back(i);
  }
  std::function<void(int)> rec = [&](int s) {
    text += '(';
    for (int c : children[s]) rec(c);
    text += ')';
  };
  rec(0);
  HydraState h = HydraState::parse(text);
  Rational n = v.get("h_n");
  h.set_capacity(n.get_num());
  return h;
}

SimulatedRound simulate_round(const HydraProgram& prog, int e, long step_limit) {
  FunctionScheduler evolve([e](const History& w) {
    long decided = 0;
    for (Direction d : w.items()) decided += is_nondet(d) ? 1 : 0;
    return decided < e ? Direction::Rn : Direction::Ln;
  });
  ExecState s = initial_state(prog.program);
  long steps = 0;
  bool in_loop = false;
  for (;;) {
    if (s.program == prog.main_loop) {
      if (!in_loop) {
        in_loop = true;
        steps = 0;
      } else if (s.valuation.get("h_r") == 1) {
        break;
      }
    }
    if (is_terminal(s.program)) {
      if (s.valuation.get("h_ovf") == 1)
        throw std::runtime_error("hydra outgrew the " + std::to_string(prog.width) + " encoding slots");
      throw std::runtime_error("compiled hydra program terminated");
    }
    if (++steps > step_limit) throw std::runtime_error("round exceeded the step limit");
    auto succ = step(s, evolve);
    // The skip branch of each coin is the surviving one.
    s = std::move(succ.front().state);
  }
  return SimulatedRound{decode_hydra(s.valuation, prog.width), s.prob, steps};
}

}  // namespace pastlab
