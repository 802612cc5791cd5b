#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pastlab/semantics.hpp"

namespace pastlab {

/// A total function from histories to {Ln, Rn}.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual Direction decide(const History& w, SiteId site) = 0;
  /// True when decide may be called concurrently and is a pure function of w.
  virtual bool shareable() const { return true; }
};

class ConstantScheduler : public Scheduler {
 public:
  explicit ConstantScheduler(Direction d);
  Direction decide(const History&, SiteId) override { return d_; }

 private:
  Direction d_;
};

class FunctionScheduler : public Scheduler {
 public:
  explicit FunctionScheduler(std::function<Direction(const History&)> fn) : fn_(std::move(fn)) {}
  Direction decide(const History& w, SiteId) override;

 private:
  std::function<Direction(const History&)> fn_;
};

/// Finite table over histories of length <= size. The standard extension
/// answers Ln for longer histories and for histories missing from the table.
struct PartialSchedule {
  std::size_t size = 0;
  std::map<std::string, Direction> table;
};

class TableScheduler : public Scheduler {
 public:
  explicit TableScheduler(PartialSchedule s) : s_(std::move(s)) {}
  Direction decide(const History& w, SiteId) override;
  const PartialSchedule& schedule() const { return s_; }

 private:
  PartialSchedule s_;
};

/// Never ignores a direction more than k consecutive times at one choice site
/// along a branch. The per-branch state is derived from the history, so the
/// answer depends only on (w, site).
class BoundedScheduler : public Scheduler {
 public:
  BoundedScheduler(std::shared_ptr<Scheduler> inner, std::size_t k);
  Direction decide(const History& w, SiteId site) override;
  bool shareable() const override { return false; }

 private:
  struct Run {
    Direction last;
    std::size_t length;
  };
  using Runs = std::map<SiteId, Run>;
  struct Entry {
    Direction answer;
    std::shared_ptr<const Runs> runs;  // after answering
  };
  std::shared_ptr<Scheduler> inner_;
  std::size_t k_;
  std::map<std::string, Entry> memo_;
};

struct InputExhausted : std::runtime_error {
  InputExhausted() : std::runtime_error("interactive scheduler: input exhausted") {}
};

/// Asks a user for each new history; answers are memoized.
class InteractiveScheduler : public Scheduler {
 public:
  InteractiveScheduler(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  Direction decide(const History& w, SiteId site) override;
  bool shareable() const override { return false; }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::map<std::string, Direction> memo_;
};

/// Hash-based pseudo-random schedule: a pure function of (seed, w).
std::shared_ptr<Scheduler> random_scheduler(std::uint64_t seed);

struct EnumerationTooLarge : std::runtime_error {
  explicit EnumerationTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// All 2^n tables over the given histories (each of length <= size).
std::vector<PartialSchedule> enumerate_partial_schedules(std::size_t size,
                                                         const std::vector<History>& histories,
                                                         std::size_t cap);

/// Lazily visits every strategy that can be distinguished by `visit`.
/// `visit` runs an analysis with the given scheduler; unseen histories of
/// length <= size trigger a branch. Returns the number of complete visits.
/// `visit` returns false to stop early.
std::size_t for_each_partial_schedule(
    std::size_t size, std::size_t cap,
    const std::function<bool(TableScheduler&)>& visit);

/// Parses "const:Ln", "const:Rn", "random:SEED", "bounded:K:<spec>".
std::shared_ptr<Scheduler> parse_scheduler_spec(const std::string& spec);

}  // namespace pastlab
