#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pastlab/rational.hpp"
#include "pastlab/syntax.hpp"

namespace pastlab {

/// Persistent map from variables to rationals. Absent variables read as 0;
/// storing 0 removes the binding so equal valuations compare equal.
class Valuation {
 public:
  Valuation();

  const Rational& get(Symbol v) const;
  Valuation set(Symbol v, const Rational& value) const;
  Valuation set(std::string_view v, const Rational& value) const { return set(intern(v), value); }
  const Rational& get(std::string_view v) const { return get(intern(v)); }

  std::size_t size() const { return entries_->size(); }
  /// Bindings sorted by variable name.
  std::vector<std::pair<std::string, Rational>> sorted() const;

  friend bool operator==(const Valuation& a, const Valuation& b);

 private:
  struct Entry {
    Symbol var;
    std::shared_ptr<const Rational> value;
  };
  std::shared_ptr<const std::vector<Entry>> entries_;
};

enum class Direction : unsigned char { Ln, Rn, Lp, Rp };

const char* to_string(Direction d);
bool is_nondet(Direction d);

/// Persistent sequence of directions. Copies share storage.
class History {
 public:
  History();
  std::size_t size() const { return data_->size(); }
  Direction operator[](std::size_t i) const { return (*data_)[i]; }
  History extended(Direction d) const;
  History prefix(std::size_t n) const;
  std::string str() const;
  static History parse(std::string_view text);
  const std::vector<Direction>& items() const { return *data_; }

  friend bool operator==(const History& a, const History& b) { return *a.data_ == *b.data_; }

 private:
  std::shared_ptr<const std::vector<Direction>> data_;
};

struct ProgramState {
  ProgramPtr program;
  Valuation valuation;
};

struct ExecState {
  ProgramPtr program;
  Valuation valuation;
  Rational prob;
  History history;
};

ExecState initial_state(const ProgramPtr& program, const Valuation& valuation = Valuation());
bool is_terminal(const ProgramPtr& program);

Rational eval(const AExpr& e, const Valuation& v);
bool eval(const BExpr& b, const Valuation& v);

/// Identifies a nondeterministic choice by its node in the program text.
using SiteId = const Program*;

enum class Rule {
  Assign, Concat2, Skip, Exit, ProbForcedRight, ProbForcedLeft, Prob,
  Nondet, LoopEnter, LoopExit, IfTrue, IfFalse
};

const char* to_string(Rule r);

/// One redex of the small-step relation, independent of any scheduler.
struct Transition {
  enum class Kind { Deterministic, Probabilistic, Nondeterministic };
  Kind kind = Kind::Deterministic;
  Rule rule = Rule::Skip;
  ProgramPtr left;   // deterministic successor, or left branch
  ProgramPtr right;  // right branch (choices only)
  Valuation valuation;  // post-state valuation (shared by both branches)
  Rational p;           // clamped weight of the left branch for Probabilistic
  Direction forced = Direction::Lp;  // for deterministic prob steps
  bool forced_prob = false;
  SiteId site = nullptr;
};

/// Throws std::logic_error on a terminal program.
Transition transition(const ProgramPtr& program, const Valuation& valuation);

enum class StepKind { Deterministic, ProbLeft, ProbRight, Nondet };
const char* to_string(StepKind k);

struct Successor {
  ExecState state;
  StepKind kind;
};

class Scheduler;

/// Successors of a non-terminal state under scheduler f; probabilities of the
/// successors sum to the probability of the input state.
std::vector<Successor> step(const ExecState& state, Scheduler& f);

std::string state_key(const ProgramState& s);

}  // namespace pastlab
