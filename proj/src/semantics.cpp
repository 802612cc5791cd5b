#include "pastlab/semantics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pastlab/scheduling.hpp"

namespace pastlab {

namespace {
const Rational& zero() {
  static const Rational z(0);
  return z;
}
}  // namespace

// ---------------------------------------------------------------------------
// Valuation

Valuation::Valuation() : entries_(std::make_shared<const std::vector<Entry>>()) {}

const Rational& Valuation::get(Symbol v) const {
  const auto& es = *entries_;
  auto it = std::lower_bound(es.begin(), es.end(), v,
                             [](const Entry& e, Symbol s) { return e.var < s; });
  if (it != es.end() && it->var == v) return *it->value;
  return zero();
}

Valuation Valuation::set(Symbol v, const Rational& value) const {
  const auto& es = *entries_;
  auto it = std::lower_bound(es.begin(), es.end(), v,
                             [](const Entry& e, Symbol s) { return e.var < s; });
  bool present = it != es.end() && it->var == v;
  auto next = std::make_shared<std::vector<Entry>>();
  next->reserve(es.size() + 1);
  next->insert(next->end(), es.begin(), it);
  if (value != 0) next->push_back({v, std::make_shared<const Rational>(value)});
  next->insert(next->end(), present ? it + 1 : it, es.end());
  Valuation out;
  out.entries_ = std::move(next);
  return out;
}

std::vector<std::pair<std::string, Rational>> Valuation::sorted() const {
  std::vector<std::pair<std::string, Rational>> out;
  out.reserve(entries_->size());
  for (const auto& e : *entries_) out.emplace_back(name_of(e.var), *e.value);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.entries_ == b.entries_) return true;
  if (a.entries_->size() != b.entries_->size()) return false;
  for (std::size_t i = 0; i < a.entries_->size(); ++i) {
    const auto& x = (*a.entries_)[i];
    const auto& y = (*b.entries_)[i];
    if (x.var != y.var || *x.value != *y.value) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Directions and histories

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Ln: return "Ln";
    case Direction::Rn: return "Rn";
    case Direction::Lp: return "Lp";
    case Direction::Rp: return "Rp";
  }
  return "??";
}

bool is_nondet(Direction d) { return d == Direction::Ln || d == Direction::Rn; }

History::History() {
  static const auto empty = std::make_shared<const std::vector<Direction>>();
  data_ = empty;
}

History History::extended(Direction d) const {
  auto next = std::make_shared<std::vector<Direction>>();
  next->reserve(data_->size() + 1);
  *next = *data_;
  next->push_back(d);
  History h;
  h.data_ = std::move(next);
  return h;
}

History History::prefix(std::size_t n) const {
  if (n >= size()) return *this;
  History h;
  h.data_ = std::make_shared<const std::vector<Direction>>(data_->begin(), data_->begin() + n);
  return h;
}

std::string History::str() const {
  std::string s;
  s.reserve(2 * size());
  for (Direction d : *data_) s += to_string(d);
  return s;
}

History History::parse(std::string_view text) {
  if (text.size() % 2 != 0) throw std::invalid_argument("malformed history: " + std::string(text));
  std::vector<Direction> out;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    std::string_view t = text.substr(i, 2);
    if (t == "Ln") out.push_back(Direction::Ln);
    else if (t == "Rn") out.push_back(Direction::Rn);
    else if (t == "Lp") out.push_back(Direction::Lp);
    else if (t == "Rp") out.push_back(Direction::Rp);
    else throw std::invalid_argument("malformed history: " + std::string(text));
  }
  History h;
  h.data_ = std::make_shared<const std::vector<Direction>>(std::move(out));
  return h;
}

// ---------------------------------------------------------------------------
// Evaluation

Rational eval(const AExpr& e, const Valuation& v) {
  switch (e.kind) {
    case AExpr::Kind::Lit: return e.value;
    case AExpr::Kind::Var: return v.get(e.var);
    case AExpr::Kind::Neg: return Rational(-eval(*e.lhs, v));
    case AExpr::Kind::Bin: {
      Rational a = eval(*e.lhs, v);
      Rational b = eval(*e.rhs, v);
      switch (e.op) {
        case AOp::Add: return Rational(a + b);
        case AOp::Sub: return Rational(a - b);
        case AOp::Mul: return Rational(a * b);
      }
    }
  }
  throw std::logic_error("eval: bad expression");
}

bool eval(const BExpr& b, const Valuation& v) {
  switch (b.kind) {
    case BExpr::Kind::Const: return b.value;
    case BExpr::Kind::Cmp: {
      int c = cmp(eval(*b.left, v), eval(*b.right, v));
      switch (b.cmp) {
        case CmpOp::Eq: return c == 0;
        case CmpOp::Ne: return c != 0;
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
      }
      break;
    }
    case BExpr::Kind::Not: return !eval(*b.lhs, v);
    case BExpr::Kind::And: return eval(*b.lhs, v) && eval(*b.rhs, v);
    case BExpr::Kind::Or: return eval(*b.lhs, v) || eval(*b.rhs, v);
  }
  throw std::logic_error("eval: bad guard");
}

// ---------------------------------------------------------------------------
// Small-step relation

ExecState initial_state(const ProgramPtr& program, const Valuation& valuation) {
  return ExecState{program, valuation, Rational(1), History()};
}

bool is_terminal(const ProgramPtr& program) { return program->kind == Program::Kind::Empty; }

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Assign: return "assign";
    case Rule::Concat2: return "concat2";
    case Rule::Skip: return "skip";
    case Rule::Exit: return "exit";
    case Rule::ProbForcedRight: return "prob1";
    case Rule::ProbForcedLeft: return "prob2";
    case Rule::Prob: return "prob";
    case Rule::Nondet: return "nondet";
    case Rule::LoopEnter: return "loop1";
    case Rule::LoopExit: return "loop2";
    case Rule::IfTrue: return "if-true";
    case Rule::IfFalse: return "if-false";
  }
  return "?";
}

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Deterministic: return "det";
    case StepKind::ProbLeft: return "prob-left";
    case StepKind::ProbRight: return "prob-right";
    case StepKind::Nondet: return "nondet";
  }
  return "?";
}

namespace {

// `aborted` is set when an exit fired: the whole enclosing program becomes ⊥.
Transition redex(const ProgramPtr& p, const Valuation& eta, bool& aborted) {
  using K = Program::Kind;
  Transition t;
  t.valuation = eta;
  switch (p->kind) {
    case K::Empty:
      throw std::logic_error("transition: terminal program has no successor");
    case K::Skip:
      t.rule = Rule::Skip;
      t.left = ast::empty();
      return t;
    case K::Exit:
      t.rule = Rule::Exit;
      t.left = ast::empty();
      aborted = true;
      return t;
    case K::Assign:
      t.rule = Rule::Assign;
      t.left = ast::empty();
      t.valuation = eta.set(p->var, eval(*p->expr, eta));
      return t;
    case K::Seq: {
      if (p->first->kind == K::Empty) {
        t.rule = Rule::Concat2;
        t.left = p->second;
        return t;
      }
      Transition inner = redex(p->first, eta, aborted);
      if (aborted) return inner;
      inner.left = ast::seq(inner.left, p->second);
      if (inner.right) inner.right = ast::seq(inner.right, p->second);
      return inner;
    }
    case K::Prob: {
      Rational w = eval(*p->expr, eta);
      if (w <= 0) {
        t.rule = Rule::ProbForcedRight;
        t.left = p->second;
        t.forced_prob = true;
        t.forced = Direction::Rp;
        return t;
      }
      if (w >= 1) {
        t.rule = Rule::ProbForcedLeft;
        t.left = p->first;
        t.forced_prob = true;
        t.forced = Direction::Lp;
        return t;
      }
      t.kind = Transition::Kind::Probabilistic;
      t.rule = Rule::Prob;
      t.p = w;
      t.left = p->first;
      t.right = p->second;
      return t;
    }
    case K::Nondet:
      t.kind = Transition::Kind::Nondeterministic;
      t.rule = Rule::Nondet;
      t.left = p->first;
      t.right = p->second;
      t.site = p.get();
      return t;
    case K::While:
      if (eval(*p->guard, eta)) {
        t.rule = Rule::LoopEnter;
        t.left = ast::seq(p->first, p);
      } else {
        t.rule = Rule::LoopExit;
        t.left = ast::empty();
      }
      return t;
    case K::If:
      if (eval(*p->guard, eta)) {
        t.rule = Rule::IfTrue;
        t.left = p->first;
      } else {
        t.rule = Rule::IfFalse;
        t.left = p->second;
      }
      return t;
  }
  throw std::logic_error("transition: bad program");
}

}  // namespace

Transition transition(const ProgramPtr& program, const Valuation& valuation) {
  bool aborted = false;
  return redex(program, valuation, aborted);
}

std::vector<Successor> step(const ExecState& s, Scheduler& f) {
  Transition t = transition(s.program, s.valuation);
  std::vector<Successor> out;
  switch (t.kind) {
    case Transition::Kind::Deterministic: {
      History h = t.forced_prob ? s.history.extended(t.forced) : s.history;
      StepKind k = !t.forced_prob ? StepKind::Deterministic
                   : t.forced == Direction::Lp ? StepKind::ProbLeft
                                               : StepKind::ProbRight;
      out.push_back({ExecState{t.left, t.valuation, s.prob, std::move(h)}, k});
      break;
    }
    case Transition::Kind::Probabilistic: {
      out.reserve(2);
      out.push_back({ExecState{t.left, t.valuation, Rational(s.prob * t.p),
                               s.history.extended(Direction::Lp)},
                     StepKind::ProbLeft});
      out.push_back({ExecState{t.right, t.valuation, Rational(s.prob * (1 - t.p)),
                               s.history.extended(Direction::Rp)},
                     StepKind::ProbRight});
      break;
    }
    case Transition::Kind::Nondeterministic: {
      Direction d = f.decide(s.history, t.site);
      if (d != Direction::Ln && d != Direction::Rn)
        throw std::logic_error("scheduler returned a probabilistic direction");
      out.push_back({ExecState{d == Direction::Ln ? t.left : t.right, t.valuation, s.prob,
                               s.history.extended(d)},
                     StepKind::Nondet});
      break;
    }
  }
  return out;
}

std::string state_key(const ProgramState& s) {
  std::string key = print(*s.program);
  key += " | ";
  bool first = true;
  for (const auto& [name, value] : s.valuation.sorted()) {
    if (!first) key += ", ";
    first = false;
    key += name;
    key += '=';
    key += value.get_str();
  }
  return key;
}

}  // namespace pastlab
