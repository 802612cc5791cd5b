#include "pastlab/transforms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "pastlab/semantics.hpp"

namespace pastlab {

using namespace ast;

namespace {

AExprPtr V(const std::string& name) { return var(name); }
AExprPtr N(const Integer& n) { return lit(Rational(n)); }
AExprPtr N(long n) { return lit(Rational(n)); }
AExprPtr half() { return lit(Rational(1, 2)); }
ProgramPtr set(const std::string& v, AExprPtr e) { return assign(v, std::move(e)); }
BExprPtr eq(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Eq, std::move(a), std::move(b)); }
BExprPtr ne(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Ne, std::move(a), std::move(b)); }
BExprPtr lt(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Lt, std::move(a), std::move(b)); }
BExprPtr le(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Le, std::move(a), std::move(b)); }
BExprPtr gt(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Gt, std::move(a), std::move(b)); }
BExprPtr ge(AExprPtr a, AExprPtr b) { return cmp(CmpOp::Ge, std::move(a), std::move(b)); }
ProgramPtr when(BExprPtr g, ProgramPtr body) { return branch(std::move(g), std::move(body), empty()); }
ProgramPtr coin() { return prob(skip(), half(), exit()); }
ProgramPtr pick(const std::string& v, long a, long b) { return nondet(set(v, N(a)), set(v, N(b))); }

}  // namespace

bool is_knievel(const ProgramPtr& p) {
  if (!p) return true;
  if (p->kind == Program::Kind::Prob &&
      !(p->first->kind == Program::Kind::Skip && p->second->kind == Program::Kind::Exit))
    return false;
  return is_knievel(p->first) && is_knievel(p->second);
}

// ---------------------------------------------------------------------------
// Breadth-first simulation of an arbitrary program.

namespace {

// One abstract step of a residual program, valuation left symbolic.
struct SymStep {
  enum class Kind { Goto, Update, Guard, Prob, Nondet };
  Kind kind = Kind::Goto;
  ProgramPtr a, b;  // successor(s); Guard: true/false branch
  Symbol var = 0;
  AExprPtr expr;
  BExprPtr guard;
  Rational p;
};

SymStep symbolic(const ProgramPtr& t, bool& aborted) {
  using K = Program::Kind;
  SymStep s;
  switch (t->kind) {
    case K::Empty: throw std::logic_error("no step from a terminal program");
    case K::Skip: s.a = empty(); return s;
    case K::Exit: s.a = empty(); aborted = true; return s;
    case K::Assign:
      s.kind = SymStep::Kind::Update;
      s.var = t->var;
      s.expr = t->expr;
      s.a = empty();
      return s;
    case K::Seq: {
      if (t->first->kind == K::Empty) {
        s.a = t->second;
        return s;
      }
      SymStep inner = symbolic(t->first, aborted);
      if (aborted) return inner;
      inner.a = seq(inner.a, t->second);
      if (inner.b) inner.b = seq(inner.b, t->second);
      return inner;
    }
    case K::Prob: {
      if (has_variables(*t->expr))
        throw std::invalid_argument("probability '" + print(*t->expr) + "' is not a constant");
      Rational w = eval(*t->expr, Valuation());
      if (w <= 0) { s.a = t->second; return s; }
      if (w >= 1) { s.a = t->first; return s; }
      s.kind = SymStep::Kind::Prob;
      s.p = w;
      s.a = t->first;
      s.b = t->second;
      return s;
    }
    case K::Nondet:
      s.kind = SymStep::Kind::Nondet;
      s.a = t->first;
      s.b = t->second;
      return s;
    case K::While:
      s.kind = SymStep::Kind::Guard;
      s.guard = t->guard;
      s.a = seq(t->first, t);
      s.b = empty();
      return s;
    case K::If:
      s.kind = SymStep::Kind::Guard;
      s.guard = t->guard;
      s.a = t->first;
      s.b = t->second;
      return s;
  }
  throw std::logic_error("bad program");
}

struct PairExpr {
  AExprPtr num, den;
};

std::string num_var(Symbol v) { return "v_" + name_of(v) + "_n"; }
std::string den_var(Symbol v) { return "v_" + name_of(v) + "_d"; }

// Source values are kept as (numerator, positive denominator) pairs.
PairExpr pair_of(const AExpr& e) {
  switch (e.kind) {
    case AExpr::Kind::Lit: return {N(e.value.get_num()), N(e.value.get_den())};
    case AExpr::Kind::Var: return {V(num_var(e.var)), V(den_var(e.var))};
    case AExpr::Kind::Neg: {
      PairExpr x = pair_of(*e.lhs);
      return {neg(x.num), x.den};
    }
    case AExpr::Kind::Bin: {
      PairExpr x = pair_of(*e.lhs), y = pair_of(*e.rhs);
      switch (e.op) {
        case AOp::Add: return {add(mul(x.num, y.den), mul(y.num, x.den)), mul(x.den, y.den)};
        case AOp::Sub: return {sub(mul(x.num, y.den), mul(y.num, x.den)), mul(x.den, y.den)};
        case AOp::Mul: return {mul(x.num, y.num), mul(x.den, y.den)};
      }
    }
  }
  throw std::logic_error("bad expression");
}

BExprPtr guard_of(const BExpr& b) {
  switch (b.kind) {
    case BExpr::Kind::Const: return truth(b.value);
    case BExpr::Kind::Cmp: {
      PairExpr x = pair_of(*b.left), y = pair_of(*b.right);
      return cmp(b.cmp, mul(x.num, y.den), mul(y.num, x.den));
    }
    case BExpr::Kind::Not: return not_(guard_of(*b.lhs));
    case BExpr::Kind::And: return and_(guard_of(*b.lhs), guard_of(*b.rhs));
    case BExpr::Kind::Or: return or_(guard_of(*b.lhs), guard_of(*b.rhs));
  }
  throw std::logic_error("bad guard");
}

// Stacks are rationals in [0, 1): pushing bit b is s := (s + b) / 2.
ProgramPtr push_bit(const std::string& s, AExprPtr bit) {
  return set(s, mul(add(V(s), std::move(bit)), half()));
}

ProgramPtr pop_bit(const std::string& s, ProgramPtr on_one, ProgramPtr on_zero) {
  return seq({set(s, mul(N(2), V(s))),
              branch(ge(V(s), N(1)), seq({set(s, sub(V(s), N(1))), std::move(on_one)}),
                     std::move(on_zero))});
}

// Self-delimiting binary: end marker 0, then (bit, 1) pairs from the most
// significant bit down, so pops see the least significant bit first.
ProgramPtr push_nat(const std::string& s, AExprPtr value) {
  return seq({set("k_t", std::move(value)), set("k_pw", N(1)),
              loop(le(V("k_pw"), V("k_t")), set("k_pw", mul(N(2), V("k_pw")))),
              push_bit(s, N(0)), set("k_pw", mul(V("k_pw"), half())),
              loop(ge(V("k_pw"), N(1)),
                   seq({branch(ge(V("k_t"), V("k_pw")),
                               seq({set("k_b", N(1)), set("k_t", sub(V("k_t"), V("k_pw")))}),
                               set("k_b", N(0))),
                        push_bit(s, V("k_b")), push_bit(s, N(1)),
                        set("k_pw", mul(V("k_pw"), half()))}))});
}

ProgramPtr pop_nat(const std::string& s, const std::string& target) {
  ProgramPtr read_flag = pop_bit(s, set("k_c", N(1)), set("k_c", N(0)));
  return seq({set("k_r", N(0)), set("k_wt", N(1)), read_flag,
              loop(eq(V("k_c"), N(1)),
                   seq({pop_bit(s, set("k_r", add(V("k_r"), V("k_wt"))), empty()),
                        set("k_wt", mul(N(2), V("k_wt"))), read_flag})),
              set(target, V("k_r"))});
}

ProgramPtr push_int(const std::string& s, AExprPtr value) {
  return seq({set("k_sv", std::move(value)),
              branch(lt(V("k_sv"), N(0)), seq({set("k_sg", N(1)), set("k_sv", neg(V("k_sv")))}),
                     set("k_sg", N(0))),
              push_nat(s, V("k_sv")), push_bit(s, V("k_sg"))});
}

ProgramPtr pop_int(const std::string& s, const std::string& target) {
  return seq({pop_bit(s, set("k_sg", N(1)), set("k_sg", N(0))), pop_nat(s, target),
              when(eq(V("k_sg"), N(1)), set(target, neg(V(target))))});
}

}  // namespace

KnievelProgram to_knievel(const ProgramPtr& p, const KnievelOptions& opts) {
  // Control points: every residual program reachable by abstract steps.
  std::map<std::string, long> pc_of;
  std::vector<ProgramPtr> terms = {empty()};
  std::vector<SymStep> steps = {SymStep{}};
  pc_of[print(*empty())] = 0;
  auto intern_term = [&](const ProgramPtr& t) -> long {
    std::string key = print(*t);
    if (auto it = pc_of.find(key); it != pc_of.end()) return it->second;
    if (terms.size() > opts.term_cap)
      throw std::invalid_argument("source has more than " + std::to_string(opts.term_cap) +
                                  " control points");
    long id = static_cast<long>(terms.size());
    pc_of.emplace(std::move(key), id);
    terms.push_back(t);
    steps.emplace_back();
    return id;
  };
  long entry = intern_term(p);
  Integer base = 1;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    bool aborted = false;
    steps[i] = symbolic(terms[i], aborted);
    if (steps[i].kind == SymStep::Kind::Prob) {
      Integer d = steps[i].p.get_den();
      mpz_lcm(base.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t());
    }
    intern_term(steps[i].a);
    if (steps[i].b) intern_term(steps[i].b);
  }
  auto pc = [&](const ProgramPtr& t) { return N(pc_of.at(print(*t))); };

  std::set<Symbol> vars_set;
  collect_variables(p, vars_set);
  std::vector<Symbol> vars(vars_set.begin(), vars_set.end());
  std::sort(vars.begin(), vars.end(),
            [](Symbol a, Symbol b) { return name_of(a) < name_of(b); });

  KnievelProgram out;
  out.control_points = terms.size() - 1;
  out.level_base = base;
  if (entry == 0) {
    out.program = empty();
    return out;
  }

  auto push_node = [&](const std::string& stack, AExprPtr pc_expr, AExprPtr q_expr) {
    std::vector<ProgramPtr> s;
    for (Symbol v : vars) {
      s.push_back(push_int(stack, V(num_var(v))));
      s.push_back(push_nat(stack, V(den_var(v))));
    }
    s.push_back(push_nat(stack, std::move(q_expr)));
    s.push_back(push_nat(stack, std::move(pc_expr)));
    return seq(s);
  };
  std::vector<ProgramPtr> pop;
  pop.push_back(pop_nat("k_cur", "k_pc"));
  pop.push_back(pop_nat("k_cur", "k_q"));
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    pop.push_back(pop_nat("k_cur", den_var(*it)));
    pop.push_back(pop_int("k_cur", num_var(*it)));
  }

  // Per-control-point step, dispatched by binary search on k_pc.
  auto step_code = [&](long id) -> ProgramPtr {
    const SymStep& s = steps[static_cast<std::size_t>(id)];
    ProgramPtr det_weight = set("k_nq1", mul(V("k_q"), N(base)));
    switch (s.kind) {
      case SymStep::Kind::Goto:
        return seq({set("k_np1", pc(s.a)), det_weight, set("k_two", N(0))});
      case SymStep::Kind::Update: {
        PairExpr e = pair_of(*s.expr);
        return seq({set("k_tn", e.num), set("k_td", e.den), set(num_var(s.var), V("k_tn")),
                    set(den_var(s.var), V("k_td")), set("k_np1", pc(s.a)), det_weight,
                    set("k_two", N(0))});
      }
      case SymStep::Kind::Guard:
        return seq({branch(guard_of(*s.guard), set("k_np1", pc(s.a)), set("k_np1", pc(s.b))),
                    det_weight, set("k_two", N(0))});
      case SymStep::Kind::Nondet:
        return seq({nondet(set("k_np1", pc(s.a)), set("k_np1", pc(s.b))), det_weight,
                    set("k_two", N(0))});
      case SymStep::Kind::Prob: {
        Integer a = s.p.get_num(), b = s.p.get_den();
        Integer scale = base / b;
        return seq({set("k_np1", pc(s.a)), set("k_nq1", mul(V("k_q"), N(Integer(a * scale)))),
                    set("k_two", N(1)), set("k_np2", pc(s.b)),
                    set("k_nq2", mul(V("k_q"), N(Integer((b - a) * scale))))});
      }
    }
    throw std::logic_error("bad step");
  };
  std::function<ProgramPtr(long, long)> dispatch = [&](long lo, long hi) -> ProgramPtr {
    if (lo == hi) return step_code(lo);
    long mid = lo + (hi - lo) / 2;
    return branch(le(V("k_pc"), N(mid)), dispatch(lo, mid), dispatch(mid + 1, hi));
  };

  ProgramPtr cheer =
      loop(gt(V("k_cer"), V("k_bound")),
           seq({set("k_bound", mul(N(2), V("k_bound"))), set("k_w", N(0)),
                loop(lt(V("k_w"), V("k_inv")), set("k_w", add(V("k_w"), N(1))))}));
  ProgramPtr halve = seq({coin(), set("k_inv", mul(N(2), V("k_inv")))});
  bool per_step = opts.halving == KnievelOptions::Halving::PerStep;

  std::vector<ProgramPtr> expand = pop;
  expand.push_back(set("k_kc", sub(V("k_kc"), N(1))));
  expand.push_back(set("k_cer", add(V("k_cer"), mul(V("k_q"), V("k_scale")))));
  expand.push_back(dispatch(1, static_cast<long>(terms.size()) - 1));
  expand.push_back(when(ne(V("k_np1"), N(0)),
                        seq({push_node("k_nxt", V("k_np1"), V("k_nq1")),
                             set("k_kn", add(V("k_kn"), N(1)))})));
  expand.push_back(when(and_(eq(V("k_two"), N(1)), ne(V("k_np2"), N(0))),
                        seq({push_node("k_nxt", V("k_np2"), V("k_nq2")),
                             set("k_kn", add(V("k_kn"), N(1)))})));
  if (per_step) {
    expand.push_back(halve);
    expand.push_back(cheer);
  }

  std::vector<ProgramPtr> level = {loop(gt(V("k_kc"), N(0)), seq(expand)),
                                   set("k_cur", V("k_nxt")), set("k_kc", V("k_kn")),
                                   set("k_nxt", N(0)), set("k_kn", N(0)),
                                   set("k_scale", mul(V("k_scale"), lit(Rational(1) / base)))};
  if (!per_step) {
    level.push_back(halve);
    level.push_back(cheer);
  }

  std::vector<ProgramPtr> prog = {set("k_scale", N(1)), set("k_cer", N(0)), set("k_bound", N(1)),
                                  set("k_inv", N(1))};
  for (Symbol v : vars) prog.push_back(set(den_var(v), N(1)));
  prog.push_back(push_node("k_cur", N(entry), N(1)));
  prog.push_back(set("k_kc", N(1)));
  prog.push_back(loop(gt(V("k_kc"), N(0)), seq(level)));
  out.program = seq(prog);
  return out;
}

// ---------------------------------------------------------------------------
// Trees

TreeSpec TreeSpec::explicit_tree(std::set<std::vector<long>> nodes) {
  TreeSpec t;
  t.kind = Kind::Explicit;
  nodes.insert({});
  for (const auto& n : nodes) {
    for (long x : n)
      if (x < 0) throw std::invalid_argument("tree nodes are sequences of naturals");
    if (!n.empty()) {
      std::vector<long> parent(n.begin(), n.end() - 1);
      if (!nodes.count(parent)) throw std::invalid_argument("explicit tree is not prefix-closed");
    }
  }
  if (nodes.size() > 4096) throw std::invalid_argument("explicit tree too large to encode");
  t.nodes = std::move(nodes);
  return t;
}

TreeSpec TreeSpec::rule(Kind kind, int depth) {
  if (kind == Kind::Explicit) throw std::invalid_argument("use explicit_tree");
  if (depth < 0) throw std::invalid_argument("negative depth");
  TreeSpec t;
  t.kind = kind;
  t.depth = depth;
  return t;
}

bool TreeSpec::contains(const std::vector<long>& node) const {
  switch (kind) {
    case Kind::Explicit: return nodes.count(node) > 0;
    case Kind::AllZeros: return std::all_of(node.begin(), node.end(), [](long x) { return x == 0; });
    case Kind::Full: return true;
    case Kind::BoundedDepth: return static_cast<int>(node.size()) <= depth;
  }
  return false;
}

Integer encode_node(const std::vector<long>& node) {
  Integer code = 0;
  for (long x : node) {
    Integer s = code + x;
    code = s * (s + 1) / 2 + code;
  }
  return code;
}

namespace {

// Code computing `target` := membership of the node held in (len, node).
ProgramPtr membership(const TreeSpec& t, const std::string& prefix, const std::string& target) {
  switch (t.kind) {
    case TreeSpec::Kind::Explicit: {
      std::vector<ProgramPtr> s = {set(target, N(0))};
      for (const auto& n : t.nodes)
        s.push_back(when(and_(eq(V(prefix + "len"), N(static_cast<long>(n.size()))),
                              eq(V(prefix + "node"), N(encode_node(n)))),
                         set(target, N(1))));
      return seq(s);
    }
    case TreeSpec::Kind::AllZeros: return set(target, V(prefix + "az"));
    case TreeSpec::Kind::Full: return set(target, N(1));
    case TreeSpec::Kind::BoundedDepth:
      return branch(le(V(prefix + "len"), N(t.depth)), set(target, N(1)), set(target, N(0)));
  }
  throw std::logic_error("bad tree");
}

long explicit_height(const TreeSpec& t) {
  long h = 0;
  for (const auto& n : t.nodes) h = std::max(h, static_cast<long>(n.size()));
  return h;
}

ProgramPtr append(const TreeSpec& t, const std::string& prefix, AExprPtr x) {
  std::vector<ProgramPtr> s = {set(prefix + "len", add(V(prefix + "len"), N(1)))};
  if (t.kind == TreeSpec::Kind::Explicit) {
    AExprPtr sum = add(V(prefix + "node"), x);
    s.push_back(when(le(V(prefix + "len"), N(explicit_height(t) + 1)),
                     set(prefix + "node",
                         add(mul(mul(sum, add(sum, N(1))), half()), V(prefix + "node")))));
  }
  if (t.kind == TreeSpec::Kind::AllZeros) s.push_back(when(ne(x, N(0)), set(prefix + "az", N(0))));
  return seq(s);
}

ProgramPtr num_gen(const std::string& target) {
  return seq({set("g_x", N(0)), set("g_y", N(0)), set("g_w", N(0)),
              loop(eq(V("g_y"), N(0)),
                   seq({set("g_x", add(V("g_x"), N(1))), pick("g_y", 0, 1),
                        when(eq(V("g_y"), N(0)),
                             seq({coin(), set("t_s", mul(N(2), V("t_s")))}))})),
              loop(lt(V("g_w"), V("t_s")), set("g_w", add(V("g_w"), N(1)))),
              set(target, sub(V("g_x"), N(1)))});
}

}  // namespace

ProgramPtr emit_tree_reduction(const TreeSpec& t) {
  std::vector<ProgramPtr> init = {set("t_node", N(0)), set("t_len", N(0)), set("t_s", N(1))};
  if (t.kind == TreeSpec::Kind::AllZeros) init.push_back(set("t_az", N(1)));
  ProgramPtr edge_case = seq({
      num_gen("t_n"),
      loop(gt(V("t_n"), N(0)),
           seq({set("t_n", sub(V("t_n"), N(1))), num_gen("t_x"), append(t, "t_", V("t_x"))})),
      membership(t, "t_", "t_z"),
      when(eq(V("t_z"), N(1)), loop(truth(true), skip())),
      exit(),
  });
  ProgramPtr body = seq({num_gen("t_x"), append(t, "t_", V("t_x")), membership(t, "t_", "t_z"),
                         when(eq(V("t_z"), N(0)), edge_case)});
  init.push_back(loop(truth(true), body));
  return seq(init);
}

ProgramPtr emit_ordinal_program(const TreeSpec& t) {
  std::vector<ProgramPtr> init = {set("o_node", N(0)), set("o_len", N(0))};
  if (t.kind == TreeSpec::Kind::AllZeros) init.push_back(set("o_az", N(1)));

  ProgramPtr choose = seq({set("o_x", N(0)), set("o_y", N(0)),
                           loop(eq(V("o_y"), N(0)),
                                seq({set("o_x", add(V("o_x"), N(1))), pick("o_y", 0, 1), coin()})),
                           append(t, "o_", sub(V("o_x"), N(1)))});

  // Membership machine: one scanned entry per machine step.
  ProgramPtr machine_step;
  if (t.kind == TreeSpec::Kind::Explicit) {
    std::vector<ProgramPtr> s;
    long i = 0;
    for (const auto& n : t.nodes) {
      s.push_back(when(and_(eq(V("o_mi"), N(i)),
                            and_(eq(V("o_len"), N(static_cast<long>(n.size()))),
                                 eq(V("o_node"), N(encode_node(n))))),
                       seq({set("o_mz", N(1)), set("o_md", N(1))})));
      ++i;
    }
    s.push_back(when(ge(V("o_mi"), N(i - 1)), set("o_md", N(1))));
    s.push_back(set("o_mi", add(V("o_mi"), N(1))));
    machine_step = seq(s);
  } else {
    machine_step = seq({membership(t, "o_", "o_mz"), set("o_md", N(1))});
  }
  ProgramPtr machine = seq({set("o_mi", N(0)), set("o_mz", N(0)), set("o_md", N(0)),
                            loop(eq(V("o_md"), N(0)), seq({machine_step, coin()})),
                            when(eq(V("o_mz"), N(0)), exit())});

  ProgramPtr inc = seq({set("o_ix", N(1)), set("o_iy", N(0)),
                        loop(eq(V("o_iy"), N(0)),
                             seq({set("o_ix", mul(N(2), V("o_ix"))), pick("o_iy", 0, 1), coin()})),
                        loop(gt(V("o_ix"), N(0)), set("o_ix", sub(V("o_ix"), N(1))))});

  init.push_back(loop(truth(true), seq({choose, machine, inc})));
  return seq(init);
}

Ordinal ord_of_tree(const TreeSpec& t) {
  switch (t.kind) {
    case TreeSpec::Kind::AllZeros:
    case TreeSpec::Kind::Full:
      throw std::invalid_argument("tree has an infinite branch");
    case TreeSpec::Kind::BoundedDepth:
      return Ordinal::from_natural(t.depth);
    case TreeSpec::Kind::Explicit: {
      std::map<std::vector<long>, long> rank;
      // Longer nodes first: children are ranked before their parents.
      std::vector<std::vector<long>> order(t.nodes.begin(), t.nodes.end());
      std::sort(order.begin(), order.end(),
                [](const auto& a, const auto& b) { return a.size() > b.size(); });
      for (const auto& n : order) {
        rank.try_emplace(n, 0);
        if (!n.empty()) {
          std::vector<long> parent(n.begin(), n.end() - 1);
          long& r = rank[parent];
          r = std::max(r, rank[n] + 1);
        }
      }
      return Ordinal::from_natural(rank.at({}));
    }
  }
  throw std::logic_error("bad tree");
}

// ---------------------------------------------------------------------------

namespace catalog {

ProgramPtr random_walk() {
  return parse_program("x := 1; while (x != 0) { {x := x + 1} <1/2> {x := x - 1} }");
}

ProgramPtr geometric() { return parse_program("while (true) { {skip} <1/2> {exit} }"); }

ProgramPtr two_loops(bool first_loop_only) {
  std::string text =
      "x := 0; y := 0; z := 1; "
      "while (x + y = 0) { {y := 0} [] {y := 1}; {x := 0} <1/2> {x := 1}; z := z * 4 }";
  if (!first_loop_only) text += "; while (x = 0 and z > 0) { z := z - 1 }";
  return parse_program(text);
}

ProgramPtr inc(std::optional<long> cap) {
  std::string guard = cap ? "y = 0 and x < " + std::to_string(*cap) : "y = 0";
  return parse_program("x := 1; y := 0; while (" + guard +
                       ") { x := 2 * x; {y := 0} [] {y := 1}; {skip} <1/2> {exit} }; "
                       "while (x > 0) { x := x - 1 }");
}

ProgramPtr exponential_countdown(std::optional<long> cap) {
  std::string guard = cap ? "y = 0 and x < " + std::to_string(*cap) : "y = 0";
  return parse_program("x := 0; y := 0; q := 1; while (" + guard +
                       ") { x := x + 1; q := 4 * q; {y := 0} <1/2> {y := 1} }; "
                       "y := q; while (y > 0) { y := y - 1 }");
}

}  // namespace catalog

}  // namespace pastlab
