#include "support.hpp"

#include <algorithm>
#include <functional>

namespace pastlab::testing {

Rational ballot_hit_probability(int flips) {
  Integer hits = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << flips); ++bits) {
    long x = 1;
    for (int i = 0; i < flips && x != 0; ++i) x += (bits >> i & 1) ? 1 : -1;
    if (x == 0) ++hits;
  }
  Integer total = 1;
  total <<= flips;
  Rational q(hits, total);
  q.canonicalize();
  return q;
}

Rational geometric_expected_runtime(int s) {
  // sum_i 2^-i (s*i - 1) = 2s - 1, summed in closed form per term pair:
  // sum_i i 2^-i = 2 and sum_i 2^-i = 1.
  return Rational(s) * 2 - 1;
}

Rational geometric_partial_runtime(int s, int k) {
  // sum_{j<k} P(T > j) with P(T = s*i - 1) = 2^-i.
  Rational total = 0;
  for (int j = 0; j < k; ++j) {
    Rational stopped = 0;
    for (int i = 1; s * i - 1 <= j; ++i) stopped += pow2(-i);
    total += 1 - stopped;
  }
  return total;
}

std::vector<std::size_t> recursive_level_sizes(const ProgramPtr& p, int depth) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(depth) + 1, 0);
  std::function<void(const ProgramPtr&, const Valuation&, int)> go =
      [&](const ProgramPtr& q, const Valuation& v, int d) {
        ++sizes[static_cast<std::size_t>(d)];
        if (d == depth || is_terminal(q)) return;
        Transition t = transition(q, v);
        if (t.kind == Transition::Kind::Probabilistic) {
          go(t.left, t.valuation, d + 1);
          go(t.right, t.valuation, d + 1);
        } else {
          go(t.left, t.valuation, d + 1);
        }
      };
  go(p, Valuation(), 0);
  return sizes;
}

std::vector<Rational> value_iteration(const std::vector<MdpNode>& m, int rounds) {
  std::vector<Rational> v(m.size(), Rational(0));
  for (int r = 0; r < rounds; ++r) {
    std::vector<Rational> next(m.size(), Rational(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
      const MdpNode& n = m[i];
      switch (n.kind) {
        case MdpNode::Kind::Exit: break;
        case MdpNode::Kind::Det: next[i] = 1 + v[n.succ[0]]; break;
        case MdpNode::Kind::Max: next[i] = 1 + std::max(v[n.succ[0]], v[n.succ[1]]); break;
        case MdpNode::Kind::Prob:
          next[i] = 1 + n.p * v[n.succ[0]] + (1 - n.p) * v[n.succ[1]];
          break;
      }
    }
    v = std::move(next);
  }
  return v;
}

namespace {

int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

const char* kVars[] = {"x", "y", "z"};

}  // namespace

AExprPtr random_aexpr(std::mt19937_64& rng, int depth) {
  int choice = depth <= 0 ? pick(rng, 2) : pick(rng, 6);
  switch (choice) {
    case 0: return ast::lit(Rational(pick(rng, 7) - 2, 1 + pick(rng, 3)));
    case 1: return ast::var(kVars[pick(rng, 3)]);
    case 2: return ast::neg(random_aexpr(rng, depth - 1));
    case 3: return ast::add(random_aexpr(rng, depth - 1), random_aexpr(rng, depth - 1));
    case 4: return ast::sub(random_aexpr(rng, depth - 1), random_aexpr(rng, depth - 1));
    default: return ast::mul(random_aexpr(rng, depth - 1), random_aexpr(rng, depth - 1));
  }
}

BExprPtr random_bexpr(std::mt19937_64& rng, int depth) {
  int choice = depth <= 0 ? pick(rng, 2) : pick(rng, 5);
  switch (choice) {
    case 0: return ast::truth(pick(rng, 2) == 1);
    case 1:
      return ast::cmp(static_cast<CmpOp>(pick(rng, 6)), random_aexpr(rng, depth - 1),
                      random_aexpr(rng, depth - 1));
    case 2: return ast::not_(random_bexpr(rng, depth - 1));
    case 3: return ast::and_(random_bexpr(rng, depth - 1), random_bexpr(rng, depth - 1));
    default: return ast::or_(random_bexpr(rng, depth - 1), random_bexpr(rng, depth - 1));
  }
}

ProgramPtr random_program(std::mt19937_64& rng, int depth) {
  int choice = depth <= 1 ? pick(rng, 4) : pick(rng, 9);
  switch (choice) {
    case 0: return ast::skip();
    case 1: return pick(rng, 4) == 0 ? ast::exit() : ast::skip();
    case 2:
    case 3: return ast::assign(kVars[pick(rng, 3)], random_aexpr(rng, 2));
    case 4:
    case 5: return ast::seq(random_program(rng, depth - 1), random_program(rng, depth - 1));
    case 6: {
      // Mostly constant weights; sometimes a state-dependent one.
      AExprPtr p = pick(rng, 3) == 0 ? random_aexpr(rng, 1)
                                     : ast::lit(Rational(1 + pick(rng, 3), 4));
      return ast::prob(random_program(rng, depth - 1), p, random_program(rng, depth - 1));
    }
    case 7:
      return pick(rng, 2) == 0
                 ? ast::nondet(random_program(rng, depth - 1), random_program(rng, depth - 1))
                 : ast::branch(random_bexpr(rng, 2), random_program(rng, depth - 1),
                               random_program(rng, depth - 1));
    default: return ast::loop(random_bexpr(rng, 2), random_program(rng, depth - 1));
  }
}

Ordinal random_ordinal(std::mt19937_64& rng) {
  // Exponents below w^w are polynomials in w with natural coefficients.
  auto small = [&](int max_terms, int max_exp) {
    Ordinal o;
    int terms = pick(rng, max_terms + 1);
    for (int i = 0; i < terms; ++i)
      o = natural_sum(o, Ordinal::term(Ordinal::from_natural(pick(rng, max_exp + 1)), 1 + pick(rng, 3)));
    return o;
  };
  Ordinal o;
  int terms = pick(rng, 4);
  for (int i = 0; i < terms; ++i) o = natural_sum(o, Ordinal::term(small(2, 3), 1 + pick(rng, 4)));
  return o;
}

std::string random_hydra(std::mt19937_64& rng, int max_nodes) {
  int n = 1 + pick(rng, max_nodes);
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) children[static_cast<std::size_t>(pick(rng, i))].push_back(i);
  std::function<std::string(int)> emit = [&](int v) {
    std::string s = "(";
    for (int c : children[static_cast<std::size_t>(v)]) s += emit(c);
    return s + ")";
  };
  return emit(0);
}

}  // namespace pastlab::testing
