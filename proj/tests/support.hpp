// Oracles and generators shared by the unit tests and the acceptance driver.
// Oracles here do not call the exploration or certificate code they check.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pastlab/hydra.hpp"
#include "pastlab/ordinal.hpp"
#include "pastlab/semantics.hpp"

namespace pastlab::testing {

// Random walk from x = 1, +1 or -1 per fair coin: probability of having hit 0
// within `flips` coins, by enumerating all 2^flips coin strings.
Rational ballot_hit_probability(int flips);

// `while (true) { {skip} <1/2> {exit} }`: a run that stops in iteration i has
// taken s*(i-1) + (s-1) steps. Expected runtime and partial sums of the
// runtime series, both summed directly over i.
Rational geometric_expected_runtime(int s);
Rational geometric_partial_runtime(int s, int k);

// Node count per depth of the execution tree, by recursive descent on the
// scheduler-free transition relation. Choices resolve to the left branch.
std::vector<std::size_t> recursive_level_sizes(const ProgramPtr& p, int depth);

// Rational value iteration of worst-case expected exit steps on an explicit
// MDP; `rounds` Bellman updates from 0.
struct MdpNode {
  enum class Kind { Exit, Det, Max, Prob } kind = Kind::Exit;
  std::vector<std::size_t> succ;
  Rational p;  // left weight for Prob
};
std::vector<Rational> value_iteration(const std::vector<MdpNode>& m, int rounds);

// Random generators, all deterministic per seed.
ProgramPtr random_program(std::mt19937_64& rng, int depth);
AExprPtr random_aexpr(std::mt19937_64& rng, int depth);
BExprPtr random_bexpr(std::mt19937_64& rng, int depth);
/// Ordinal below w^(w^w).
Ordinal random_ordinal(std::mt19937_64& rng);
/// Nested-parentheses hydra text with at most max_nodes nodes.
std::string random_hydra(std::mt19937_64& rng, int max_nodes);

}  // namespace pastlab::testing
