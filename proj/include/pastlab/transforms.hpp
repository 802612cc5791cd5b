#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pastlab/ordinal.hpp"
#include "pastlab/syntax.hpp"

namespace pastlab {

/// Every probabilistic choice is exactly "{ skip } <p> { exit }".
bool is_knievel(const ProgramPtr& p);

struct KnievelOptions {
  /// Where the survival coin is flipped: after every simulated step, or once
  /// per simulated tree level.
  enum class Halving { PerStep, PerLevel };
  Halving halving = Halving::PerStep;
  std::size_t term_cap = 20000;
};

struct KnievelProgram {
  ProgramPtr program;
  std::size_t control_points = 0;  // distinct residual programs of the source
  Integer level_base = 1;          // node weights are q / level_base^depth
};

/// Knievel-form program whose expected runtime is finite iff the source's is.
/// It runs a breadth-first simulation of the source's execution tree; the
/// source's probabilities must be constants.
KnievelProgram to_knievel(const ProgramPtr& p, const KnievelOptions& opts = {});

/// A tree over sequences of naturals: an explicit finite prefix-closed set,
/// or one of a few rule-defined infinite trees.
struct TreeSpec {
  enum class Kind { Explicit, AllZeros, Full, BoundedDepth };
  Kind kind = Kind::Explicit;
  std::set<std::vector<long>> nodes;  // Explicit
  int depth = 0;                      // BoundedDepth

  static TreeSpec explicit_tree(std::set<std::vector<long>> nodes);
  static TreeSpec rule(Kind kind, int depth = 0);
  bool contains(const std::vector<long>& node) const;
};

/// Cantor pairing fold used to encode explicit tree nodes.
Integer encode_node(const std::vector<long>& node);

/// Knievel program that is PAST iff the tree is well-founded.
ProgramPtr emit_tree_reduction(const TreeSpec& t);
/// Knievel program whose rank follows the tree's ordinal.
ProgramPtr emit_ordinal_program(const TreeSpec& t);
/// Rank of a well-founded tree: leaves 0, inner nodes sup(child + 1).
Ordinal ord_of_tree(const TreeSpec& t);

namespace catalog {
ProgramPtr random_walk();
ProgramPtr geometric();
/// Two loops; the first alone when first_loop_only.
ProgramPtr two_loops(bool first_loop_only = false);
/// Counter doubled per coin flip, then counted down. Optional cap on the
/// first loop keeps its state space finite.
ProgramPtr inc(std::optional<long> cap = std::nullopt);
/// Loop counting heads, then a countdown of 4^x steps.
ProgramPtr exponential_countdown(std::optional<long> cap = std::nullopt);
}  // namespace catalog

}  // namespace pastlab
