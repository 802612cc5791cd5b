#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pastlab/ordinal.hpp"
#include "pastlab/rational.hpp"
#include "pastlab/semantics.hpp"

namespace pastlab {

/// A node with multiplicity m stands for m identical sibling copies of its
/// subtree. Ids are stable; removed nodes stay in the table as dead entries.
struct HydraNode {
  long parent = -1;
  std::vector<long> children;
  Integer multiplicity = 1;
  bool alive = true;
};

class HydraState {
 public:
  /// Nested parentheses, e.g. "(()())"; a child may carry "*k".
  static HydraState parse(std::string_view text);
  /// Chain of `edges` edges hanging from the root.
  static HydraState line(int edges);

  std::string str() const;
  /// Equal strings iff the trees are isomorphic as rooted unordered trees.
  std::string canonical() const;

  long root() const { return 0; }
  const std::vector<HydraNode>& nodes() const { return nodes_; }
  const HydraNode& node(long id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  bool is_head(long id) const;
  /// Alive non-root leaves in ascending id order.
  std::vector<long> heads() const;
  Integer head_count() const;
  bool dead() const { return heads().empty(); }
  int depth(long id) const;
  std::size_t node_count() const;  // alive nodes, multiplicities expanded

  const Integer& capacity() const { return capacity_; }
  void set_capacity(const Integer& n) { capacity_ = n; }

  /// T(leaf) = 0, T(v) = natural sum over children of w^T(child).
  Ordinal ordinal() const;

  /// Copies the subtree at src (with its multiplicities) under new_parent.
  /// Returns (old id -> new id) pairs.
  std::vector<std::pair<long, long>> clone_subtree(long src, long new_parent,
                                                   const Integer& multiplicity);
  /// Splits shared copies so that the returned head stands for one head.
  long concretize(long head);
  void remove_head(long concrete_head);
  /// Equivalent tree where every multiplicity is 1.
  HydraState expanded(std::size_t max_nodes) const;

 private:
  std::vector<HydraNode> nodes_;
  Integer capacity_ = 4;
};

struct RoundOutcome {
  HydraState state;
  Rational prob;
  bool survived = true;
  int evolutions = 0;
  std::optional<long> steps;  // pGCL steps of the round, when measured
};

/// Hercules chops `leaf`; the hydra evolves `e` times when the chopped head
/// has a grandparent. Death outcomes come first, the survivor last.
std::vector<RoundOutcome> play_round(const HydraState& h, long leaf, int e);

/// Ordinals of the surviving states for e = 0..e_max.
std::vector<Ordinal> successors_T(const HydraState& h, long leaf, int e_max);

struct HerculesStrategy {
  enum class Kind { LeftmostDeepest, Random, Scripted };
  Kind kind = Kind::LeftmostDeepest;
  std::uint64_t seed = 0;
  std::vector<long> script;

  static HerculesStrategy parse(const std::string& spec);
};

/// Deepest head, ties broken by smallest id.
long leftmost_deepest(const HydraState& h);
/// Head chosen in the given round (0-based).
long choose_head(const HerculesStrategy& s, const HydraState& h, std::size_t round);
/// The random strategy's pick counter for a round, in [0, 1024).
unsigned random_pick(std::uint64_t seed, std::size_t round);

struct HydraProgram {
  ProgramPtr program;
  ProgramPtr main_loop;
  int width = 0;
};

/// Knievel-form pGCL program playing the whole game with at most `width`
/// node slots; a game that outgrows them exits with h_ovf = 1.
HydraProgram compile_to_pgcl(const HydraState& h, const HerculesStrategy& s, int width = 32);

/// Hydra encoded in the slot variables of a compiled program.
HydraState decode_hydra(const Valuation& v, int width);

/// Follows the surviving branch of one compiled round in which the hydra
/// evolves e times. Returns the state back at the loop head.
struct SimulatedRound {
  HydraState state;
  Rational prob;
  long steps = 0;
};
SimulatedRound simulate_round(const HydraProgram& prog, int e, long step_limit = 10'000'000);

}  // namespace pastlab
