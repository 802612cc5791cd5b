#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pastlab/scheduling.hpp"
#include "pastlab/semantics.hpp"

namespace pastlab {

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct ExploreOptions {
  /// Tree building: total nodes. Series sweeps: live states held per level.
  std::size_t node_cap = 2'000'000;
  /// Worker threads for level expansion (OpenMP); 1 means the serial kernel.
  int jobs = 1;
};

/// Reads PASTLAB_NODE_CAP if set.
ExploreOptions default_explore_options();

struct TreeNode {
  ExecState state;
  long parent = -1;
  int depth = 0;
  StepKind via = StepKind::Deterministic;
  bool terminal = false;
};

struct ExecTree {
  std::vector<TreeNode> nodes;
  std::vector<long> frontier;  // non-terminal nodes at depth_cap
  int depth_cap = 0;
};

ExecTree build_tree(const ProgramPtr& p, Scheduler& f, int depth,
                    const ExploreOptions& opts = default_explore_options());

/// Successors of every state of one tree level, indexed like the input.
/// Terminal inputs get no successors.
using LevelExpansion = std::vector<std::vector<Successor>>;

LevelExpansion expand_level_serial(const std::vector<ExecState>& level, Scheduler& f);
/// OpenMP variant; identical output. Requires f.shareable().
LevelExpansion expand_level_parallel(const std::vector<ExecState>& level, Scheduler& f, int jobs);
/// Picks the parallel kernel when jobs > 1 and the scheduler is shareable.
LevelExpansion expand_level(const std::vector<ExecState>& level, Scheduler& f,
                            const ExploreOptions& opts);

/// Per-depth masses of one execution tree, streamed level by level.
struct SeriesProfile {
  std::vector<Rational> live;        // live[j]: mass of non-terminal nodes at depth j
  std::vector<Rational> terminated;  // terminated[j]: mass terminated within <= j steps
  std::size_t peak_width = 0;
};

SeriesProfile sweep(const ProgramPtr& p, Scheduler& f, int depth,
                    const ExploreOptions& opts = default_explore_options());

Rational termination_prob_upto(const ProgramPtr& p, Scheduler& f, int k,
                               const ExploreOptions& opts = default_explore_options());

struct RuntimeBounds {
  Rational lower;
  std::optional<Rational> exact;  // set iff closed
  bool closed = false;
};

/// Partial sums of sum_{j>=0} (1 - P[terminated within j steps]).
RuntimeBounds exp_runtime_bounds(const ProgramPtr& p, Scheduler& f, int k,
                                 const ExploreOptions& opts = default_explore_options());

using StatePredicate = std::function<bool(const ProgramState&)>;

/// Like exp_runtime_bounds, but a path stops counting at its first visit to
/// the target (the initial state included).
RuntimeBounds exp_reach_runtime_bounds(const ProgramPtr& p, Scheduler& f,
                                       const StatePredicate& target, int k,
                                       const ExploreOptions& opts = default_explore_options());

struct SemicheckResult {
  bool holds = true;
  std::size_t schedules_checked = 0;
  Rational worst;  // smallest termination probability seen
  std::optional<PartialSchedule> counterexample;
};

/// True iff every partial schedule of size n terminates with probability > delta
/// within n steps. Stops at the first failing schedule.
SemicheckResult ast_semicheck(const ProgramPtr& p, const Rational& delta, int n,
                              std::size_t enumeration_cap = 1u << 16,
                              const ExploreOptions& opts = default_explore_options());

/// Nondeterministic query histories reachable within `depth` steps under any
/// resolution of choices, keeping those of length <= size.
std::vector<History> reachable_queries(const ProgramPtr& p, std::size_t size, int depth,
                                       const ExploreOptions& opts = default_explore_options());

// ---------------------------------------------------------------------------
// Finite state graphs

enum class NodeKind { Terminal, Deterministic, Nondeterministic, Probabilistic };
enum class EdgeLabel { Det, NondetLeft, NondetRight, ProbLeft, ProbRight };

const char* to_string(NodeKind k);
const char* to_string(EdgeLabel l);

struct GraphEdge {
  std::size_t to;
  EdgeLabel label;
  Rational weight;  // branch probability; 1 for non-probabilistic edges
};

struct GraphNode {
  ProgramState state;
  std::string key;
  NodeKind kind = NodeKind::Terminal;
  std::vector<GraphEdge> out;
};

struct StateGraph {
  std::vector<GraphNode> nodes;
  std::size_t initial = 0;
  std::map<std::string, std::size_t> index;

  std::optional<std::size_t> find(const std::string& key) const;
};

/// Breadth-first closure of (program, valuation) pairs under both branches of
/// every choice. Throws ResourceError past `bound` nodes.
StateGraph collapse_to_state_graph(const ProgramPtr& p, std::size_t bound,
                                   const Valuation& start = Valuation());

/// Nodes reachable from `from`, including it.
std::vector<bool> reachable_from(const StateGraph& g, std::size_t from);

}  // namespace pastlab
