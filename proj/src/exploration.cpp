#include "pastlab/exploration.hpp"

#include <omp.h>

#include <cstdlib>
#include <deque>
#include <exception>
#include <set>

namespace pastlab {

ExploreOptions default_explore_options() {
  ExploreOptions o;
  if (const char* env = std::getenv("PASTLAB_NODE_CAP")) {
    try {
      o.node_cap = std::stoull(env);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Level expansion kernels

LevelExpansion expand_level_serial(const std::vector<ExecState>& level, Scheduler& f) {
  LevelExpansion out(level.size());
  for (std::size_t i = 0; i < level.size(); ++i)
    if (!is_terminal(level[i].program)) out[i] = step(level[i], f);
  return out;
}

LevelExpansion expand_level_parallel(const std::vector<ExecState>& level, Scheduler& f, int jobs) {
  if (!f.shareable()) throw std::logic_error("parallel expansion needs a shareable scheduler");
  LevelExpansion out(level.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(jobs)
  for (long i = 0; i < n; ++i) {
    if (is_terminal(level[i].program)) continue;
    try {
      out[i] = step(level[i], f);
    } catch (...) {
#pragma omp critical(pastlab_expand_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

LevelExpansion expand_level(const std::vector<ExecState>& level, Scheduler& f,
                            const ExploreOptions& opts) {
  if (opts.jobs > 1 && f.shareable() && level.size() >= 32)
    return expand_level_parallel(level, f, opts.jobs);
  return expand_level_serial(level, f);
}

// ---------------------------------------------------------------------------

ExecTree build_tree(const ProgramPtr& p, Scheduler& f, int depth, const ExploreOptions& opts) {
  if (depth < 0) throw std::invalid_argument("negative depth");
  ExecTree tree;
  tree.depth_cap = depth;
  ExecState root = initial_state(p);
  tree.nodes.push_back(TreeNode{root, -1, 0, StepKind::Deterministic, is_terminal(p)});
  std::vector<long> level_ids = {0};
  for (int d = 0; d < depth; ++d) {
    std::vector<ExecState> level;
    std::vector<long> parents;
    for (long id : level_ids) {
      if (tree.nodes[id].terminal) continue;
      level.push_back(tree.nodes[id].state);
      parents.push_back(id);
    }
    if (level.empty()) {
      level_ids.clear();
      break;
    }
    LevelExpansion next = expand_level(level, f, opts);
    level_ids.clear();
    for (std::size_t i = 0; i < next.size(); ++i) {
      for (Successor& s : next[i]) {
        if (tree.nodes.size() >= opts.node_cap)
          throw ResourceError("execution tree exceeds node cap of " +
                              std::to_string(opts.node_cap));
        bool term = is_terminal(s.state.program);
        tree.nodes.push_back(TreeNode{std::move(s.state), parents[i], d + 1, s.kind, term});
        level_ids.push_back(static_cast<long>(tree.nodes.size()) - 1);
      }
    }
  }
  for (long id : level_ids)
    if (!tree.nodes[id].terminal && tree.nodes[id].depth == depth) tree.frontier.push_back(id);
  return tree;
}

SeriesProfile sweep(const ProgramPtr& p, Scheduler& f, int depth, const ExploreOptions& opts) {
  if (depth < 0) throw std::invalid_argument("negative depth");
  SeriesProfile prof;
  std::vector<ExecState> level = {initial_state(p)};
  Rational done = 0;
  for (int d = 0;; ++d) {
    Rational live = 0;
    std::vector<ExecState> open;
    open.reserve(level.size());
    for (ExecState& s : level) {
      if (is_terminal(s.program)) {
        done += s.prob;
      } else {
        live += s.prob;
        open.push_back(std::move(s));
      }
    }
    prof.live.push_back(live);
    prof.terminated.push_back(done);
    prof.peak_width = std::max(prof.peak_width, open.size());
    if (d == depth) break;
    if (open.empty()) {
      // Nothing left: the remaining levels are all zero live mass.
      for (int e = d + 1; e <= depth; ++e) {
        prof.live.push_back(Rational(0));
        prof.terminated.push_back(done);
      }
      break;
    }
    LevelExpansion next = expand_level(open, f, opts);
    level.clear();
    for (auto& succs : next)
      for (Successor& s : succs) level.push_back(std::move(s.state));
    if (level.size() > opts.node_cap)
      throw ResourceError("tree level of width " + std::to_string(level.size()) +
                          " exceeds node cap of " + std::to_string(opts.node_cap));
  }
  return prof;
}

Rational termination_prob_upto(const ProgramPtr& p, Scheduler& f, int k,
                               const ExploreOptions& opts) {
  return sweep(p, f, k, opts).terminated.back();
}

RuntimeBounds exp_runtime_bounds(const ProgramPtr& p, Scheduler& f, int k,
                                 const ExploreOptions& opts) {
  SeriesProfile prof = sweep(p, f, k, opts);
  RuntimeBounds b;
  for (int j = 0; j < k; ++j) b.lower += prof.live[j];
  b.closed = prof.live[k] == 0;
  if (b.closed) b.exact = b.lower;
  return b;
}

RuntimeBounds exp_reach_runtime_bounds(const ProgramPtr& p, Scheduler& f,
                                       const StatePredicate& target, int k,
                                       const ExploreOptions& opts) {
  if (k < 0) throw std::invalid_argument("negative depth");
  RuntimeBounds b;
  Rational stuck = 0;  // terminated without visiting the target
  std::vector<ExecState> level = {initial_state(p)};
  for (int d = 0;; ++d) {
    std::vector<ExecState> open;
    Rational live = 0;
    for (ExecState& s : level) {
      if (target(ProgramState{s.program, s.valuation})) continue;
      if (is_terminal(s.program)) {
        stuck += s.prob;
        continue;
      }
      live += s.prob;
      open.push_back(std::move(s));
    }
    if (d == k) {
      b.closed = open.empty() && stuck == 0;
      break;
    }
    b.lower += live + stuck;
    if (open.empty() && stuck == 0) {
      b.closed = true;
      break;
    }
    LevelExpansion next = expand_level(open, f, opts);
    level.clear();
    for (auto& succs : next)
      for (Successor& s : succs) level.push_back(std::move(s.state));
    if (level.size() > opts.node_cap)
      throw ResourceError("tree level exceeds node cap of " + std::to_string(opts.node_cap));
  }
  if (b.closed) b.exact = b.lower;
  return b;
}

SemicheckResult ast_semicheck(const ProgramPtr& p, const Rational& delta, int n,
                              std::size_t enumeration_cap, const ExploreOptions& opts) {
  if (n < 0) throw std::invalid_argument("negative depth");
  SemicheckResult r;
  bool first = true;
  ExploreOptions serial = opts;
  serial.jobs = 1;
  r.schedules_checked = for_each_partial_schedule(
      static_cast<std::size_t>(n), enumeration_cap, [&](TableScheduler& f) {
        Rational t = termination_prob_upto(p, f, n, serial);
        if (first || t < r.worst) r.worst = t;
        first = false;
        if (t <= delta) {
          r.holds = false;
          r.counterexample = f.schedule();
          return false;
        }
        return true;
      });
  return r;
}

std::vector<History> reachable_queries(const ProgramPtr& p, std::size_t size, int depth,
                                       const ExploreOptions& opts) {
  std::set<std::string> seen;
  std::vector<History> out;
  std::vector<ExecState> level = {initial_state(p)};
  for (int d = 0; d < depth && !level.empty(); ++d) {
    std::vector<ExecState> next;
    for (const ExecState& s : level) {
      if (is_terminal(s.program)) continue;
      Transition t = transition(s.program, s.valuation);
      if (t.kind == Transition::Kind::Nondeterministic) {
        if (s.history.size() <= size && seen.insert(s.history.str()).second)
          out.push_back(s.history);
        next.push_back(ExecState{t.left, t.valuation, s.prob, s.history.extended(Direction::Ln)});
        next.push_back(ExecState{t.right, t.valuation, s.prob, s.history.extended(Direction::Rn)});
      } else {
        ConstantScheduler any(Direction::Ln);
        for (Successor& succ : step(s, any)) next.push_back(std::move(succ.state));
      }
    }
    if (next.size() > opts.node_cap)
      throw ResourceError("query exploration exceeds node cap of " + std::to_string(opts.node_cap));
    level = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// State graphs

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Terminal: return "terminal";
    case NodeKind::Deterministic: return "det";
    case NodeKind::Nondeterministic: return "nondet";
    case NodeKind::Probabilistic: return "prob";
  }
  return "?";
}

const char* to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Det: return "det";
    case EdgeLabel::NondetLeft: return "nondet-left";
    case EdgeLabel::NondetRight: return "nondet-right";
    case EdgeLabel::ProbLeft: return "prob-left";
    case EdgeLabel::ProbRight: return "prob-right";
  }
  return "?";
}

std::optional<std::size_t> StateGraph::find(const std::string& key) const {
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

StateGraph collapse_to_state_graph(const ProgramPtr& p, std::size_t bound, const Valuation& start) {
  StateGraph g;
  std::deque<std::size_t> todo;
  auto intern_state = [&](ProgramState s) -> std::size_t {
    std::string key = state_key(s);
    if (auto it = g.index.find(key); it != g.index.end()) return it->second;
    if (g.nodes.size() >= bound)
      throw ResourceError("state graph exceeds bound of " + std::to_string(bound) + " nodes");
    std::size_t id = g.nodes.size();
    g.index.emplace(key, id);
    g.nodes.push_back(GraphNode{std::move(s), std::move(key), NodeKind::Terminal, {}});
    todo.push_back(id);
    return id;
  };
  g.initial = intern_state(ProgramState{p, start});
  while (!todo.empty()) {
    std::size_t id = todo.front();
    todo.pop_front();
    ProgramState s = g.nodes[id].state;
    if (is_terminal(s.program)) continue;
    Transition t = transition(s.program, s.valuation);
    std::vector<GraphEdge> out;
    NodeKind kind = NodeKind::Deterministic;
    switch (t.kind) {
      case Transition::Kind::Deterministic: {
        EdgeLabel label = !t.forced_prob ? EdgeLabel::Det
                          : t.forced == Direction::Lp ? EdgeLabel::ProbLeft
                                                      : EdgeLabel::ProbRight;
        out.push_back({intern_state({t.left, t.valuation}), label, Rational(1)});
        break;
      }
      case Transition::Kind::Probabilistic:
        kind = NodeKind::Probabilistic;
        out.push_back({intern_state({t.left, t.valuation}), EdgeLabel::ProbLeft, t.p});
        out.push_back({intern_state({t.right, t.valuation}), EdgeLabel::ProbRight,
                       Rational(1 - t.p)});
        break;
      case Transition::Kind::Nondeterministic:
        kind = NodeKind::Nondeterministic;
        out.push_back({intern_state({t.left, t.valuation}), EdgeLabel::NondetLeft, Rational(1)});
        out.push_back({intern_state({t.right, t.valuation}), EdgeLabel::NondetRight, Rational(1)});
        break;
    }
    g.nodes[id].kind = kind;
    g.nodes[id].out = std::move(out);
  }
  return g;
}

std::vector<bool> reachable_from(const StateGraph& g, std::size_t from) {
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<std::size_t> stack = {from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const GraphEdge& e : g.nodes[v].out) {
      if (!seen[e.to]) {
        seen[e.to] = true;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

}  // namespace pastlab
