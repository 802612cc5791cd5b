// Serial vs OpenMP kernels: level expansion and proof-rule checking.
#include <benchmark/benchmark.h>

#include "pastlab/certificates.hpp"
#include "pastlab/exploration.hpp"
#include "pastlab/transforms.hpp"

using namespace pastlab;

namespace {

// Level of a binary coin tree after `depth` steps.
std::vector<ExecState> wide_level(int depth) {
  ProgramPtr p = parse_program(
      "while (true) { {x := x + 1} <1/2> {y := y + x}; {z := z * 2 - x} <1/3> {z := z + y} }");
  ConstantScheduler ln(Direction::Ln);
  std::vector<ExecState> level = {initial_state(p)};
  for (int d = 0; d < depth; ++d) {
    std::vector<ExecState> next;
    for (auto& succ : expand_level_serial(level, ln))
      for (auto& s : succ) next.push_back(std::move(s.state));
    level = std::move(next);
  }
  return level;
}

void BM_ExpandSerial(benchmark::State& st) {
  auto level = wide_level(static_cast<int>(st.range(0)));
  ConstantScheduler ln(Direction::Ln);
  for (auto _ : st) benchmark::DoNotOptimize(expand_level_serial(level, ln));
  st.counters["states"] = static_cast<double>(level.size());
}

void BM_ExpandParallel(benchmark::State& st) {
  auto level = wide_level(static_cast<int>(st.range(0)));
  ConstantScheduler ln(Direction::Ln);
  int jobs = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(expand_level_parallel(level, ln, jobs));
  st.counters["states"] = static_cast<double>(level.size());
}

// Ranked certificate for the capped inc program: first loop 2, countdown 1.
struct RankedInc {
  StateGraph g;
  RuleCert cert;
};

const RankedInc& ranked_inc() {
  static const RankedInc r = [] {
    ProgramPtr p = catalog::inc(256);
    RankedInc out{collapse_to_state_graph(p, 1000000), {}};
    const StateGraph& g = out.g;
    std::string loop1 = print(p->second->second->first);
    std::vector<bool> live(g.nodes.size()), first(g.nodes.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      live[v] = g.nodes[v].kind != NodeKind::Terminal;
      first[v] = print(g.nodes[v].state.program).find(loop1) != std::string::npos;
    }
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      out.cert.g[v] = Ordinal::from_natural(live[v] ? (first[v] ? 2 : 1) : 0);
      if (!live[v]) continue;
      std::vector<bool> reach = reachable_from(g, v), region(g.nodes.size());
      for (std::size_t u = 0; u < g.nodes.size(); ++u)
        region[u] = reach[u] && live[u] && (!first[v] || first[u]);
      out.cert.k[v] = in_loop_rsm_from_bound(g, region);
    }
    return out;
  }();
  return r;
}

void BM_RuleSerial(benchmark::State& st) {
  const RankedInc& r = ranked_inc();
  for (auto _ : st) benchmark::DoNotOptimize(check_proof_rule_serial(r.g, r.cert));
}

void BM_RuleParallel(benchmark::State& st) {
  const RankedInc& r = ranked_inc();
  int jobs = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(check_proof_rule_parallel(r.g, r.cert, jobs));
}

}  // namespace

BENCHMARK(BM_ExpandSerial)->Arg(40)->Arg(56)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpandParallel)->ArgsProduct({{40, 56}, {2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RuleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RuleParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
