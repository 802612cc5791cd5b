#include <random>

#include "doctest.h"
#include "pastlab/certificates.hpp"
#include "pastlab/transforms.hpp"
#include "support.hpp"

using namespace pastlab;
using namespace pastlab::testing;

namespace {

std::vector<bool> non_terminal(const StateGraph& g) {
  std::vector<bool> out(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v) out[v] = g.nodes[v].kind != NodeKind::Terminal;
  return out;
}

// The graph as an MDP in which leaving `region` ends the run.
std::vector<MdpNode> to_mdp(const StateGraph& g, const std::vector<bool>& region) {
  std::vector<MdpNode> m(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const GraphNode& n = g.nodes[v];
    if (!region[v]) continue;
    for (const GraphEdge& e : n.out) m[v].succ.push_back(e.to);
    switch (n.kind) {
      case NodeKind::Terminal: break;
      case NodeKind::Deterministic: m[v].kind = MdpNode::Kind::Det; break;
      case NodeKind::Nondeterministic: m[v].kind = MdpNode::Kind::Max; break;
      case NodeKind::Probabilistic:
        m[v].kind = MdpNode::Kind::Prob;
        m[v].p = n.out[0].weight;
        break;
    }
  }
  return m;
}

struct IncCerts {
  StateGraph graph;
  RsmCert flat;    // one RSM for the whole program
  RuleCert ranked;  // first loop 2, countdown 1, terminal 0
  std::vector<bool> first_loop;
};

IncCerts inc_certificates(long cap) {
  ProgramPtr p = catalog::inc(cap);
  IncCerts c{collapse_to_state_graph(p, 100000), {}, {}, {}};
  const StateGraph& g = c.graph;
  std::string loop1 = print(p->second->second->first);
  std::vector<bool> live = non_terminal(g);
  c.first_loop.resize(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    c.first_loop[v] = print(g.nodes[v].state.program).find(loop1) != std::string::npos;
  c.flat = in_loop_rsm_from_bound(g, live);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (!live[v]) {
      c.ranked.g[v] = Ordinal();
      continue;
    }
    c.ranked.g[v] = Ordinal::from_natural(c.first_loop[v] ? 2 : 1);
    std::vector<bool> reach = reachable_from(g, v), region(g.nodes.size());
    for (std::size_t u = 0; u < g.nodes.size(); ++u)
      region[u] = reach[u] && live[u] && (!c.first_loop[v] || c.first_loop[u]);
    c.ranked.k[v] = in_loop_rsm_from_bound(g, region);
  }
  return c;
}

bool same_report(const CheckReport& a, const CheckReport& b) {
  if (a.ok != b.ok || a.violations.size() != b.violations.size()) return false;
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    const Violation& x = a.violations[i];
    const Violation& y = b.violations[i];
    if (x.node != y.node || x.for_state != y.for_state || x.condition != y.condition ||
        x.lhs != y.lhs || x.rhs != y.rhs)
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("two-state chain") {
  StateGraph g = collapse_to_state_graph(parse_program("x := 1"), 10);
  std::size_t s0 = g.initial, s1 = 1 - s0;
  RsmCert c;
  c.h = {{s0, 1}, {s1, 0}};
  CHECK(check_rsm(g, c).ok);
  CHECK(rsm_bound(c, s0) == 1);
  c.epsilon = Rational(1, 2);
  CHECK(rsm_bound(c, s0) == 2);
  c.h[s0] = Rational(1, 3);
  CheckReport r = check_rsm(g, c);
  CHECK_FALSE(r.ok);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].condition == "deterministic");
  CHECK(r.violations[0].node == s0);
}

TEST_CASE("missing values and bad epsilon") {
  StateGraph g = collapse_to_state_graph(parse_program("x := 1"), 10);
  RsmCert c;
  c.h = {{g.initial, 1}};
  CHECK_THROWS_AS(check_rsm(g, c), CertificateError);
  c.h[1 - g.initial] = 0;
  c.epsilon = 0;
  CheckReport r = check_rsm(g, c);
  CHECK_FALSE(r.ok);
  CHECK(r.violations[0].condition == "epsilon-positive");
}

TEST_CASE("geometric loop runtime from the derived RSM") {
  StateGraph g = collapse_to_state_graph(catalog::geometric(), 100);
  RsmCert c = in_loop_rsm_from_bound(g, non_terminal(g));
  CHECK(check_rsm(g, c).ok);
  CHECK(rsm_bound(c, g.initial) == geometric_expected_runtime(4));
  CHECK_THROWS_AS(in_loop_rsm_from_bound(g, non_terminal(g), Rational(3)), InLoopFailure);
}

TEST_CASE("derived RSM matches value iteration") {
  for (const ProgramPtr& p : {catalog::geometric(), catalog::inc(16), catalog::exponential_countdown(3),
                              parse_program("x := 3; while (x > 0) { {x := x - 1} [] {x := x - 2} <1/3> {skip} }")}) {
    StateGraph g = collapse_to_state_graph(p, 100000);
    std::vector<bool> live = non_terminal(g);
    RsmCert c = in_loop_rsm_from_bound(g, live);
    std::vector<Rational> vi = value_iteration(to_mdp(g, live), 1000);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      Rational h = c.h.count(v) ? c.h.at(v) : Rational(0);
      CHECK(vi[v] <= h);
      CHECK(h - vi[v] < pow2(-40));
    }
  }
}

TEST_CASE("derived RSM vanishes exactly outside the region") {
  StateGraph g = collapse_to_state_graph(catalog::inc(8), 100000);
  std::vector<bool> live = non_terminal(g);
  RsmCert c = in_loop_rsm_from_bound(g, live);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    Rational h = c.h.count(v) ? c.h.at(v) : Rational(0);
    CHECK((h == 0) == !live[v]);
  }
}

TEST_CASE("loops that can stall have no RSM") {
  for (const char* text : {"while (true) { skip }", "while (true) { {skip} [] {exit} }",
                           "x := 0; while (x = 0) { {x := 0} <1/2> {x := 0} }"}) {
    StateGraph g = collapse_to_state_graph(parse_program(text), 100);
    CHECK_THROWS_AS(in_loop_rsm_from_bound(g, non_terminal(g)), InLoopFailure);
  }
}

TEST_CASE("proof rule on the chain") {
  StateGraph g = collapse_to_state_graph(parse_program("x := 1"), 10);
  std::size_t s0 = g.initial, s1 = 1 - s0;
  RuleCert c;
  c.g = {{s0, Ordinal::from_natural(1)}, {s1, Ordinal()}};
  c.k[s0].h = {{s0, 1}};
  CHECK(check_proof_rule(g, c).ok);
  auto lower = lower_set(g, c.g, s0);
  CHECK(lower[s1]);
  CHECK_FALSE(lower[s0]);
  c.g[s1] = Ordinal::from_natural(1);
  c.g[s0] = Ordinal::from_natural(2);
  CheckReport r = check_proof_rule(g, c);
  CHECK_FALSE(r.ok);
  CHECK(r.violations.front().condition == "rank-zero-on-terminal");
  c.g[s1] = Ordinal();
  c.g[s0] = Ordinal();
  CHECK(check_proof_rule(g, c).violations.front().condition == "rank-positive");
}

TEST_CASE("inc: ranks 2 and 1 keep the per-state RSMs bounded") {
  Rational prev_flat = 0;
  for (long cap : {4L, 16L, 64L, 256L}) {
    IncCerts c = inc_certificates(cap);
    CHECK(check_rsm(c.graph, c.flat).ok);
    CHECK(check_proof_rule(c.graph, c.ranked).ok);
    Rational flat = rsm_bound(c.flat, c.graph.initial);
    CHECK(flat > prev_flat);
    prev_flat = flat;
    Rational worst = 0;
    for (const auto& [v, k] : c.ranked.k)
      if (c.first_loop[v])
        for (const auto& [u, h] : k.h) worst = std::max(worst, h);
    // Leaving the first loop takes at most 5 + 5*1/2 + 5*1/4 + ... < 21 steps
    // in expectation once the setup is done.
    CHECK(worst < 21);
    CHECK(worst < flat);
  }
}

TEST_CASE("serial and parallel proof-rule checks agree") {
  IncCerts c = inc_certificates(64);
  CHECK(same_report(check_proof_rule_serial(c.graph, c.ranked),
                    check_proof_rule_parallel(c.graph, c.ranked, 4)));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    RuleCert broken = c.ranked;
    for (int j = 0; j < 5; ++j) {
      auto it = broken.k.begin();
      std::advance(it, static_cast<long>(rng() % broken.k.size()));
      if (it->second.h.empty()) continue;
      auto jt = it->second.h.begin();
      std::advance(jt, static_cast<long>(rng() % it->second.h.size()));
      jt->second = jt->second / 2;
    }
    CheckReport s = check_proof_rule_serial(c.graph, broken);
    CHECK(same_report(s, check_proof_rule_parallel(c.graph, broken, 4)));
    CHECK(same_report(s, check_proof_rule(c.graph, broken, 3)));
  }
}

}  // TEST_SUITE
