#include "pastlab/certificates.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <functional>

namespace pastlab {

namespace {

const Rational& value_or_zero(const std::map<std::size_t, Rational>& h, std::size_t v) {
  static const Rational zero(0);
  auto it = h.find(v);
  return it == h.end() ? zero : it->second;
}

void check_node(const StateGraph& g, const RsmCert& cert, std::size_t v,
                std::optional<std::size_t> for_state, std::vector<Violation>& out) {
  const Rational& hv = value_or_zero(cert.h, v);
  if (hv < 0) {
    out.push_back({v, for_state, "nonnegative", hv, Rational(0)});
    return;
  }
  if (hv == 0) return;
  const GraphNode& n = g.nodes[v];
  auto at = [&](std::size_t i) -> const Rational& { return value_or_zero(cert.h, n.out[i].to); };
  switch (n.kind) {
    case NodeKind::Terminal:
      out.push_back({v, for_state, "terminal-zero", hv, Rational(0)});
      break;
    case NodeKind::Deterministic: {
      Rational lhs = at(0) + cert.epsilon;
      if (lhs > hv) out.push_back({v, for_state, "deterministic", lhs, hv});
      break;
    }
    case NodeKind::Nondeterministic: {
      Rational lhs = std::max(at(0), at(1)) + cert.epsilon;
      if (lhs > hv) out.push_back({v, for_state, "nondeterministic", lhs, hv});
      break;
    }
    case NodeKind::Probabilistic: {
      Rational lhs = n.out[0].weight * at(0) + n.out[1].weight * at(1) + cert.epsilon;
      if (lhs > hv) out.push_back({v, for_state, "probabilistic", lhs, hv});
      break;
    }
  }
}

}  // namespace

CheckReport check_rsm_on(const StateGraph& g, const RsmCert& cert, const std::vector<bool>& domain,
                         std::optional<std::size_t> for_state) {
  CheckReport r;
  if (cert.epsilon <= 0) {
    r.violations.push_back({for_state.value_or(g.initial), for_state, "epsilon-positive",
                            cert.epsilon, Rational(0)});
  }
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (domain[v]) check_node(g, cert, v, for_state, r.violations);
  r.ok = r.violations.empty();
  return r;
}

CheckReport check_rsm(const StateGraph& g, const RsmCert& cert) {
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (!cert.h.count(v)) throw CertificateError("certificate has no value for node " + g.nodes[v].key);
  for (const auto& [v, _] : cert.h)
    if (v >= g.nodes.size()) throw CertificateError("certificate names an unknown node");
  return check_rsm_on(g, cert, std::vector<bool>(g.nodes.size(), true));
}

Rational rsm_bound(const RsmCert& cert, std::size_t node) {
  if (cert.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  return value_or_zero(cert.h, node) / cert.epsilon;
}

std::vector<bool> lower_set(const StateGraph& g, const std::map<std::size_t, Ordinal>& rank,
                            std::size_t sigma) {
  std::vector<bool> reach = reachable_from(g, sigma);
  const Ordinal& top = rank.at(sigma);
  std::vector<bool> out(g.nodes.size(), false);
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (reach[v]) out[v] = rank.at(v) < top;
  return out;
}

namespace {

void require_complete(const StateGraph& g, const RuleCert& cert) {
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (!cert.g.count(v)) throw CertificateError("no rank for node " + g.nodes[v].key);
    if (g.nodes[v].kind != NodeKind::Terminal && !cert.k.count(v))
      throw CertificateError("no ranking map k for node " + g.nodes[v].key);
  }
}

std::vector<Violation> check_state(const StateGraph& g, const RuleCert& cert, std::size_t sigma) {
  std::vector<Violation> out;
  const GraphNode& n = g.nodes[sigma];
  const Ordinal& rank = cert.g.at(sigma);
  bool terminal = n.kind == NodeKind::Terminal;
  if (terminal != rank.is_zero())
    out.push_back({sigma, std::nullopt, terminal ? "rank-zero-on-terminal" : "rank-positive",
                   Rational(0), Rational(0)});
  if (terminal) return out;

  const RsmCert& k = cert.k.at(sigma);
  std::vector<bool> reach = reachable_from(g, sigma);
  std::vector<bool> lower(g.nodes.size(), false);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) lower[v] = reach[v] && cert.g.at(v) < rank;

  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const Rational& hv = value_or_zero(k.h, v);
    bool should_vanish = lower[v] || !reach[v];
    if ((hv == 0) != should_vanish)
      out.push_back({v, sigma, should_vanish ? "zero-outside-region" : "positive-inside-region", hv,
                     Rational(0)});
  }
  CheckReport rsm = check_rsm_on(g, k, reach, sigma);
  out.insert(out.end(), rsm.violations.begin(), rsm.violations.end());
  return out;
}

}  // namespace

CheckReport check_proof_rule_serial(const StateGraph& g, const RuleCert& cert) {
  require_complete(g, cert);
  CheckReport r;
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    auto v = check_state(g, cert, s);
    r.violations.insert(r.violations.end(), v.begin(), v.end());
  }
  r.ok = r.violations.empty();
  return r;
}

CheckReport check_proof_rule_parallel(const StateGraph& g, const RuleCert& cert, int jobs) {
  require_complete(g, cert);
  const long n = static_cast<long>(g.nodes.size());
  std::vector<std::vector<Violation>> per(g.nodes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
  for (long s = 0; s < n; ++s) {
    try {
      per[s] = check_state(g, cert, static_cast<std::size_t>(s));
    } catch (...) {
#pragma omp critical(pastlab_rule_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  CheckReport r;
  for (auto& v : per) r.violations.insert(r.violations.end(), v.begin(), v.end());
  r.ok = r.violations.empty();
  return r;
}

CheckReport check_proof_rule(const StateGraph& g, const RuleCert& cert, int jobs) {
  return jobs > 1 ? check_proof_rule_parallel(g, cert, jobs) : check_proof_rule_serial(g, cert);
}

// ---------------------------------------------------------------------------
// Worst-case expected exit times

namespace {

// Solves A x = b exactly; A is square and nonsingular.
std::vector<Rational> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw InLoopFailure("singular system while computing exit times");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Tarjan's SCCs over region-internal edges; components come out sinks first.
std::vector<std::vector<std::size_t>> components(const StateGraph& g, const std::vector<bool>& in) {
  const std::size_t n = g.nodes.size();
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  long counter = 0;
  struct Frame {
    std::size_t v;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!in[root] || index[root] >= 0) continue;
    std::vector<Frame> call = {{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& edges = g.nodes[f.v].out;
      if (f.edge < edges.size()) {
        std::size_t w = edges[f.edge++].to;
        if (!in[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

}  // namespace

RsmCert in_loop_rsm_from_bound(const StateGraph& g, const std::vector<bool>& region,
                               std::optional<Rational> bound) {
  const std::size_t n = g.nodes.size();
  // Largest set inside the region that some scheduler never leaves.
  std::vector<bool> trap = region;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!trap[v]) continue;
      const GraphNode& node = g.nodes[v];
      bool stays = false;
      switch (node.kind) {
        case NodeKind::Terminal: stays = true; break;
        case NodeKind::Deterministic: stays = trap[node.out[0].to]; break;
        case NodeKind::Nondeterministic: stays = trap[node.out[0].to] || trap[node.out[1].to]; break;
        case NodeKind::Probabilistic: stays = trap[node.out[0].to] && trap[node.out[1].to]; break;
      }
      if (!stays) {
        trap[v] = false;
        changed = true;
      }
    }
  }
  // Any region state that can reach such a set has infinite worst-case time.
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t v = 0; v < n; ++v)
    for (const GraphEdge& e : g.nodes[v].out) preds[e.to].push_back(v);
  std::vector<bool> bad = trap;
  std::vector<std::size_t> work;
  for (std::size_t v = 0; v < n; ++v)
    if (bad[v]) work.push_back(v);
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    for (std::size_t p : preds[v])
      if (region[p] && !bad[p]) {
        bad[p] = true;
        work.push_back(p);
      }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (bad[v])
      throw InLoopFailure("some scheduler keeps the run inside the region forever from " +
                          g.nodes[v].key);

  std::vector<Rational> h(n, Rational(0));
  for (const auto& comp : components(g, region)) {
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    std::map<std::size_t, std::size_t> policy;  // nondet node -> chosen edge
    for (std::size_t v : comp)
      if (g.nodes[v].kind == NodeKind::Nondeterministic) policy[v] = 0;

    for (int rounds = 0;; ++rounds) {
      if (rounds > 10000) throw InLoopFailure("policy iteration did not converge");
      const std::size_t m = comp.size();
      std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
      std::vector<Rational> b(m, Rational(1));
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t v = comp[i];
        const GraphNode& node = g.nodes[v];
        a[i][i] += 1;
        auto edge = [&](const GraphEdge& e, const Rational& w) {
          if (auto it = local.find(e.to); it != local.end())
            a[i][it->second] -= w;
          else
            b[i] += w * h[e.to];
        };
        switch (node.kind) {
          case NodeKind::Terminal: break;  // excluded by the trap check
          case NodeKind::Deterministic: edge(node.out[0], Rational(1)); break;
          case NodeKind::Nondeterministic: edge(node.out[policy[v]], Rational(1)); break;
          case NodeKind::Probabilistic:
            edge(node.out[0], node.out[0].weight);
            edge(node.out[1], node.out[1].weight);
            break;
        }
      }
      std::vector<Rational> x = solve(std::move(a), std::move(b));
      for (std::size_t i = 0; i < m; ++i) h[comp[i]] = x[i];
      bool improved = false;
      for (auto& [v, choice] : policy) {
        const auto& out = g.nodes[v].out;
        std::size_t other = 1 - choice;
        if (h[out[other].to] > h[out[choice].to]) {
          choice = other;
          improved = true;
        }
      }
      if (!improved) break;
    }
  }

  RsmCert cert;
  cert.epsilon = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (region[v] && bound && h[v] > *bound)
      throw InLoopFailure("exit time " + h[v].get_str() + " exceeds the bound " +
                          bound->get_str() + " at " + g.nodes[v].key);
    cert.h[v] = region[v] ? h[v] : Rational(0);
  }
  return cert;
}

}  // namespace pastlab
