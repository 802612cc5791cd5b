#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pastlab/exploration.hpp"
#include "pastlab/ordinal.hpp"

namespace pastlab {

/// Ranking supermartingale map on a finite state graph.
struct RsmCert {
  Rational epsilon = 1;
  std::map<std::size_t, Rational> h;  // node id -> value
};

/// Lexicographic-style certificate: ordinal ranks g plus one RSM per state.
struct RuleCert {
  std::map<std::size_t, Ordinal> g;
  std::map<std::size_t, RsmCert> k;
};

struct CertificateError : std::runtime_error {
  explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

struct Violation {
  std::size_t node;                      // offending state
  std::optional<std::size_t> for_state;  // proof rule: the sigma whose k(sigma) fails
  std::string condition;
  Rational lhs;
  Rational rhs;
};

struct CheckReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Every node needs a value (CertificateError otherwise).
CheckReport check_rsm(const StateGraph& g, const RsmCert& cert);

/// Checks the supermartingale conditions on nodes inside `domain` only;
/// absent entries read as 0.
CheckReport check_rsm_on(const StateGraph& g, const RsmCert& cert, const std::vector<bool>& domain,
                         std::optional<std::size_t> for_state = std::nullopt);

/// Upper bound h(sigma)/epsilon on the expected time to reach h = 0.
Rational rsm_bound(const RsmCert& cert, std::size_t node);

/// States reachable from sigma with strictly smaller rank.
std::vector<bool> lower_set(const StateGraph& g, const std::map<std::size_t, Ordinal>& rank,
                            std::size_t sigma);

/// Checks all conditions of the ordinal proof rule. jobs > 1 checks states in
/// parallel; the report is identical to the serial one.
CheckReport check_proof_rule(const StateGraph& g, const RuleCert& cert, int jobs = 1);
CheckReport check_proof_rule_serial(const StateGraph& g, const RuleCert& cert);
CheckReport check_proof_rule_parallel(const StateGraph& g, const RuleCert& cert, int jobs);

struct InLoopFailure : std::runtime_error {
  explicit InLoopFailure(const std::string& what) : std::runtime_error(what) {}
};

/// RSM on `region` (value 0 outside) whose values are the worst-case expected
/// number of steps to leave the region. Fails when some scheduler stays in the
/// region forever with positive probability, or when a value exceeds `bound`.
RsmCert in_loop_rsm_from_bound(const StateGraph& g, const std::vector<bool>& region,
                               std::optional<Rational> bound = std::nullopt);

}  // namespace pastlab
