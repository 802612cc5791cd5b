#pragma once

#include <nlohmann/json.hpp>

#include "pastlab/certificates.hpp"
#include "pastlab/exploration.hpp"
#include "pastlab/hydra.hpp"
#include "pastlab/scheduling.hpp"
#include "pastlab/transforms.hpp"

namespace pastlab::io {

using json = nlohmann::json;

// Rationals are always "num/den" strings.
json to_json(const Valuation& v);
Valuation valuation_from_json(const json& j);

json to_json(const ExecState& s);
ExecState exec_state_from_json(const json& j);

json to_json(const PartialSchedule& s);
PartialSchedule schedule_from_json(const json& j);

json to_json(const ExecTree& t);

json to_json(const StateGraph& g);
/// Rebuilds a graph dump; node programs are reparsed and keys recomputed.
StateGraph graph_from_json(const json& j);

// Certificates are keyed by canonical node keys; unknown keys are errors.
json to_json(const StateGraph& g, const RsmCert& c);
RsmCert rsm_from_json(const StateGraph& g, const json& j);
json to_json(const StateGraph& g, const RuleCert& c);
RuleCert rule_from_json(const StateGraph& g, const json& j);

json to_json(const CheckReport& r, const StateGraph& g);

json to_json(const TreeSpec& t);
TreeSpec tree_spec_from_json(const json& j);

/// Both the parenthesized text and a node table with ids; either is accepted back.
json to_json(const HydraState& h);
HydraState hydra_from_json(const json& j);

}  // namespace pastlab::io
