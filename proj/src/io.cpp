#include "pastlab/io.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace pastlab::io {

namespace {

Rational rational_of(const json& j) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
  return parse_rational(j.get<std::string>());
}

std::string key_of(const StateGraph& g, std::size_t node) { return g.nodes.at(node).key; }

std::size_t node_of(const StateGraph& g, const std::string& key) {
  auto id = g.find(key);
  if (!id) throw CertificateError("certificate names an unknown state: " + key);
  return *id;
}

NodeKind node_kind_of(const std::string& s) {
  for (NodeKind k : {NodeKind::Terminal, NodeKind::Deterministic, NodeKind::Nondeterministic,
                     NodeKind::Probabilistic})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown node kind: " + s);
}

EdgeLabel edge_label_of(const std::string& s) {
  for (EdgeLabel l : {EdgeLabel::Det, EdgeLabel::NondetLeft, EdgeLabel::NondetRight,
                      EdgeLabel::ProbLeft, EdgeLabel::ProbRight})
    if (s == to_string(l)) return l;
  throw std::invalid_argument("unknown edge label: " + s);
}

}  // namespace

json to_json(const Valuation& v) {
  json j = json::object();
  for (const auto& [name, value] : v.sorted()) j[name] = to_fraction(value);
  return j;
}

Valuation valuation_from_json(const json& j) {
  Valuation v;
  for (const auto& [name, value] : j.items()) v = v.set(name, rational_of(value));
  return v;
}

json to_json(const ExecState& s) {
  return {{"program", print(s.program)},
          {"valuation", to_json(s.valuation)},
          {"prob", to_fraction(s.prob)},
          {"history", s.history.str()}};
}

ExecState exec_state_from_json(const json& j) {
  ExecState s;
  s.program = parse_program(j.at("program").get<std::string>());
  s.valuation = valuation_from_json(j.value("valuation", json::object()));
  s.prob = rational_of(j.value("prob", json("1/1")));
  s.history = History::parse(j.value("history", std::string()));
  return s;
}

json to_json(const PartialSchedule& s) {
  json table = json::object();
  for (const auto& [w, d] : s.table) table[w] = to_string(d);
  return {{"size", s.size}, {"table", table}};
}

PartialSchedule schedule_from_json(const json& j) {
  PartialSchedule s;
  s.size = j.at("size").get<std::size_t>();
  for (const auto& [w, d] : j.at("table").items()) {
    History::parse(w);
    if (w.size() / 2 > s.size) throw std::invalid_argument("history longer than size: " + w);
    std::string v = d.get<std::string>();
    if (v == "Ln") s.table[w] = Direction::Ln;
    else if (v == "Rn") s.table[w] = Direction::Rn;
    else throw std::invalid_argument("schedule answers must be Ln or Rn, got " + v);
  }
  return s;
}

json to_json(const ExecTree& t) {
  json nodes = json::array(), edges = json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const TreeNode& n = t.nodes[i];
    json j = to_json(n.state);
    j["id"] = i;
    j["depth"] = n.depth;
    j["terminal"] = n.terminal;
    nodes.push_back(std::move(j));
    if (n.parent >= 0)
      edges.push_back({{"from", n.parent}, {"to", i}, {"kind", to_string(n.via)}});
  }
  return {{"depth_cap", t.depth_cap}, {"nodes", nodes}, {"edges", edges}, {"frontier", t.frontier}};
}

json to_json(const StateGraph& g) {
  json nodes = json::array(), edges = json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GraphNode& n = g.nodes[i];
    nodes.push_back({{"key", n.key},
                     {"program", print(n.state.program)},
                     {"valuation", to_json(n.state.valuation)},
                     {"kind", to_string(n.kind)}});
    for (const GraphEdge& e : n.out)
      edges.push_back({{"from", i}, {"to", e.to}, {"label", to_string(e.label)},
                       {"weight", to_fraction(e.weight)}});
  }
  return {{"initial", g.initial}, {"nodes", nodes}, {"edges", edges}};
}

StateGraph graph_from_json(const json& j) {
  StateGraph g;
  for (const json& n : j.at("nodes")) {
    GraphNode node;
    node.state.program = parse_program(n.at("program").get<std::string>());
    node.state.valuation = valuation_from_json(n.value("valuation", json::object()));
    node.key = state_key(node.state);
    node.kind = node_kind_of(n.at("kind").get<std::string>());
    if (n.contains("key") && n.at("key").get<std::string>() != node.key)
      throw std::invalid_argument("node key does not match its state: " + n.at("key").get<std::string>());
    if (!g.index.emplace(node.key, g.nodes.size()).second)
      throw std::invalid_argument("duplicate state in graph: " + node.key);
    g.nodes.push_back(std::move(node));
  }
  for (const json& e : j.at("edges")) {
    std::size_t from = e.at("from").get<std::size_t>(), to = e.at("to").get<std::size_t>();
    if (from >= g.nodes.size() || to >= g.nodes.size())
      throw std::invalid_argument("edge endpoint out of range");
    g.nodes[from].out.push_back(
        {to, edge_label_of(e.at("label").get<std::string>()), rational_of(e.value("weight", json("1/1")))});
  }
  g.initial = j.value("initial", std::size_t{0});
  if (g.initial >= g.nodes.size()) throw std::invalid_argument("initial node out of range");
  return g;
}

json to_json(const StateGraph& g, const RsmCert& c) {
  json h = json::object();
  for (const auto& [id, v] : c.h) h[key_of(g, id)] = to_fraction(v);
  return {{"epsilon", to_fraction(c.epsilon)}, {"h", h}};
}

RsmCert rsm_from_json(const StateGraph& g, const json& j) {
  RsmCert c;
  c.epsilon = rational_of(j.at("epsilon"));
  for (const auto& [key, v] : j.at("h").items()) c.h[node_of(g, key)] = rational_of(v);
  return c;
}

json to_json(const StateGraph& g, const RuleCert& c) {
  json gj = json::object(), kj = json::object();
  for (const auto& [id, o] : c.g) gj[key_of(g, id)] = o.str();
  for (const auto& [id, k] : c.k) kj[key_of(g, id)] = to_json(g, k);
  return {{"g", gj}, {"k", kj}};
}

RuleCert rule_from_json(const StateGraph& g, const json& j) {
  RuleCert c;
  for (const auto& [key, o] : j.at("g").items()) c.g[node_of(g, key)] = Ordinal::parse(o.get<std::string>());
  for (const auto& [key, k] : j.at("k").items()) c.k[node_of(g, key)] = rsm_from_json(g, k);
  return c;
}

json to_json(const CheckReport& r, const StateGraph& g) {
  json vs = json::array();
  for (const Violation& v : r.violations) {
    json e = {{"node", key_of(g, v.node)},
              {"condition", v.condition},
              {"lhs", to_fraction(v.lhs)},
              {"rhs", to_fraction(v.rhs)}};
    if (v.for_state) e["for_state"] = key_of(g, *v.for_state);
    vs.push_back(std::move(e));
  }
  return {{"ok", r.ok}, {"violations", vs}};
}

json to_json(const TreeSpec& t) {
  switch (t.kind) {
    case TreeSpec::Kind::Explicit: return {{"explicit", t.nodes}};
    case TreeSpec::Kind::AllZeros: return {{"rule", "all-zeros"}};
    case TreeSpec::Kind::Full: return {{"rule", "full"}};
    case TreeSpec::Kind::BoundedDepth: return {{"rule", "bounded-depth"}, {"depth", t.depth}};
  }
  throw std::logic_error("bad tree");
}

TreeSpec tree_spec_from_json(const json& j) {
  if (j.contains("explicit"))
    return TreeSpec::explicit_tree(j.at("explicit").get<std::set<std::vector<long>>>());
  std::string rule = j.at("rule").get<std::string>();
  if (rule == "all-zeros") return TreeSpec::rule(TreeSpec::Kind::AllZeros);
  if (rule == "full") return TreeSpec::rule(TreeSpec::Kind::Full);
  if (rule == "bounded-depth") return TreeSpec::rule(TreeSpec::Kind::BoundedDepth, j.at("depth").get<int>());
  throw std::invalid_argument("unknown tree rule: " + rule);
}

json to_json(const HydraState& h) {
  json nodes = json::array();
  for (std::size_t i = 0; i < h.nodes().size(); ++i) {
    const HydraNode& n = h.nodes()[i];
    if (!n.alive) continue;
    json e = {{"id", i}, {"parent", n.parent}};
    if (n.multiplicity != 1) e["multiplicity"] = n.multiplicity.get_str();
    nodes.push_back(std::move(e));
  }
  return {{"tree", h.str()}, {"nodes", nodes}, {"capacity", h.capacity().get_str()}, {"T", h.ordinal().str()}};
}

namespace {

// Node table {id, parent, multiplicity?} with exactly one root (parent -1).
std::string tree_text_of(const json& nodes) {
  std::map<long, std::vector<long>> children;
  std::map<long, std::string> mult;
  long root = -2;
  for (const json& n : nodes) {
    long id = n.at("id").get<long>(), parent = n.at("parent").get<long>();
    if (mult.count(id)) throw std::invalid_argument("duplicate hydra node id " + std::to_string(id));
    mult[id] = n.contains("multiplicity") ? n.at("multiplicity").get<std::string>() : "1";
    if (parent < 0) {
      if (root != -2) throw std::invalid_argument("hydra has two roots");
      root = id;
    } else {
      children[parent].push_back(id);
    }
  }
  if (root == -2) throw std::invalid_argument("hydra has no root");
  std::size_t seen = 0;
  std::function<std::string(long)> emit = [&](long v) {
    if (++seen > mult.size()) throw std::invalid_argument("hydra node table has a cycle");
    std::string s = "(";
    for (long c : children[v]) {
      if (!mult.count(c)) throw std::invalid_argument("unknown hydra node " + std::to_string(c));
      s += emit(c);
      if (mult[c] != "1") s += "*" + mult[c];
    }
    return s + ")";
  };
  std::string text = emit(root);
  if (seen != mult.size()) throw std::invalid_argument("hydra node table is not connected");
  return text;
}

}  // namespace

HydraState hydra_from_json(const json& j) {
  HydraState h = HydraState::parse(j.contains("tree") ? j.at("tree").get<std::string>()
                                                      : tree_text_of(j.at("nodes")));
  if (j.contains("capacity")) h.set_capacity(parse_integer(j.at("capacity").get<std::string>()));
  return h;
}

}  // namespace pastlab::io
