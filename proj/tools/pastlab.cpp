// pastlab: command-line front end.
// Exit status: 0 success, 1 negative verdict, 2 usage, input or resource error.
#include <gmpxx.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pastlab/certificates.hpp"
#include "pastlab/exploration.hpp"
#include "pastlab/hydra.hpp"
#include "pastlab/io.hpp"
#include "pastlab/transforms.hpp"

using namespace pastlab;
using pastlab::io::json;

namespace {

struct Config {
  std::string format = "text";
  std::uint64_t seed = 0;
  int depth = 64;
  std::size_t node_cap = default_explore_options().node_cap;
  std::size_t enum_cap = 1u << 16;
  int jobs = 1;
  std::string scheduler = "const:Ln";
  bool decimal = false;

  bool json_out() const { return format == "json"; }
  ExploreOptions explore() const {
    ExploreOptions o;
    o.node_cap = node_cap;
    o.jobs = jobs;
    return o;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProgramPtr load_program(const std::string& path) { return parse_program(read_file(path)); }

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Exact value, with an approximation column when asked for.
std::string pretty_text(const ProgramPtr& p) {
  std::string s = pretty(p);
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string show(const Rational& q, const Config& c) {
  std::string s = to_fraction(q);
  if (c.decimal) {
    std::ostringstream os;
    os << s << "  (approx " << approx(q) << ")";
    return os.str();
  }
  return s;
}

std::shared_ptr<Scheduler> make_scheduler(const Config& c) {
  if (c.scheduler == "interactive") return std::make_shared<InteractiveScheduler>(std::cin, std::cerr);
  try {
    return parse_scheduler_spec(c.scheduler);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void add_common(CLI::App* cmd, Config& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--depth", c.depth, "Depth cap")->check(CLI::PositiveNumber);
  cmd->add_option("--node-cap", c.node_cap, "Node cap (also PASTLAB_NODE_CAP)")->check(CLI::PositiveNumber);
  cmd->add_option("--enum-cap", c.enum_cap, "Schedule enumeration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", c.jobs, "Worker threads for level expansion")->check(CLI::PositiveNumber);
  cmd->add_option("--scheduler", c.scheduler,
                  "const:Ln | const:Rn | random:SEED | bounded:K:<spec> | interactive");
  cmd->add_flag("--decimal", c.decimal, "Add approximate decimal values");
}

// ---------------------------------------------------------------------------

void cmd_parse(const Config& c, const std::string& file) {
  ProgramPtr p = load_program(file);
  std::set<Symbol> vars;
  collect_variables(p, vars);
  if (c.json_out()) {
    json names = json::array();
    for (Symbol v : vars) names.push_back(name_of(v));
    std::cout << json{{"program", print(p)}, {"size", program_size(p)}, {"variables", names}}.dump(2)
              << "\n";
    return;
  }
  std::cout << pretty_text(p) << "\n";
}

// One sampled execution: coins drawn from the seed, choices from the scheduler.
void cmd_run(const Config& c, const std::string& file, bool trace) {
  ProgramPtr p = load_program(file);
  auto f = make_scheduler(c);
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(static_cast<unsigned long>(c.seed));
  ExecState s = initial_state(p);
  json steps = json::array();
  int n = 0;
  for (; n < c.depth && !is_terminal(s.program); ++n) {
    std::vector<Successor> next = step(s, *f);
    std::size_t pick = 0;
    if (next.size() == 2) {
      Rational left = next[0].state.prob / s.prob;
      Integer draw = rng.get_z_range(left.get_den());
      pick = draw < left.get_num() ? 0 : 1;
    }
    s = next[pick].state;
    if (trace) {
      if (c.json_out()) steps.push_back(io::to_json(s));
      else std::cout << n + 1 << ": " << state_key({s.program, s.valuation}) << "\n";
    }
  }
  bool done = is_terminal(s.program);
  if (c.json_out()) {
    json out = {{"terminated", done}, {"steps", n}, {"final", io::to_json(s)}};
    if (trace) out["trace"] = steps;
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << (done ? "terminated" : "stopped at depth cap") << " after " << n << " steps\n";
  std::cout << "history: " << (s.history.size() ? s.history.str() : "(empty)") << "\n";
  std::cout << "path probability: " << show(s.prob, c) << "\n";
  if (s.valuation.size() == 0) std::cout << "all variables 0\n";
  for (const auto& [name, value] : s.valuation.sorted()) std::cout << name << " = " << to_text(value) << "\n";
}

void cmd_tree(const Config& c, const std::string& file) {
  ProgramPtr p = load_program(file);
  auto f = make_scheduler(c);
  ExecTree t = build_tree(p, *f, c.depth, c.explore());
  if (c.json_out()) {
    std::cout << io::to_json(t).dump(2) << "\n";
    return;
  }
  std::vector<std::vector<std::size_t>> kids(t.nodes.size());
  for (std::size_t i = 1; i < t.nodes.size(); ++i) kids[static_cast<std::size_t>(t.nodes[i].parent)].push_back(i);
  std::function<void(std::size_t)> show_node = [&](std::size_t i) {
    const TreeNode& n = t.nodes[i];
    std::cout << std::string(2 * static_cast<std::size_t>(n.depth), ' ') << "[" << i << "] "
              << show(n.state.prob, c) << (n.terminal ? " done " : " ")
              << state_key({n.state.program, n.state.valuation}) << "\n";
    for (std::size_t k : kids[i]) show_node(k);
  };
  show_node(0);
  std::cout << t.nodes.size() << " nodes, " << t.frontier.size() << " open at depth " << t.depth_cap << "\n";
}

void cmd_runtime(const Config& c, const std::string& file, const std::string& target) {
  ProgramPtr p = load_program(file);
  auto f = make_scheduler(c);
  ExploreOptions opts = c.explore();
  RuntimeBounds b;
  if (target.empty()) {
    b = exp_runtime_bounds(p, *f, c.depth, opts);
  } else {
    BExprPtr goal = parse_bexpr(target);
    b = exp_reach_runtime_bounds(p, *f, [&](const ProgramState& s) { return eval(*goal, s.valuation); },
                                 c.depth, opts);
  }
  Rational term = termination_prob_upto(p, *f, c.depth, opts);
  if (c.json_out()) {
    json out = {{"depth", c.depth}, {"lower_bound", to_fraction(b.lower)}, {"closed", b.closed},
                {"termination_probability", to_fraction(term)}};
    if (b.exact) out["exact"] = to_fraction(*b.exact);
    if (!target.empty()) out["target"] = target;
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << "lower bound: " << show(b.lower, c) << "\n";
  std::cout << "closed: " << (b.closed ? "true" : "false") << "\n";
  if (b.exact) std::cout << "exact: " << show(*b.exact, c) << "\n";
  std::cout << "termination probability within " << c.depth << " steps: " << show(term, c) << "\n";
}

int cmd_ast_check(const Config& c, const std::string& file, const std::string& delta_text) {
  ProgramPtr p = load_program(file);
  Rational delta = parse_rational(delta_text);
  SemicheckResult r = ast_semicheck(p, delta, c.depth, c.enum_cap, c.explore());
  if (c.json_out()) {
    json out = {{"holds", r.holds}, {"n", c.depth}, {"delta", to_fraction(delta)},
                {"schedules", r.schedules_checked}, {"worst", to_fraction(r.worst)}};
    if (r.counterexample) out["counterexample"] = io::to_json(*r.counterexample);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (r.holds ? "holds" : "fails") << ": " << r.schedules_checked
              << " schedules of size " << c.depth << ", worst termination probability "
              << show(r.worst, c) << " vs delta " << to_fraction(delta) << "\n";
    if (r.counterexample) std::cout << "counterexample: " << io::to_json(*r.counterexample).dump() << "\n";
  }
  return r.holds ? 0 : 1;
}

// A graph is either a JSON dump or a program to collapse.
StateGraph load_graph(const Config& c, const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return io::graph_from_json(load_json(path));
    } catch (const json::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
  }
  return collapse_to_state_graph(load_program(path), c.node_cap);
}

void cmd_graph(const Config& c, const std::string& file) {
  StateGraph g = load_graph(c, file);
  if (c.json_out()) {
    std::cout << io::to_json(g).dump(2) << "\n";
    return;
  }
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const GraphNode& n = g.nodes[v];
    std::cout << v << (v == g.initial ? "* " : "  ") << to_string(n.kind) << "  " << n.key << "\n";
    for (const GraphEdge& e : n.out)
      std::cout << "    -> " << e.to << " " << to_string(e.label) << " " << to_fraction(e.weight) << "\n";
  }
  std::cout << g.nodes.size() << " states\n";
}

int report(const Config& c, const StateGraph& g, const CheckReport& r, const std::string& ok_line,
           json extra) {
  if (c.json_out()) {
    json out = io::to_json(r, g);
    for (auto& [k, v] : extra.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
  } else if (r.ok) {
    std::cout << ok_line << "\n";
  } else {
    std::cout << "REJECTED: " << r.violations.size() << " violation(s)\n";
    for (const Violation& v : r.violations) {
      std::cout << "  " << v.condition << " at " << g.nodes[v.node].key;
      if (v.for_state) std::cout << " (for " << g.nodes[*v.for_state].key << ")";
      std::cout << ": " << to_fraction(v.lhs) << " vs " << to_fraction(v.rhs) << "\n";
    }
  }
  return r.ok ? 0 : 1;
}

int cmd_check_rsm(const Config& c, const std::string& graph_file, const std::string& cert_file) {
  StateGraph g = load_graph(c, graph_file);
  RsmCert cert = io::rsm_from_json(g, load_json(cert_file));
  CheckReport r = check_rsm(g, cert);
  json extra = json::object();
  std::string line = "OK";
  if (r.ok) {
    Rational bound = rsm_bound(cert, g.initial);
    extra["bound"] = to_fraction(bound);
    line = "OK, bound = " + to_text(bound);
    if (c.decimal) line += "  (approx " + std::to_string(approx(bound)) + ")";
  }
  return report(c, g, r, line, extra);
}

int cmd_check_rule(const Config& c, const std::string& graph_file, const std::string& cert_file) {
  StateGraph g = load_graph(c, graph_file);
  RuleCert cert = io::rule_from_json(g, load_json(cert_file));
  CheckReport r = check_proof_rule(g, cert, c.jobs);
  std::string line = "OK";
  json extra = json::object();
  if (auto it = cert.g.find(g.initial); it != cert.g.end()) {
    line += ", initial rank = " + it->second.str();
    extra["initial_rank"] = it->second.str();
  }
  return report(c, g, r, line, extra);
}

void emit_program(const Config& c, const ProgramPtr& p, json meta) {
  if (c.json_out()) {
    meta["program"] = print(p);
    std::cout << meta.dump(2) << "\n";
    return;
  }
  for (auto& [k, v] : meta.items()) std::cout << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  std::cout << pretty_text(p) << "\n";
}

void cmd_knievel(const Config& c, const std::string& file, bool per_level) {
  KnievelOptions opts;
  if (per_level) opts.halving = KnievelOptions::Halving::PerLevel;
  KnievelProgram k = to_knievel(load_program(file), opts);
  emit_program(c, k.program,
               {{"control_points", k.control_points}, {"level_base", k.level_base.get_str()},
                {"halving", per_level ? "per-level" : "per-step"}});
}

// "all-zeros", "full", "bounded-depth:D", inline JSON, or @file.json.
TreeSpec parse_tree_spec(const std::string& text) {
  if (text == "all-zeros") return TreeSpec::rule(TreeSpec::Kind::AllZeros);
  if (text == "full") return TreeSpec::rule(TreeSpec::Kind::Full);
  if (text.rfind("bounded-depth:", 0) == 0)
    return TreeSpec::rule(TreeSpec::Kind::BoundedDepth, std::stoi(text.substr(14)));
  try {
    return io::tree_spec_from_json(text.rfind('@', 0) == 0 ? load_json(text.substr(1)) : json::parse(text));
  } catch (const json::exception& e) {
    throw UsageError("tree spec: " + std::string(e.what()));
  }
}

void cmd_emit(const Config& c, const std::string& what, const std::string& tree) {
  TreeSpec t = parse_tree_spec(tree);
  ProgramPtr p = what == "reduction" ? emit_tree_reduction(t) : emit_ordinal_program(t);
  json meta = {{"kind", what}, {"tree", io::to_json(t)}};
  try {
    meta["tree_ordinal"] = ord_of_tree(t).str();
  } catch (const std::exception&) {
    // not well-founded
  }
  emit_program(c, p, meta);
}

// ---------------------------------------------------------------------------
// Hydra

HydraState load_hydra(const std::string& text) {
  if (!text.empty() && text.front() == '{') return io::hydra_from_json(json::parse(text));
  return HydraState::parse(text);
}

long ask_long(const std::string& prompt) {
  std::cerr << prompt << std::flush;
  std::string line;
  while (std::getline(std::cin, line)) {
    try {
      std::size_t used = 0;
      long v = std::stol(line, &used);
      if (used == line.size() || line.find_first_not_of(" \t", used) == std::string::npos) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "enter a number: " << std::flush;
  }
  throw InputExhausted();
}

int cmd_hydra_play(const Config& c, const std::string& tree, const std::string& hercules, int evolutions,
                   long rounds) {
  HydraState h = load_hydra(tree);
  bool interactive = hercules == "interactive";
  HerculesStrategy strategy;
  if (!interactive) strategy = HerculesStrategy::parse(hercules);
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(static_cast<unsigned long>(c.seed));
  json trace = json::array();
  Rational path = 1;
  bool alive = true;
  long r = 0;
  for (; r < rounds && !h.dead() && alive; ++r) {
    if (interactive) std::cerr << "hydra " << h.str() << "  heads " << [&] {
        std::string s;
        for (long v : h.heads()) s += (s.empty() ? "" : ",") + std::to_string(v);
        return s;
      }() << "\n";
    long head = interactive ? ask_long("head id? ") : choose_head(strategy, h, static_cast<std::size_t>(r));
    int e = 0;
    if (h.depth(head) >= 2) e = interactive ? static_cast<int>(ask_long("evolutions? ")) : evolutions;
    std::vector<RoundOutcome> outs;
    try {
      outs = play_round(h, head, e);
    } catch (const std::invalid_argument& err) {
      if (!interactive) throw;
      std::cerr << err.what() << "\n";
      --r;
      continue;
    }
    // Sample one outcome; weights share a power-of-two denominator.
    Integer den = 1;
    for (const auto& o : outs) den = lcm(den, Integer(o.prob.get_den()));
    Integer draw = rng.get_z_range(den), acc = 0;
    const RoundOutcome* chosen = &outs.back();
    for (const auto& o : outs) {
      acc += Integer(o.prob * den);
      if (draw < acc) {
        chosen = &o;
        break;
      }
    }
    Ordinal before = h.ordinal();
    path *= chosen->prob;
    alive = chosen->survived;
    if (alive) h = chosen->state;
    json step = {{"round", r + 1}, {"head", head}, {"evolutions", e}, {"T_before", before.str()},
                 {"survived", alive}, {"prob", to_fraction(chosen->prob)}};
    if (alive) step["T_after"] = h.ordinal().str();
    if (c.json_out()) {
      trace.push_back(step);
    } else {
      std::cout << "round " << r + 1 << ": chop " << head << ", evolve " << e << ", T " << before.str()
                << " -> " << (alive ? h.ordinal().str() : std::string("(hydra wins)")) << ", p "
                << to_fraction(chosen->prob) << "\n";
    }
  }
  std::string result = !alive ? "game stopped by an evolution coin" : h.dead() ? "Hercules wins" : "round limit";
  if (c.json_out()) {
    std::cout << json{{"rounds", trace}, {"result", result}, {"final", io::to_json(h)},
                      {"path_probability", to_fraction(path)}}.dump(2)
              << "\n";
  } else {
    std::cout << result << " after " << r << " rounds, path probability " << show(path, c) << "\n";
  }
  return 0;
}

void cmd_hydra_compile(const Config& c, const std::string& tree, const std::string& hercules, int width) {
  HydraState h = load_hydra(tree);
  HydraProgram prog = compile_to_pgcl(h, HerculesStrategy::parse(hercules), width);
  emit_program(c, prog.program, {{"hydra", h.str()}, {"hercules", hercules}, {"width", width}});
}

void cmd_hydra_rank(const Config& c, const std::string& tree) {
  HydraState h = load_hydra(tree);
  if (c.json_out()) std::cout << io::to_json(h).dump(2) << "\n";
  else std::cout << h.ordinal().str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pastlab: probabilistic termination workbench"};
  app.require_subcommand(1);
  Config c;
  std::string file, file2, target, delta = "1/2", what, tree, hercules = "leftmost-deepest";
  bool per_level = false, trace = false;
  int evolutions = 1, width = 32;
  long rounds = 1000;
  std::function<int()> action;

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, c);
    return s;
  };

  auto* parse = sub("parse", "Parse and pretty-print a program");
  parse->add_option("file", file)->required();
  parse->callback([&] { action = [&] { cmd_parse(c, file); return 0; }; });

  auto* run = sub("run", "Run once with seeded coins");
  run->add_option("file", file)->required();
  run->add_flag("--trace", trace, "Print every state");
  run->callback([&] { action = [&] { cmd_run(c, file, trace); return 0; }; });

  auto* tree_cmd = sub("tree", "Execution tree up to --depth");
  tree_cmd->add_option("file", file)->required();
  tree_cmd->callback([&] { action = [&] { cmd_tree(c, file); return 0; }; });

  auto* runtime = sub("runtime", "Expected runtime lower bound up to --depth");
  runtime->add_option("file", file)->required();
  runtime->add_option("--target", target, "Count steps until this condition holds");
  runtime->callback([&] { action = [&] { cmd_runtime(c, file, target); return 0; }; });

  auto* ast = sub("ast-check", "Partial-schedule termination check of size --depth");
  ast->add_option("file", file)->required();
  ast->add_option("--delta", delta, "Probability threshold");
  ast->callback([&] { action = [&] { return cmd_ast_check(c, file, delta); }; });

  auto* graph = sub("graph", "Finite state graph of a program");
  graph->add_option("file", file)->required();
  graph->callback([&] { action = [&] { cmd_graph(c, file); return 0; }; });

  auto* rsm = sub("check-rsm", "Check a ranking supermartingale");
  rsm->add_option("graph", file, "Graph JSON or program")->required();
  rsm->add_option("cert", file2)->required();
  rsm->callback([&] { action = [&] { return cmd_check_rsm(c, file, file2); }; });

  auto* rule = sub("check-rule", "Check an ordinal proof-rule certificate");
  rule->add_option("graph", file, "Graph JSON or program")->required();
  rule->add_option("cert", file2)->required();
  rule->callback([&] { action = [&] { return cmd_check_rule(c, file, file2); }; });

  auto* knievel = sub("knievel", "Translate to Knievel form");
  knievel->add_option("file", file)->required();
  knievel->add_flag("--per-level", per_level, "Halve once per simulated tree level");
  knievel->callback([&] { action = [&] { cmd_knievel(c, file, per_level); return 0; }; });

  auto* emit = sub("emit", "Emit the program for a tree");
  emit->add_option("what", what)->required()->check(CLI::IsMember({"reduction", "ordinal"}));
  emit->add_option("--tree", tree, "all-zeros | full | bounded-depth:D | JSON | @file")->required();
  emit->callback([&] { action = [&] { cmd_emit(c, what, tree); return 0; }; });

  auto* hydra = app.add_subcommand("hydra", "Hydra game");
  hydra->require_subcommand(1);
  auto hsub = [&](const char* name, const char* help) {
    CLI::App* s = hydra->add_subcommand(name, help);
    add_common(s, c);
    s->add_option("--tree", tree, "Nested parentheses or JSON")->required();
    return s;
  };
  auto* play = hsub("play", "Play rounds");
  play->add_option("--hercules", hercules, "leftmost-deepest | random:S | scripted:a,b | interactive");
  play->add_option("--evolutions", evolutions, "Evolutions per round when not interactive")
      ->check(CLI::NonNegativeNumber);
  play->add_option("--rounds", rounds, "Round limit")->check(CLI::PositiveNumber);
  play->callback([&] { action = [&] { return cmd_hydra_play(c, tree, hercules, evolutions, rounds); }; });
  auto* compile = hsub("compile", "Emit the game as a program");
  compile->add_option("--hercules", hercules, "leftmost-deepest | random:S | scripted:a,b");
  compile->add_option("--width", width, "Node slots")->check(CLI::PositiveNumber);
  compile->callback([&] { action = [&] { cmd_hydra_compile(c, tree, hercules, width); return 0; }; });
  auto* rank = hsub("rank", "Ordinal of a hydra");
  rank->callback([&] { action = [&] { cmd_hydra_rank(c, tree); return 0; }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
  } catch (const EnumerationTooLarge& e) {
    std::cerr << "enumeration limit: " << e.what() << "\n";
  } catch (const CertificateError& e) {
    std::cerr << "certificate error: " << e.what() << "\n";
  } catch (const InputExhausted& e) {
    std::cerr << e.what() << "\n";
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
