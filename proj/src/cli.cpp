#include "dpdp/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "dpdp/errors.hpp"
#include "dpdp/report.hpp"
#include "dpdp/scenario_io.hpp"

#ifndef DPDP_SCENARIO_DIR
#define DPDP_SCENARIO_DIR "scenarios"
#endif

namespace dpdp::cli {

namespace fs = std::filesystem;

namespace {

/// A path on disk, else a bundled scenario name such as "thesis-t0".
fs::path resolve_scenario(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  for (const fs::path& dir : {fs::path(DPDP_SCENARIO_DIR), fs::path("scenarios")}) {
    const fs::path candidate = dir / (arg + ".json");
    if (fs::exists(candidate)) return candidate;
  }
  throw ParseError("no scenario file or bundled scenario named '" + arg + "'");
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 10);
    if (used != text.size() || text.empty() || text[0] == '-') throw std::invalid_argument("seed");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin + ": seed must be a non-negative integer, got '" + text + "'");
  }
}

/// --seed, then DPDP_SEED, then the scenario's ga.seed.
std::uint64_t choose_seed(const std::optional<std::uint64_t>& flag, std::uint64_t scenario_seed) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DPDP_SEED"); env && *env) return parse_seed(env, "DPDP_SEED");
  return scenario_seed;
}

std::size_t agent_index(const Scenario& sc, const std::string& id) {
  for (std::size_t i = 0; i < sc.agents.size(); ++i)
    if (sc.agents[i].spec.id.value == id) return i;
  throw UnknownAgent("scenario has no agent '" + id + "'");
}

std::string plan_label(const AgentId& id) {
  // A1 -> P10: the agent's plan at time 0.
  const auto digits = id.value.find_first_of("0123456789");
  return "P" + (digits == std::string::npos ? id.value : id.value.substr(digits)) + "0";
}

struct PlanArgs {
  std::string scenario, agent, mode, out;
  std::optional<std::uint64_t> seed;
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
  ScenarioDocument doc = load_scenario(resolve_scenario(a.scenario));
  const std::size_t index = agent_index(doc.scenario, a.agent);
  const AgentSpec& spec = doc.scenario.agents[index].spec;
  if (a.mode == "weighted") {
    doc.fitness.aggregation = WeightedMean{};
  } else if (a.mode == "legacy" && !std::holds_alternative<Legacy>(doc.fitness.aggregation)) {
    doc.fitness.aggregation = Legacy{};
  }

  const SystemState state = initial_state(doc.scenario);
  const auto requests = doc.scenario.initial_requests_of(spec.id);
  const auto stops = stops_for(requests);
  GaConfig ga = doc.ga;
  ga.seed = derive_seed(choose_seed(a.seed, doc.ga.seed), index, 0);
  FitnessEvaluator evaluator(state.world, state.requests, spec.start, spec.constraints, doc.fitness);
  const EvolutionReport report = evolve(stops, ga, evaluator);

  const auto actions = genome_to_actions(report.best, state.requests);
  const std::string text =
      format_plan_listing(plan_label(spec.id), actions) + "\n" + format_fitness_line(report.best_fitness) + "\n";
  out << text;
  if (!a.out.empty()) write_file_atomic(a.out, text);
  return kExitOk;
}

struct RunArgs {
  std::string scenario, trace, results, svg;
  std::optional<std::uint64_t> seed;
  std::optional<Tick> max_ticks;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioDocument doc = load_scenario(resolve_scenario(a.scenario));
  doc.ga.seed = choose_seed(a.seed, doc.ga.seed);
  if (a.max_ticks) {
    if (*a.max_ticks <= 0) throw ConfigError("--max-ticks must be positive");
    doc.sim.max_ticks = *a.max_ticks;
  }
  doc.sim.record_trace = !a.trace.empty() || !a.svg.empty();

  const RunResult result = run(doc.scenario, doc.ga, doc.fitness, doc.sim);

  if (!a.trace.empty()) write_file_atomic(a.trace, trace_csv(result.trace));
  if (!a.results.empty())
    write_file_atomic(a.results, results_json(result, doc.scenario.name, doc.ga.seed).dump(2) + "\n");
  if (!a.svg.empty()) write_file_atomic(a.svg, render_svg(result.final_state.world, result.trace));

  out << "status " << to_string(result.status) << " after " << result.metrics.ticks << " ticks\n";
  for (const auto& [id, m] : result.metrics.agents) {
    out << id.value << " distance " << format_number(m.total_distance) << " replans " << m.replan_count;
    if (m.completion_tick) out << " done at " << *m.completion_tick;
    out << "\n";
  }
  if (!result.success()) {
    err << "run did not complete: " << result.message << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

struct TableArgs {
  std::string scenario, agent;
  int n = 10;
  std::optional<std::uint64_t> seed;
};

int cmd_fitness_table(const TableArgs& a, std::ostream& out) {
  if (a.n < 1) throw ConfigError("-n must be at least 1");
  const ScenarioDocument doc = load_scenario(resolve_scenario(a.scenario));
  const std::size_t index = agent_index(doc.scenario, a.agent);
  const AgentSpec& spec = doc.scenario.agents[index].spec;
  const SystemState state = initial_state(doc.scenario);
  const auto stops = stops_for(doc.scenario.initial_requests_of(spec.id));
  FitnessEvaluator evaluator(state.world, state.requests, spec.start, spec.constraints, doc.fitness);

  Rng rng(derive_seed(choose_seed(a.seed, doc.ga.seed), index, 0));
  for (int i = 0; i < a.n; ++i) {
    const Genome g = random_genome(stops, rng);
    std::string order;
    for (const auto& s : g) order += (order.empty() ? "" : " ") + to_string(s);
    out << "Plan " << (i + 1) << " [" << order << "] " << format_fitness_line(evaluator.evaluate(g)) << "\n";
  }
  return kExitOk;
}

int cmd_validate(const std::string& scenario, std::ostream& out) {
  const ScenarioDocument doc = load_scenario(resolve_scenario(scenario));
  std::size_t late = 0;
  for (const auto& e : doc.scenario.events) late += e.new_requests.size();
  out << "ok " << (doc.scenario.name.empty() ? scenario : doc.scenario.name) << ": "
      << doc.scenario.agents.size() << " agents, " << doc.scenario.requests.size() << " requests, "
      << doc.scenario.events.size() << " events with " << late << " requests\n";
  return kExitOk;
}

}  // namespace

int main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent dynamic pickup-and-delivery planner"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Evolve the tick-0 plan of one agent");
  plan_cmd->add_option("scenario", plan.scenario, "Scenario file or bundled name")->required();
  plan_cmd->add_option("--agent", plan.agent, "Agent id")->required();
  plan_cmd->add_option("--seed", plan.seed, "Base seed");
  plan_cmd->add_option("--mode", plan.mode, "Fitness aggregation")->check(CLI::IsMember({"weighted", "legacy"}));
  plan_cmd->add_option("--out", plan.out, "Also write the listing to FILE");

  RunArgs runa;
  auto* run_cmd = app.add_subcommand("run", "Simulate the whole scenario");
  run_cmd->add_option("scenario", runa.scenario, "Scenario file or bundled name")->required();
  run_cmd->add_option("--seed", runa.seed, "Base seed");
  run_cmd->add_option("--max-ticks", runa.max_ticks, "Tick budget");
  run_cmd->add_option("--trace", runa.trace, "Trace CSV output");
  run_cmd->add_option("--results", runa.results, "Results JSON output");
  run_cmd->add_option("--svg", runa.svg, "Route rendering output");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("fitness-table", "Evaluate random feasible plans of one agent");
  table_cmd->add_option("scenario", table.scenario, "Scenario file or bundled name")->required();
  table_cmd->add_option("--agent", table.agent, "Agent id")->required();
  table_cmd->add_option("-n", table.n, "Number of plans")->required();
  table_cmd->add_option("--seed", table.seed, "Base seed");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("scenario", validate_path, "Scenario file or bundled name")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*plan_cmd) return cmd_plan(plan, out);
    if (*run_cmd) return cmd_run(runa, out, err);
    if (*table_cmd) return cmd_fitness_table(table, out);
    return cmd_validate(validate_path, out);
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnknownAgent& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace dpdp::cli
