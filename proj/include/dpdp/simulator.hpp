#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpdp/fitness.hpp"
#include "dpdp/ga.hpp"
#include "dpdp/replanner.hpp"
#include "dpdp/scenario.hpp"
#include "dpdp/world.hpp"

namespace dpdp {

struct SimConfig {
  Tick max_ticks = 100000;
  bool record_trace = true;
  /// Use the OpenMP motion kernel. Output is identical either way.
  bool parallel_motion = true;

  bool operator==(const SimConfig&) const = default;
};

struct AgentSample {
  AgentId agent;
  Point2D position;
  double battery = 1.0;
  std::string action;  // current action name, "Idle" when nothing is pending
  std::optional<RequestId> request;
};

struct ExecutedAction {
  AgentId agent;
  std::string action;
  std::optional<RequestId> request;
};

struct TakeClaim {
  AgentId agent;
  RequestId request;
  DepotId depot;
  ArticleId article;
  int quantity = 0;
};

struct ArbitrationDecision {
  TakeClaim claim;
  bool granted = false;
};

/// Everything that happened during one tick, sampled after the tick.
struct TraceRecord {
  Tick tick = 0;
  std::vector<AgentSample> agents;  // agent id order
  std::vector<std::size_t> fired_events;
  std::vector<ArbitrationDecision> arbitration;
  std::vector<ExecutedAction> executed;
  std::vector<RequestId> completed;
};

enum class PlanReason { initial, pinned, event, failed_take };

std::string_view to_string(PlanReason r) noexcept;

struct PlanRecord {
  int index = 0;
  Tick tick = 0;
  PlanReason reason = PlanReason::initial;
  std::vector<Stop> retained;
  std::vector<Stop> added;
  EvolutionReport report;
};

struct AgentMetrics {
  double total_distance = 0.0;
  /// Tick at which the last of the agent's requests completed (0 if it had none).
  std::optional<Tick> completion_tick;
  int replan_count = 0;
  std::vector<PlanRecord> plans;
};

struct RunMetrics {
  Tick ticks = 0;
  std::map<AgentId, AgentMetrics> agents;
};

enum class RunStatus { completed, max_ticks_exceeded, stalled };

std::string_view to_string(RunStatus s) noexcept;

struct RunResult {
  RunStatus status = RunStatus::completed;
  std::string message;
  RunMetrics metrics;
  std::vector<TraceRecord> trace;
  SystemState final_state;

  bool success() const noexcept { return status == RunStatus::completed; }
};

/// Grants Takes on one depot article in ascending request id while the stock
/// covers them; the first claim that does not fit and every later one fail.
std::vector<ArbitrationDecision> arbitrate(std::vector<TakeClaim> claims, int available_stock);

/// Discrete-time execution of every agent's plan over a shared world.
///
/// Each tick: fire due events (revise + replan the named agents), move every
/// agent along its current leg, apply the actions of agents that arrived
/// (Takes go through arbitration; a refused Take makes its agent replan),
/// then splice a charge detour for agents at or below the battery threshold.
class Simulation {
 public:
  /// Plans every agent at tick 0. Throws ConfigError on invalid GA settings.
  Simulation(Scenario scenario, GaConfig ga, FitnessConfig fitness, SimConfig sim = {});

  TraceRecord step();

  bool work_remaining() const;
  /// Set by step() when nothing moved or executed, no event is pending and
  /// work remains.
  bool stalled() const noexcept { return stalled_; }

  const SystemState& state() const noexcept { return state_; }
  const RunMetrics& metrics() const noexcept { return metrics_; }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }
  const std::vector<Event>& events() const noexcept { return timeline_; }

  RunResult run();

 private:
  struct Replan {
    AgentId agent;
    RevisionOutcome outcome;
    PlanReason reason;
  };

  void plan_initial();
  void replan_all(std::vector<Replan> jobs);
  std::uint64_t plan_seed(const AgentId& agent);
  const AgentSpec& spec_of(const AgentId& agent) const;
  AgentSample sample(const AgentId& id, const AgentState& st) const;
  void record(TraceRecord rec);
  void splice_charge_detours();
  void finish_metrics();

  Scenario scenario_;
  GaConfig ga_;
  FitnessConfig fitness_;
  SimConfig sim_;
  SystemState state_;
  std::vector<Event> timeline_;
  std::size_t next_event_ = 0;
  RunMetrics metrics_;
  std::vector<TraceRecord> trace_;
  std::map<RequestId, Tick> done_at_;
  std::map<AgentId, std::size_t> agent_index_;
  bool stalled_ = false;
};

RunResult run(const Scenario& scenario, const GaConfig& ga, const FitnessConfig& fitness,
              const SimConfig& sim);

}  // namespace dpdp
