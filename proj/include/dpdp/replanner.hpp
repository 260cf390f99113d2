#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dpdp/fitness.hpp"
#include "dpdp/ga.hpp"
#include "dpdp/genome.hpp"
#include "dpdp/world.hpp"

namespace dpdp {

struct StopRevision {
  std::vector<Stop> retained;  // unexecuted stops of the old plan, in plan order
  std::vector<Stop> added;     // stops of the new requests

  std::vector<Stop> all() const;
};

/// Stop-level revision of an action set. A stop is retained while its Take
/// (pickup) or Delivery (delivery) is unexecuted, regardless of its Move;
/// an interrupted leg is re-planned from wherever the agent now is.
///
/// Throws std::logic_error if a delivery would be retained without its
/// pickup while that pickup's Take never executed, and std::invalid_argument
/// if a new request already appears in the old plan.
StopRevision revise_actions(std::span<const Action> old_plan,
                            std::span<const Request> new_requests);

struct RevisionOutcome {
  AgentId agent;
  std::vector<Stop> retained;
  std::vector<Stop> added;
  AgentState agent_snapshot;
  std::shared_ptr<const SystemState> system_snapshot;

  std::vector<Stop> stop_set() const;
};

/// Revises one agent against the live state, capturing both snapshots.
RevisionOutcome revise_agent(const AgentId& agent, std::span<const Request> new_requests,
                             std::shared_ptr<const SystemState> system);

/// Runs the GA over retained + added stops with the route starting at the
/// agent's snapshot position.
EvolutionReport replan(const AgentSpec& agent, const RevisionOutcome& outcome,
                       const GaConfig& ga, const FitnessConfig& fitness);

/// Drops the agent's unexecuted actions and appends the plan for `genome`.
/// Executed history stays in place.
void install_plan(AgentState& agent, std::span<const Stop> genome, const RequestTable& requests);

/// Extends the world with the event's depots, clients and requests and
/// returns one revision per agent named by the event's requests, in agent id
/// order. Other agents are not touched.
///
/// Throws UnknownAgent (before changing anything) if a request names an
/// agent that does not exist, and std::invalid_argument if e.time differs
/// from system.time.
std::vector<RevisionOutcome> on_event(SystemState& system, const Event& e);

}  // namespace dpdp
