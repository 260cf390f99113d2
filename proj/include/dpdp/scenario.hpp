#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpdp/genome.hpp"
#include "dpdp/world.hpp"

namespace dpdp {

struct AgentDefinition {
  AgentSpec spec;
  /// Fixed stop order for the tick-0 plan instead of running the GA.
  std::optional<Genome> initial_plan;

  bool operator==(const AgentDefinition&) const = default;
};

/// The world at tick 0 plus everything scheduled to happen later.
struct Scenario {
  std::string name;
  World world;
  std::vector<AgentDefinition> agents;
  /// Requests with release_time > 0 arrive like event requests at that tick.
  std::vector<Request> requests;
  std::vector<Event> events;

  bool operator==(const Scenario&) const = default;

  const AgentDefinition* find_agent(const AgentId& id) const;
  std::vector<Request> initial_requests_of(const AgentId& id) const;
};

/// Tick-0 system state: every agent at its start with a full battery and an
/// empty plan; only requests released at tick 0.
SystemState initial_state(const Scenario& scenario);

/// Events in firing order. Late top-level requests are folded into the event
/// at their release tick (a new one if none exists). Ties keep file order.
std::vector<Event> timeline(const Scenario& scenario);

}  // namespace dpdp
