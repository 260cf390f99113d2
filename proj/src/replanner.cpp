#include "dpdp/replanner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "dpdp/errors.hpp"

namespace dpdp {

std::vector<Stop> StopRevision::all() const {
  std::vector<Stop> out = retained;
  out.insert(out.end(), added.begin(), added.end());
  return out;
}

std::vector<Stop> RevisionOutcome::stop_set() const {
  std::vector<Stop> out = retained;
  out.insert(out.end(), added.begin(), added.end());
  return out;
}

StopRevision revise_actions(std::span<const Action> old_plan,
                            std::span<const Request> new_requests) {
  StopRevision rev;
  std::set<Stop> seen;
  std::set<RequestId> taken;
  std::set<RequestId> known;
  for (const auto& a : old_plan) {
    if (!a.request) continue;
    known.insert(*a.request);
    std::optional<Stop> stop;
    if (std::holds_alternative<Take>(a.kind)) {
      if (a.executed) taken.insert(*a.request);
      stop = Stop::pickup(*a.request);
    } else if (std::holds_alternative<Delivery>(a.kind)) {
      stop = Stop::delivery(*a.request);
    }
    if (stop && !a.executed && seen.insert(*stop).second) rev.retained.push_back(*stop);
  }

  for (const auto& s : rev.retained) {
    if (s.kind == StopKind::delivery && !seen.contains(Stop::pickup(s.request)) &&
        !taken.contains(s.request))
      throw std::logic_error("delivery " + to_string(s) + " retained without an executed pickup");
  }

  for (const auto& r : new_requests) {
    if (known.contains(r.id))
      throw std::invalid_argument("request " + to_string(r.id) + " is already planned");
    rev.added.push_back(Stop::pickup(r.id));
    rev.added.push_back(Stop::delivery(r.id));
  }
  return rev;
}

RevisionOutcome revise_agent(const AgentId& agent, std::span<const Request> new_requests,
                             std::shared_ptr<const SystemState> system) {
  const auto it = system->agents.find(agent);
  if (it == system->agents.end()) throw UnknownAgent("unknown agent " + agent.value);
  StopRevision rev = revise_actions(it->second.plan, new_requests);
  return RevisionOutcome{agent, std::move(rev.retained), std::move(rev.added), it->second,
                         std::move(system)};
}

EvolutionReport replan(const AgentSpec& agent, const RevisionOutcome& outcome,
                       const GaConfig& ga, const FitnessConfig& fitness) {
  const SystemState& sys = *outcome.system_snapshot;
  FitnessEvaluator evaluator(sys.world, sys.requests, outcome.agent_snapshot.position,
                             agent.constraints, fitness);
  const auto stops = outcome.stop_set();
  return evolve(stops, ga, evaluator);
}

void install_plan(AgentState& agent, std::span<const Stop> genome, const RequestTable& requests) {
  std::erase_if(agent.plan, [](const Action& a) { return !a.executed; });
  const auto actions = genome_to_actions(genome, requests);
  agent.plan.insert(agent.plan.end(), actions.begin(), actions.end());
}

std::vector<RevisionOutcome> on_event(SystemState& system, const Event& e) {
  if (e.time != system.time)
    throw std::invalid_argument("event for tick " + std::to_string(e.time) + " fired at tick " +
                                std::to_string(system.time));
  std::map<AgentId, std::vector<Request>> by_agent;
  for (const auto& r : e.new_requests) {
    if (!system.agents.contains(r.agent))
      throw UnknownAgent("request " + to_string(r.id) + " names unknown agent " + r.agent.value);
    by_agent[r.agent].push_back(r);
  }

  for (const auto& d : e.new_depots) system.world.depots[d.id] = d;
  for (const auto& c : e.new_clients) system.world.clients[c.id] = c;
  for (auto r : e.new_requests) {
    r.release_time = e.time;
    system.requests[r.id] = r;
  }

  auto snapshot = std::make_shared<const SystemState>(system);
  std::vector<RevisionOutcome> outcomes;
  outcomes.reserve(by_agent.size());
  for (const auto& [agent, requests] : by_agent)
    outcomes.push_back(revise_agent(agent, requests, snapshot));
  return outcomes;
}

}  // namespace dpdp
