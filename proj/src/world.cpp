#include "dpdp/world.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dpdp/errors.hpp"

namespace dpdp {

std::string_view action_name(const Action& a) {
  struct Visitor {
    std::string_view operator()(const Move&) const { return "Move"; }
    std::string_view operator()(const Take&) const { return "Take"; }
    std::string_view operator()(const Delivery&) const { return "Delivery"; }
    std::string_view operator()(const ChargeBattery&) const { return "ChargeBattery"; }
  };
  return std::visit(Visitor{}, a.kind);
}

std::string to_string(const Stop& s) {
  return (s.kind == StopKind::pickup ? "pu(" : "de(") + to_string(s.request) + ")";
}

Point2D World::position_of(const LocationRef& loc) const {
  switch (loc.kind) {
    case LocationRef::Kind::depot:
      return depots.at(DepotId{loc.id}).position;
    case LocationRef::Kind::client:
      return clients.at(ClientId{loc.id}).position;
    case LocationRef::Kind::charger:
      return chargers.at(ChargerId{loc.id}).position;
  }
  throw std::out_of_range("bad location kind");
}

Point2D World::stop_position(const Stop& s, const Request& r) const {
  return s.kind == StopKind::pickup ? depots.at(r.depot).position : clients.at(r.client).position;
}

std::size_t AgentState::executed_count() const {
  return static_cast<std::size_t>(
      std::count_if(plan.begin(), plan.end(), [](const Action& a) { return a.executed; }));
}

std::optional<std::size_t> AgentState::cursor() const {
  for (std::size_t i = 0; i < plan.size(); ++i)
    if (!plan[i].executed) return i;
  return std::nullopt;
}

bool SystemState::all_requests_done() const {
  return std::all_of(requests.begin(), requests.end(),
                     [](const auto& kv) { return kv.second.done; });
}

std::vector<Action> expand_request(const Request& r) {
  return {
      Action{Move{LocationRef::of(r.depot)}, false, r.id},
      Action{Take{r.depot, r.article, r.quantity}, false, r.id},
      Action{Move{LocationRef::of(r.client)}, false, r.id},
      Action{Delivery{r.client, r.article, r.quantity}, false, r.id},
  };
}

std::optional<Action> battery_rule(const AgentState& state, const World& world) {
  if (state.battery > kLowBatteryThreshold) return std::nullopt;
  if (world.chargers.empty()) throw NoCharger("battery at or below 10% and no charger exists");
  const Charger* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  // std::map iterates in id order, so strict < keeps the lowest id on ties.
  for (const auto& [id, c] : world.chargers) {
    const double d = distance(state.position, c.position);
    if (d < best_d) {
      best_d = d;
      best = &c;
    }
  }
  return Action{ChargeBattery{best->id}, false, std::nullopt};
}

namespace {

void require_at(const AgentState& agent, Point2D where, const std::string& what) {
  if (distance(agent.position, where) > kLocationEpsilon)
    throw WrongLocation("agent is not at " + what);
}

void mark_executed(AgentState& agent, const Action& a) {
  for (auto& p : agent.plan) {
    if (!p.executed && p.kind == a.kind && p.request == a.request) {
      p.executed = true;
      return;
    }
  }
}

}  // namespace

void apply_action_in_place(SystemState& state, const AgentId& agent_id, const Action& a) {
  auto it = state.agents.find(agent_id);
  if (it == state.agents.end()) throw UnknownAgent("unknown agent " + agent_id.value);
  AgentState& agent = it->second;

  if (const auto* take = std::get_if<Take>(&a.kind)) {
    auto& depot = state.world.depots.at(take->depot);
    require_at(agent, depot.position, "depot " + depot.id.value);
    auto stock = depot.stock.find(take->article);
    const int held = stock == depot.stock.end() ? 0 : stock->second;
    if (take->quantity > held)
      throw InsufficientStock("depot " + depot.id.value + " holds " + std::to_string(held) +
                              " of " + take->article.value + ", take needs " +
                              std::to_string(take->quantity));
    stock->second -= take->quantity;
    agent.cargo[take->article] += take->quantity;
  } else if (const auto* del = std::get_if<Delivery>(&a.kind)) {
    const auto& client = state.world.clients.at(del->client);
    require_at(agent, client.position, "client " + client.id.value);
    auto carried = agent.cargo.find(del->article);
    if (carried == agent.cargo.end() || carried->second < del->quantity)
      throw InsufficientCargo("agent " + agent_id.value + " carries too little " +
                              del->article.value);
    carried->second -= del->quantity;
    if (carried->second == 0) agent.cargo.erase(carried);
    if (a.request) {
      int& total = state.delivered[*a.request];
      total += del->quantity;
      auto& req = state.requests.at(*a.request);
      if (total >= req.quantity) req.done = true;
    }
  } else if (const auto* charge = std::get_if<ChargeBattery>(&a.kind)) {
    require_at(agent, state.world.chargers.at(charge->charger).position,
               "charger " + charge->charger.value);
    agent.battery = 1.0;
  }
  mark_executed(agent, a);
}

SystemState apply_action(SystemState state, const AgentId& agent, const Action& a) {
  apply_action_in_place(state, agent, a);
  return state;
}

}  // namespace dpdp
