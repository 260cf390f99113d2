#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dpdp/constraint.hpp"
#include "dpdp/geometry.hpp"
#include "dpdp/ids.hpp"

namespace dpdp {

struct Depot {
  DepotId id;
  Point2D position;
  std::map<ArticleId, int> stock;

  bool operator==(const Depot&) const = default;
};

struct Client {
  ClientId id;
  Point2D position;

  bool operator==(const Client&) const = default;
};

struct Charger {
  ChargerId id;
  Point2D position;

  bool operator==(const Charger&) const = default;
};

struct Obstacle {
  Rect shape;

  bool operator==(const Obstacle&) const = default;
};

/// A pickup-and-delivery job: carry `quantity` units of `article` from
/// `depot` to `client`. `release_time` is the tick at which the request
/// becomes known (0 for the initial request set).
struct Request {
  RequestId id;
  DepotId depot;
  ArticleId article;
  ClientId client;
  int quantity = 0;
  AgentId agent;
  bool done = false;
  Tick release_time = 0;

  bool operator==(const Request&) const = default;
};

using RequestTable = std::map<RequestId, Request>;

struct LocationRef {
  enum class Kind { depot, client, charger };

  Kind kind = Kind::depot;
  std::string id;

  static LocationRef of(const DepotId& d) { return {Kind::depot, d.value}; }
  static LocationRef of(const ClientId& c) { return {Kind::client, c.value}; }
  static LocationRef of(const ChargerId& c) { return {Kind::charger, c.value}; }

  bool operator==(const LocationRef&) const = default;
};

struct Move {
  LocationRef target;
  bool operator==(const Move&) const = default;
};

struct Take {
  DepotId depot;
  ArticleId article;
  int quantity = 0;
  bool operator==(const Take&) const = default;
};

struct Delivery {
  ClientId client;
  ArticleId article;
  int quantity = 0;
  bool operator==(const Delivery&) const = default;
};

struct ChargeBattery {
  ChargerId charger;
  bool operator==(const ChargeBattery&) const = default;
};

using ActionKind = std::variant<Move, Take, Delivery, ChargeBattery>;

struct Action {
  ActionKind kind;
  bool executed = false;
  std::optional<RequestId> request;

  bool operator==(const Action&) const = default;
};

std::string_view action_name(const Action& a);

enum class StopKind { pickup, delivery };

/// Genome atom. A pickup expands to (Move depot, Take) and a delivery to
/// (Move client, Delivery).
struct Stop {
  StopKind kind = StopKind::pickup;
  RequestId request;

  static Stop pickup(RequestId r) { return {StopKind::pickup, r}; }
  static Stop delivery(RequestId r) { return {StopKind::delivery, r}; }

  auto operator<=>(const Stop&) const = default;
  bool operator==(const Stop&) const = default;
};

std::string to_string(const Stop& s);

/// Static geography plus depot stock.
struct World {
  Rect bounds{{0.0, 0.0}, {1000.0, 1000.0}};
  std::set<ArticleId> articles;
  std::map<DepotId, Depot> depots;
  std::map<ClientId, Client> clients;
  std::map<ChargerId, Charger> chargers;
  std::vector<Obstacle> obstacles;

  bool operator==(const World&) const = default;

  /// Throws std::out_of_range for an unknown id.
  Point2D position_of(const LocationRef& loc) const;
  Point2D stop_position(const Stop& s, const Request& r) const;
};

struct AgentSpec {
  AgentId id;
  Point2D start;
  double battery_capacity = 1.0;  // energy units
  double speed = 1.0;             // world units per tick
  double consumption = 0.0;       // energy units per world unit
  std::vector<ConstraintSpec> constraints;

  bool operator==(const AgentSpec&) const = default;
};

/// Live state of one agent. `plan` is the agent's whole action set (executed
/// history followed by what is still pending), so the execution rate is
/// executed_count() / total_count().
struct AgentState {
  Point2D position;
  double battery = 1.0;  // fraction of capacity
  std::vector<Action> plan;
  std::map<ArticleId, int> cargo;

  std::size_t executed_count() const;
  std::size_t total_count() const { return plan.size(); }
  /// Index of the first unexecuted action, if any.
  std::optional<std::size_t> cursor() const;
  bool idle() const { return !cursor().has_value(); }
};

struct SystemState {
  Tick time = 0;
  World world;
  RequestTable requests;
  std::map<RequestId, int> delivered;
  std::map<AgentId, AgentState> agents;

  bool all_requests_done() const;
};

struct Event {
  Tick time = 1;
  std::vector<Depot> new_depots;
  std::vector<Client> new_clients;
  std::vector<Request> new_requests;

  bool operator==(const Event&) const = default;
};

/// Battery fraction at or below which an agent must recharge.
inline constexpr double kLowBatteryThreshold = 0.1;

/// Tolerance for "agent is at location" checks.
inline constexpr double kLocationEpsilon = 1e-6;

/// The request rule: Move depot, Take, Move client, Delivery.
std::vector<Action> expand_request(const Request& r);

/// The battery rule: a charge action toward the nearest charger when the
/// battery is at or below a tenth of capacity. Ties go to the lower charger id.
/// Throws NoCharger when the rule fires and the world has no charger.
std::optional<Action> battery_rule(const AgentState& state, const World& world);

/// Applies Take, Delivery or ChargeBattery effects for `agent` and marks the
/// matching pending plan entry executed. Move is a no-op here; the simulator
/// moves agents continuously.
SystemState apply_action(SystemState state, const AgentId& agent, const Action& a);
void apply_action_in_place(SystemState& state, const AgentId& agent, const Action& a);

}  // namespace dpdp
