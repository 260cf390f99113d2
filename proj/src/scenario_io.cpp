#include "dpdp/scenario_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpdp/errors.hpp"

namespace dpdp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- reading -------------------------------------------------------------

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

template <class T>
T as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& path) {
  return as<T>(field(j, key, path), path + "." + key);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return as<T>(*it, path + "." + key);
}

const json& array_at(const json& j, const char* key, const std::string& path) {
  static const json empty = json::array();
  auto it = j.find(key);
  if (it == j.end()) return empty;
  if (!it->is_array()) throw ParseError(path + "." + key + ": expected an array");
  return *it;
}

std::string at(const std::string& path, const char* key, std::size_t i) {
  return path + (path.empty() ? "" : ".") + key + "[" + std::to_string(i) + "]";
}

Point2D read_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [x, y]");
  return {as<double>(j[0], path + "[0]"), as<double>(j[1], path + "[1]")};
}

Rect read_rect(const json& j, const std::string& path) {
  return {read_point(field(j, "min", path), path + ".min"),
          read_point(field(j, "max", path), path + ".max")};
}

Depot read_depot(const json& j, const std::string& path) {
  Depot d;
  d.id = DepotId{get<std::string>(j, "id", path)};
  d.position = read_point(field(j, "position", path), path + ".position");
  if (auto it = j.find("stock"); it != j.end()) {
    if (!it->is_object()) throw ParseError(path + ".stock: expected an object");
    for (const auto& [article, qty] : it->items())
      d.stock[ArticleId{article}] = as<int>(qty, path + ".stock." + article);
  }
  return d;
}

Client read_client(const json& j, const std::string& path) {
  return {ClientId{get<std::string>(j, "id", path)},
          read_point(field(j, "position", path), path + ".position")};
}

Request read_request(const json& j, const std::string& path, Tick default_release) {
  Request r;
  r.id = RequestId{get<int>(j, "id", path)};
  r.depot = DepotId{get<std::string>(j, "depot", path)};
  r.article = ArticleId{get<std::string>(j, "article", path)};
  r.client = ClientId{get<std::string>(j, "client", path)};
  r.quantity = get<int>(j, "quantity", path);
  r.agent = AgentId{get<std::string>(j, "agent", path)};
  r.done = get_or<bool>(j, "done", false, path);
  r.release_time = get_or<Tick>(j, "release_time", default_release, path);
  return r;
}

ConstraintKind read_kind(const std::string& s, const std::string& path) {
  if (s == "distance") return ConstraintKind::distance;
  if (s == "obstacles") return ConstraintKind::obstacles;
  throw ParseError(path + ": unknown constraint kind '" + s + "'");
}

Stop read_stop(const std::string& s, const std::string& path) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon + 2 > s.size() || s[colon + 1] != 'R')
    throw ParseError(path + ": expected 'pickup:R<n>' or 'delivery:R<n>', got '" + s + "'");
  const std::string kind = s.substr(0, colon);
  int id = 0;
  try {
    std::size_t used = 0;
    id = std::stoi(s.substr(colon + 2), &used);
    if (colon + 2 + used != s.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(path + ": bad request number in '" + s + "'");
  }
  if (kind == "pickup") return Stop::pickup(RequestId{id});
  if (kind == "delivery") return Stop::delivery(RequestId{id});
  throw ParseError(path + ": unknown stop kind '" + kind + "'");
}

AgentDefinition read_agent(const json& j, const std::string& path) {
  AgentDefinition def;
  AgentSpec& a = def.spec;
  a.id = AgentId{get<std::string>(j, "id", path)};
  a.start = read_point(field(j, "start", path), path + ".start");
  a.battery_capacity = get<double>(j, "battery_capacity", path);
  a.speed = get<double>(j, "speed", path);
  a.consumption = get_or<double>(j, "consumption", 0.0, path);
  const json& cs = field(j, "constraints", path);
  if (!cs.is_array()) throw ParseError(path + ".constraints: expected an array");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string p = at(path, "constraints", i);
    a.constraints.push_back(
        {read_kind(get<std::string>(cs[i], "kind", p), p + ".kind"), get<double>(cs[i], "coefficient", p)});
  }
  if (auto it = j.find("initial_plan"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(path + ".initial_plan: expected an array");
    Genome g;
    for (std::size_t i = 0; i < it->size(); ++i)
      g.push_back(read_stop(as<std::string>((*it)[i], at(path, "initial_plan", i)),
                            at(path, "initial_plan", i)));
    def.initial_plan = std::move(g);
  }
  return def;
}

void read_ga(const json& j, ScenarioDocument& doc) {
  const std::string path = "ga";
  GaConfig& ga = doc.ga;
  ga.pop_size = get_or<int>(j, "pop_size", ga.pop_size, path);
  ga.max_generations = get_or<int>(j, "max_generations", ga.max_generations, path);
  ga.mutation_prob = get_or<double>(j, "mutation_prob", ga.mutation_prob, path);
  ga.selection_rate = get_or<double>(j, "selection_rate", ga.selection_rate, path);
  ga.elitism_count = get_or<int>(j, "elitism_count", ga.elitism_count, path);
  if (auto it = j.find("early_stop_fitness"); it != j.end() && !it->is_null())
    ga.early_stop_fitness = as<double>(*it, path + ".early_stop_fitness");
  ga.seed = get_or<std::uint64_t>(j, "seed", ga.seed, path);
  doc.fitness.zero_sum_cap = get_or<double>(j, "zero_sum_cap", doc.fitness.zero_sum_cap, path);
  if (auto it = j.find("aggregation"); it != j.end()) {
    const std::string p = path + ".aggregation";
    const auto mode = get<std::string>(*it, "mode", p);
    if (mode == "weighted") {
      doc.fitness.aggregation = WeightedMean{};
    } else if (mode == "legacy") {
      Legacy l;
      l.distance_weight = get_or<double>(*it, "w1", l.distance_weight, p);
      l.obstacle_weight = get_or<double>(*it, "w2", l.obstacle_weight, p);
      doc.fitness.aggregation = l;
    } else {
      throw ParseError(p + ".mode: expected 'weighted' or 'legacy', got '" + mode + "'");
    }
  }
}

// ---- writing -------------------------------------------------------------

ordered_json point_json(Point2D p) { return ordered_json::array({p.x, p.y}); }

ordered_json rect_json(const Rect& r) {
  return ordered_json{{"min", point_json(r.min)}, {"max", point_json(r.max)}};
}

ordered_json depot_json(const Depot& d) {
  ordered_json stock = ordered_json::object();
  for (const auto& [a, q] : d.stock) stock[a.value] = q;
  return ordered_json{{"id", d.id.value}, {"position", point_json(d.position)}, {"stock", stock}};
}

ordered_json client_json(const Client& c) {
  return ordered_json{{"id", c.id.value}, {"position", point_json(c.position)}};
}

ordered_json request_json(const Request& r, bool with_release) {
  ordered_json j{{"id", r.id.value},           {"depot", r.depot.value},
                 {"article", r.article.value}, {"client", r.client.value},
                 {"quantity", r.quantity},     {"agent", r.agent.value},
                 {"done", r.done}};
  if (with_release) j["release_time"] = r.release_time;
  return j;
}

std::string stop_text(const Stop& s) {
  return std::string(s.kind == StopKind::pickup ? "pickup:" : "delivery:") + to_string(s.request);
}

// ---- validation ------------------------------------------------------------

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ValidationError(path, message);
}

void require_inside(const Rect& bounds, Point2D p, const std::string& path) {
  require(is_finite(p), path, "coordinates must be finite");
  require(bounds.contains(p), path, "position lies outside the world bounds");
}

}  // namespace

void validate(const ScenarioDocument& doc) {
  const Scenario& sc = doc.scenario;
  const World& w = sc.world;

  require(is_finite(w.bounds.min) && is_finite(w.bounds.max) && w.bounds.well_formed(),
          "world.bounds", "bounds must be finite with min <= max");
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    const Rect& r = w.obstacles[i].shape;
    require(is_finite(r.min) && is_finite(r.max) && r.well_formed(), at("world", "obstacles", i),
            "obstacle needs finite corners with min <= max");
  }
  for (const auto& [id, c] : w.chargers) require_inside(w.bounds, c.position, "world.chargers." + id.value);

  // Depots and clients become known at tick 0 or at their event's tick.
  std::map<DepotId, Tick> depot_since;
  std::map<ClientId, Tick> client_since;
  std::map<DepotId, const Depot*> depots;
  auto add_depot = [&](const Depot& d, Tick since, const std::string& path) {
    require(!d.id.value.empty(), path + ".id", "depot id must not be empty");
    require(!depot_since.contains(d.id), path + ".id", "duplicate depot id '" + d.id.value + "'");
    require_inside(w.bounds, d.position, path + ".position");
    for (const auto& [article, qty] : d.stock) {
      require(w.articles.contains(article), path + ".stock." + article.value, "unknown article");
      require(qty >= 0, path + ".stock." + article.value, "stock must not be negative");
    }
    depot_since[d.id] = since;
    depots[d.id] = &d;
  };
  auto add_client = [&](const Client& c, Tick since, const std::string& path) {
    require(!c.id.value.empty(), path + ".id", "client id must not be empty");
    require(!client_since.contains(c.id), path + ".id", "duplicate client id '" + c.id.value + "'");
    require_inside(w.bounds, c.position, path + ".position");
    client_since[c.id] = since;
  };
  for (const auto& [id, d] : w.depots) add_depot(d, 0, "depots." + id.value);
  for (const auto& [id, c] : w.clients) add_client(c, 0, "clients." + id.value);
  for (std::size_t e = 0; e < sc.events.size(); ++e) {
    const Event& ev = sc.events[e];
    const std::string p = at("", "events", e);
    require(ev.time > 0, p + ".time", "event time must be strictly positive");
    for (std::size_t i = 0; i < ev.new_depots.size(); ++i)
      add_depot(ev.new_depots[i], ev.time, at(p, "new_depots", i));
    for (std::size_t i = 0; i < ev.new_clients.size(); ++i)
      add_client(ev.new_clients[i], ev.time, at(p, "new_clients", i));
  }

  std::set<AgentId> agents;
  bool needs_charger = false;
  const bool legacy = std::holds_alternative<Legacy>(doc.fitness.aggregation);
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const AgentSpec& a = sc.agents[i].spec;
    const std::string p = at("", "agents", i);
    require(!a.id.value.empty(), p + ".id", "agent id must not be empty");
    require(agents.insert(a.id).second, p + ".id", "duplicate agent id '" + a.id.value + "'");
    require_inside(w.bounds, a.start, p + ".start");
    require(a.battery_capacity > 0.0, p + ".battery_capacity", "must be positive");
    require(a.speed > 0.0, p + ".speed", "must be positive");
    require(a.consumption >= 0.0, p + ".consumption", "must not be negative");
    require(!a.constraints.empty(), p + ".constraints", "at least one constraint is required");
    for (std::size_t c = 0; c < a.constraints.size(); ++c)
      require(a.constraints[c].coefficient > 0.0, at(p, "constraints", c) + ".coefficient",
              "coefficient must be positive");
    if (legacy)
      require(a.constraints.size() == 2 && a.constraints[0].kind == ConstraintKind::distance &&
                  a.constraints[1].kind == ConstraintKind::obstacles,
              p + ".constraints", "legacy aggregation needs exactly (distance, obstacles)");
    needs_charger = needs_charger || a.consumption > 0.0;
  }
  require(!needs_charger || !w.chargers.empty(), "world.chargers",
          "at least one charger is required when any agent consumes energy");

  std::set<RequestId> request_ids;
  auto check_request = [&](const Request& r, const std::string& p) {
    const std::string who = " (request " + to_string(r.id) + ")";
    require(request_ids.insert(r.id).second, p + ".id", "duplicate request id" + who);
    require(r.quantity > 0, p + ".quantity", "quantity must be positive" + who);
    require(r.release_time >= 0, p + ".release_time", "release time must not be negative" + who);
    require(agents.contains(r.agent), p + ".agent", "unknown agent '" + r.agent.value + "'" + who);
    require(w.articles.contains(r.article), p + ".article",
            "unknown article '" + r.article.value + "'" + who);
    auto d = depot_since.find(r.depot);
    require(d != depot_since.end() && d->second <= r.release_time, p + ".depot",
            "unknown depot '" + r.depot.value + "'" + who);
    auto c = client_since.find(r.client);
    require(c != client_since.end() && c->second <= r.release_time, p + ".client",
            "unknown client '" + r.client.value + "'" + who);
    const auto& stock = depots.at(r.depot)->stock;
    const auto held = stock.find(r.article);
    require(held != stock.end() && held->second >= r.quantity, p + ".quantity",
            "depot '" + r.depot.value + "' does not stock enough " + r.article.value + who);
    require(!r.done, p + ".done", "requests must start undone" + who);
  };
  for (std::size_t i = 0; i < sc.requests.size(); ++i) check_request(sc.requests[i], at("", "requests", i));
  for (std::size_t e = 0; e < sc.events.size(); ++e)
    for (std::size_t i = 0; i < sc.events[e].new_requests.size(); ++i) {
      const Request& r = sc.events[e].new_requests[i];
      const std::string p = at(at("", "events", e), "new_requests", i);
      require(r.release_time == sc.events[e].time, p + ".release_time",
              "event requests are released at the event tick");
      check_request(r, p);
    }

  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const auto& def = sc.agents[i];
    if (!def.initial_plan) continue;
    const auto stops = stops_for(sc.initial_requests_of(def.spec.id));
    const std::string p = at("", "agents", i) + ".initial_plan";
    require(is_permutation_of(*def.initial_plan, stops), p,
            "must list every tick-0 stop of the agent exactly once");
    require(precedence_feasible(*def.initial_plan), p, "a delivery precedes its pickup");
  }

  try {
    doc.ga.validate();
  } catch (const ConfigError& e) {
    throw ValidationError("ga", e.what());
  }
  require(doc.fitness.zero_sum_cap > 0.0, "ga.zero_sum_cap", "must be positive");
  if (const auto* l = std::get_if<Legacy>(&doc.fitness.aggregation))
    require(l->distance_weight > 0.0 && l->obstacle_weight > 0.0, "ga.aggregation",
            "legacy weights must be positive");
  require(doc.sim.max_ticks > 0, "sim.max_ticks", "must be positive");
}

ScenarioDocument parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");

  ScenarioDocument doc;
  Scenario& sc = doc.scenario;
  sc.name = get_or<std::string>(j, "name", "", "");

  const json& world = field(j, "world", "");
  sc.world.bounds = read_rect(field(world, "bounds", "world"), "world.bounds");
  const json& obstacles = array_at(world, "obstacles", "world");
  for (std::size_t i = 0; i < obstacles.size(); ++i)
    sc.world.obstacles.push_back({read_rect(obstacles[i], at("world", "obstacles", i))});
  const json& chargers = array_at(world, "chargers", "world");
  for (std::size_t i = 0; i < chargers.size(); ++i) {
    const std::string p = at("world", "chargers", i);
    Charger c{ChargerId{get<std::string>(chargers[i], "id", p)},
              read_point(field(chargers[i], "position", p), p + ".position")};
    if (!sc.world.chargers.emplace(c.id, c).second)
      throw ValidationError(p + ".id", "duplicate charger id '" + c.id.value + "'");
  }

  const json& articles = array_at(j, "articles", "");
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const std::string p = at("", "articles", i);
    if (!sc.world.articles.insert(ArticleId{as<std::string>(articles[i], p)}).second)
      throw ValidationError(p, "duplicate article id");
  }
  const json& depots = array_at(j, "depots", "");
  for (std::size_t i = 0; i < depots.size(); ++i) {
    Depot d = read_depot(depots[i], at("", "depots", i));
    if (sc.world.depots.contains(d.id))
      throw ValidationError(at("", "depots", i) + ".id", "duplicate depot id '" + d.id.value + "'");
    sc.world.depots.emplace(d.id, std::move(d));
  }
  const json& clients = array_at(j, "clients", "");
  for (std::size_t i = 0; i < clients.size(); ++i) {
    Client c = read_client(clients[i], at("", "clients", i));
    if (sc.world.clients.contains(c.id))
      throw ValidationError(at("", "clients", i) + ".id", "duplicate client id '" + c.id.value + "'");
    sc.world.clients.emplace(c.id, std::move(c));
  }
  const json& agents = array_at(j, "agents", "");
  for (std::size_t i = 0; i < agents.size(); ++i) sc.agents.push_back(read_agent(agents[i], at("", "agents", i)));
  const json& requests = array_at(j, "requests", "");
  for (std::size_t i = 0; i < requests.size(); ++i)
    sc.requests.push_back(read_request(requests[i], at("", "requests", i), 0));
  const json& events = array_at(j, "events", "");
  for (std::size_t e = 0; e < events.size(); ++e) {
    const std::string p = at("", "events", e);
    Event ev;
    ev.time = get<Tick>(events[e], "time", p);
    const json& nd = array_at(events[e], "new_depots", p);
    for (std::size_t i = 0; i < nd.size(); ++i) ev.new_depots.push_back(read_depot(nd[i], at(p, "new_depots", i)));
    const json& nc = array_at(events[e], "new_clients", p);
    for (std::size_t i = 0; i < nc.size(); ++i) ev.new_clients.push_back(read_client(nc[i], at(p, "new_clients", i)));
    const json& nr = array_at(events[e], "new_requests", p);
    for (std::size_t i = 0; i < nr.size(); ++i)
      ev.new_requests.push_back(read_request(nr[i], at(p, "new_requests", i), ev.time));
    sc.events.push_back(std::move(ev));
  }

  if (auto it = j.find("ga"); it != j.end()) read_ga(*it, doc);
  if (auto it = j.find("sim"); it != j.end())
    doc.sim.max_ticks = get_or<Tick>(*it, "max_ticks", doc.sim.max_ticks, "sim");

  validate(doc);
  return doc;
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string write_scenario(const ScenarioDocument& doc) {
  const Scenario& sc = doc.scenario;
  ordered_json j;
  j["name"] = sc.name;

  ordered_json world;
  world["bounds"] = rect_json(sc.world.bounds);
  world["obstacles"] = ordered_json::array();
  for (const auto& o : sc.world.obstacles) world["obstacles"].push_back(rect_json(o.shape));
  world["chargers"] = ordered_json::array();
  for (const auto& [id, c] : sc.world.chargers)
    world["chargers"].push_back({{"id", id.value}, {"position", point_json(c.position)}});
  j["world"] = world;

  j["articles"] = ordered_json::array();
  for (const auto& a : sc.world.articles) j["articles"].push_back(a.value);
  j["depots"] = ordered_json::array();
  for (const auto& [id, d] : sc.world.depots) j["depots"].push_back(depot_json(d));
  j["clients"] = ordered_json::array();
  for (const auto& [id, c] : sc.world.clients) j["clients"].push_back(client_json(c));

  j["agents"] = ordered_json::array();
  for (const auto& def : sc.agents) {
    const AgentSpec& a = def.spec;
    ordered_json aj{{"id", a.id.value},
                    {"start", point_json(a.start)},
                    {"battery_capacity", a.battery_capacity},
                    {"speed", a.speed},
                    {"consumption", a.consumption}};
    aj["constraints"] = ordered_json::array();
    for (const auto& c : a.constraints)
      aj["constraints"].push_back({{"kind", std::string(to_string(c.kind))}, {"coefficient", c.coefficient}});
    if (def.initial_plan) {
      aj["initial_plan"] = ordered_json::array();
      for (const auto& s : *def.initial_plan) aj["initial_plan"].push_back(stop_text(s));
    }
    j["agents"].push_back(aj);
  }

  j["requests"] = ordered_json::array();
  for (const auto& r : sc.requests) j["requests"].push_back(request_json(r, true));

  j["events"] = ordered_json::array();
  for (const auto& e : sc.events) {
    ordered_json ej{{"time", e.time}};
    ej["new_depots"] = ordered_json::array();
    for (const auto& d : e.new_depots) ej["new_depots"].push_back(depot_json(d));
    ej["new_clients"] = ordered_json::array();
    for (const auto& c : e.new_clients) ej["new_clients"].push_back(client_json(c));
    ej["new_requests"] = ordered_json::array();
    for (const auto& r : e.new_requests) ej["new_requests"].push_back(request_json(r, false));
    j["events"].push_back(ej);
  }

  ordered_json ga{{"pop_size", doc.ga.pop_size},
                  {"max_generations", doc.ga.max_generations},
                  {"mutation_prob", doc.ga.mutation_prob},
                  {"selection_rate", doc.ga.selection_rate},
                  {"elitism_count", doc.ga.elitism_count}};
  ga["early_stop_fitness"] =
      doc.ga.early_stop_fitness ? ordered_json(*doc.ga.early_stop_fitness) : ordered_json(nullptr);
  ga["seed"] = doc.ga.seed;
  if (const auto* l = std::get_if<Legacy>(&doc.fitness.aggregation))
    ga["aggregation"] = {{"mode", "legacy"}, {"w1", l->distance_weight}, {"w2", l->obstacle_weight}};
  else
    ga["aggregation"] = {{"mode", "weighted"}};
  ga["zero_sum_cap"] = doc.fitness.zero_sum_cap;
  j["ga"] = ga;
  j["sim"] = {{"max_ticks", doc.sim.max_ticks}};
  return j.dump(2) + "\n";
}

}  // namespace dpdp
