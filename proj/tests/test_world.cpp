#include <doctest.h>

#include <random>

#include "dpdp/errors.hpp"
#include "dpdp/report.hpp"
#include "dpdp/world.hpp"
#include "support.hpp"

using namespace dpdp;
using namespace dpdp::test;

namespace {

SystemState one_agent_state(Point2D at) {
  SystemState s;
  s.world = t0_world();
  s.requests = t0_requests();
  AgentState a;
  a.position = at;
  s.agents[AgentId{"A1"}] = a;
  return s;
}

std::string listing(const std::vector<Action>& actions) { return format_plan_listing("P", actions); }

}  // namespace

TEST_SUITE("world") {

TEST_CASE("request rule expands into four actions") {
  const auto r1 = make_request(1, "S1", "Art1", "T3", 100, "A1");
  CHECK(listing(expand_request(r1)) ==
        "P=(Move S1,false)(Take S1,Art1,100,false)(Move T3,false)(Delivery T3,Art1,100,false)");
  const auto r11 = make_request(11, "S5", "Art5", "T1", 400, "A1");
  CHECK(listing(expand_request(r11)) ==
        "P=(Move S5,false)(Take S5,Art5,400,false)(Move T1,false)(Delivery T1,Art5,400,false)");
  const auto unit = expand_request(make_request(2, "S3", "Art3", "T4", 1, "A1"));
  REQUIRE(unit.size() == 4);
  CHECK(std::get<Take>(unit[1].kind).quantity == 1);
  CHECK(std::get<Delivery>(unit[3].kind).quantity == 1);
  for (const auto& a : unit) CHECK(a.request == RequestId{2});
}

TEST_CASE("request rule puts the pickup pair before the delivery pair") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> q(1, 100000);
  for (int i = 0; i < 1000; ++i) {
    const auto a = expand_request(make_request(i, "S1", "Art1", "T1", q(rng), "A1"));
    REQUIRE(a.size() == 4);
    REQUIRE(std::holds_alternative<Move>(a[0].kind));
    REQUIRE(std::holds_alternative<Take>(a[1].kind));
    REQUIRE(std::holds_alternative<Move>(a[2].kind));
    REQUIRE(std::holds_alternative<Delivery>(a[3].kind));
    for (const auto& x : a) REQUIRE_FALSE(x.executed);
  }
}

TEST_CASE("battery rule") {
  World w;
  w.chargers[ChargerId{"C1"}] = {ChargerId{"C1"}, {5, 0}};
  w.chargers[ChargerId{"C2"}] = {ChargerId{"C2"}, {0, 7}};
  AgentState a;
  a.position = {0, 0};

  a.battery = 0.40;
  CHECK_FALSE(battery_rule(a, w).has_value());
  a.battery = 0.10;
  REQUIRE(battery_rule(a, w).has_value());
  a.battery = 0.09;
  const auto act = battery_rule(a, w);
  REQUIRE(act.has_value());
  CHECK(std::get<ChargeBattery>(act->kind).charger == ChargerId{"C1"});
  CHECK_FALSE(act->request.has_value());

  for (double b : {0.0, 0.05, 0.1, 0.10001, 0.5, 1.0}) {
    a.battery = b;
    CHECK(battery_rule(a, w).has_value() == (b <= 0.1));
  }
}

TEST_CASE("battery rule breaks distance ties by charger id") {
  World w;
  w.chargers[ChargerId{"Cb"}] = {ChargerId{"Cb"}, {0, 5}};
  w.chargers[ChargerId{"Ca"}] = {ChargerId{"Ca"}, {5, 0}};
  AgentState a;
  a.battery = 0.0;
  CHECK(std::get<ChargeBattery>(battery_rule(a, w)->kind).charger == ChargerId{"Ca"});
}

TEST_CASE("battery rule without chargers") {
  World w;
  AgentState a;
  a.battery = 0.5;
  CHECK_FALSE(battery_rule(a, w).has_value());
  a.battery = 0.05;
  CHECK_THROWS_AS(battery_rule(a, w), NoCharger);
}

TEST_CASE("take and delivery effects") {
  SystemState s = one_agent_state({200, 150});
  const AgentId a1{"A1"};
  const auto actions = expand_request(s.requests.at(RequestId{1}));
  s.agents.at(a1).plan = actions;

  s = apply_action(s, a1, actions[1]);
  CHECK(s.world.depots.at(DepotId{"S1"}).stock.at(ArticleId{"Art1"}) == 9900);
  CHECK(s.agents.at(a1).cargo.at(ArticleId{"Art1"}) == 100);
  CHECK(s.agents.at(a1).plan[1].executed);

  s.agents.at(a1).position = {800, 800};
  s = apply_action(s, a1, actions[3]);
  CHECK(s.agents.at(a1).cargo.count(ArticleId{"Art1"}) == 0);
  CHECK(s.requests.at(RequestId{1}).done);
  CHECK(s.delivered.at(RequestId{1}) == 100);
  CHECK(s.agents.at(a1).plan[3].executed);
  CHECK(s.agents.at(a1).executed_count() == 2);
}

TEST_CASE("taking the full stock is legal") {
  SystemState s = one_agent_state({200, 150});
  const Action take{Take{DepotId{"S1"}, ArticleId{"Art1"}, 10000}, false, std::nullopt};
  s = apply_action(s, AgentId{"A1"}, take);
  CHECK(s.world.depots.at(DepotId{"S1"}).stock.at(ArticleId{"Art1"}) == 0);
}

TEST_CASE("apply_action errors leave the state untouched") {
  const SystemState s = one_agent_state({200, 150});
  const AgentId a1{"A1"};
  const Action too_much{Take{DepotId{"S1"}, ArticleId{"Art1"}, 10001}, false, std::nullopt};
  CHECK_THROWS_AS(apply_action(s, a1, too_much), InsufficientStock);
  const Action missing{Take{DepotId{"S1"}, ArticleId{"Art2"}, 1}, false, std::nullopt};
  SystemState copy = s;
  CHECK_THROWS_AS(apply_action_in_place(copy, a1, missing), InsufficientStock);
  CHECK(copy.world == s.world);
  const Action far{Take{DepotId{"S2"}, ArticleId{"Art2"}, 1}, false, std::nullopt};
  CHECK_THROWS_AS(apply_action(s, a1, far), WrongLocation);
  SystemState at_client = one_agent_state({800, 800});
  const Action deliver{Delivery{ClientId{"T3"}, ArticleId{"Art1"}, 100}, false, RequestId{1}};
  CHECK_THROWS_AS(apply_action(at_client, a1, deliver), InsufficientCargo);
  CHECK_THROWS_AS(apply_action(s, AgentId{"A9"}, too_much), UnknownAgent);
}

TEST_CASE("charging refills the battery at a charger") {
  SystemState s = one_agent_state({10, 10});
  s.world.chargers[ChargerId{"C1"}] = {ChargerId{"C1"}, {10, 10}};
  s.agents.at(AgentId{"A1"}).battery = 0.05;
  s = apply_action(s, AgentId{"A1"}, Action{ChargeBattery{ChargerId{"C1"}}, false, std::nullopt});
  CHECK(s.agents.at(AgentId{"A1"}).battery == 1.0);
}

TEST_CASE("stock is conserved and executed flags never reset over random action sequences") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 200; ++round) {
    SystemState s;
    s.world = t0_world();
    s.requests = t0_requests();
    std::map<AgentId, std::vector<RequestId>> owned;
    for (const auto& [id, r] : s.requests) owned[r.agent].push_back(id);
    for (const auto& [agent, ids] : owned) {
      AgentState a;
      for (const auto& id : ids) {
        const auto acts = expand_request(s.requests.at(id));
        a.plan.insert(a.plan.end(), acts.begin(), acts.end());
      }
      s.agents[agent] = a;
    }
    std::map<ArticleId, long> initial;
    for (const auto& [id, d] : s.world.depots)
      for (const auto& [art, q] : d.stock) initial[art] += q;

    // Per request progress: 0 nothing, 1 taken, 2 delivered.
    std::map<RequestId, int> progress;
    std::vector<std::size_t> executed_before;
    for (int step = 0; step < 40; ++step) {
      std::vector<RequestId> open;
      for (const auto& [id, r] : s.requests)
        if (progress[id] < 2) open.push_back(id);
      if (open.empty()) break;
      const RequestId id = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      const Request& r = s.requests.at(id);
      AgentState& agent = s.agents.at(r.agent);
      const auto acts = expand_request(r);
      std::vector<bool> flags;
      for (const auto& x : agent.plan) flags.push_back(x.executed);
      if (progress[id] == 0) {
        agent.position = s.world.depots.at(r.depot).position;
        apply_action_in_place(s, r.agent, acts[1]);
      } else {
        agent.position = s.world.clients.at(r.client).position;
        apply_action_in_place(s, r.agent, acts[3]);
      }
      ++progress[id];
      for (std::size_t k = 0; k < flags.size(); ++k)
        if (flags[k]) REQUIRE(agent.plan[k].executed);

      std::map<ArticleId, long> accounted;
      for (const auto& [did, d] : s.world.depots)
        for (const auto& [art, q] : d.stock) accounted[art] += q;
      for (const auto& [aid, a] : s.agents)
        for (const auto& [art, q] : a.cargo) accounted[art] += q;
      for (const auto& [rid, q] : s.delivered) accounted[s.requests.at(rid).article] += q;
      REQUIRE(accounted == initial);
    }
  }
}

}  // TEST_SUITE
