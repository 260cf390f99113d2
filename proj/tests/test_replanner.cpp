#include <doctest.h>

#include <random>

#include "dpdp/errors.hpp"
#include "dpdp/replanner.hpp"
#include "support.hpp"

using namespace dpdp;
using namespace dpdp::test;

namespace {

const std::vector<ConstraintSpec> kPair{{ConstraintKind::distance, 10}, {ConstraintKind::obstacles, 8}};

/// Marks the Move and the Take (and optionally the Move and Delivery) of
/// request `id` executed.
void mark(std::vector<Action>& plan, int id, bool pickup, bool delivery) {
  bool in_pickup_leg = true;
  for (auto& a : plan) {
    if (a.request != RequestId{id}) continue;
    const bool want = in_pickup_leg ? pickup : delivery;
    if (want) a.executed = true;
    if (std::holds_alternative<Take>(a.kind)) in_pickup_leg = false;
  }
}

SystemState t0_state_at_event() {
  SystemState s;
  s.time = 490;
  s.world = t0_world();
  s.requests = t0_requests();
  const RequestTable& req = s.requests;
  AgentState a1, a2, a3;
  a1.plan = genome_to_actions(Genome{pu(3), de(3), pu(1), de(1), pu(2), de(2)}, req);
  mark(a1.plan, 3, true, true);
  mark(a1.plan, 1, true, true);
  a1.position = {800, 800};
  a2.plan = genome_to_actions(Genome{pu(7), pu(4), de(4), pu(6), de(7), de(6), pu(5), de(5)}, req);
  for (int id : {7, 4, 6}) mark(a2.plan, id, true, true);
  a2.position = {850, 700};
  a3.plan = genome_to_actions(Genome{pu(10), pu(8), de(8), pu(9), de(10), de(9)}, req);
  mark(a3.plan, 10, true, false);
  mark(a3.plan, 8, true, true);
  a3.position = {800, 800};
  a3.cargo[ArticleId{"Art4"}] = 200;
  s.agents[AgentId{"A1"}] = a1;
  s.agents[AgentId{"A2"}] = a2;
  s.agents[AgentId{"A3"}] = a3;
  return s;
}

Event t0_event() {
  Event e;
  e.time = 490;
  e.new_depots = {Depot{DepotId{"S5"}, {300, 620}, {{ArticleId{"Art5"}, 10000}}}};
  e.new_clients = {Client{ClientId{"T8"}, {400, 770}}, Client{ClientId{"T9"}, {690, 300}}};
  e.new_requests = {make_request(11, "S5", "Art5", "T1", 400, "A1"), make_request(12, "S5", "Art5", "T9", 100, "A2"),
                    make_request(13, "S5", "Art5", "T8", 100, "A3")};
  return e;
}

Genome sorted(Genome g) {
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

TEST_SUITE("replanner") {

TEST_CASE("revision of the A1 plan at the event") {
  const SystemState s = t0_state_at_event();
  const std::vector<Request> added{make_request(11, "S5", "Art5", "T1", 400, "A1")};
  const auto rev = revise_actions(s.agents.at(AgentId{"A1"}).plan, added);
  CHECK(rev.retained == Genome{pu(2), de(2)});
  CHECK(rev.added == Genome{pu(11), de(11)});
}

TEST_CASE("revision keeps a delivery whose take already executed") {
  const SystemState s = t0_state_at_event();
  const std::vector<Request> added{make_request(13, "S5", "Art5", "T8", 100, "A3")};
  const auto rev = revise_actions(s.agents.at(AgentId{"A3"}).plan, added);
  CHECK(sorted(rev.retained) == sorted(Genome{pu(9), de(9), de(10)}));
  CHECK(rev.added == Genome{pu(13), de(13)});
}

TEST_CASE("revision without progress or news keeps every stop") {
  const auto plan = genome_to_actions(stops_of({1, 2, 3}), t0_requests());
  const auto rev = revise_actions(plan, {});
  CHECK(rev.retained == stops_of({1, 2, 3}));
  CHECK(rev.added.empty());
}

TEST_CASE("revision keys on the take, not on the move") {
  auto plan = genome_to_actions(stops_of({1}), t0_requests());
  plan[0].executed = true;  // arrived at the depot, Take not yet done
  const auto rev = revise_actions(plan, {});
  CHECK(rev.retained == Genome{pu(1), de(1)});
}

TEST_CASE("revision rejects unsound inputs") {
  const RequestTable req = t0_requests();
  // A pending delivery whose Take is neither pending nor executed.
  std::vector<Action> orphan{Action{Move{LocationRef::of(ClientId{"T3"})}, false, RequestId{1}},
                             Action{Delivery{ClientId{"T3"}, ArticleId{"Art1"}, 100}, false, RequestId{1}}};
  CHECK_THROWS_AS(revise_actions(orphan, {}), std::logic_error);
  const auto plan = genome_to_actions(stops_of({1}), req);
  const std::vector<Request> again{req.at(RequestId{1})};
  CHECK_THROWS_AS(revise_actions(plan, again), std::invalid_argument);
}

TEST_CASE("replanning an empty stop set idles the agent") {
  auto s = std::make_shared<SystemState>(t0_state_at_event());
  AgentState& a2 = s->agents.at(AgentId{"A2"});
  mark(a2.plan, 5, true, true);
  const auto outcome = revise_agent(AgentId{"A2"}, {}, s);
  CHECK(outcome.stop_set().empty());
  AgentSpec spec{AgentId{"A2"}, {350, 240}, 1000, 10, 0, kPair};
  const auto report = replan(spec, outcome, GaConfig{}, FitnessConfig{});
  CHECK(report.best.empty());
  install_plan(a2, report.best, s->requests);
  CHECK(a2.idle());
  CHECK(a2.executed_count() == a2.total_count());
}

TEST_CASE("replanning a single delivery") {
  auto s = std::make_shared<SystemState>(t0_state_at_event());
  AgentState& a3 = s->agents.at(AgentId{"A3"});
  mark(a3.plan, 9, true, true);
  const auto outcome = revise_agent(AgentId{"A3"}, {}, s);
  CHECK(outcome.stop_set() == Genome{de(10)});
  AgentSpec spec{AgentId{"A3"}, {400, 300}, 1000, 8, 0, kPair};
  const auto report = replan(spec, outcome, GaConfig{}, FitnessConfig{});
  CHECK(report.best == Genome{de(10)});
  // The evaluator starts from the live position, not the agent's start.
  CHECK(report.best_fitness.distance_sum == doctest::Approx(euclid({800, 800}, {500, 100})));
}

TEST_CASE("the event revises exactly the named agents") {
  SystemState s = t0_state_at_event();
  const auto outcomes = on_event(s, t0_event());
  REQUIRE(outcomes.size() == 3);
  CHECK(outcomes[0].agent == AgentId{"A1"});
  CHECK(outcomes[1].agent == AgentId{"A2"});
  CHECK(outcomes[2].agent == AgentId{"A3"});
  CHECK(sorted(outcomes[0].stop_set()) == sorted(Genome{pu(2), de(2), pu(11), de(11)}));
  CHECK(sorted(outcomes[1].stop_set()) == sorted(Genome{pu(5), de(5), pu(12), de(12)}));
  CHECK(sorted(outcomes[2].stop_set()) == sorted(Genome{pu(9), de(9), de(10), pu(13), de(13)}));
  CHECK(s.world.depots.count(DepotId{"S5"}) == 1);
  CHECK(s.world.clients.count(ClientId{"T8"}) == 1);
  CHECK(s.world.clients.count(ClientId{"T9"}) == 1);
  CHECK(s.requests.at(RequestId{12}).release_time == 490);
  CHECK(outcomes[0].system_snapshot->requests.count(RequestId{11}) == 1);
}

TEST_CASE("an event without requests revises nobody") {
  SystemState s = t0_state_at_event();
  Event e = t0_event();
  e.new_requests.clear();
  CHECK(on_event(s, e).empty());
  CHECK(s.world.depots.count(DepotId{"S5"}) == 1);
}

TEST_CASE("agents not named by the event keep their plans") {
  SystemState s = t0_state_at_event();
  Event e = t0_event();
  e.new_requests = {make_request(12, "S5", "Art5", "T9", 100, "A2")};
  const auto a1_before = s.agents.at(AgentId{"A1"}).plan;
  const auto a3_before = s.agents.at(AgentId{"A3"}).plan;
  const Action* a1_data = s.agents.at(AgentId{"A1"}).plan.data();
  const Action* a3_data = s.agents.at(AgentId{"A3"}).plan.data();
  const auto outcomes = on_event(s, e);
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].agent == AgentId{"A2"});
  CHECK(s.agents.at(AgentId{"A1"}).plan == a1_before);
  CHECK(s.agents.at(AgentId{"A3"}).plan == a3_before);
  CHECK(s.agents.at(AgentId{"A1"}).plan.data() == a1_data);
  CHECK(s.agents.at(AgentId{"A3"}).plan.data() == a3_data);
}

TEST_CASE("a bad event fails before touching the state") {
  SystemState s = t0_state_at_event();
  const SystemState before = s;
  Event e = t0_event();
  e.new_requests.push_back(make_request(14, "S5", "Art5", "T8", 1, "A9"));
  CHECK_THROWS_AS(on_event(s, e), UnknownAgent);
  CHECK(s.world == before.world);
  CHECK(s.requests == before.requests);
  Event late = t0_event();
  late.time = 491;
  CHECK_THROWS_AS(on_event(s, late), std::invalid_argument);
  CHECK(s.world == before.world);
}

TEST_CASE("replanned genomes cover exactly the revised stop set") {
  SystemState s = t0_state_at_event();
  const auto outcomes = on_event(s, t0_event());
  for (const auto& o : outcomes) {
    AgentSpec spec{o.agent, {0, 0}, 1000, 10, 0, kPair};
    GaConfig cfg;
    cfg.seed = 5;
    const auto report = replan(spec, o, cfg, FitnessConfig{Legacy{}, 1.0});
    CHECK(is_permutation_of(report.best, o.stop_set()));
    CHECK(precedence_ok(report.best));
  }
}

TEST_CASE("revisions compose across repeated events") {
  // Twice-revised stop sets equal a direct revision against the cumulative
  // execution state: every pending Take or Delivery of every request the
  // agent ever received.
  std::mt19937_64 rng(41);
  const RequestTable base = t0_requests();
  for (int round = 0; round < 300; ++round) {
    AgentState agent;
    std::map<RequestId, int> progress;  // 0 none, 1 taken, 2 delivered
    std::vector<RequestId> owned;
    int next_id = 1;
    auto fresh = [&](int n) {
      std::vector<Request> rs;
      for (int k = 0; k < n; ++k) {
        const int id = next_id++;
        rs.push_back(make_request(id, "S1", "Art1", "T1", 1, "A1"));
        owned.push_back(RequestId{id});
      }
      return rs;
    };
    RequestTable table;
    std::vector<Request> incoming = fresh(3);
    for (int event = 0; event < 3; ++event) {
      for (const auto& r : incoming) table[r.id] = r;
      const auto rev = revise_actions(agent.plan, incoming);

      Genome expected;
      for (const auto& id : owned) {
        if (progress[id] == 0) expected.push_back(Stop::pickup(id));
        if (progress[id] < 2) expected.push_back(Stop::delivery(id));
      }
      REQUIRE(sorted(rev.all()) == sorted(expected));

      Rng ga_rng(round * 7 + event);
      const Genome order = random_genome(rev.all(), ga_rng);
      install_plan(agent, order, table);
      // Execute a random prefix of the pending actions.
      const auto c = agent.cursor();
      const std::size_t pending = c ? agent.plan.size() - *c : 0;
      const std::size_t run = std::uniform_int_distribution<std::size_t>(0, pending)(rng);
      for (std::size_t k = 0; k < run; ++k) {
        Action& a = agent.plan[*c + k];
        a.executed = true;
        if (std::holds_alternative<Take>(a.kind)) progress[*a.request] = 1;
        if (std::holds_alternative<Delivery>(a.kind)) progress[*a.request] = 2;
      }
      incoming = fresh(std::uniform_int_distribution<int>(0, 2)(rng));
    }
  }
}

}  // TEST_SUITE
