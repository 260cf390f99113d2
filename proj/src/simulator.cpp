#include "dpdp/simulator.hpp"

#include <algorithm>
#include <exception>
#include <memory>

#include "dpdp/errors.hpp"
#include "dpdp/kernels.hpp"
#include "dpdp/replanner.hpp"

namespace dpdp {

std::string_view to_string(PlanReason r) noexcept {
  switch (r) {
    case PlanReason::initial:
      return "initial";
    case PlanReason::pinned:
      return "pinned";
    case PlanReason::event:
      return "event";
    case PlanReason::failed_take:
      return "failed_take";
  }
  return "?";
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::max_ticks_exceeded:
      return "max_ticks_exceeded";
    case RunStatus::stalled:
      return "stalled";
  }
  return "?";
}

std::vector<ArbitrationDecision> arbitrate(std::vector<TakeClaim> claims, int available_stock) {
  std::stable_sort(claims.begin(), claims.end(),
                   [](const TakeClaim& a, const TakeClaim& b) { return a.request < b.request; });
  std::vector<ArbitrationDecision> out;
  out.reserve(claims.size());
  bool exhausted = false;
  for (auto& c : claims) {
    const bool granted = !exhausted && c.quantity <= available_stock;
    if (granted)
      available_stock -= c.quantity;
    else
      exhausted = true;
    out.push_back({std::move(c), granted});
  }
  return out;
}

Simulation::Simulation(Scenario scenario, GaConfig ga, FitnessConfig fitness, SimConfig sim)
    : scenario_(std::move(scenario)), ga_(ga), fitness_(std::move(fitness)), sim_(sim) {
  ga_.validate();
  if (sim_.max_ticks <= 0) throw ConfigError("max_ticks must be positive");
  state_ = initial_state(scenario_);
  timeline_ = timeline(scenario_);
  for (std::size_t i = 0; i < scenario_.agents.size(); ++i) {
    const AgentId& id = scenario_.agents[i].spec.id;
    agent_index_[id] = i;
    metrics_.agents[id] = {};
  }
  plan_initial();

  TraceRecord rec;
  rec.tick = 0;
  for (const auto& [id, st] : state_.agents) rec.agents.push_back(sample(id, st));
  record(std::move(rec));
}

const AgentSpec& Simulation::spec_of(const AgentId& agent) const {
  return scenario_.agents.at(agent_index_.at(agent)).spec;
}

std::uint64_t Simulation::plan_seed(const AgentId& agent) {
  return derive_seed(ga_.seed, agent_index_.at(agent), metrics_.agents.at(agent).plans.size());
}

void Simulation::plan_initial() {
  const std::size_t n = scenario_.agents.size();
  std::vector<std::vector<Stop>> stops(n);
  std::vector<GaConfig> configs(n, ga_);
  for (std::size_t i = 0; i < n; ++i) {
    const AgentId& id = scenario_.agents[i].spec.id;
    stops[i] = stops_for(scenario_.initial_requests_of(id));
    configs[i].seed = plan_seed(id);
  }

  std::vector<EvolutionReport> reports(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const AgentDefinition& def = scenario_.agents[i];
      FitnessEvaluator evaluator(state_.world, state_.requests, def.spec.start,
                                 def.spec.constraints, fitness_);
      if (def.initial_plan) {
        reports[i].best = *def.initial_plan;
        reports[i].best_fitness = evaluator.evaluate(reports[i].best);
        reports[i].history = {reports[i].best_fitness.aggregate};
      } else {
        reports[i] = evolve(stops[i], configs[i], evaluator);
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < n; ++i) {
    const AgentDefinition& def = scenario_.agents[i];
    install_plan(state_.agents.at(def.spec.id), reports[i].best, state_.requests);
    PlanRecord pr;
    pr.index = 0;
    pr.tick = 0;
    pr.reason = def.initial_plan ? PlanReason::pinned : PlanReason::initial;
    pr.added = stops[i];
    pr.report = std::move(reports[i]);
    metrics_.agents.at(def.spec.id).plans.push_back(std::move(pr));
  }
}

void Simulation::replan_all(std::vector<Replan> jobs) {
  const std::size_t n = jobs.size();
  std::vector<GaConfig> configs(n, ga_);
  for (std::size_t i = 0; i < n; ++i) configs[i].seed = plan_seed(jobs[i].agent);

  std::vector<EvolutionReport> reports(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      reports[i] = replan(spec_of(jobs[i].agent), jobs[i].outcome, configs[i], fitness_);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < n; ++i) {
    Replan& job = jobs[i];
    install_plan(state_.agents.at(job.agent), reports[i].best, state_.requests);
    AgentMetrics& m = metrics_.agents.at(job.agent);
    PlanRecord pr;
    pr.index = static_cast<int>(m.plans.size());
    pr.tick = state_.time;
    pr.reason = job.reason;
    pr.retained = std::move(job.outcome.retained);
    pr.added = std::move(job.outcome.added);
    pr.report = std::move(reports[i]);
    m.plans.push_back(std::move(pr));
    ++m.replan_count;
  }
}

AgentSample Simulation::sample(const AgentId& id, const AgentState& st) const {
  AgentSample s{id, st.position, st.battery, "Idle", std::nullopt};
  if (auto c = st.cursor()) {
    s.action = std::string(action_name(st.plan[*c]));
    s.request = st.plan[*c].request;
  }
  return s;
}

void Simulation::record(TraceRecord rec) {
  if (sim_.record_trace) trace_.push_back(std::move(rec));
}

bool Simulation::work_remaining() const {
  return next_event_ < timeline_.size() || !state_.all_requests_done();
}

void Simulation::splice_charge_detours() {
  for (auto& [id, st] : state_.agents) {
    const auto c = st.cursor();
    if (!c || st.battery > kLowBatteryThreshold) continue;
    const bool charge_pending =
        std::any_of(st.plan.begin() + static_cast<std::ptrdiff_t>(*c), st.plan.end(),
                    [](const Action& a) {
                      return !a.executed && std::holds_alternative<ChargeBattery>(a.kind);
                    });
    if (charge_pending) continue;
    const auto charge = battery_rule(st, state_.world);
    const auto& charger = std::get<ChargeBattery>(charge->kind).charger;
    const Action move{Move{LocationRef::of(charger)}, false, std::nullopt};
    st.plan.insert(st.plan.begin() + static_cast<std::ptrdiff_t>(*c), {move, *charge});
  }
}

TraceRecord Simulation::step() {
  stalled_ = false;
  TraceRecord rec;
  rec.tick = ++state_.time;
  bool progress = false;

  // Events fire one at a time so a second event on the same tick revises the
  // plan installed by the first.
  while (next_event_ < timeline_.size() && timeline_[next_event_].time == state_.time) {
    auto outcomes = on_event(state_, timeline_[next_event_]);
    std::vector<Replan> jobs;
    for (auto& o : outcomes) {
      AgentId agent = o.agent;
      jobs.push_back({std::move(agent), std::move(o), PlanReason::event});
    }
    replan_all(std::move(jobs));
    rec.fired_events.push_back(next_event_++);
    progress = true;
  }

  // Motion, computed independently per agent and applied in id order.
  std::vector<AgentId> movers;
  std::vector<kernels::MotionInput> inputs;
  for (const auto& [id, st] : state_.agents) {
    const auto c = st.cursor();
    if (!c) continue;
    const AgentSpec& spec = spec_of(id);
    Point2D target = st.position;
    if (const auto* mv = std::get_if<Move>(&st.plan[*c].kind))
      target = state_.world.position_of(mv->target);
    movers.push_back(id);
    inputs.push_back({st.position, target, spec.speed, st.battery, spec.battery_capacity,
                      spec.consumption});
  }
  std::vector<kernels::MotionResult> moved(inputs.size());
  if (sim_.parallel_motion)
    kernels::advance_all_omp(inputs, moved);
  else
    kernels::advance_all_serial(inputs, moved);

  std::vector<std::pair<AgentId, std::size_t>> arrivals;
  for (std::size_t i = 0; i < movers.size(); ++i) {
    AgentState& st = state_.agents.at(movers[i]);
    st.position = moved[i].position;
    st.battery = moved[i].battery;
    metrics_.agents.at(movers[i]).total_distance += moved[i].travelled;
    if (moved[i].travelled > 0.0) progress = true;
    if (!moved[i].arrived) continue;
    std::size_t next = *st.cursor();
    if (std::holds_alternative<Move>(st.plan[next].kind)) {
      st.plan[next].executed = true;
      rec.executed.push_back({movers[i], "Move", st.plan[next].request});
      ++next;
    }
    if (next < st.plan.size() && !st.plan[next].executed &&
        !std::holds_alternative<Move>(st.plan[next].kind))
      arrivals.emplace_back(movers[i], next);
  }

  auto apply = [&](const AgentId& agent, const Action& a) {
    apply_action_in_place(state_, agent, a);
    rec.executed.push_back({agent, std::string(action_name(a)), a.request});
    progress = true;
    if (a.request && std::holds_alternative<Delivery>(a.kind)) {
      const Request& r = state_.requests.at(*a.request);
      if (r.done && !done_at_.contains(r.id)) {
        done_at_[r.id] = state_.time;
        rec.completed.push_back(r.id);
      }
    }
  };

  std::map<std::pair<DepotId, ArticleId>, std::vector<std::pair<TakeClaim, Action>>> takes;
  for (const auto& [agent, index] : arrivals) {
    const Action a = state_.agents.at(agent).plan[index];
    if (const auto* take = std::get_if<Take>(&a.kind)) {
      TakeClaim claim{agent, a.request.value_or(RequestId{}), take->depot, take->article,
                      take->quantity};
      takes[{take->depot, take->article}].emplace_back(std::move(claim), a);
    } else {
      apply(agent, a);
    }
  }

  std::vector<AgentId> refused;
  for (auto& [key, group] : takes) {
    const auto& stock = state_.world.depots.at(key.first).stock;
    const auto held = stock.find(key.second);
    std::vector<TakeClaim> claims;
    for (const auto& g : group) claims.push_back(g.first);
    const auto decisions = arbitrate(claims, held == stock.end() ? 0 : held->second);
    for (const auto& d : decisions) {
      rec.arbitration.push_back(d);
      if (!d.granted) {
        refused.push_back(d.claim.agent);
        continue;
      }
      const auto match = std::find_if(group.begin(), group.end(), [&](const auto& g) {
        return g.first.agent == d.claim.agent && g.first.request == d.claim.request;
      });
      apply(d.claim.agent, match->second);
    }
  }

  if (!refused.empty()) {
    std::sort(refused.begin(), refused.end());
    auto snapshot = std::make_shared<const SystemState>(state_);
    std::vector<Replan> jobs;
    for (const auto& agent : refused)
      jobs.push_back({agent, revise_agent(agent, {}, snapshot), PlanReason::failed_take});
    replan_all(std::move(jobs));
  }

  splice_charge_detours();

  for (const auto& [id, st] : state_.agents) rec.agents.push_back(sample(id, st));
  metrics_.ticks = state_.time;
  if (!progress && next_event_ >= timeline_.size() && !state_.all_requests_done())
    stalled_ = true;
  record(rec);
  return rec;
}

void Simulation::finish_metrics() {
  metrics_.ticks = state_.time;
  for (auto& [id, m] : metrics_.agents) {
    Tick last = 0;
    bool complete = true;
    for (const auto& [rid, r] : state_.requests) {
      if (r.agent != id) continue;
      if (!r.done) {
        complete = false;
        break;
      }
      last = std::max(last, done_at_.at(rid));
    }
    m.completion_tick = complete ? std::optional<Tick>(last) : std::nullopt;
  }
}

RunResult Simulation::run() {
  RunResult result;
  while (work_remaining()) {
    if (state_.time >= sim_.max_ticks) {
      result.status = RunStatus::max_ticks_exceeded;
      result.message = "max ticks (" + std::to_string(sim_.max_ticks) + ") exceeded";
      break;
    }
    step();
    if (stalled_) {
      result.status = RunStatus::stalled;
      result.message = "no agent can progress at tick " + std::to_string(state_.time);
      break;
    }
  }
  finish_metrics();
  result.metrics = metrics_;
  result.trace = trace_;
  result.final_state = state_;
  return result;
}

RunResult run(const Scenario& scenario, const GaConfig& ga, const FitnessConfig& fitness,
              const SimConfig& sim) {
  return Simulation(scenario, ga, fitness, sim).run();
}

}  // namespace dpdp
