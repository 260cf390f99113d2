#include "dpdp/scenario.hpp"

#include <algorithm>

namespace dpdp {

const AgentDefinition* Scenario::find_agent(const AgentId& id) const {
  auto it = std::find_if(agents.begin(), agents.end(),
                         [&](const AgentDefinition& a) { return a.spec.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

std::vector<Request> Scenario::initial_requests_of(const AgentId& id) const {
  std::vector<Request> out;
  for (const auto& r : requests)
    if (r.agent == id && r.release_time == 0) out.push_back(r);
  std::sort(out.begin(), out.end(), [](const Request& a, const Request& b) { return a.id < b.id; });
  return out;
}

SystemState initial_state(const Scenario& scenario) {
  SystemState s;
  s.world = scenario.world;
  for (const auto& r : scenario.requests)
    if (r.release_time == 0) s.requests[r.id] = r;
  for (const auto& a : scenario.agents) {
    AgentState st;
    st.position = a.spec.start;
    st.battery = 1.0;
    s.agents[a.spec.id] = st;
  }
  return s;
}

std::vector<Event> timeline(const Scenario& scenario) {
  std::vector<Event> events = scenario.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  for (const auto& r : scenario.requests) {
    if (r.release_time <= 0) continue;
    auto it = std::find_if(events.begin(), events.end(),
                           [&](const Event& e) { return e.time == r.release_time; });
    if (it == events.end()) {
      Event e;
      e.time = r.release_time;
      it = events.insert(std::upper_bound(events.begin(), events.end(), e,
                                          [](const Event& a, const Event& b) {
                                            return a.time < b.time;
                                          }),
                         e);
    }
    it->new_requests.push_back(r);
  }
  return events;
}

}  // namespace dpdp
