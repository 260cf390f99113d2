#include "dpdp/genome.hpp"

#include <algorithm>
#include <set>

namespace dpdp {

std::vector<Stop> stops_for(std::span<const Request> requests) {
  std::vector<Stop> out;
  out.reserve(requests.size() * 2);
  for (const auto& r : requests) {
    out.push_back(Stop::pickup(r.id));
    out.push_back(Stop::delivery(r.id));
  }
  return out;
}

bool precedence_feasible(std::span<const Stop> genome) {
  std::set<RequestId> delivered;
  for (const auto& s : genome) {
    if (s.kind == StopKind::delivery)
      delivered.insert(s.request);
    else if (delivered.contains(s.request))
      return false;
  }
  return true;
}

bool is_permutation_of(std::span<const Stop> genome, std::span<const Stop> stops) {
  if (genome.size() != stops.size()) return false;
  std::vector<Stop> a(genome.begin(), genome.end());
  std::vector<Stop> b(stops.begin(), stops.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b && std::adjacent_find(a.begin(), a.end()) == a.end();
}

}  // namespace dpdp
