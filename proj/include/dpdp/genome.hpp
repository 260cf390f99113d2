#pragma once

#include <span>
#include <vector>

#include "dpdp/world.hpp"

namespace dpdp {

/// One plan: an ordering of an agent's pending stops.
using Genome = std::vector<Stop>;

/// Pickup and delivery stops for each request, in request order.
std::vector<Stop> stops_for(std::span<const Request> requests);

/// Every request whose pickup is present has it before its delivery.
/// A delivery without its pickup (already taken) is allowed anywhere.
bool precedence_feasible(std::span<const Stop> genome);

/// Same multiset of stops, no duplicates.
bool is_permutation_of(std::span<const Stop> genome, std::span<const Stop> stops);

}  // namespace dpdp
