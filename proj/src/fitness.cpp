#include "dpdp/fitness.hpp"

#include <stdexcept>

#include "dpdp/errors.hpp"

namespace dpdp {

int count_obstacles(Point2D a, Point2D b, std::span<const Obstacle> obstacles) {
  int n = 0;
  for (const auto& o : obstacles)
    if (segment_intersects_rect(a, b, o.shape)) ++n;
  return n;
}

std::vector<Point2D> route_of_plan(std::span<const Stop> genome, Point2D start, const World& world,
                                   const RequestTable& requests) {
  std::vector<Point2D> route;
  route.reserve(genome.size() + 1);
  route.push_back(start);
  for (const auto& s : genome) route.push_back(world.stop_position(s, requests.at(s.request)));
  return route;
}

double constraint_fitness(double sum, double cap) { return sum > 0.0 ? 1.0 / sum : cap; }

double aggregate(std::span<const WeightedFitness> values, const AggregationMode& mode) {
  if (const auto* legacy = std::get_if<Legacy>(&mode)) {
    if (values.size() != 2)
      throw LegacyArity("legacy aggregation needs exactly (distance, obstacles), got " +
                        std::to_string(values.size()) + " constraints");
    return 1.0 / (legacy->distance_weight / values[0].value +
                  legacy->obstacle_weight / values[1].value);
  }
  if (values.empty()) throw ConfigError("aggregate needs at least one constraint");
  if (values.size() == 1) return values[0].value;
  double num = 0.0;
  double den = 0.0;
  for (const auto& v : values) {
    num += v.value * v.coefficient;
    den += v.coefficient;
  }
  return num / den;
}

FitnessEvaluator::FitnessEvaluator(const World& world, const RequestTable& requests,
                                   Point2D origin, std::vector<ConstraintSpec> constraints,
                                   FitnessConfig config)
    : obstacles_(world.obstacles),
      origin_(origin),
      constraints_(std::move(constraints)),
      config_(config) {
  if (constraints_.empty()) throw ConfigError("agent has no constraints");
  if (std::holds_alternative<Legacy>(config_.aggregation) &&
      (constraints_.size() != 2 || constraints_[0].kind != ConstraintKind::distance ||
       constraints_[1].kind != ConstraintKind::obstacles))
    throw LegacyArity("legacy aggregation needs exactly (distance, obstacles) constraints");
  for (const auto& [id, r] : requests) {
    auto depot = world.depots.find(r.depot);
    auto client = world.clients.find(r.client);
    if (depot != world.depots.end()) stop_points_[Stop::pickup(id)] = depot->second.position;
    if (client != world.clients.end()) stop_points_[Stop::delivery(id)] = client->second.position;
  }
}

Point2D FitnessEvaluator::where(const Stop& s) const {
  auto it = stop_points_.find(s);
  if (it == stop_points_.end()) throw std::out_of_range("no location for stop " + to_string(s));
  return it->second;
}

FitnessEvaluator::RouteSums FitnessEvaluator::sums(std::span<const Stop> genome) const {
  RouteSums out;
  Point2D prev = origin_;
  for (const auto& s : genome) {
    const Point2D next = where(s);
    out.distance += distance(prev, next);
    out.obstacles += count_obstacles(prev, next, obstacles_);
    prev = next;
  }
  return out;
}

FitnessBreakdown FitnessEvaluator::evaluate(std::span<const Stop> genome) const {
  const RouteSums s = sums(genome);
  FitnessBreakdown out;
  out.distance_sum = s.distance;
  out.obstacle_sum = s.obstacles;
  out.mode = config_.aggregation;
  std::vector<WeightedFitness> weighted;
  weighted.reserve(constraints_.size());
  for (const auto& c : constraints_) {
    const double raw = c.kind == ConstraintKind::distance ? s.distance : s.obstacles;
    const double f = constraint_fitness(raw, config_.zero_sum_cap);
    out.constraints.push_back({c.kind, c.coefficient, raw, f});
    weighted.push_back({f, c.coefficient});
  }
  out.aggregate = aggregate(weighted, config_.aggregation);
  return out;
}

double FitnessEvaluator::score(std::span<const Stop> genome) const {
  const RouteSums s = sums(genome);
  // At most a handful of constraints; avoid a heap allocation per call.
  WeightedFitness buf[8];
  std::size_t n = 0;
  for (const auto& c : constraints_) {
    if (n == std::size(buf)) return evaluate(genome).aggregate;
    const double raw = c.kind == ConstraintKind::distance ? s.distance : s.obstacles;
    buf[n++] = {constraint_fitness(raw, config_.zero_sum_cap), c.coefficient};
  }
  return aggregate(std::span<const WeightedFitness>(buf, n), config_.aggregation);
}

}  // namespace dpdp
