#pragma once

#include <map>
#include <span>
#include <variant>
#include <vector>

#include "dpdp/constraint.hpp"
#include "dpdp/genome.hpp"
#include "dpdp/world.hpp"

namespace dpdp {

/// f_A = sum(f_i * c_i) / sum(c_i)
struct WeightedMean {
  bool operator==(const WeightedMean&) const = default;
};

/// f_A = 1 / (w1 / f_distance + w2 / f_obstacles). This is the relation the
/// reference fitness tables follow; it only accepts (distance, obstacles).
struct Legacy {
  double distance_weight = 8.0;
  double obstacle_weight = 2.0;
  bool operator==(const Legacy&) const = default;
};

using AggregationMode = std::variant<WeightedMean, Legacy>;

struct FitnessConfig {
  AggregationMode aggregation = WeightedMean{};
  /// Fitness assigned to a constraint whose route sum is zero.
  double zero_sum_cap = 1.0;

  bool operator==(const FitnessConfig&) const = default;
};

struct ConstraintScore {
  ConstraintKind kind = ConstraintKind::distance;
  double coefficient = 1.0;
  double raw_sum = 0.0;
  double fitness = 0.0;

  bool operator==(const ConstraintScore&) const = default;
};

struct FitnessBreakdown {
  double distance_sum = 0.0;  // world units
  double obstacle_sum = 0.0;  // count
  std::vector<ConstraintScore> constraints;
  double aggregate = 0.0;
  AggregationMode mode = WeightedMean{};

  bool operator==(const FitnessBreakdown&) const = default;
};

struct WeightedFitness {
  double value = 0.0;
  double coefficient = 1.0;
};

/// Obstacles whose rectangle touches the closed segment ab.
int count_obstacles(Point2D a, Point2D b, std::span<const Obstacle> obstacles);

/// `start` followed by the location of each stop in order.
std::vector<Point2D> route_of_plan(std::span<const Stop> genome, Point2D start, const World& world,
                                   const RequestTable& requests);

/// 1/sum, or `cap` when the sum is zero.
double constraint_fitness(double sum, double cap = 1.0);

/// Throws LegacyArity when `mode` is Legacy and `values.size() != 2`.
double aggregate(std::span<const WeightedFitness> values, const AggregationMode& mode);

/// Scores plans for one agent from a fixed origin. Stop locations and
/// obstacles are copied at construction, so the evaluator outlives the world
/// it was built from and is safe to share between threads.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const World& world, const RequestTable& requests, Point2D origin,
                   std::vector<ConstraintSpec> constraints, FitnessConfig config);

  FitnessBreakdown evaluate(std::span<const Stop> genome) const;
  /// Aggregate only; the GA's inner loop.
  double score(std::span<const Stop> genome) const;

  Point2D origin() const noexcept { return origin_; }
  const FitnessConfig& config() const noexcept { return config_; }

 private:
  struct RouteSums {
    double distance = 0.0;
    double obstacles = 0.0;
  };
  RouteSums sums(std::span<const Stop> genome) const;
  Point2D where(const Stop& s) const;

  std::map<Stop, Point2D> stop_points_;
  std::vector<Obstacle> obstacles_;
  Point2D origin_;
  std::vector<ConstraintSpec> constraints_;
  FitnessConfig config_;
};

}  // namespace dpdp
