#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version that must produce bitwise-identical output; the tests hold
// them to that and bench/ compares their speed.

#include <span>

#include "dpdp/fitness.hpp"
#include "dpdp/genome.hpp"

namespace dpdp::kernels {

void evaluate_population_serial(const FitnessEvaluator& evaluator,
                                std::span<const Genome> population, std::span<double> scores);
void evaluate_population_omp(const FitnessEvaluator& evaluator, std::span<const Genome> population,
                             std::span<double> scores);

struct MotionInput {
  Point2D position;
  Point2D target;
  double speed = 0.0;
  double battery = 1.0;  // fraction
  double capacity = 1.0;
  double consumption = 0.0;
};

struct MotionResult {
  Point2D position;
  double battery = 1.0;
  double travelled = 0.0;
  bool arrived = false;
};

/// One tick of straight-line motion: at most `speed` units, clamped at the
/// target and limited by the energy left in the battery.
MotionResult advance(const MotionInput& in) noexcept;

void advance_all_serial(std::span<const MotionInput> in, std::span<MotionResult> out);
void advance_all_omp(std::span<const MotionInput> in, std::span<MotionResult> out);

}  // namespace dpdp::kernels
