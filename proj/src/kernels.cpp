#include "dpdp/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>

namespace dpdp::kernels {

namespace {
// Below this many items a parallel region costs more than it saves.
constexpr std::ptrdiff_t kMinParallelGenomes = 64;
constexpr std::ptrdiff_t kMinParallelAgents = 256;
}  // namespace

void evaluate_population_serial(const FitnessEvaluator& evaluator,
                                std::span<const Genome> population, std::span<double> scores) {
  assert(population.size() == scores.size());
  for (std::size_t i = 0; i < population.size(); ++i) scores[i] = evaluator.score(population[i]);
}

void evaluate_population_omp(const FitnessEvaluator& evaluator, std::span<const Genome> population,
                             std::span<double> scores) {
  assert(population.size() == scores.size());
  const auto n = static_cast<std::ptrdiff_t>(population.size());
#pragma omp parallel for schedule(static) if (n >= kMinParallelGenomes)
  for (std::ptrdiff_t i = 0; i < n; ++i) scores[i] = evaluator.score(population[i]);
}

MotionResult advance(const MotionInput& in) noexcept {
  const double remaining = distance(in.position, in.target);
  double step = std::min(in.speed, remaining);
  if (in.consumption > 0.0) step = std::min(step, in.battery * in.capacity / in.consumption);
  step = std::max(step, 0.0);

  MotionResult out;
  out.arrived = step >= remaining;
  out.position = out.arrived ? in.target : move_toward(in.position, in.target, step);
  out.travelled = out.arrived ? remaining : step;
  out.battery = std::clamp(in.battery - in.consumption * out.travelled / in.capacity, 0.0, 1.0);
  return out;
}

void advance_all_serial(std::span<const MotionInput> in, std::span<MotionResult> out) {
  assert(in.size() == out.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = advance(in[i]);
}

void advance_all_omp(std::span<const MotionInput> in, std::span<MotionResult> out) {
  assert(in.size() == out.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= kMinParallelAgents)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = advance(in[i]);
}

}  // namespace dpdp::kernels
