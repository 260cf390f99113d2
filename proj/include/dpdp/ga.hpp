#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "dpdp/fitness.hpp"
#include "dpdp/genome.hpp"

namespace dpdp {

using Rng = std::mt19937_64;

struct GaConfig {
  int pop_size = 20;
  int max_generations = 30;
  double mutation_prob = 0.02;  // per individual
  double selection_rate = 0.80;
  int elitism_count = 1;
  std::optional<double> early_stop_fitness;
  std::uint64_t seed = 1;
  /// Score populations with the OpenMP kernel. Output is identical either way.
  bool parallel_evaluation = true;

  bool operator==(const GaConfig&) const = default;

  /// Throws ConfigError.
  void validate() const;
};

struct EvolutionReport {
  Genome best;
  FitnessBreakdown best_fitness;
  /// Best aggregate fitness of each evaluated population.
  std::vector<double> history;
  int generations = 0;
  bool early_stopped = false;

  bool operator==(const EvolutionReport&) const = default;
};

/// Uniform over the precedence-feasible orderings of `stops`.
Genome random_genome(std::span<const Stop> stops, Rng& rng);

/// Indices of the ceil(rate * n) fittest members, best first; equal fitness
/// keeps the lower index first.
std::vector<std::size_t> select(std::span<const double> fitness, double rate);

/// p1[0, cut) followed by the remaining stops in p2's order.
Genome crossover_one_point(std::span<const Stop> p1, std::span<const Stop> p2, std::size_t cut);

/// Swaps g[pos] and g[pos + 1] unless that would put a delivery before its
/// own pickup. Returns whether the swap happened.
bool swap_adjacent_if_legal(Genome& g, std::size_t pos);

/// With probability `prob`, one adjacent swap at a random legal position
/// (up to 8 draws, then unchanged).
Genome mutate(Genome g, Rng& rng, double prob);

/// Elites (best first) followed by mutated one-point children of parents
/// drawn from the selected pool; always `config.pop_size` genomes.
std::vector<Genome> next_generation(std::span<const Genome> population, std::span<const double> scores,
                                    const GaConfig& config, Rng& rng);

/// The generational loop: evaluate, truncate, cross, mutate, keep elites.
/// An empty stop set returns the empty plan without running any generation.
EvolutionReport evolve(std::span<const Stop> stops, const GaConfig& config,
                       const FitnessEvaluator& evaluator);

/// Each pickup becomes (Move depot, Take) and each delivery (Move client,
/// Delivery), all unexecuted.
std::vector<Action> genome_to_actions(std::span<const Stop> genome, const RequestTable& requests);

/// Derives an independent seed for a (base, stream, index) triple.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace dpdp
