#include "dpdp/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dpdp/errors.hpp"
#include "dpdp/kernels.hpp"

namespace dpdp {

void GaConfig::validate() const {
  if (pop_size < 2) throw ConfigError("pop_size must be at least 2");
  if (max_generations < 1) throw ConfigError("max_generations must be at least 1");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
    throw ConfigError("mutation_prob must lie in [0, 1]");
  if (!(selection_rate > 0.0 && selection_rate <= 1.0))
    throw ConfigError("selection_rate must lie in (0, 1]");
  if (elitism_count < 0 || elitism_count >= pop_size)
    throw ConfigError("elitism_count must lie in [0, pop_size)");
}

Genome random_genome(std::span<const Stop> stops, Rng& rng) {
  Genome g(stops.begin(), stops.end());
  std::shuffle(g.begin(), g.end(), rng);
  // Swapping the two positions of each out-of-order pair maps exactly 2^m
  // uniform permutations onto each feasible one.
  std::map<RequestId, std::size_t> delivery_at;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].kind == StopKind::delivery) {
      delivery_at[g[i].request] = i;
    } else if (auto d = delivery_at.find(g[i].request); d != delivery_at.end()) {
      std::swap(g[i], g[d->second]);
      delivery_at.erase(d);
    }
  }
  return g;
}

std::vector<std::size_t> select(std::span<const double> fitness, double rate) {
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  // The epsilon keeps 0.8 * 20 at 16 despite binary rounding.
  auto keep = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(fitness.size()) - 1e-9));
  keep = std::clamp<std::size_t>(keep, fitness.empty() ? 0 : 1, fitness.size());
  order.resize(keep);
  return order;
}

Genome crossover_one_point(std::span<const Stop> p1, std::span<const Stop> p2, std::size_t cut) {
  cut = std::min(cut, p1.size());
  Genome child(p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(cut));
  std::set<Stop> taken(child.begin(), child.end());
  for (const auto& s : p2)
    if (!taken.contains(s)) child.push_back(s);
  return child;
}

bool swap_adjacent_if_legal(Genome& g, std::size_t pos) {
  if (pos + 1 >= g.size()) return false;
  const Stop& a = g[pos];
  const Stop& b = g[pos + 1];
  if (a.request == b.request && a.kind == StopKind::pickup) return false;
  std::swap(g[pos], g[pos + 1]);
  return true;
}

Genome mutate(Genome g, Rng& rng, double prob) {
  if (g.size() < 2 || prob <= 0.0) return g;
  std::bernoulli_distribution fire(prob);
  if (!fire(rng)) return g;
  std::uniform_int_distribution<std::size_t> pos(0, g.size() - 2);
  for (int attempt = 0; attempt < 8; ++attempt)
    if (swap_adjacent_if_legal(g, pos(rng))) break;
  return g;
}

namespace {

std::size_t argmax(std::span<const double> xs) {
  return static_cast<std::size_t>(std::max_element(xs.begin(), xs.end()) - xs.begin());
}

}  // namespace

std::vector<Genome> next_generation(std::span<const Genome> population, std::span<const double> scores,
                                    const GaConfig& config, Rng& rng) {
  const auto n = static_cast<std::size_t>(config.pop_size);
  const std::size_t genome_size = population.empty() ? 0 : population.front().size();
  const auto parents = select(scores, config.selection_rate);
  std::vector<Genome> next;
  next.reserve(n);
  const auto ranked = select(scores, 1.0);
  for (int e = 0; e < config.elitism_count; ++e) next.push_back(population[ranked[e]]);

  std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
  std::uniform_int_distribution<std::size_t> cut_at(0, genome_size);
  while (next.size() < n) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (parents.size() > 1 && b == a) b = pick(rng);
    Genome child = crossover_one_point(population[parents[a]], population[parents[b]], cut_at(rng));
    next.push_back(mutate(std::move(child), rng, config.mutation_prob));
  }
  return next;
}

EvolutionReport evolve(std::span<const Stop> stops, const GaConfig& config,
                       const FitnessEvaluator& evaluator) {
  config.validate();
  EvolutionReport report;
  if (stops.empty()) {
    report.best_fitness = evaluator.evaluate(report.best);
    return report;
  }

  Rng rng(config.seed);
  const auto n = static_cast<std::size_t>(config.pop_size);
  std::vector<Genome> population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) population.push_back(random_genome(stops, rng));

  std::vector<double> scores(n);
  double best_score = -1.0;
  for (int gen = 0; gen < config.max_generations; ++gen) {
    if (config.parallel_evaluation)
      kernels::evaluate_population_omp(evaluator, population, scores);
    else
      kernels::evaluate_population_serial(evaluator, population, scores);

    const std::size_t top = argmax(scores);
    report.history.push_back(scores[top]);
    report.generations = gen + 1;
    if (scores[top] > best_score) {
      best_score = scores[top];
      report.best = population[top];
    }
    if (config.early_stop_fitness && best_score >= *config.early_stop_fitness) {
      report.early_stopped = true;
      break;
    }
    if (gen + 1 == config.max_generations) break;

    population = next_generation(population, scores, config, rng);
  }
  report.best_fitness = evaluator.evaluate(report.best);
  return report;
}

std::vector<Action> genome_to_actions(std::span<const Stop> genome, const RequestTable& requests) {
  std::vector<Action> out;
  out.reserve(genome.size() * 2);
  for (const auto& s : genome) {
    const Request& r = requests.at(s.request);
    const auto expanded = expand_request(r);
    const std::size_t first = s.kind == StopKind::pickup ? 0 : 2;
    out.push_back(expanded[first]);
    out.push_back(expanded[first + 1]);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept {
  // splitmix64 finaliser over a combined key.
  std::uint64_t z = base ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (index * 0xD1B54A32D192ED03ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dpdp
