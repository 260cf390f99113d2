// Serial reference kernels against their OpenMP counterparts.

#include <random>

#include <benchmark/benchmark.h>

#include "dpdp/ga.hpp"
#include "dpdp/kernels.hpp"

using namespace dpdp;

namespace {

struct Instance {
  World world;
  RequestTable requests;
  Genome stops;
};

Instance make_instance(int m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1000);
  Instance in;
  in.world.bounds = {{0, 0}, {1000, 1000}};
  in.world.articles.insert(ArticleId{"A"});
  for (int i = 1; i <= m; ++i) {
    const DepotId d{"D" + std::to_string(i)};
    const ClientId c{"C" + std::to_string(i)};
    in.world.depots[d] = Depot{d, {u(rng), u(rng)}, {{ArticleId{"A"}, 10}}};
    in.world.clients[c] = Client{c, {u(rng), u(rng)}};
    in.requests[RequestId{i}] = Request{RequestId{i}, d, ArticleId{"A"}, c, 1, AgentId{"X"}, false, 0};
    in.stops.push_back(Stop::pickup(RequestId{i}));
    in.stops.push_back(Stop::delivery(RequestId{i}));
  }
  for (int k = 0; k < 20; ++k) {
    const double x = u(rng), y = u(rng);
    in.world.obstacles.push_back({Rect{{x, y}, {x + 40, y + 40}}});
  }
  return in;
}

template <bool Parallel>
void BM_EvaluatePopulation(benchmark::State& state) {
  const Instance in = make_instance(20);
  const std::vector<ConstraintSpec> pair{{ConstraintKind::distance, 1}, {ConstraintKind::obstacles, 1}};
  const FitnessEvaluator ev(in.world, in.requests, {0, 0}, pair, {Legacy{}, 1.0});
  Rng rng(2);
  std::vector<Genome> pop;
  for (int i = 0; i < state.range(0); ++i) pop.push_back(random_genome(in.stops, rng));
  std::vector<double> scores(pop.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::evaluate_population_omp(ev, pop, scores);
    else
      kernels::evaluate_population_serial(ev, pop, scores);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_AdvanceAgents(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1000);
  std::vector<kernels::MotionInput> in(static_cast<std::size_t>(state.range(0)));
  for (auto& m : in) m = {{u(rng), u(rng)}, {u(rng), u(rng)}, 5.0, 0.8, 1000.0, 0.1};
  std::vector<kernels::MotionResult> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::advance_all_omp(in, out);
    else
      kernels::advance_all_serial(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EvaluatePopulation<false>)->Name("evaluate_population/serial")->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_EvaluatePopulation<true>)->Name("evaluate_population/omp")->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_AdvanceAgents<false>)->Name("advance_agents/serial")->RangeMultiplier(8)->Range(8, 1 << 18);
BENCHMARK(BM_AdvanceAgents<true>)->Name("advance_agents/omp")->RangeMultiplier(8)->Range(8, 1 << 18);

BENCHMARK_MAIN();
