// Parallel kernels against the serial reference implementations.

#include <benchmark/benchmark.h>

#include "xmarket/coordination.hpp"
#include "xmarket/generators.hpp"
#include "xmarket/local_search.hpp"
#include "xmarket/stability.hpp"

using namespace xmarket;

namespace {

// Nothing blocks here, so every candidate is visited.
MarketInstance flat_market(std::size_t n) {
  return MarketInstance(n, {}, {}, std::vector<Int>(n * n, 0), std::vector<CostSpec>(n));
}

MarketInstance random_market(std::size_t n) {
  MarketGenOptions opt;
  opt.agents = n;
  opt.max_degree = 3;
  opt.seed = 42;
  return generate_market(opt);
}

template <auto Check>
void BM_full_scan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MarketInstance m = flat_market(n);
  Allocation a = Allocation::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(Check(m, a, static_cast<int>(n)));
  state.counters["candidates"] = candidate_exchange_count(n, static_cast<int>(n));
}

template <auto Enumerate>
void BM_enumerate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MarketInstance m = random_market(n);
  Allocation a = Allocation::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(Enumerate(m, a, 4));
}

template <auto Check>
void BM_equilibrium(benchmark::State& state) {
  GameGenOptions opt;
  opt.players = static_cast<std::size_t>(state.range(0));
  opt.strategies = 3;
  opt.max_degree = 3;
  opt.seed = 7;
  CoordinationGame g = generate_coordination_game(opt);
  StrategyProfile s;
  for (std::size_t p = 0; p < g.size(); ++p) s.push_back(g.strategy_set(static_cast<int>(p)).front());
  for (auto _ : state) benchmark::DoNotOptimize(Check(g, s, 3));
}

void BM_local_search(benchmark::State& state) {
  MarketInstance m = random_market(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_2_stable(m, SearchConfig{}));
}

}  // namespace

BENCHMARK(BM_full_scan<static_cast<StabilityReport (*)(const MarketInstance&, const Allocation&, int)>(
              &check_k_stable)>)
    ->Name("check_k_stable/parallel")->DenseRange(6, 9);
BENCHMARK(BM_full_scan<static_cast<StabilityReport (*)(const MarketInstance&, const Allocation&, int)>(
              &reference::check_k_stable)>)
    ->Name("check_k_stable/reference")->DenseRange(6, 9);
BENCHMARK(BM_enumerate<static_cast<std::vector<CoalitionalExchange> (*)(const MarketInstance&, const Allocation&, int)>(
              &enumerate_blocking)>)
    ->Name("enumerate_blocking/parallel")->Arg(8)->Arg(10);
BENCHMARK(BM_enumerate<static_cast<std::vector<CoalitionalExchange> (*)(const MarketInstance&, const Allocation&, int)>(
              &reference::enumerate_blocking)>)
    ->Name("enumerate_blocking/reference")->Arg(8)->Arg(10);
BENCHMARK(BM_equilibrium<static_cast<DeviationReport (*)(const CoordinationGame&, const StrategyProfile&, int)>(
              &check_k_equilibrium)>)
    ->Name("check_k_equilibrium/parallel")->Arg(6)->Arg(9);
BENCHMARK(BM_equilibrium<static_cast<DeviationReport (*)(const CoordinationGame&, const StrategyProfile&, int)>(
              &reference::check_k_equilibrium)>)
    ->Name("check_k_equilibrium/reference")->Arg(6)->Arg(9);
BENCHMARK(BM_local_search)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
