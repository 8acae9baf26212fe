#include <benchmark/benchmark.h>

#include <vector>

#include "hestoncal/calibrator.hpp"
#include "hestoncal/particle_filter.hpp"
#include "hestoncal/rng.hpp"
#include "hestoncal/simulation.hpp"

using namespace hestoncal;

namespace {

constexpr double kDt = 1.0 / 252.0;
const HestonParams kTruth{0.1, 1.0, 0.05, 0.01, -0.5};

ReturnSeries daily_returns(double years) {
  const auto path = simulate_heston(kTruth, TimeGrid::from_maturity(years, kDt), 100.0,
                                    kTruth.theta, 1);
  return ReturnSeries::from_prices(path.prices, kDt);
}

void BM_PhiloxBlock(benchmark::State& state) {
  std::array<std::uint32_t, 4> ctr{0, 0, 0, 0};
  for (auto _ : state) {
    ctr = philox4x32(ctr, {0x12345678u, 0x9abcdef0u});
    benchmark::DoNotOptimize(ctr);
  }
}
BENCHMARK(BM_PhiloxBlock);

void BM_NormalDraw(benchmark::State& state) {
  CounterStream rng(7, {0, Phase::Propagate, 0});
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_NormalDraw);

void BM_BuildCdf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterStream rng(3, {0, Phase::Simulate, 0});
  std::vector<double> values(n), weights(n, 1.0 / static_cast<double>(n));
  for (auto& v : values) v = 0.05 + 0.01 * rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(build_cdf(values, weights));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildCdf)->RangeMultiplier(10)->Range(100, 10000);

void BM_Resample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterStream init(3, {0, Phase::Simulate, 0});
  ParticleCloud cloud = init_particles(0.05, n);
  for (auto& v : cloud.values) v = 0.05 + 0.01 * init.normal();
  for (auto _ : state) {
    CounterStream rng(5, {0, Phase::Resample, 0});
    benchmark::DoNotOptimize(resample(cloud, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Resample)->RangeMultiplier(10)->Range(100, 10000);

void BM_FilterPass(benchmark::State& state) {
  const auto returns = daily_returns(1.0);
  PriorConfig priors;
  priors.n_particles = static_cast<std::size_t>(state.range(0));
  const bool jumps = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_filter(returns, kTruth, priors, jumps, RandomSource(9), 0));
  }
}
BENCHMARK(BM_FilterPass)
    ->ArgsProduct({{100, 1000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_PosteriorCycle(benchmark::State& state) {
  const auto path =
      simulate_heston(kTruth, TimeGrid::from_maturity(3.0, kDt), 100.0, kTruth.theta, 1);
  const auto returns = ReturnSeries::from_prices(path.prices, kDt);
  const PriorConfig priors;
  for (auto _ : state) {
    CounterStream rng(11, {1, Phase::PosteriorDraw, 0});
    benchmark::DoNotOptimize(
        run_posterior_cycle(returns, path.true_vol, priors, kTruth, 1e-4, rng));
  }
}
BENCHMARK(BM_PosteriorCycle)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
