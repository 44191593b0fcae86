#include <cmath>

#include <benchmark/benchmark.h>

#include "sisnet/analysis.hpp"
#include "sisnet/diagnostics.hpp"
#include "sisnet/fixtures.hpp"
#include "sisnet/identification.hpp"
#include "sisnet/spectral.hpp"

namespace {

using namespace sisnet;

SpreadParams geometric_params(std::size_t n, double beta) {
  SplitMix64 rng(n);
  const double box = 7.0 * std::sqrt(static_cast<double>(n) / 40.0);
  const GeometricFixture f = geometric_fixture(rng, n, 2.0, box);
  const double h = 0.9 / (beta * f.graph.row_sums().maxCoeff() + 0.1);
  return SpreadParams::homogeneous(h, beta, 0.1, f.graph);
}

void BM_SpectralAbscissa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = threshold_matrix(geometric_params(n, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_abscissa(m).spectral_abscissa);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralAbscissa)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_SimulateEuler(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 1.0);
  SplitMix64 rng(7);
  const StateVector x0 = random_binary_state(rng, n);
  const ScopedWarningHandler quiet([](std::string_view) {});
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, x0, 100, Model::kEuler).states.data());
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SimulateEuler)->RangeMultiplier(2)->Range(16, 256);

void BM_SimulateProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 0.1).with_step(1.0);
  SplitMix64 rng(8);
  const StateVector x0 = random_binary_state(rng, n);
  const ScopedWarningHandler quiet([](std::string_view) {});
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, x0, 100, Model::kProduct).states.data());
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SimulateProduct)->RangeMultiplier(2)->Range(16, 256);

void BM_IdentifyHomogeneous(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 1.0);
  SplitMix64 rng(9);
  const Trajectory t = simulate(p, random_binary_state(rng, n), 50, Model::kEuler);
  for (auto _ : state) benchmark::DoNotOptimize(identify_homogeneous(t, p.adjacency(), p.h()).beta_hat(0));
}
BENCHMARK(BM_IdentifyHomogeneous)->RangeMultiplier(2)->Range(16, 256);

void BM_IdentifyHeterogeneous(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 1.0);
  SplitMix64 rng(10);
  const Trajectory t = simulate(p, random_interior_state(rng, n), 10, Model::kEuler);
  for (auto _ : state) benchmark::DoNotOptimize(identify_heterogeneous(t, p.adjacency(), p.h()).residual_norm);
}
BENCHMARK(BM_IdentifyHeterogeneous)->RangeMultiplier(2)->Range(16, 256);

void BM_LyapunovWeights(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_weights(p).max_eig_of_mtpm_minus_p);
}
BENCHMARK(BM_LyapunovWeights)->RangeMultiplier(2)->Range(16, 128);

void BM_EndemicEquilibrium(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpreadParams p = geometric_params(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(endemic_equilibrium(p).residual);
}
BENCHMARK(BM_EndemicEquilibrium)->RangeMultiplier(2)->Range(16, 128);

}  // namespace

BENCHMARK_MAIN();
