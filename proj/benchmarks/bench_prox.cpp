// Microbenchmarks for the prox kernels: the per-iteration cost gap between
// one sampled group prox and the full Dykstra solve is the mechanism behind
// the solver comparison, so keep an eye on it here.

#include <benchmark/benchmark.h>

#include "sdr/experiments.hpp"
#include "sdr/prox.hpp"
#include "sdr/rng.hpp"

namespace {

sdr::Vector random_vector(sdr::SeededRng& rng, int n, double scale) {
  sdr::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
  return v;
}

void BM_prox_group_norm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sdr::SeededRng rng(1);
  const sdr::GroupSpec groups = sdr::make_chain_groups(n, {10, n / 8, n / 40});
  const sdr::Vector x = random_vector(rng, n, 1.0);
  std::size_t j = 0;
  for (auto _ : state) {
    auto result = sdr::prox_group_norm(x, groups.group(j), 10.0, 0.05);
    benchmark::DoNotOptimize(result.point.data());
    j = (j + 1) % groups.group_count();
  }
}
BENCHMARK(BM_prox_group_norm)->Arg(200)->Arg(800);

void BM_prox_overlap_group_sum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sdr::SeededRng rng(1);
  const sdr::GroupSpec groups = sdr::make_chain_groups(n, {10, n / 8, n / 40});
  const sdr::Vector x = random_vector(rng, n, 1.0);
  for (auto _ : state) {
    auto result = sdr::prox_overlap_group_sum(x, groups, 1.0, 0.05, 1e-8, 100000);
    benchmark::DoNotOptimize(result.point.data());
  }
}
BENCHMARK(BM_prox_overlap_group_sum)->Arg(200)->Arg(800);

void BM_prox_hinge_affine(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sdr::SeededRng rng(2);
  const sdr::Vector x = random_vector(rng, n, 1.0);
  const sdr::Sample sample{random_vector(rng, n, 6.0), 1};
  for (auto _ : state) {
    auto result = sdr::prox_hinge_affine(x, sample, 0.05);
    benchmark::DoNotOptimize(result.point.data());
  }
}
BENCHMARK(BM_prox_hinge_affine)->Arg(200)->Arg(800);

void BM_prox_logistic_affine(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sdr::SeededRng rng(3);
  const sdr::Vector x = random_vector(rng, n, 1.0);
  const sdr::Sample sample{random_vector(rng, n, 6.0), -1};
  for (auto _ : state) {
    auto result = sdr::prox_logistic_affine(x, sample, 0.05);
    benchmark::DoNotOptimize(result.point.data());
  }
}
BENCHMARK(BM_prox_logistic_affine)->Arg(200)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
