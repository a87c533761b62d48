// Per-iteration cost of the two online solvers on the default-sized problem.

#include <benchmark/benchmark.h>

#include "sdr/experiments.hpp"
#include "sdr/solvers.hpp"

namespace {

struct Problem {
  sdr::Dataset data;
  sdr::GroupSpec groups;
};

Problem make_problem() {
  sdr::ExperimentConfig config;
  config.sample_count = 200;  // smaller m: dataset generation cost only
  sdr::SeededRng rng(11);
  auto [data, weights] = sdr::generate_dataset(config, rng);
  return {std::move(data),
          sdr::make_chain_groups(config.dimension, config.layout)};
}

void BM_stochastic_dr_iterations(benchmark::State& state) {
  const Problem problem = make_problem();
  const auto iters = static_cast<std::int64_t>(state.range(0));
  sdr::RunOptions opts;
  opts.record_every = iters;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto traj = sdr::run_stochastic_dr(problem.data, problem.groups, 0.05,
                                       iters, seed++, opts);
    benchmark::DoNotOptimize(traj.final_x.data());
  }
  state.SetItemsProcessed(state.iterations() * iters);
}
BENCHMARK(BM_stochastic_dr_iterations)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_partially_stochastic_dr_iterations(benchmark::State& state) {
  const Problem problem = make_problem();
  const auto iters = static_cast<std::int64_t>(state.range(0));
  sdr::RunOptions opts;
  opts.record_every = iters;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto traj = sdr::run_partially_stochastic_dr(problem.data, problem.groups,
                                                 0.05, iters, seed++, opts);
    benchmark::DoNotOptimize(traj.final_x.data());
  }
  state.SetItemsProcessed(state.iterations() * iters);
}
BENCHMARK(BM_partially_stochastic_dr_iterations)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
