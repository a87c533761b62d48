#include "sdr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sdr/detail/parallel.hpp"

namespace sdr {

GroupSpec make_chain_groups(int dimension, const GroupLayout& layout) {
  if (layout.count < 1)
    fail(ErrorKind::config, "groups.count: must be >= 1");
  if (layout.size < 1)
    fail(ErrorKind::config, "groups.size: must be >= 1");
  if (layout.overlap < 0 || layout.overlap >= layout.size)
    fail(ErrorKind::config, "groups.overlap: must be in [0, groups.size)");
  if (layout.size > dimension)
    fail(ErrorKind::config, "groups.size: exceeds the dimension");

  const int stride = layout.size - layout.overlap;
  std::vector<std::vector<int>> groups;
  groups.reserve(static_cast<std::size_t>(layout.count));
  for (int j = 0; j < layout.count; ++j) {
    int start = j * stride;
    if (start + layout.size > dimension) start = dimension - layout.size;
    std::vector<int> s(static_cast<std::size_t>(layout.size));
    std::iota(s.begin(), s.end(), start);
    groups.push_back(std::move(s));
  }

  std::vector<bool> covered(static_cast<std::size_t>(dimension), false);
  for (const auto& s : groups)
    for (int idx : s) covered[static_cast<std::size_t>(idx)] = true;
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
    fail(ErrorKind::config,
         "groups: chain layout does not cover every coordinate; increase "
         "count or size");
  return GroupSpec(dimension, std::move(groups));
}

std::pair<Dataset, Vector> generate_dataset(const ExperimentConfig& config,
                                            SeededRng& rng) {
  if (config.sample_count < 1)
    fail(ErrorKind::config, "sample_count: must be >= 1");
  const GroupSpec groups = make_chain_groups(config.dimension, config.layout);
  const int n = config.dimension;
  const auto g = groups.group_count();

  // active groups drawn without replacement
  const std::size_t k = std::min<std::size_t>(
      g, static_cast<std::size_t>(std::max(config.active_groups, 1)));
  std::vector<std::size_t> order(g);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.next_index(g - i);
    std::swap(order[i], order[j]);
  }

  Vector weights = Vector::Zero(n);
  for (std::size_t i = 0; i < k; ++i)
    for (int idx : groups.group(order[i]))
      if (weights[idx] == 0.0) weights[idx] = rng.next_normal();
  const bool has_signal = weights.norm() > 0.0;
  const Vector unit_weights =
      has_signal ? Vector(weights / weights.norm()) : Vector(Vector::Zero(n));

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(config.sample_count));
  Vector draw(n);
  for (int i = 0; i < config.sample_count; ++i) {
    // rejection keeps the normalized planted margin clear of the gap
    do {
      for (int d = 0; d < n; ++d) draw[d] = rng.next_normal();
    } while (config.margin_gap > 0.0 && has_signal &&
             std::abs(unit_weights.dot(draw)) < config.margin_gap);
    Sample s;
    s.features = config.feature_scale * draw;
    s.label = weights.dot(s.features) >= 0.0 ? 1 : -1;
    // flip decision always consumes one draw so the stream layout does not
    // depend on the noise level
    const double u = rng.next_unit();
    if (u < config.noise) s.label = -s.label;
    samples.push_back(std::move(s));
  }
  return {Dataset(std::move(samples)), std::move(weights)};
}

HistogramData histogram(const Vector& values, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo))
    fail(ErrorKind::invalid_argument, "histogram: bad bin layout");
  HistogramData h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    int b = static_cast<int>((values[i] - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

namespace {

double time_to_threshold(const std::vector<RunRecord>& records, double threshold) {
  for (const RunRecord& r : records)
    if (r.objective_ergodic <= threshold) return r.wall_seconds;
  return std::numeric_limits<double>::infinity();
}

AlgorithmSeries make_series(int seed_index, const Trajectory& traj,
                            double threshold) {
  AlgorithmSeries s;
  s.seed_index = seed_index;
  s.records = traj.records;
  s.time_to_threshold = time_to_threshold(traj.records, threshold);
  s.final_objective_ergodic = traj.records.back().objective_ergodic;
  s.final_dist_ergodic = traj.records.back().dist_ergodic;
  s.sample_draw_hash = traj.sample_draw_hash;
  s.mean_iteration_seconds =
      traj.total_wall_seconds / static_cast<double>(traj.iterations);
  return s;
}

}  // namespace

BenchmarkReport run_benchmark(const ExperimentConfig& config,
                              const Dataset& data, const GroupSpec& groups,
                              const ReferenceSolution& ref) {
  if (config.n_seeds < 1)
    fail(ErrorKind::config, "seeds: must be >= 1");

  BenchmarkReport report;
  report.reference_objective = ref.objective;
  report.threshold = 1.05 * ref.objective;
  report.gamma = config.benchmark_gamma;
  report.stochastic.resize(static_cast<std::size_t>(config.n_seeds));
  report.partial.resize(static_cast<std::size_t>(config.n_seeds));

  std::vector<Vector> final_sdr(static_cast<std::size_t>(config.n_seeds));
  std::vector<Vector> final_psdr(static_cast<std::size_t>(config.n_seeds));
  Vector init_point;

  RunOptions opts;
  opts.record_every = config.record_every;
  opts.reference = &ref.point;
  opts.init_scale = config.init_scale;
  opts.dykstra_tol = config.dykstra_tol;

  // cells: 2 algorithms x n_seeds, embarrassingly parallel
  detail::run_parallel(2 * config.n_seeds, [&](int cell) {
    const int seed_index = cell / 2;
    const bool partial = (cell % 2) != 0;
    const std::uint64_t run_seed = config.seed + static_cast<std::uint64_t>(seed_index);
    Trajectory traj =
        partial ? run_partially_stochastic_dr(data, groups, config.benchmark_gamma,
                                              config.n_iters, run_seed, opts)
                : run_stochastic_dr(data, groups, config.benchmark_gamma,
                                    config.n_iters, run_seed, opts);
    auto& slot = partial ? report.partial[static_cast<std::size_t>(seed_index)]
                         : report.stochastic[static_cast<std::size_t>(seed_index)];
    slot = make_series(seed_index, traj, report.threshold);
    (partial ? final_psdr : final_sdr)[static_cast<std::size_t>(seed_index)] =
        traj.final_x;
    if (!partial && seed_index == 0) init_point = traj.initial_point;
  });

  for (int k = 0; k < config.n_seeds; ++k) {
    const auto& s = report.stochastic[static_cast<std::size_t>(k)];
    const auto& p = report.partial[static_cast<std::size_t>(k)];
    if (s.sample_draw_hash != p.sample_draw_hash)
      fail(ErrorKind::invalid_argument,
           "run_benchmark: paired seed " + std::to_string(k) +
               " consumed different data streams");
    if (s.time_to_threshold < p.time_to_threshold) ++report.stochastic_wins;
  }

  // Figure-style coordinate histograms: the initialization and the last
  // iterate of each algorithm (seed 0), on a common symmetric range.
  double span = 1e-12;
  for (const Vector* v : {&init_point, &final_sdr[0], &final_psdr[0]})
    span = std::max(span, v->cwiseAbs().maxCoeff());
  constexpr int kBins = 41;
  report.init_histogram = histogram(init_point, kBins, -span, span);
  report.stochastic_last_histogram = histogram(final_sdr[0], kBins, -span, span);
  report.partial_last_histogram = histogram(final_psdr[0], kBins, -span, span);
  return report;
}

}  // namespace sdr
