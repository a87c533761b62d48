#include "sdr/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sdr/detail/prox_kernels.hpp"
#include "sdr/oracle.hpp"
#include "sdr/prox.hpp"
#include "sdr/rng.hpp"

namespace sdr {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

enum class Algo { stochastic, partially_stochastic, deterministic };

Trajectory run_dr(Algo algo, const Dataset& data, const GroupSpec& groups,
                  double gamma, std::int64_t n_iters, std::uint64_t seed,
                  const RunOptions& opts) {
  if (!(gamma > 0.0))
    fail(ErrorKind::invalid_argument, "run_dr: gamma must be > 0");
  if (n_iters < 1)
    fail(ErrorKind::invalid_argument, "run_dr: n_iters must be >= 1");
  if (opts.record_every < 1)
    fail(ErrorKind::invalid_argument, "run_dr: record_every must be >= 1");
  if (data.dimension() != groups.dimension())
    fail(ErrorKind::dimension_mismatch,
         "run_dr: dataset and group dimensions differ");
  if (algo == Algo::deterministic && data.size() != 1)
    fail(ErrorKind::invalid_argument,
         "run_dr: the deterministic variant needs a single-sample dataset "
         "(prox of an averaged hinge loss has no closed form)");

  const Eigen::Index n = data.dimension();
  const std::size_t g = groups.group_count();
  const double group_weight = static_cast<double>(g);

  SeededRng init_rng = SeededRng::derive(seed, RngStream::init);
  SeededRng data_rng = SeededRng::derive(seed, RngStream::data);
  SeededRng group_rng = SeededRng::derive(seed, RngStream::group);

  Trajectory out;
  out.gamma = gamma;
  out.iterations = n_iters;
  out.snapshot_every = opts.snapshot_every;

  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = opts.init_scale * init_rng.next_normal();
  out.initial_point = x;

  const Vector* ref = opts.reference;
  if (ref && ref->size() != n)
    fail(ErrorKind::dimension_mismatch, "run_dr: reference dimension mismatch");

  Vector y(n), z(n), refl(n), x_next(n);
  ErgodicAverage ergodic{Vector::Zero(n), 0};
  detail::DykstraWorkspace dykstra_ws;
  DrawHash sample_hash, group_hash;
  ObjectiveEvaluator objective(data, groups);

  out.max_state_norm = x.norm();
  double prev_sq_dist = 0.0;
  if (ref) {
    prev_sq_dist = (x - *ref).squaredNorm();
    if (opts.store_step_distances) {
      out.step_distances.reserve(static_cast<std::size_t>(n_iters) + 1);
      out.step_distances.push_back(std::sqrt(prev_sq_dist));
    }
  }
  double sq_increment_sum = 0.0;

  if (opts.snapshot_every > 0) out.snapshots.push_back(x);

  const auto record_row = [&](std::int64_t iteration, double wall) {
    RunRecord row;
    row.iteration = iteration;
    row.wall_seconds = wall;
    row.objective_y = objective(iteration == 0 ? x : y);
    row.objective_ergodic =
        objective(ergodic.count > 0 ? ergodic.mean : x);
    row.dist_ergodic =
        ref ? ((ergodic.count > 0 ? ergodic.mean : x) - *ref).norm()
            : std::numeric_limits<double>::quiet_NaN();
    out.records.push_back(row);
  };

  record_row(0, 0.0);

  double wall = 0.0;
  Clock::time_point segment_start = Clock::now();
  for (std::int64_t k = 1; k <= n_iters; ++k) {
    // y-update: prox of the hinge realization
    std::size_t sample_idx = 0;
    if (algo != Algo::deterministic) {
      sample_idx = data_rng.next_index(data.size());
      sample_hash.update(static_cast<std::uint64_t>(sample_idx));
    }
    const Sample& sample = data[sample_idx];
    detail::hinge_prox_into(y, x, sample.features, sample.label,
                            data.feature_sq_norm(sample_idx), gamma);

    // z-update: reflected point through the regularizer prox
    refl = 2.0 * y - x;
    if (algo == Algo::stochastic) {
      const std::size_t j = group_rng.next_index(g);
      group_hash.update(static_cast<std::uint64_t>(j));
      z = refl;
      detail::block_soft_threshold(z, groups.group(j), gamma * group_weight);
    } else {
      z = refl;
      detail::dykstra_overlap_prox(z, groups, 1.0, gamma, opts.dykstra_tol,
                                   opts.dykstra_max_cycles, dykstra_ws);
    }

    detail::dr_combine_into(x_next, x, y, z);
    x.swap(x_next);

    if (!x.allFinite())
      fail(ErrorKind::divergence,
           "run_dr: non-finite state detected at iteration " + std::to_string(k));

    ergodic = update_ergodic(std::move(ergodic), x);
    out.max_state_norm = std::max(out.max_state_norm, x.norm());
    if (ref) {
      const double sq = (x - *ref).squaredNorm();
      sq_increment_sum += sq - prev_sq_dist;
      prev_sq_dist = sq;
      if (opts.store_step_distances) out.step_distances.push_back(std::sqrt(sq));
    }

    const bool snapshot_due =
        opts.snapshot_every > 0 && (k % opts.snapshot_every == 0 || k == n_iters);
    const bool record_due = (k % opts.record_every == 0) || k == n_iters;
    if (record_due || snapshot_due) {
      wall += seconds_between(segment_start, Clock::now());
      if (snapshot_due) out.snapshots.push_back(x);
      if (record_due) record_row(k, wall);
      segment_start = Clock::now();
    }
  }

  out.total_wall_seconds = wall;
  out.final_x = x;
  out.final_ergodic = ergodic.count > 0 ? ergodic.mean : x;
  out.sample_draw_hash = sample_hash.value;
  out.group_draw_hash = group_hash.value;
  out.mean_sq_dist_increment =
      ref ? sq_increment_sum / static_cast<double>(n_iters) : 0.0;
  return out;
}

}  // namespace

DrState dr_step_deterministic(const DrState& state, const ProxMap& prox_f,
                              const ProxMap& prox_g) {
  DrState next;
  next.gamma = state.gamma;
  next.iter = state.iter + 1;
  next.y = prox_f(state.x);
  next.z = prox_g(2.0 * next.y - state.x);
  next.x.resize(state.x.size());
  detail::dr_combine_into(next.x, state.x, next.y, next.z);
  return next;
}

DrState dr_step_stochastic(const DrState& state, const Sample& sample,
                           std::size_t group_index, const GroupSpec& groups) {
  if (group_index >= groups.group_count())
    fail(ErrorKind::invalid_index,
         "dr_step_stochastic: group index " + std::to_string(group_index) +
             " out of range");
  const double gamma = state.gamma;
  const double weight = static_cast<double>(groups.group_count());
  const auto s = groups.group(group_index);
  const auto prox_f = [&](const Vector& v) {
    Vector y(v.size());
    detail::hinge_prox_into(y, v, sample.features, sample.label,
                            sample.features.squaredNorm(), gamma);
    return y;
  };
  const auto prox_g = [&](const Vector& v) {
    Vector z = v;
    detail::block_soft_threshold(z, s, gamma * weight);
    return z;
  };
  return dr_step_deterministic(state, prox_f, prox_g);
}

ErgodicAverage update_ergodic(ErgodicAverage avg, const Vector& x) {
  if (avg.count == 0 && avg.mean.size() == 0) avg.mean = Vector::Zero(x.size());
  if (avg.mean.size() != x.size())
    fail(ErrorKind::dimension_mismatch, "update_ergodic: dimension mismatch");
  avg.count += 1;
  avg.mean += (x - avg.mean) / static_cast<double>(avg.count);
  return avg;
}

Vector interpolate(std::span<const Vector> iterates, double gamma, double t) {
  if (iterates.empty())
    fail(ErrorKind::invalid_argument, "interpolate: no iterates");
  if (!(gamma > 0.0))
    fail(ErrorKind::invalid_argument, "interpolate: gamma must be > 0");
  const double horizon = gamma * static_cast<double>(iterates.size() - 1);
  if (!(t >= 0.0) || t > horizon)
    fail(ErrorKind::invalid_argument,
         "interpolate: t = " + std::to_string(t) + " outside [0, " +
             std::to_string(horizon) + "]");
  const double pos = t / gamma;
  const double rounded = std::round(pos);
  // snap to the grid so that t = n*gamma returns the iterate exactly
  if (std::abs(pos - rounded) < 1e-9 &&
      rounded >= 0.0 && rounded <= static_cast<double>(iterates.size() - 1)) {
    return iterates[static_cast<std::size_t>(rounded)];
  }
  const auto n = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(n);
  return iterates[n] + frac * (iterates[n + 1] - iterates[n]);
}

Trajectory run_stochastic_dr(const Dataset& data, const GroupSpec& groups,
                             double gamma, std::int64_t n_iters,
                             std::uint64_t seed, const RunOptions& opts) {
  return run_dr(Algo::stochastic, data, groups, gamma, n_iters, seed, opts);
}

Trajectory run_partially_stochastic_dr(const Dataset& data, const GroupSpec& groups,
                                       double gamma, std::int64_t n_iters,
                                       std::uint64_t seed, const RunOptions& opts) {
  return run_dr(Algo::partially_stochastic, data, groups, gamma, n_iters, seed,
                opts);
}

Trajectory run_deterministic_dr(const Dataset& data, const GroupSpec& groups,
                                double gamma, std::int64_t n_iters,
                                std::uint64_t seed, const RunOptions& opts) {
  return run_dr(Algo::deterministic, data, groups, gamma, n_iters, seed, opts);
}

}  // namespace sdr
