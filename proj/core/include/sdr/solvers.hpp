#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdr/types.hpp"

namespace sdr {

/// The triple carried by every Douglas-Rachford variant. gamma is constant
/// for the whole run; after any step, x_new = x_old + z_new - y_new.
struct DrState {
  Vector x;
  Vector y;
  Vector z;
  std::int64_t iter = 0;
  double gamma = 0.0;
};

using ProxMap = std::function<Vector(const Vector&)>;

/// One step of deterministic Douglas-Rachford:
///   y <- prox_{gamma F}(x);  z <- prox_{gamma G}(2y - x);  x <- x + z - y.
/// The callables must be bound to the same gamma as the state.
DrState dr_step_deterministic(const DrState& state, const ProxMap& prox_f,
                              const ProxMap& prox_g);

/// One fully stochastic step for the SVM + overlapping-group-lasso problem:
/// F realization is the hinge loss of the drawn sample, G realization is the
/// drawn group's norm weighted by the group count.
DrState dr_step_stochastic(const DrState& state, const Sample& sample,
                           std::size_t group_index, const GroupSpec& groups);

/// Streaming mean of the iterates x_1, ..., x_n.
struct ErgodicAverage {
  Vector mean;
  std::int64_t count = 0;
};
ErgodicAverage update_ergodic(ErgodicAverage avg, const Vector& x);

/// Value at time t of the process obtained by linear interpolation of the
/// iterates on the gamma time grid: iterates[n] at t = n*gamma, affine in
/// between. t beyond the recorded horizon is an error.
Vector interpolate(std::span<const Vector> iterates, double gamma, double t);

/// One per-record row of a run. wall_seconds is the accumulated time of the
/// iteration loop alone (metric evaluation excluded).
struct RunRecord {
  std::int64_t iteration = 0;
  double wall_seconds = 0.0;
  double objective_y = 0.0;        // F+G at the prox point y_n
  double objective_ergodic = 0.0;  // F+G at the ergodic mean
  double dist_ergodic = 0.0;       // ||ergodic mean - reference||; NaN without a reference
};

struct RunOptions {
  std::int64_t record_every = 100;
  std::int64_t snapshot_every = 0;   // 0: keep no iterate snapshots
  const Vector* reference = nullptr; // enables distance metrics and diagnostics
  bool store_step_distances = false; // d(x_k, reference) for every k (0..n)
  double init_scale = 0.0;           // x_0 = init_scale * standard normal draw
  double dykstra_tol = 1e-8;         // inner tolerance of the full-prox variants
  int dykstra_max_cycles = 10000;
};

struct Trajectory {
  double gamma = 0.0;
  std::int64_t iterations = 0;
  Vector initial_point;
  Vector final_x;
  Vector final_ergodic;
  std::vector<RunRecord> records;
  std::vector<Vector> snapshots;     // x_0, x_s, x_2s, ... when snapshot_every = s
  std::int64_t snapshot_every = 0;
  double max_state_norm = 0.0;       // sup_n ||x_n||, n >= 0
  double total_wall_seconds = 0.0;   // iteration loop only
  std::uint64_t sample_draw_hash = 0;
  std::uint64_t group_draw_hash = 0;
  std::vector<double> step_distances;      // when requested; index k = d(x_k, ref)
  double mean_sq_dist_increment = 0.0;     // avg of ||x_{k+1}-ref||^2 - ||x_k-ref||^2
};

/// Fully stochastic Douglas-Rachford: draws one (xi, eta) and one group per
/// iteration. Reproducible from the seed; data, group and initialization
/// draws use independent derived streams. A single run is strictly
/// sequential; independent seeds can run concurrently, each owning its
/// trajectory.
Trajectory run_stochastic_dr(const Dataset& data, const GroupSpec& groups,
                             double gamma, std::int64_t n_iters,
                             std::uint64_t seed, const RunOptions& opts = {});

/// Partially stochastic baseline: draws only (xi, eta); the z-update applies
/// the full prox of G through the Dykstra-like splitting each iteration. Sees
/// the identical data sequence as run_stochastic_dr under the same seed.
Trajectory run_partially_stochastic_dr(const Dataset& data, const GroupSpec& groups,
                                       double gamma, std::int64_t n_iters,
                                       std::uint64_t seed,
                                       const RunOptions& opts = {});

/// Deterministic Douglas-Rachford on the full objective. Only defined when
/// the dataset has a single sample (prox of an averaged hinge has no closed
/// form); the z-update computes the full prox of G.
Trajectory run_deterministic_dr(const Dataset& data, const GroupSpec& groups,
                                double gamma, std::int64_t n_iters,
                                std::uint64_t seed, const RunOptions& opts = {});

}  // namespace sdr
