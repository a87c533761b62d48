#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdr/types.hpp"

namespace sdr {

/// Empirical objective of the application problem:
/// (1/m) sum_i max(0, 1 - eta_i <x, xi_i>)  +  sum_j ||x_{S_j}||.
double empirical_objective(const Vector& x, const Dataset& data,
                           const GroupSpec& groups);

/// The two terms separately.
double empirical_hinge_risk(const Vector& x, const Dataset& data);
double group_penalty(const Vector& x, const GroupSpec& groups);

/// Dense cached view of a dataset for repeated objective evaluations
/// (matrix-vector margins instead of a per-sample loop). Same value as
/// empirical_objective up to summation order.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const Dataset& data, const GroupSpec& groups);

  double operator()(const Vector& x) const;
  double hinge_risk(const Vector& x) const;
  const GroupSpec& groups() const noexcept { return *groups_; }

 private:
  Eigen::MatrixXd features_;  // m x N
  Eigen::VectorXd labels_;
  const GroupSpec* groups_;
};

/// Best known solution of the empirical problem plus bookkeeping on how it
/// was obtained.
struct ReferenceSolution {
  Vector point;
  double objective = 0.0;
  std::string method;
  double residual = 0.0;  // best-objective improvement over the last 10% of budget
  bool possibly_non_singleton = false;
};

/// Slow-but-sure solver for argmin(F+G): restarted averaged subgradient
/// descent with step c/sqrt(k), best-objective iterate kept; dimensions <= 3
/// are additionally polished by grid + golden-section descent. Independent of
/// every prox/solver code path it is used to judge.
ReferenceSolution reference_solve(const Dataset& data, const GroupSpec& groups,
                                  std::int64_t budget, std::uint64_t seed = 0);

/// ||x - ref.point||; equals d(x, argmin) when the solution set is a
/// singleton and upper-bounds it otherwise (see possibly_non_singleton).
double distance_to_solution(const Vector& x, const ReferenceSolution& ref);

struct ProbeRow {
  double gamma = 0.0;
  double prob_final_ergodic = 0.0;  // P(d(ergodic mean, argmin) >= epsilon)
  double cesaro_tail_mean = 0.0;    // mean of (1/(n+1)) sum_k 1{d(x_k) > epsilon}
  double mean_final_ergodic_dist = 0.0;
  double max_state_norm = 0.0;      // max over seeds of sup_n ||x_n||
  int n_seeds = 0;
  int divergence_count = 0;
  double mean_sq_dist_increment = 0.0;  // seed average of the per-step
                                        // ||x_{k+1}-x*||^2 - ||x_k-x*||^2 mean
  std::vector<double> final_dists;  // per seed, in seed order (paired across rows)
};

/// Monte-Carlo estimate, per step size, of the probability that the ergodic
/// average ends farther than epsilon from the solution, plus the Cesaro
/// average of per-iterate indicator distances. Seeds run in parallel
/// (bounded by SDR_THREADS).
std::vector<ProbeRow> convergence_probe(const Dataset& data, const GroupSpec& groups,
                                     std::span<const double> gammas,
                                     std::int64_t n_iters, int n_seeds,
                                     double epsilon, const ReferenceSolution& ref,
                                     std::uint64_t base_seed,
                                     double init_scale = 0.0);

}  // namespace sdr
