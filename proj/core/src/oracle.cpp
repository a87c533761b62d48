#include "sdr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sdr/detail/parallel.hpp"
#include "sdr/prox.hpp"
#include "sdr/rng.hpp"
#include "sdr/solvers.hpp"

namespace sdr {

double empirical_hinge_risk(const Vector& x, const Dataset& data) {
  double sum = 0.0;
  for (const Sample& s : data.samples()) sum += hinge_loss_value(x, s);
  return sum / static_cast<double>(data.size());
}

double group_penalty(const Vector& x, const GroupSpec& groups) {
  return overlap_group_sum_value(x, groups, 1.0);
}

double empirical_objective(const Vector& x, const Dataset& data,
                           const GroupSpec& groups) {
  return empirical_hinge_risk(x, data) + group_penalty(x, groups);
}

ObjectiveEvaluator::ObjectiveEvaluator(const Dataset& data, const GroupSpec& groups)
    : groups_(&groups) {
  if (data.dimension() != groups.dimension())
    fail(ErrorKind::dimension_mismatch,
         "ObjectiveEvaluator: dataset and group dimensions differ");
  const auto m = static_cast<Eigen::Index>(data.size());
  features_.resize(m, data.dimension());
  labels_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    features_.row(i) = data[static_cast<std::size_t>(i)].features.transpose();
    labels_[i] = static_cast<double>(data[static_cast<std::size_t>(i)].label);
  }
}

double ObjectiveEvaluator::hinge_risk(const Vector& x) const {
  if (x.size() != features_.cols())
    fail(ErrorKind::dimension_mismatch, "ObjectiveEvaluator: dimension mismatch");
  const Eigen::VectorXd margins = labels_.cwiseProduct(features_ * x);
  return (1.0 - margins.array()).max(0.0).mean();
}

double ObjectiveEvaluator::operator()(const Vector& x) const {
  return hinge_risk(x) + group_penalty(x, *groups_);
}

ReferenceSolution reference_solve(const Dataset& data, const GroupSpec& groups,
                                  std::int64_t budget, std::uint64_t seed) {
  if (budget < 100000)
    fail(ErrorKind::invalid_argument, "reference_solve: budget must be >= 1e5");
  const Eigen::Index n = data.dimension();
  const auto m = static_cast<Eigen::Index>(data.size());
  const auto g = static_cast<double>(groups.group_count());
  ObjectiveEvaluator eval(data, groups);

  Eigen::MatrixXd features(m, n);
  Eigen::VectorXd labels(m);
  double max_feature_norm = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    features.row(i) = data[static_cast<std::size_t>(i)].features.transpose();
    labels[i] = static_cast<double>(data[static_cast<std::size_t>(i)].label);
    max_feature_norm =
        std::max(max_feature_norm, data[static_cast<std::size_t>(i)].features.norm());
  }

  Vector x = Vector::Zero(n);
  if (seed != 0) {
    SeededRng rng(seed);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 0.1 * rng.next_normal();
  }

  struct Candidate {
    Vector point;
    double objective;
  };
  std::vector<Candidate> candidates;

  const double c0 = 1.0 / (max_feature_norm + g);
  constexpr int kPhases = 3;
  const std::int64_t per_phase = budget / kPhases;
  const std::int64_t mark90 = (9 * budget) / 10;

  Vector best_point = x;
  double best_obj = eval(x);
  double best_at_90 = std::numeric_limits<double>::quiet_NaN();
  std::int64_t global_k = 0;

  Eigen::VectorXd margins(m), coef(m);
  Vector grad(n), tail_sum(n);

  for (int phase = 0; phase < kPhases; ++phase) {
    const double c = c0 / std::pow(4.0, phase);
    x = best_point;  // restart each phase at the incumbent
    tail_sum.setZero();
    std::int64_t tail_count = 0;
    for (std::int64_t k = 1; k <= per_phase; ++k) {
      ++global_k;
      margins.noalias() = features * x;
      margins = labels.cwiseProduct(margins);
      const double hinge = (1.0 - margins.array()).max(0.0).mean();
      const double obj = hinge + group_penalty(x, groups);
      if (obj < best_obj) {
        best_obj = obj;
        best_point = x;
      }
      if (global_k == mark90) best_at_90 = best_obj;

      coef = (margins.array() < 1.0)
                 .select(-labels.array() / static_cast<double>(m), 0.0);
      grad.noalias() = features.transpose() * coef;
      for (std::size_t j = 0; j < groups.group_count(); ++j) {
        const auto s = groups.group(j);
        double sq = 0.0;
        for (int idx : s) sq += x[idx] * x[idx];
        const double norm = std::sqrt(sq);
        if (norm > 0.0)
          for (int idx : s) grad[idx] += x[idx] / norm;
      }
      x -= (c / std::sqrt(static_cast<double>(k))) * grad;

      if (2 * k > per_phase) {
        tail_sum += x;
        ++tail_count;
      }
    }
    if (tail_count > 0) {
      Vector tail = tail_sum / static_cast<double>(tail_count);
      candidates.push_back({tail, eval(tail)});
    }
  }
  candidates.push_back({best_point, best_obj});

  for (const Candidate& cand : candidates) {
    if (cand.objective < best_obj) {
      best_obj = cand.objective;
      best_point = cand.point;
    }
  }

  std::string method = "restarted-averaged-subgradient";
  if (n <= 3) {
    Vector polished = detail::minimize_small_dim(
        [&](const Vector& p) { return eval(p); }, best_point,
        1.0 + 0.5 * best_point.norm(), 1e-10);
    const double pobj = eval(polished);
    candidates.push_back({polished, pobj});
    if (pobj < best_obj) {
      best_obj = pobj;
      best_point = polished;
    }
    method += "+grid-polish";
  }

  // Two distinct near-optimal candidates flag a possibly non-singleton argmin.
  bool flagged = false;
  for (std::size_t a = 0; a < candidates.size() && !flagged; ++a)
    for (std::size_t b = a + 1; b < candidates.size() && !flagged; ++b)
      if (std::abs(candidates[a].objective - candidates[b].objective) <= 1e-9 &&
          (candidates[a].point - candidates[b].point).norm() > 1e-4)
        flagged = true;

  ReferenceSolution ref;
  ref.point = best_point;
  ref.objective = empirical_objective(best_point, data, groups);
  ref.method = method;
  ref.residual = std::isnan(best_at_90) ? 0.0 : best_at_90 - best_obj;
  ref.possibly_non_singleton = flagged;
  return ref;
}

double distance_to_solution(const Vector& x, const ReferenceSolution& ref) {
  if (x.size() != ref.point.size())
    fail(ErrorKind::dimension_mismatch, "distance_to_solution: dimension mismatch");
  return (x - ref.point).norm();
}

std::vector<ProbeRow> convergence_probe(const Dataset& data, const GroupSpec& groups,
                                     std::span<const double> gammas,
                                     std::int64_t n_iters, int n_seeds,
                                     double epsilon, const ReferenceSolution& ref,
                                     std::uint64_t base_seed, double init_scale) {
  if (gammas.size() < 2)
    fail(ErrorKind::invalid_argument, "convergence_probe: need >= 2 step sizes");
  if (n_seeds < 10)
    fail(ErrorKind::invalid_argument, "convergence_probe: need >= 10 seeds");
  if (!(epsilon >= 0.0))
    fail(ErrorKind::invalid_argument, "convergence_probe: epsilon must be >= 0");

  struct SeedStat {
    double final_dist = 0.0;
    double cesaro = 0.0;
    double sup_norm = 0.0;
    double sq_increment = 0.0;
    bool diverged = false;
  };

  std::vector<ProbeRow> rows;
  for (const double gamma : gammas) {
    std::vector<SeedStat> stats(static_cast<std::size_t>(n_seeds));
    detail::run_parallel(n_seeds, [&](int k) {
      RunOptions opts;
      opts.record_every = n_iters;  // metrics at the end only
      opts.reference = &ref.point;
      opts.store_step_distances = true;
      opts.init_scale = init_scale;
      SeedStat& st = stats[static_cast<std::size_t>(k)];
      try {
        Trajectory traj = run_stochastic_dr(
            data, groups, gamma, n_iters, base_seed + static_cast<std::uint64_t>(k),
            opts);
        st.final_dist = distance_to_solution(traj.final_ergodic, ref);
        std::int64_t above = 0;
        for (const double d : traj.step_distances)
          if (d > epsilon) ++above;
        st.cesaro = static_cast<double>(above) /
                    static_cast<double>(traj.step_distances.size());
        st.sup_norm = traj.max_state_norm;
        st.sq_increment = traj.mean_sq_dist_increment;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::divergence) throw;
        st.diverged = true;
        st.final_dist = std::numeric_limits<double>::infinity();
        st.cesaro = 1.0;
        st.sup_norm = std::numeric_limits<double>::infinity();
      }
    });

    ProbeRow row;
    row.gamma = gamma;
    row.n_seeds = n_seeds;
    for (const SeedStat& st : stats) {
      row.prob_final_ergodic += st.final_dist >= epsilon ? 1.0 : 0.0;
      row.cesaro_tail_mean += st.cesaro;
      row.mean_final_ergodic_dist += st.final_dist;
      row.max_state_norm = std::max(row.max_state_norm, st.sup_norm);
      row.divergence_count += st.diverged ? 1 : 0;
      row.mean_sq_dist_increment += st.diverged ? 0.0 : st.sq_increment;
      row.final_dists.push_back(st.final_dist);
    }
    row.prob_final_ergodic /= n_seeds;
    row.cesaro_tail_mean /= n_seeds;
    row.mean_final_ergodic_dist /= n_seeds;
    row.mean_sq_dist_increment /= n_seeds;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sdr
