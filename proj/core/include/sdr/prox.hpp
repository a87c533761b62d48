#pragma once

#include <functional>
#include <span>

#include "sdr/types.hpp"

namespace sdr {

/// Output of a proximity operator together with the prox objective
/// 0.5*||y - x||^2 + gamma*phi(y) evaluated at the output.
struct ProxResult {
  Vector point;
  double objective_value = 0.0;
};

/// Moreau envelope value phi_gamma(x) and its gradient (x - prox)/gamma.
struct MoreauEval {
  double value = 0.0;
  Vector gradient;
};

// Plain function values of everything the SVM + overlapping-group-lasso
// application needs.
double group_norm_value(const Vector& x, std::span<const int> s, double weight);
double overlap_group_sum_value(const Vector& x, const GroupSpec& groups, double weight);
double hinge_loss_value(const Vector& x, const Sample& sample);
double logistic_loss_value(const Vector& x, const Sample& sample);

/// Block soft-thresholding: prox of gamma*weight*||.restricted to s|| at x.
ProxResult prox_group_norm(const Vector& x, std::span<const int> s,
                           double weight, double gamma);

/// Prox of gamma*max(0, 1 - eta<., xi>) at x; closed form via a clamped
/// scalar step along eta*xi. eta*xi == 0 returns x (constant function).
ProxResult prox_hinge_affine(const Vector& x, const Sample& sample, double gamma);

/// Prox of gamma*log(1 + exp(-eta<., xi>)) at x. Reduces to a 1-D root-find
/// for the step along eta*xi (Newton safeguarded by bisection); the scalar
/// residual is below tol at exit.
ProxResult prox_logistic_affine(const Vector& x, const Sample& sample,
                                double gamma, double tol = 1e-12,
                                int max_iter = 200);

/// Prox of gamma * sum_j weight*||x_{S_j}|| by Dykstra-like cyclic splitting
/// over the group summands. Stops when a full cycle moves the iterate less
/// than tol in norm; errors out at max_cycles with the last residual.
ProxResult prox_overlap_group_sum(const Vector& x, const GroupSpec& groups,
                                  double weight, double gamma,
                                  double tol = 1e-8, int max_cycles = 10000);

/// Envelope value and gradient from a prox output. prox_output must be the
/// prox of the same phi, gamma and x; phi_at_prox is phi(prox point).
MoreauEval moreau_eval(const ProxResult& prox_output, const Vector& x,
                       double phi_at_prox, double gamma);

/// Reference prox for validation: minimizes 0.5*||y-x||^2 + gamma*phi(y) by
/// adaptive grid search with recentring refinement plus golden-section
/// polish. Dimension <= 4 only; accuracy on the order of resolution.
Vector numerical_prox_oracle(const std::function<double(const Vector&)>& phi,
                             const Vector& x, double gamma, double resolution);

namespace detail {
/// Derivative-free minimizer behind numerical_prox_oracle, also used to
/// polish low-dimensional reference solutions. Convex objectives only.
Vector minimize_small_dim(const std::function<double(const Vector&)>& f,
                          Vector center, double initial_halfwidth,
                          double resolution);

/// Workspace-backed Dykstra solve used by the partially stochastic runner;
/// writes the prox point into y (input: the prox argument) and returns the
/// final cycle residual.
struct DykstraWorkspace {
  std::vector<Vector> corrections;
  Vector previous;
};
double dykstra_overlap_prox(Vector& y, const GroupSpec& groups, double weight,
                            double gamma, double tol, int max_cycles,
                            DykstraWorkspace& ws);
}  // namespace detail

}  // namespace sdr
