#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "sdr/types.hpp"

// Shared closed-form kernels. Solver loops and the public prox operations
// both go through these, so degenerate-randomness equivalence holds bitwise.
namespace sdr::detail {

/// In-place prox of y |-> t*||y_S|| (block soft-threshold), t >= 0.
/// Coordinates outside s are untouched; ||y_S|| <= t zeroes the block.
inline void block_soft_threshold(Vector& y, std::span<const int> s, double t) {
  double sq = 0.0;
  for (int idx : s) sq += y[idx] * y[idx];
  const double norm = std::sqrt(sq);
  if (norm <= t) {
    for (int idx : s) y[idx] = 0.0;
  } else {
    const double scale = 1.0 - t / norm;
    for (int idx : s) y[idx] *= scale;
  }
}

/// Scalar step of the hinge prox along a = eta*xi:
/// clamp((1 - <a,x>)/||a||^2, 0, gamma). ||a||^2 == 0 means a constant
/// function, step 0.
inline double hinge_step(double a_dot_x, double a_sq_norm, double gamma) {
  if (a_sq_norm == 0.0) return 0.0;
  return std::clamp((1.0 - a_dot_x) / a_sq_norm, 0.0, gamma);
}

/// y = prox of gamma*max(0, 1 - eta<.,xi>) at x, written into y.
inline void hinge_prox_into(Vector& y, const Vector& x, const Vector& xi,
                            int label, double xi_sq_norm, double gamma) {
  const double a_dot_x = static_cast<double>(label) * xi.dot(x);
  const double step = hinge_step(a_dot_x, xi_sq_norm, gamma);
  y = x + (step * static_cast<double>(label)) * xi;
}

/// Third line of the Douglas-Rachford update.
inline void dr_combine_into(Vector& out, const Vector& x, const Vector& y,
                            const Vector& z) {
  out = x + z - y;
}

}  // namespace sdr::detail
