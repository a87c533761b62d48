#include "sdr/validation.hpp"

#include <algorithm>
#include <cmath>

#include "sdr/prox.hpp"
#include "sdr/rng.hpp"
#include "sdr/types.hpp"

namespace sdr {
namespace {

Vector random_vector(SeededRng& rng, int n, double scale) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
  return v;
}

std::vector<int> random_subset(SeededRng& rng, int n) {
  // nonempty subset of {0,...,n-1}
  std::vector<int> s;
  for (int i = 0; i < n; ++i)
    if (rng.next_unit() < 0.6) s.push_back(i);
  if (s.empty()) s.push_back(static_cast<int>(rng.next_index(static_cast<std::size_t>(n))));
  return s;
}

double max_coeff_diff(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<ProxCheckRow> run_prox_oracle_check(std::uint64_t seed,
                                                int trials_per_prox,
                                                double tolerance,
                                                double oracle_resolution) {
  SeededRng rng(seed);
  std::vector<ProxCheckRow> rows;

  const auto finish = [&](ProxCheckRow row) {
    row.trials = trials_per_prox;
    row.tolerance = tolerance;
    row.pass = row.max_abs_error <= tolerance;
    rows.push_back(std::move(row));
  };

  // group norm: block soft-threshold vs brute force
  {
    ProxCheckRow row{.name = "prox_group_norm"};
    for (int t = 0; t < trials_per_prox; ++t) {
      const int n = 1 + static_cast<int>(rng.next_index(3));
      const Vector x = random_vector(rng, n, 2.0);
      const auto s = random_subset(rng, n);
      const double gamma = std::exp(-2.0 + 3.0 * rng.next_unit());
      const double weight = 0.3 + 2.7 * rng.next_unit();
      const ProxResult prox = prox_group_norm(x, s, weight, gamma);
      const Vector oracle = numerical_prox_oracle(
          [&](const Vector& y) { return group_norm_value(y, s, weight); }, x,
          gamma, oracle_resolution);
      row.max_abs_error = std::max(row.max_abs_error, max_coeff_diff(prox.point, oracle));
    }
    finish(row);
  }

  // hinge loss of one affine sample
  {
    ProxCheckRow row{.name = "prox_hinge_affine"};
    for (int t = 0; t < trials_per_prox; ++t) {
      const int n = 1 + static_cast<int>(rng.next_index(3));
      const Vector x = random_vector(rng, n, 2.0);
      Sample sample{random_vector(rng, n, 1.5), rng.next_unit() < 0.5 ? -1 : 1};
      const double gamma = std::exp(-2.0 + 3.0 * rng.next_unit());
      const ProxResult prox = prox_hinge_affine(x, sample, gamma);
      const Vector oracle = numerical_prox_oracle(
          [&](const Vector& y) { return hinge_loss_value(y, sample); }, x, gamma,
          oracle_resolution);
      row.max_abs_error = std::max(row.max_abs_error, max_coeff_diff(prox.point, oracle));
    }
    finish(row);
  }

  // logistic loss of one affine sample
  {
    ProxCheckRow row{.name = "prox_logistic_affine"};
    for (int t = 0; t < trials_per_prox; ++t) {
      const int n = 1 + static_cast<int>(rng.next_index(3));
      const Vector x = random_vector(rng, n, 2.0);
      Sample sample{random_vector(rng, n, 1.5), rng.next_unit() < 0.5 ? -1 : 1};
      const double gamma = std::exp(-2.0 + 3.0 * rng.next_unit());
      const ProxResult prox = prox_logistic_affine(x, sample, gamma, 1e-14, 300);
      const Vector oracle = numerical_prox_oracle(
          [&](const Vector& y) { return logistic_loss_value(y, sample); }, x,
          gamma, oracle_resolution);
      row.max_abs_error = std::max(row.max_abs_error, max_coeff_diff(prox.point, oracle));
    }
    finish(row);
  }

  // sum of overlapping group norms via the Dykstra-like splitting
  {
    ProxCheckRow row{.name = "prox_overlap_group_sum"};
    for (int t = 0; t < trials_per_prox; ++t) {
      const int n = 2 + static_cast<int>(rng.next_index(2));
      const Vector x = random_vector(rng, n, 2.0);
      const std::size_t n_groups = 1 + rng.next_index(3);
      std::vector<std::vector<int>> groups;
      for (std::size_t j = 0; j < n_groups; ++j) groups.push_back(random_subset(rng, n));
      const GroupSpec spec(n, groups);
      const double gamma = std::exp(-2.0 + 3.0 * rng.next_unit());
      const double weight = 0.3 + 2.7 * rng.next_unit();
      const ProxResult prox =
          prox_overlap_group_sum(x, spec, weight, gamma, 1e-12, 200000);
      const Vector oracle = numerical_prox_oracle(
          [&](const Vector& y) { return overlap_group_sum_value(y, spec, weight); },
          x, gamma, oracle_resolution);
      row.max_abs_error = std::max(row.max_abs_error, max_coeff_diff(prox.point, oracle));
    }
    finish(row);
  }

  return rows;
}

}  // namespace sdr
