#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sdr/errors.hpp"
#include "sdr/rng.hpp"

namespace sdr {

/// Dense point of the Euclidean space the problem lives in. Entries are
/// required to be finite wherever a Vector crosses a module boundary
/// (dataset construction, solver state checks).
using Vector = Eigen::VectorXd;

/// Index sets S_1,...,S_g of the overlapping group regularizer. Indices are
/// 0-based internally. Groups may overlap; a group is never empty and every
/// index lies in [0, dimension).
class GroupSpec {
 public:
  GroupSpec(int dimension, std::vector<std::vector<int>> groups);

  int dimension() const noexcept { return dimension_; }
  std::size_t group_count() const noexcept { return groups_.size(); }
  std::span<const int> group(std::size_t j) const;
  const std::vector<std::vector<int>>& groups() const noexcept { return groups_; }

 private:
  int dimension_;
  std::vector<std::vector<int>> groups_;
};

/// One realization (xi, eta) of the data variable. label is -1 or +1.
struct Sample {
  Vector features;
  int label = 1;
};

/// Finite support of the empirical distribution mu. Uniform draws from this
/// list are what every expectation in the problem means.
class Dataset {
 public:
  explicit Dataset(std::vector<Sample> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  int dimension() const noexcept { return dimension_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }

  /// ||xi_i||^2, cached at construction; the hinge prox needs it every step.
  double feature_sq_norm(std::size_t i) const { return sq_norms_[i]; }

 private:
  std::vector<Sample> samples_;
  std::vector<double> sq_norms_;
  int dimension_ = 0;
};

std::size_t draw_index(const Dataset& data, SeededRng& rng);
const Sample& draw_sample(const Dataset& data, SeededRng& rng);

}  // namespace sdr
