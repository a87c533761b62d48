#pragma once

#include <vector>

#include "sdr/rng.hpp"
#include "sdr/types.hpp"

namespace sdr::test {

inline Vector random_vector(SeededRng& rng, int n, double scale = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
  return v;
}

inline Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Dataset single_sample_dataset(std::initializer_list<double> xi, int label) {
  std::vector<Sample> samples;
  samples.push_back({make_vector(xi), label});
  return Dataset(std::move(samples));
}

}  // namespace sdr::test
