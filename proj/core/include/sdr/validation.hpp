#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdr {

struct ProxCheckRow {
  std::string name;
  int trials = 0;
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Compares every implemented proximity operator against the numerical prox
/// oracle on random low-dimensional inputs (dimension 1..3). Returns one row
/// per operator with the worst coordinate-wise deviation observed.
std::vector<ProxCheckRow> run_prox_oracle_check(std::uint64_t seed,
                                                int trials_per_prox = 100,
                                                double tolerance = 1e-6,
                                                double oracle_resolution = 1e-8);

}  // namespace sdr
