#include "sdr/vec_ops.hpp"

#include <string>

namespace sdr {
namespace {

void check_indices(std::span<const int> s, Eigen::Index n, const char* who) {
  for (int idx : s)
    if (idx < 0 || idx >= n)
      fail(ErrorKind::invalid_index,
           std::string(who) + ": index " + std::to_string(idx) +
               " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    fail(ErrorKind::dimension_mismatch,
         "dot: dimensions " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()) + " differ");
  return a.dot(b);
}

Vector restrict(const Vector& x, std::span<const int> s) {
  check_indices(s, x.size(), "restrict");
  Vector out(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = x[s[k]];
  return out;
}

Vector scatter_add(const Vector& x, std::span<const int> s, const Vector& v) {
  if (static_cast<Eigen::Index>(s.size()) != v.size())
    fail(ErrorKind::dimension_mismatch,
         "scatter_add: |s| = " + std::to_string(s.size()) +
             " but |v| = " + std::to_string(v.size()));
  check_indices(s, x.size(), "scatter_add");
  Vector out = x;
  for (std::size_t k = 0; k < s.size(); ++k)
    out[s[k]] += v[static_cast<Eigen::Index>(k)];
  return out;
}

}  // namespace sdr
