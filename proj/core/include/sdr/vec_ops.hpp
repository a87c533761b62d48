#pragma once

#include <span>

#include "sdr/types.hpp"

namespace sdr {

/// Inner product with an explicit dimension check.
double dot(const Vector& a, const Vector& b);

/// Sub-vector x_S, in the index order of s.
Vector restrict(const Vector& x, std::span<const int> s);

/// x with v added onto the coordinates listed in s; |s| must equal |v|.
Vector scatter_add(const Vector& x, std::span<const int> s, const Vector& v);

}  // namespace sdr
