#pragma once

#include <cstdint>
#include <optional>

namespace sdr {

/// Stream offsets used to derive independent per-purpose generators from one
/// master seed. Fixed so that, e.g., the data draws of a run are reproducible
/// independently of how many group draws happen in between.
enum class RngStream : std::uint64_t {
  init = 0,    // starting point of a solver run
  data = 1,    // (xi_n, eta_n) draws
  group = 2,   // J_n draws
  plant = 3,   // planted weights / dataset generation
  misc = 4,
};

/// Deterministic, portable random generator: xoshiro256++ seeded through a
/// splitmix64 expansion. Identical seeds give identical draw streams across
/// runs and platforms; all integer and uniform draws use only 64-bit integer
/// arithmetic and exact binary scaling. Single-owner mutable state.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Child generator for a fixed-purpose stream of a master seed.
  static SeededRng derive(std::uint64_t master_seed, RngStream stream);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53 random bits.
  double next_unit();

  /// Uniform on {0, 1, ..., n-1}, unbiased (Lemire rejection). n >= 1.
  std::size_t next_index(std::size_t n);

  /// Standard normal via Marsaglia's polar method.
  double next_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
  std::optional<double> cached_normal_;
};

/// FNV-1a over a stream of 64-bit words; used to fingerprint draw sequences
/// so paired runs can prove they consumed identical data.
struct DrawHash {
  std::uint64_t value = 1469598103934665603ULL;
  void update(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      value ^= (word >> (8 * i)) & 0xffULL;
      value *= 1099511628211ULL;
    }
  }
};

/// Seed-level parallelism cap: SDR_THREADS if set (>=1), else the hardware
/// concurrency, else 1.
int thread_cap();

}  // namespace sdr
