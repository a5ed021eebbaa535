#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace jpsn {

/// Seeded random stream. A (seed, stream) pair identifies one reproducible
/// sequence; independent chains use distinct stream numbers under one seed.
/// Handles are not thread-safe: give each thread its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma with unit scale.
  double gamma(double shape);
  double exponential();
  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n);

  /// Derives an independent generator; consumes one draw from this one.
  Rng spawn(std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace jpsn
