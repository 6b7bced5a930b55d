#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace gae {

/// Counter-based random stream. The i-th 64-bit output is a pure function of
/// (seed, i), so equal seeds and equal call sequences give equal values on
/// every platform. Normal variates come from the Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal variate.
  double normal();

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  /// Independent stream keyed by this stream's seed and `stream`.
  Rng derive(std::uint64_t stream) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer; exposed for hashing and fingerprinting.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace gae
