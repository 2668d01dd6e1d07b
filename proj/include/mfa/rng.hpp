#pragma once

#include <cstdint>
#include <span>

namespace mfa {

/// Counter-based generator: the n-th draw of stream (seed, stream) is
/// splitmix64(key + n * golden), so streams are reproducible bit-for-bit and
/// independent of the order in which they are consumed.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Index drawn from a (not necessarily normalised) weight vector.
  std::size_t categorical(std::span<const double> weights) noexcept;
  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mfa
