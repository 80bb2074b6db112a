#pragma once

#include <array>
#include <cstdint>

namespace rampopt {

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011), with the
// standard round constants. Every draw is a pure function of (key, counter),
// so streams indexed by (seed, user, period, stream) are reproducible
// regardless of execution order or parallelism.

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform draw in [0, 1) for the given coordinates. 53-bit mantissa built
/// from the first two output words.
double uniform01(std::uint64_t seed, std::uint64_t user, std::uint32_t period,
                 std::uint32_t stream);

/// Small deterministic sequence helper for internal randomized checks.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint32_t stream = 0)
      : seed_(seed), stream_(stream) {}

  double next_uniform() { return uniform01(seed_, n_++, 0, stream_); }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_uniform() * double(hi - lo + 1));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t n_ = 0;
  std::uint32_t stream_;
};

}  // namespace rampopt
