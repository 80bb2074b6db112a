#include "rampopt/rng.hpp"

namespace rampopt {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53;
constexpr std::uint32_t kMult1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double uniform01(std::uint64_t seed, std::uint64_t user, std::uint32_t period,
                 std::uint32_t stream) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(user), static_cast<std::uint32_t>(user >> 32),
      period, stream};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t bits = (std::uint64_t(out[1]) << 32) | out[0];
  return double(bits >> 11) * 0x1.0p-53;
}

}  // namespace rampopt
