#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace qpigeon {

inline constexpr std::string_view kRngName = "philox4x32-10";
inline constexpr int kRngVersion = 1;

// Philox 4x32 block cipher, 10 rounds. Counter-based: identical inputs give
// identical outputs on every platform, so sampling runs are reproducible
// from (seed, stream, draw index) alone.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  constexpr uint32_t kM0 = 0xD2511F53u;
  constexpr uint32_t kM1 = 0xCD9E8D57u;
  constexpr uint32_t kW0 = 0x9E3779B9u;
  constexpr uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = static_cast<uint64_t>(kM0) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(kM1) * ctr[2];
    const uint32_t lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
    const uint32_t lo1 = static_cast<uint32_t>(p1);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Stateless uniform draw: (seed, stream, index) -> [0, 1). Two 64-bit words
// per Philox block; the double keeps the top 53 bits.
inline double philox_uniform(uint64_t seed, uint64_t stream, uint64_t index) {
  const uint64_t block = index >> 1;
  const std::array<uint32_t, 4> ctr = {
      static_cast<uint32_t>(block), static_cast<uint32_t>(block >> 32),
      static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                       static_cast<uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  const uint64_t word =
      (index & 1) ? ((static_cast<uint64_t>(out[3]) << 32) | out[2])
                  : ((static_cast<uint64_t>(out[1]) << 32) | out[0]);
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper around the counter core.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  double uniform_at(uint64_t index) const {
    return philox_uniform(seed_, stream_, index);
  }

  double next_uniform() { return uniform_at(index_++); }

  // Box-Muller transform; the second deviate is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t index_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qpigeon
