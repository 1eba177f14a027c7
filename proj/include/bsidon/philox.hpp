#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each
// (key, counter) pair maps to an independent 128-bit block, so any index
// can be drawn without touching its neighbours.

#include <array>
#include <cstdint>

namespace bsidon {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

  /// Uniform double in [0, 1) with 53 random bits, keyed on (seed, index).
  static constexpr double uniform(std::uint64_t seed, std::uint64_t index) {
    Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u};
    Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    auto out = generate(ctr, key);
    std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static constexpr Block single_round(const Block& c, const Key& k) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
    auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    auto lo0 = static_cast<std::uint32_t>(p0);
    auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

}  // namespace bsidon
