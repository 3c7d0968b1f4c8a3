#pragma once

// Counter-based random streams. Every trial owns a stream addressed by
// (seed, stream id, substream), so results do not depend on how trials
// are scheduled across workers.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace qslora {

using Philox4x64Counter = std::array<std::uint64_t, 4>;
using Philox4x64Key = std::array<std::uint64_t, 2>;

// Philox4x64-10 block function (Salmon et al., SC'11).
inline Philox4x64Counter philox4x64_10(Philox4x64Counter ctr, Philox4x64Key key) noexcept {
  constexpr std::uint64_t mul0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t mul1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t weyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t weyl1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += weyl0;
      key[1] += weyl1;
    }
    const unsigned __int128 p0 = static_cast<unsigned __int128>(mul0) * ctr[0];
    const unsigned __int128 p1 = static_cast<unsigned __int128>(mul1) * ctr[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// SplitMix64 finalizer; used to fold coordinates into a stream id.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ mix64(v));
}

inline std::uint64_t hash_double(std::uint64_t h, double v) noexcept {
  if (v == 0.0) {
    v = 0.0;  // fold -0.0
  }
  return hash_combine(h, std::bit_cast<std::uint64_t>(v));
}

class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept
      : key_{seed, stream}, substream_(substream) {}

  std::uint64_t substream() const noexcept { return substream_; }

  std::uint64_t next_u64() noexcept {
    if (pos_ == buffer_.size()) {
      buffer_ = philox4x64_10({substream_, block_++, 0, 0}, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n) for n a power of two.
  std::uint32_t uniform_pow2(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(next_u64() & (static_cast<std::uint64_t>(n) - 1));
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance (Box-Muller).
  std::complex<double> complex_gaussian(double variance) noexcept {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-variance * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

private:
  Philox4x64Key key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  Philox4x64Counter buffer_{};
  std::size_t pos_ = 4;
};

}  // namespace qslora
