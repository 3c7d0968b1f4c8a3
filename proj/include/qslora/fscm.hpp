#pragma once

// Frequency-shift chirp modulation: bit words, sample indices and the
// discrete LoRa complex envelope.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qslora {

using cdouble = std::complex<double>;

// A LoRa sample x(n) in [0, 2^SF).
using SampleIndex = std::uint32_t;

// Bits of a word, index i carries weight 2^i.
using BitWord = std::vector<std::uint8_t>;

class SpreadingFactor {
public:
  static constexpr int min_value = 2;
  static constexpr int max_value = 12;

  constexpr explicit SpreadingFactor(int sf) : sf_(sf) {
    if (sf < min_value || sf > max_value) {
      throw invalid_input("spreading factor " + std::to_string(sf) + " outside [2, 12]");
    }
  }

  constexpr int value() const noexcept { return sf_; }
  // Alphabet size M = 2^SF, also the number of chips per symbol.
  constexpr std::uint32_t chips() const noexcept { return std::uint32_t{1} << sf_; }
  constexpr std::uint32_t mask() const noexcept { return chips() - 1; }

  friend constexpr bool operator==(SpreadingFactor, SpreadingFactor) = default;

private:
  int sf_;
};

inline void check_sample(SampleIndex x, SpreadingFactor sf, const char* name = "sample index") {
  if (x >= sf.chips()) {
    throw invalid_input(std::string(name) + " " + std::to_string(x) + " outside [0, " +
                        std::to_string(sf.chips() - 1) + "] for SF " + std::to_string(sf.value()));
  }
}

inline SampleIndex word_to_sample(std::span<const std::uint8_t> bits, SpreadingFactor sf) {
  if (bits.size() != static_cast<std::size_t>(sf.value())) {
    throw invalid_input("word has " + std::to_string(bits.size()) + " bits, SF " +
                        std::to_string(sf.value()) + " requires " + std::to_string(sf.value()));
  }
  SampleIndex x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) {
      throw invalid_input("bit " + std::to_string(i) + " is not binary");
    }
    x |= static_cast<SampleIndex>(bits[i]) << i;
  }
  return x;
}

inline BitWord sample_to_word(SampleIndex x, SpreadingFactor sf) {
  check_sample(x, sf);
  BitWord bits(static_cast<std::size_t>(sf.value()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = static_cast<std::uint8_t>((x >> i) & 1U);
  }
  return bits;
}

namespace detail {

// exp(i 2 pi j / M) for j in [0, M), one table per spreading factor.
inline const std::vector<cdouble>& unit_roots(SpreadingFactor sf) {
  static const auto tables = [] {
    std::array<std::vector<cdouble>, SpreadingFactor::max_value + 1> t;
    for (int s = SpreadingFactor::min_value; s <= SpreadingFactor::max_value; ++s) {
      const std::uint32_t m = std::uint32_t{1} << s;
      auto& table = t[static_cast<std::size_t>(s)];
      table.resize(m);
      for (std::uint32_t j = 0; j < m; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        table[j] = {std::cos(angle), std::sin(angle)};
      }
    }
    return t;
  }();
  return tables[static_cast<std::size_t>(sf.value())];
}

// Phase index of Phi(x;k): k * ((x + k) mod M) mod M.
constexpr std::uint32_t envelope_phase(SampleIndex x, std::uint32_t k, SpreadingFactor sf) noexcept {
  return (k * ((x + k) & sf.mask())) & sf.mask();
}

}  // namespace detail

// Phi(x;k) without range checks; k is taken mod 2^SF.
inline cdouble envelope_chip(SampleIndex x, std::uint32_t k, SpreadingFactor sf) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(sf.chips()));
  return scale * detail::unit_roots(sf)[detail::envelope_phase(x, k & sf.mask(), sf)];
}

struct ModulatedSymbol {
  SpreadingFactor sf;
  SampleIndex x;
  std::vector<cdouble> chips;
};

inline ModulatedSymbol envelope(SampleIndex x, SpreadingFactor sf) {
  check_sample(x, sf);
  ModulatedSymbol sym{sf, x, std::vector<cdouble>(sf.chips())};
  for (std::uint32_t k = 0; k < sf.chips(); ++k) {
    sym.chips[k] = envelope_chip(x, k, sf);
  }
  return sym;
}

// sum_k a[k] conj(b[k]); equals the Kronecker delta of the two indices.
inline cdouble inner_product(const ModulatedSymbol& a, const ModulatedSymbol& b) {
  if (a.sf != b.sf) {
    throw invalid_input("inner product of symbols with SF " + std::to_string(a.sf.value()) + " and " +
                        std::to_string(b.sf.value()));
  }
  cdouble acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.chips.size(); ++k) {
    acc += a.chips[k] * std::conj(b.chips[k]);
  }
  return acc;
}

}  // namespace qslora
