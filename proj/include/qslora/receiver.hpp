#pragma once

// Despreading correlator bank and noncoherent argmax detection.

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fscm.hpp"

namespace qslora {

struct DecisionVector {
  std::vector<cdouble> stats;
};

namespace detail {

inline void check_chip_count(std::size_t n, SpreadingFactor sf) {
  if (n != sf.chips()) {
    throw invalid_input("received " + std::to_string(n) + " chips, SF " + std::to_string(sf.value()) +
                        " requires " + std::to_string(sf.chips()));
  }
}

}  // namespace detail

// stats[m] = sum_k chips[k] conj(Phi(m;k)), by direct summation.
inline DecisionVector despread(std::span<const cdouble> chips, SpreadingFactor sf) {
  detail::check_chip_count(chips.size(), sf);
  const std::uint32_t n = sf.chips();
  DecisionVector dv{std::vector<cdouble>(n)};
  for (std::uint32_t m = 0; m < n; ++m) {
    cdouble acc{0.0, 0.0};
    for (std::uint32_t k = 0; k < n; ++k) {
      acc += chips[k] * std::conj(envelope_chip(m, k, sf));
    }
    dv.stats[m] = acc;
  }
  return dv;
}

// The correlator bank as a DFT of the dechirped chips:
//   stats[m] = M^{-1/2} sum_k (chips[k] e^{-i 2 pi k^2 / M}) e^{-i 2 pi k m / M}.
// Holds precomputed tables; one instance per worker.
class Despreader {
public:
  explicit Despreader(SpreadingFactor sf) : sf_(sf), dechirp_(sf.chips()), twiddle_(sf.chips() / 2), bitrev_(sf.chips()) {
    const std::uint32_t n = sf.chips();
    const auto& roots = detail::unit_roots(sf);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint32_t k = 0; k < n; ++k) {
      dechirp_[k] = scale * std::conj(roots[(k * k) & sf.mask()]);
    }
    for (std::uint32_t j = 0; j < n / 2; ++j) {
      twiddle_[j] = std::conj(roots[j]);
    }
    const auto bits = static_cast<std::uint32_t>(sf.value());
    for (std::uint32_t k = 0; k < n; ++k) {
      std::uint32_t r = 0;
      for (std::uint32_t b = 0; b < bits; ++b) {
        r |= ((k >> b) & 1U) << (bits - 1 - b);
      }
      bitrev_[k] = r;
    }
  }

  SpreadingFactor sf() const noexcept { return sf_; }

  void operator()(std::span<const cdouble> chips, std::span<cdouble> stats) const {
    const std::uint32_t n = sf_.chips();
    for (std::uint32_t k = 0; k < n; ++k) {
      stats[bitrev_[k]] = chips[k] * dechirp_[k];
    }
    // iterative radix-2 decimation in time
    for (std::uint32_t len = 2; len <= n; len <<= 1) {
      const std::uint32_t half = len >> 1;
      const std::uint32_t stride = n / len;
      for (std::uint32_t start = 0; start < n; start += len) {
        for (std::uint32_t j = 0; j < half; ++j) {
          const cdouble t = twiddle_[j * stride] * stats[start + j + half];
          const cdouble u = stats[start + j];
          stats[start + j] = u + t;
          stats[start + j + half] = u - t;
        }
      }
    }
  }

  DecisionVector operator()(std::span<const cdouble> chips) const {
    detail::check_chip_count(chips.size(), sf_);
    DecisionVector dv{std::vector<cdouble>(sf_.chips())};
    (*this)(chips, dv.stats);
    return dv;
  }

private:
  SpreadingFactor sf_;
  std::vector<cdouble> dechirp_;
  std::vector<cdouble> twiddle_;
  std::vector<std::uint32_t> bitrev_;
};

// Smallest index maximising |stats[m]|.
inline SampleIndex detect(std::span<const cdouble> stats) {
  SampleIndex best = 0;
  double best_mag = -1.0;
  for (std::size_t m = 0; m < stats.size(); ++m) {
    const double mag = std::norm(stats[m]);
    if (mag > best_mag) {
      best_mag = mag;
      best = static_cast<SampleIndex>(m);
    }
  }
  return best;
}

inline SampleIndex detect(const DecisionVector& dv) {
  if (dv.stats.empty()) {
    throw invalid_input("empty decision vector");
  }
  return detect(std::span<const cdouble>(dv.stats));
}

}  // namespace qslora
