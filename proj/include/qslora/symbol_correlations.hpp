#pragma once

// Partial cross-correlations between LoRa envelopes shifted by one chip and
// the noise-free decision statistic built from them.

#include <cmath>
#include <string>

#include "chip_waveform.hpp"
#include "fscm.hpp"

namespace qslora {

// l = sign(delta); the chip shift seen by a matched filter under a
// quasisynchronous offset.
using ChipShift = int;

inline constexpr ChipShift chip_shift(double delta) noexcept {
  return delta > 0.0 ? 1 : (delta < 0.0 ? -1 : 0);
}

namespace detail {

inline void check_shift(ChipShift ell) {
  if (ell < -1 || ell > 1) {
    throw invalid_input("chip shift " + std::to_string(ell) + " outside {-1, 0, +1}");
  }
}

}  // namespace detail

// R_{m^,m}(l) = sum over k with 0 <= k+l < M of Phi(m^; k+l) conj(Phi(m; k)).
inline cdouble cross_corr_same_symbol(SampleIndex m_hat, SampleIndex m, ChipShift ell, SpreadingFactor sf) {
  check_sample(m_hat, sf, "m_hat");
  check_sample(m, sf, "m");
  detail::check_shift(ell);
  const auto n = static_cast<int>(sf.chips());
  cdouble acc{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const int shifted = k + ell;
    if (shifted < 0 || shifted >= n) {
      continue;
    }
    acc += envelope_chip(m_hat, static_cast<std::uint32_t>(shifted), sf) *
           std::conj(envelope_chip(m, static_cast<std::uint32_t>(k), sf));
  }
  return acc;
}

// R^_{m^,m}(l): the single boundary chip k for which k+l leaves the symbol
// and wraps into the adjacent one.
inline cdouble cross_corr_adjacent_symbol(SampleIndex m_hat, SampleIndex m, ChipShift ell, SpreadingFactor sf) {
  check_sample(m_hat, sf, "m_hat");
  check_sample(m, sf, "m");
  detail::check_shift(ell);
  if (ell == 0) {
    throw invalid_input("adjacent-symbol correlation requires a nonzero chip shift");
  }
  const auto n = static_cast<int>(sf.chips());
  cdouble acc{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const int shifted = k + ell;
    if (shifted >= 0 && shifted < n) {
      continue;
    }
    const auto wrapped = static_cast<std::uint32_t>((shifted + n) % n);
    acc += envelope_chip(m_hat, wrapped, sf) * std::conj(envelope_chip(m, static_cast<std::uint32_t>(k), sf));
  }
  return acc;
}

// Noise-free correlator output for candidate m when x_cur is sent and
// x_adj is the neighbour at n + sign(delta):
//   sqrt(P) [R_Psi d_{x,m} + R^_Psi R_{x,m}(l) + R^_Psi R^_{x_adj,m}(l)].
inline cdouble analytic_decision_statistic(SampleIndex x_cur, SampleIndex x_adj, SampleIndex m, double delta,
                                           ChipWaveform w, double power, SpreadingFactor sf) {
  check_sample(x_cur, sf, "x_cur");
  check_sample(x_adj, sf, "x_adj");
  check_sample(m, sf, "m");
  if (!(std::abs(delta) <= 0.5)) {
    throw invalid_input("offset " + std::to_string(delta) + " outside [-0.5, 0.5]");
  }
  const double amplitude = std::sqrt(power);
  const auto corr = chip_correlations(w, delta);
  cdouble stat = amplitude * corr.overlapping * (x_cur == m ? 1.0 : 0.0);
  const ChipShift ell = chip_shift(delta);
  if (ell != 0) {
    stat += amplitude * corr.overlapped *
            (cross_corr_same_symbol(x_cur, m, ell, sf) + cross_corr_adjacent_symbol(x_adj, m, ell, sf));
  }
  return stat;
}

}  // namespace qslora
