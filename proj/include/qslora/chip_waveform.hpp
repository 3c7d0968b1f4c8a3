#pragma once

// Chip-limited, unit-energy chip waveforms and their partial
// auto-correlations under a fractional-chip timing offset. Time is in
// units of the chip duration throughout.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "quadrature.hpp"

namespace qslora {

enum class ChipWaveform { rectangular, raised_cosine };

inline constexpr std::string_view to_token(ChipWaveform w) noexcept {
  return w == ChipWaveform::rectangular ? "rect" : "rc";
}

inline ChipWaveform parse_waveform(std::string_view token) {
  if (token == "rect") {
    return ChipWaveform::rectangular;
  }
  if (token == "rc") {
    return ChipWaveform::raised_cosine;
  }
  throw invalid_input("unknown chip waveform '" + std::string(token) + "' (expected rect or rc)");
}

inline double sample_waveform(ChipWaveform w, double t) noexcept {
  if (!(t >= 0.0 && t < 1.0)) {
    return 0.0;
  }
  if (w == ChipWaveform::rectangular) {
    return 1.0;
  }
  // sqrt(2/3) (1 - cos 2 pi t)
  return 0.81649658092772603273 * (1.0 - std::cos(2.0 * std::numbers::pi * t));
}

// Energy of an arbitrary pulse supported on [0, 1).
template <class Pulse>
double pulse_energy(Pulse&& pulse, quadrature::Tolerance tol = {}) {
  return quadrature::integrate([&](double t) {
    const double v = pulse(t);
    return v * v;
  }, 0.0, 1.0, tol);
}

inline double energy(ChipWaveform w) {
  return pulse_energy([w](double t) { return sample_waveform(w, t); });
}

namespace detail {

inline void check_offset(double delta) {
  if (!(std::abs(delta) <= 1.0)) {
    throw invalid_input("chip offset " + std::to_string(delta) + " outside [-1, 1]");
  }
}

}  // namespace detail

// R_Psi(delta) = int_{|d|}^{1} psi(u) psi(u - |d|) du: the share of the
// intended chip seen by a matched filter shifted by delta chips.
inline double autocorr_overlapping(ChipWaveform w, double delta) {
  detail::check_offset(delta);
  const double d = std::abs(delta);
  if (w == ChipWaveform::rectangular) {
    return 1.0 - d;
  }
  const double c = std::cos(2.0 * std::numbers::pi * d);
  const double s = std::sin(2.0 * std::numbers::pi * d);
  return (2.0 / 3.0) * (1.0 - d) * (1.0 + 0.5 * c) + s / (2.0 * std::numbers::pi);
}

// R^_Psi(delta) = int_0^{|d|} psi(u) psi(u + 1 - |d|) du: the spill-in from
// the adjacent chip.
inline double autocorr_overlapped(ChipWaveform w, double delta) {
  detail::check_offset(delta);
  const double d = std::abs(delta);
  if (w == ChipWaveform::rectangular) {
    return d;
  }
  const double c = std::cos(2.0 * std::numbers::pi * d);
  const double s = std::sin(2.0 * std::numbers::pi * d);
  return (2.0 / 3.0) * d * (1.0 + 0.5 * c) - s / (2.0 * std::numbers::pi);
}

// Reference values of the two correlations by adaptive quadrature of
// their defining integrals. The closed forms above must agree with these.
inline double autocorr_overlapping_quadrature(ChipWaveform w, double delta,
                                              quadrature::Tolerance tol = {}) {
  detail::check_offset(delta);
  const double d = std::abs(delta);
  return quadrature::integrate(
      [&](double u) { return sample_waveform(w, u) * sample_waveform(w, u - d); }, d, 1.0, tol);
}

inline double autocorr_overlapped_quadrature(ChipWaveform w, double delta,
                                             quadrature::Tolerance tol = {}) {
  detail::check_offset(delta);
  const double d = std::abs(delta);
  return quadrature::integrate(
      [&](double u) { return sample_waveform(w, u) * sample_waveform(w, u + 1.0 - d); }, 0.0, d, tol);
}

struct ChipCorrelations {
  double overlapping = 1.0;
  double overlapped = 0.0;
};

inline ChipCorrelations chip_correlations(ChipWaveform w, double delta) {
  return {autocorr_overlapping(w, delta), autocorr_overlapped(w, delta)};
}

}  // namespace qslora
