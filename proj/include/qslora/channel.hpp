#pragma once

// Chip-rate quasisynchronous channel: timing-offset draw, chip synthesis
// with one-chip spillover from the neighbouring symbol, and AWGN.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chip_waveform.hpp"
#include "fscm.hpp"
#include "random.hpp"
#include "symbol_correlations.hpp"

namespace qslora {

struct ChannelParams {
  double power = 1.0;  // P, symbol power
  double n0 = 1.0;     // N0, per-chip complex noise variance

  // P = 1 and N0 chosen so that 10 log10(P / N0) = snr_db.
  static ChannelParams from_snr_db(double snr_db, double power = 1.0) {
    if (!std::isfinite(snr_db)) {
      throw invalid_input("SNR must be finite");
    }
    if (!(power > 0.0)) {
      throw invalid_input("symbol power must be positive");
    }
    return {power, power * std::pow(10.0, -snr_db / 10.0)};
  }

  double snr_db() const noexcept { return 10.0 * std::log10(power / n0); }
};

struct ChannelRealization {
  SampleIndex x_prev = 0;
  SampleIndex x_cur = 0;
  SampleIndex x_next = 0;
  double delta = 0.0;
  std::vector<cdouble> received_chips;
  ChannelParams params;
  std::uint64_t rng_stream_id = 0;
};

inline double draw_offset(double delta_s, RandomStream& rng) {
  if (!(delta_s >= 0.0 && delta_s <= 1.0)) {
    throw invalid_input("delta-s " + std::to_string(delta_s) + " outside [0, 1]");
  }
  if (delta_s == 0.0) {
    return 0.0;
  }
  return delta_s * (rng.uniform() - 0.5);
}

struct OverlapIndex {
  std::uint32_t k_hat = 0;
  int symbol_offset = 0;  // -1 previous symbol, 0 same, +1 next

  friend bool operator==(const OverlapIndex&, const OverlapIndex&) = default;
};

inline OverlapIndex overlap_indices(std::uint32_t k, double delta, SpreadingFactor sf) {
  if (k >= sf.chips()) {
    throw invalid_input("chip index " + std::to_string(k) + " outside symbol");
  }
  const auto shifted = static_cast<std::int64_t>(k) + chip_shift(delta);
  const auto m = static_cast<std::int64_t>(sf.chips());
  if (shifted == m) {
    return {0, +1};
  }
  if (shifted == -1) {
    return {sf.mask(), -1};
  }
  return {static_cast<std::uint32_t>(shifted), 0};
}

// Writes the received chips r^(k) for k in [0, M) into `out`. Correlations
// are passed in so the hot path evaluates them once per offset.
inline void synthesize_chips_into(std::span<cdouble> out, SampleIndex x_prev, SampleIndex x_cur,
                                  SampleIndex x_next, double delta, ChipCorrelations corr,
                                  const ChannelParams& params, SpreadingFactor sf, RandomStream& rng) {
  const double amplitude = std::sqrt(params.power);
  const double own = amplitude * corr.overlapping;
  const double spill = amplitude * corr.overlapped;
  const std::uint32_t m = sf.chips();
  const ChipShift ell = chip_shift(delta);
  for (std::uint32_t k = 0; k < m; ++k) {
    out[k] = own * envelope_chip(x_cur, k, sf);
  }
  if (ell > 0) {
    for (std::uint32_t k = 0; k + 1 < m; ++k) {
      out[k] += spill * envelope_chip(x_cur, k + 1, sf);
    }
    out[m - 1] += spill * envelope_chip(x_next, 0, sf);
  } else if (ell < 0) {
    out[0] += spill * envelope_chip(x_prev, m - 1, sf);
    for (std::uint32_t k = 1; k < m; ++k) {
      out[k] += spill * envelope_chip(x_cur, k - 1, sf);
    }
  }
  if (params.n0 > 0.0) {
    for (std::uint32_t k = 0; k < m; ++k) {
      out[k] += rng.complex_gaussian(params.n0);
    }
  }
}

inline ChannelRealization synthesize_chips(SampleIndex x_prev, SampleIndex x_cur, SampleIndex x_next, double delta,
                                           ChipWaveform w, const ChannelParams& params, SpreadingFactor sf,
                                           RandomStream& rng) {
  check_sample(x_prev, sf, "x_prev");
  check_sample(x_cur, sf, "x_cur");
  check_sample(x_next, sf, "x_next");
  if (!(std::abs(delta) <= 0.5)) {
    throw invalid_input("offset " + std::to_string(delta) + " outside [-0.5, 0.5]");
  }
  if (!(params.power >= 0.0) || !(params.n0 >= 0.0)) {
    throw invalid_input("channel power and noise level must be non-negative");
  }
  ChannelRealization real{x_prev, x_cur, x_next, delta, std::vector<cdouble>(sf.chips()), params, rng.substream()};
  synthesize_chips_into(real.received_chips, x_prev, x_cur, x_next, delta, chip_correlations(w, delta), params, sf,
                        rng);
  return real;
}

}  // namespace qslora
