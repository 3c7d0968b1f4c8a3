#pragma once

// Continuous-time reference model. Synthesises the transmitted signal
// directly from the chip waveform and evaluates the chip matched filter by
// numerical integration, with no use of the partial-correlation functions.
// Slow; used to certify the chip-rate channel model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "channel.hpp"
#include "chip_waveform.hpp"
#include "fscm.hpp"
#include "quadrature.hpp"
#include "random.hpp"

namespace qslora {

namespace detail {

// Pulse formula continued onto the closed support [0, 1].
inline double pulse_closed(ChipWaveform w, double u) noexcept {
  if (u < 0.0 || u > 1.0) {
    return 0.0;
  }
  if (w == ChipWaveform::rectangular) {
    return 1.0;
  }
  return 0.81649658092772603273 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
}

}  // namespace detail

class ContinuousSignal {
public:
  static constexpr int min_oversampling = 64;
  static constexpr int guard_chips = 2;  // one chip of silence on each side

  ContinuousSignal(std::vector<SampleIndex> symbols, ChipWaveform w, SpreadingFactor sf, double power,
                   int oversampling, int first_symbol)
      : symbols_(std::move(symbols)),
        waveform_(w),
        sf_(sf),
        amplitude_(std::sqrt(power)),
        oversampling_(oversampling),
        first_symbol_(first_symbol) {
    if (symbols_.empty()) {
      throw invalid_input("continuous signal needs at least one symbol");
    }
    if (oversampling_ < min_oversampling) {
      throw invalid_input("oversampling " + std::to_string(oversampling_) + " below " +
                          std::to_string(min_oversampling));
    }
    for (auto x : symbols_) {
      check_sample(x, sf_);
    }
    const std::size_t count =
        (symbols_.size() * sf_.chips() + static_cast<std::size_t>(guard_chips)) * static_cast<std::size_t>(oversampling_);
    samples_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      samples_[i] = value_at(sample_time(i));
    }
  }

  // s(t) = sqrt(P) sum_n sum_k Phi(x(n);k) psi(t - nT - k), exactly.
  cdouble value_at(double t) const {
    const double period = static_cast<double>(sf_.chips());
    const double local = t - static_cast<double>(first_symbol_) * period;
    const auto c = static_cast<std::int64_t>(std::floor(local));
    if (c < 0 || c >= static_cast<std::int64_t>(symbols_.size() * sf_.chips())) {
      return {0.0, 0.0};
    }
    // chip-limited pulses: only the chip whose slot contains t contributes
    const auto sym = static_cast<std::size_t>(c) / sf_.chips();
    const auto k = static_cast<std::uint32_t>(static_cast<std::size_t>(c) % sf_.chips());
    return amplitude_ * sample_waveform(waveform_, local - static_cast<double>(c)) *
           envelope_chip(symbols_[sym], k, sf_);
  }

  // Contribution of the chip occupying slot [slot, slot + 1) (slots counted
  // in absolute chip time), with the pulse taken on its closed support.
  // Requires slot <= t <= slot + 1.
  cdouble chip_term(double slot, double t) const {
    const double period = static_cast<double>(sf_.chips());
    const auto c = static_cast<std::int64_t>(slot - static_cast<double>(first_symbol_) * period);
    if (c < 0 || c >= static_cast<std::int64_t>(symbols_.size() * sf_.chips())) {
      return {0.0, 0.0};
    }
    const auto sym = static_cast<std::size_t>(c) / sf_.chips();
    const auto k = static_cast<std::uint32_t>(static_cast<std::size_t>(c) % sf_.chips());
    return amplitude_ * detail::pulse_closed(waveform_, std::clamp(t - slot, 0.0, 1.0)) *
           envelope_chip(symbols_[sym], k, sf_);
  }

  double t0() const noexcept {
    return static_cast<double>(first_symbol_) * static_cast<double>(sf_.chips()) - 0.5 * guard_chips;
  }
  double t_end() const noexcept { return t0() + static_cast<double>(samples_.size()) / oversampling_; }
  double sample_time(std::size_t i) const noexcept { return t0() + static_cast<double>(i) / oversampling_; }

  const std::vector<cdouble>& samples() const noexcept { return samples_; }
  int oversampling() const noexcept { return oversampling_; }
  SpreadingFactor sf() const noexcept { return sf_; }
  ChipWaveform waveform() const noexcept { return waveform_; }
  int first_symbol() const noexcept { return first_symbol_; }
  const std::vector<SampleIndex>& symbols() const noexcept { return symbols_; }

private:
  std::vector<SampleIndex> symbols_;
  ChipWaveform waveform_;
  SpreadingFactor sf_;
  double amplitude_;
  int oversampling_;
  int first_symbol_;
  std::vector<cdouble> samples_;
};

inline ContinuousSignal synthesize(std::vector<SampleIndex> symbols, ChipWaveform w, SpreadingFactor sf, double power,
                                   int oversampling, int first_symbol = 0) {
  return ContinuousSignal(std::move(symbols), w, sf, power, oversampling, first_symbol);
}

struct MatchedFilterOptions {
  double tolerance = 1e-10;
};

// r^(k,n) = int r(t) psi(t - nT - k - delta) dt over the support of the
// shifted filter. The window is split at chip boundaries so that each
// piece has a smooth integrand; each piece is integrated by trapezoid
// refinement from the signal's oversampled grid with Richardson
// extrapolation.
inline cdouble matched_filter_chip(const ContinuousSignal& sig, int n, std::uint32_t k, double delta, ChipWaveform w,
                                   MatchedFilterOptions opts = {}) {
  const double period = static_cast<double>(sig.sf().chips());
  const double start = static_cast<double>(n) * period + static_cast<double>(k) + delta;
  const double stop = start + 1.0;
  if (start < sig.t0() || stop > sig.t_end()) {
    throw invalid_input("matched-filter window [" + std::to_string(start) + ", " + std::to_string(stop) +
                        "] outside synthesized span");
  }
  std::vector<double> cuts{start};
  for (double b = std::ceil(start); b < stop; b += 1.0) {
    if (b > start) {
      cuts.push_back(b);
    }
  }
  cuts.push_back(stop);

  cdouble total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const double slot = std::floor(0.5 * (a + b));
    // both factors are smooth on the closed piece; evaluate their one-sided
    // limits at the endpoints (clamped against rounding of t - start)
    auto integrand = [&](double t) {
      return sig.chip_term(slot, t) * detail::pulse_closed(w, std::clamp(t - start, 0.0, 1.0));
    };
    const auto panels =
        static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) * static_cast<double>(sig.oversampling()))));
    total += quadrature::romberg(integrand, a, b, panels, opts.tolerance);
  }
  return total;
}

// Maximum |continuous - chip-rate| over all chips of `trials` random
// noise-free realizations.
inline double certify_discrete_model(SpreadingFactor sf, ChipWaveform w, int trials, RandomStream& rng,
                                     double delta_s = 1.0, int oversampling = 256) {
  if (trials < 1) {
    throw invalid_input("certification needs at least one trial");
  }
  const ChannelParams noise_free{1.0, 0.0};
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SampleIndex x_prev = rng.uniform_pow2(sf.chips());
    const SampleIndex x_cur = rng.uniform_pow2(sf.chips());
    const SampleIndex x_next = rng.uniform_pow2(sf.chips());
    const double delta = draw_offset(delta_s, rng);
    const auto sig = synthesize({x_prev, x_cur, x_next}, w, sf, noise_free.power, oversampling, -1);
    const auto discrete = synthesize_chips(x_prev, x_cur, x_next, delta, w, noise_free, sf, rng);
    for (std::uint32_t k = 0; k < sf.chips(); ++k) {
      const cdouble reference = matched_filter_chip(sig, 0, k, delta, w);
      worst = std::max(worst, std::abs(reference - discrete.received_chips[k]));
    }
  }
  return worst;
}

}  // namespace qslora
