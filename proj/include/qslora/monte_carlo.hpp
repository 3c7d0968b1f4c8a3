#pragma once

// Monte-Carlo symbol-error-rate estimation over the (SF, waveform,
// delta_s, SNR) grid. Every trial draws from its own counter-based stream,
// and trials are reduced in index order, so estimates are a pure function
// of the configuration and seed regardless of worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "chip_waveform.hpp"
#include "fscm.hpp"
#include "random.hpp"
#include "receiver.hpp"

namespace qslora {

struct GridPoint {
  SpreadingFactor sf{4};
  ChipWaveform waveform = ChipWaveform::rectangular;
  double delta_s = 0.0;
  double snr_db = 0.0;

  void validate() const {
    if (!(delta_s >= 0.0 && delta_s <= 1.0)) {
      throw invalid_input("delta_s " + std::to_string(delta_s) + " outside [0, 1]");
    }
    if (!std::isfinite(snr_db)) {
      throw invalid_input("snr_db must be finite");
    }
  }
};

struct StoppingRule {
  std::uint64_t max_trials = 1'000'000;
  // stop once this many errors are seen; 0 always runs max_trials
  std::uint64_t min_errors = 100;
};

struct ExecOptions {
  unsigned workers = 1;
  // When set, every trial uses this offset instead of drawing one.
  std::optional<double> fixed_delta;
  // Trials per scheduling unit; the stopping rule is checked after each batch.
  std::uint64_t batch_size = 1024;
};

struct SerEstimate {
  GridPoint point;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  double elapsed = 0.0;  // seconds
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = 1.959963984540054) {
  if (trials == 0) {
    return {0.0, 1.0};
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::clamp(std::min(centre - half, p), 0.0, 1.0), std::clamp(std::max(centre + half, p), 0.0, 1.0)};
}

// Stream id of a grid point, a function of its coordinates only.
inline std::uint64_t point_stream_id(const GridPoint& point) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(point.sf.value()));
  h = hash_combine(h, static_cast<std::uint64_t>(point.waveform));
  h = hash_double(h, point.delta_s);
  h = hash_double(h, point.snr_db);
  return h;
}

// Per-worker scratch for running trials of one grid point.
class TrialRunner {
public:
  TrialRunner(const GridPoint& point, std::uint64_t master_seed, std::optional<double> fixed_delta = std::nullopt)
      : point_(point),
        params_(ChannelParams::from_snr_db(point.snr_db)),
        master_seed_(master_seed),
        stream_id_(point_stream_id(point)),
        fixed_delta_(fixed_delta),
        despreader_(point.sf),
        chips_(point.sf.chips()),
        stats_(point.sf.chips()) {
    point_.validate();
    if (fixed_delta_ && !(std::abs(*fixed_delta_) <= 0.5)) {
      throw invalid_input("fixed offset " + std::to_string(*fixed_delta_) + " outside [-0.5, 0.5]");
    }
    if (fixed_delta_) {
      fixed_corr_ = chip_correlations(point_.waveform, *fixed_delta_);
    }
  }

  // True when the detected sample differs from the transmitted one.
  bool operator()(std::uint64_t trial_index) {
    const SpreadingFactor sf = point_.sf;
    RandomStream rng(master_seed_, stream_id_, trial_index);
    const SampleIndex x_prev = rng.uniform_pow2(sf.chips());
    const SampleIndex x_cur = rng.uniform_pow2(sf.chips());
    const SampleIndex x_next = rng.uniform_pow2(sf.chips());
    double delta = 0.0;
    ChipCorrelations corr;
    if (fixed_delta_) {
      delta = *fixed_delta_;
      corr = fixed_corr_;
    } else {
      delta = draw_offset(point_.delta_s, rng);
      corr = chip_correlations(point_.waveform, delta);
    }
    synthesize_chips_into(chips_, x_prev, x_cur, x_next, delta, corr, params_, sf, rng);
    despreader_(chips_, stats_);
    return detect(stats_) != x_cur;
  }

private:
  GridPoint point_;
  ChannelParams params_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::optional<double> fixed_delta_;
  ChipCorrelations fixed_corr_;
  Despreader despreader_;
  std::vector<cdouble> chips_;
  std::vector<cdouble> stats_;
};

inline bool run_trial(const GridPoint& point, std::uint64_t trial_index, std::uint64_t master_seed,
                      std::optional<double> fixed_delta = std::nullopt) {
  TrialRunner runner(point, master_seed, fixed_delta);
  return runner(trial_index);
}

inline SerEstimate run_point(const GridPoint& point, const StoppingRule& stop, std::uint64_t master_seed,
                             const ExecOptions& opts = {}) {
  point.validate();
  if (stop.max_trials == 0) {
    throw invalid_input("max_trials must be positive");
  }
  if (opts.batch_size == 0) {
    throw invalid_input("batch size must be positive");
  }
  const auto started = std::chrono::steady_clock::now();
  const unsigned workers = std::max(1U, opts.workers);
  const std::uint64_t batch = opts.batch_size;
  const std::uint64_t batch_count = (stop.max_trials + batch - 1) / batch;

  std::vector<TrialRunner> runners;
  runners.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    runners.emplace_back(point, master_seed, opts.fixed_delta);
  }
  auto run_batch = [&](TrialRunner& runner, std::uint64_t b) {
    const std::uint64_t first = b * batch;
    const std::uint64_t last = std::min(first + batch, stop.max_trials);
    std::uint64_t errors = 0;
    for (std::uint64_t t = first; t < last; ++t) {
      errors += runner(t) ? 1 : 0;
    }
    return errors;
  };

  SerEstimate est;
  est.point = point;
  est.seed = master_seed;
  std::vector<std::uint64_t> batch_errors(workers);
  bool done = false;
  for (std::uint64_t next = 0; next < batch_count && !done; next += workers) {
    const std::uint64_t round = std::min<std::uint64_t>(workers, batch_count - next);
    if (round == 1) {
      batch_errors[0] = run_batch(runners[0], next);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(round);
      for (std::uint64_t w = 0; w < round; ++w) {
        pool.emplace_back([&, w] { batch_errors[w] = run_batch(runners[w], next + w); });
      }
    }
    // reduce in batch order; batches past the stopping point are discarded
    for (std::uint64_t w = 0; w < round; ++w) {
      const std::uint64_t b = next + w;
      est.trials = std::min((b + 1) * batch, stop.max_trials);
      est.errors += batch_errors[w];
      if (stop.min_errors > 0 && est.errors >= stop.min_errors) {
        done = true;
        break;
      }
    }
  }
  est.ser = static_cast<double>(est.errors) / static_cast<double>(est.trials);
  const auto ci = wilson_interval(est.errors, est.trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return est;
}

}  // namespace qslora
