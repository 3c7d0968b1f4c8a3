#pragma once

// The experiment grid and its execution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chip_waveform.hpp"
#include "monte_carlo.hpp"

namespace qslora {

struct SnrAxis {
  double start_db = -4.0;
  double stop_db = 24.0;
  double step_db = 2.0;

  // start, start + step, ... up to and including stop when reachable.
  std::vector<double> values() const {
    std::vector<double> out;
    if (!(step_db > 0.0)) {
      return out;
    }
    for (std::int64_t i = 0;; ++i) {
      double v = start_db + static_cast<double>(i) * step_db;
      if (v > stop_db + 1e-9 * step_db) {
        break;
      }
      // trim accumulated binary noise such as 0.30000000000000004
      v = std::round(v * 1e9) / 1e9;
      out.push_back(v);
    }
    return out;
  }
};

enum class OutputFormat { csv, json };

struct SweepConfig {
  std::vector<int> sf_list{4, 5, 6, 7};
  std::vector<ChipWaveform> waveforms{ChipWaveform::rectangular, ChipWaveform::raised_cosine};
  std::vector<double> delta_s_list{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  SnrAxis snr;
  std::uint64_t trials_max = 1'000'000;
  std::uint64_t min_errors = 100;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
  std::optional<double> fixed_delta;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::csv;
  bool record_timing = false;

  // Throws invalid_input naming the offending field.
  void validate() const {
    if (sf_list.empty()) {
      throw invalid_input("sf: axis is empty");
    }
    for (int sf : sf_list) {
      if (sf < SpreadingFactor::min_value || sf > SpreadingFactor::max_value) {
        throw invalid_input("sf: " + std::to_string(sf) + " outside [2, 12]");
      }
    }
    if (waveforms.empty()) {
      throw invalid_input("waveform: axis is empty");
    }
    if (delta_s_list.empty()) {
      throw invalid_input("delta-s: axis is empty");
    }
    for (double d : delta_s_list) {
      if (!(d >= 0.0 && d <= 1.0)) {
        throw invalid_input("delta-s: " + std::to_string(d) + " outside [0, 1]");
      }
    }
    if (!std::isfinite(snr.start_db) || !std::isfinite(snr.stop_db) || !(snr.step_db > 0.0)) {
      throw invalid_input("snr: need finite start:stop and a positive step");
    }
    if (snr.values().empty()) {
      throw invalid_input("snr: axis is empty (start > stop)");
    }
    if (trials_max == 0) {
      throw invalid_input("trials: must be positive");
    }
    if (workers == 0) {
      throw invalid_input("workers: must be positive");
    }
    if (fixed_delta && !(std::abs(*fixed_delta) <= 0.5)) {
      throw invalid_input("fixed-delta: " + std::to_string(*fixed_delta) + " outside [-0.5, 0.5]");
    }
  }

  // Grid points ordered by (sf, waveform, delta_s, snr_db).
  std::vector<GridPoint> grid() const {
    auto sfs = sf_list;
    auto wfs = waveforms;
    auto dss = delta_s_list;
    auto snrs = snr.values();
    auto sort_unique = [](auto& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    sort_unique(sfs);
    sort_unique(wfs);
    sort_unique(dss);
    sort_unique(snrs);
    std::vector<GridPoint> points;
    points.reserve(sfs.size() * wfs.size() * dss.size() * snrs.size());
    for (int sf : sfs) {
      for (auto w : wfs) {
        for (double ds : dss) {
          for (double snr_db : snrs) {
            points.push_back({SpreadingFactor(sf), w, ds, snr_db});
          }
        }
      }
    }
    return points;
  }
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total, const SerEstimate&)>;

inline std::vector<SerEstimate> run_sweep(const SweepConfig& config, const ProgressCallback& progress = {}) {
  config.validate();
  const auto points = config.grid();
  const StoppingRule stop{config.trials_max, config.min_errors};
  const ExecOptions opts{config.workers, config.fixed_delta};
  std::vector<SerEstimate> results;
  results.reserve(points.size());
  for (const auto& point : points) {
    results.push_back(run_point(point, stop, config.master_seed, opts));
    if (progress) {
      progress(results.size(), points.size(), results.back());
    }
  }
  return results;
}

}  // namespace qslora
