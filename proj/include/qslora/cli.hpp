#pragma once

// Command-line and config-file handling for the sweep driver.
//
// Precedence: command-line flags > QSLORA_WORKERS (workers only) >
// config file > built-in defaults. Config files hold `key = value` lines
// with `#` comments; keys are the long flag names without the leading
// `--` (e.g. `delta-s = 0.4`).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "sweep.hpp"

namespace qslora::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_usage = 2;

class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Carries the rendered help text of the command that asked for it.
class help_requested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void parse_args(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw help_requested(app.help());
  } catch (const CLI::ParseError& e) {
    throw usage_error(e.what());
  }
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  for (std::size_t pos = 0;;) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  return out;
}

inline double to_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception&) {
    throw usage_error(field + ": malformed number '" + text + "'");
  }
}

inline std::uint64_t to_unsigned(const std::string& field, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw usage_error(field + ": expected a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw usage_error(field + ": integer out of range '" + text + "'");
  }
}

// Trial counts accept scientific shorthand such as 1e6.
inline std::uint64_t to_count(const std::string& field, const std::string& text) {
  if (text.find_first_of("eE.") == std::string::npos) {
    return to_unsigned(field, text);
  }
  const double v = to_double(field, text);
  if (v < 0.0 || v != std::floor(v) || v > 1e18) {
    throw usage_error(field + ": expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

// Parses `start:stop:step` (or a single value) in dB.
inline SnrAxis parse_snr_axis(const std::string& text) {
  const auto parts = detail::split(text, ':');
  SnrAxis axis;
  if (parts.size() == 1) {
    axis.start_db = axis.stop_db = detail::to_double("snr", parts[0]);
    axis.step_db = 1.0;
  } else if (parts.size() == 3) {
    axis.start_db = detail::to_double("snr", parts[0]);
    axis.stop_db = detail::to_double("snr", parts[1]);
    axis.step_db = detail::to_double("snr", parts[2]);
  } else {
    throw usage_error("snr: expected start:stop:step, got '" + text + "'");
  }
  if (!(axis.step_db > 0.0)) {
    throw usage_error("snr: step must be positive");
  }
  if (axis.start_db > axis.stop_db) {
    throw usage_error("snr: start exceeds stop");
  }
  return axis;
}

// Applies one setting to the configuration; `key` is a long flag name.
inline void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "sf") {
    cfg.sf_list.clear();
    for (const auto& item : detail::split(value, ',')) {
      const auto sf = detail::to_unsigned("sf", item);
      if (sf < SpreadingFactor::min_value || sf > SpreadingFactor::max_value) {
        throw usage_error("sf: " + item + " outside [2, 12]");
      }
      cfg.sf_list.push_back(static_cast<int>(sf));
    }
  } else if (key == "waveform") {
    cfg.waveforms.clear();
    for (const auto& item : detail::split(value, ',')) {
      try {
        cfg.waveforms.push_back(parse_waveform(item));
      } catch (const invalid_input& e) {
        throw usage_error(std::string("waveform: ") + e.what());
      }
    }
  } else if (key == "delta-s") {
    cfg.delta_s_list.clear();
    for (const auto& item : detail::split(value, ',')) {
      const double d = detail::to_double("delta-s", item);
      if (!(d >= 0.0 && d <= 1.0)) {
        throw usage_error("delta-s: " + item + " outside [0, 1]");
      }
      cfg.delta_s_list.push_back(d);
    }
  } else if (key == "snr") {
    cfg.snr = parse_snr_axis(value);
  } else if (key == "trials") {
    cfg.trials_max = detail::to_count("trials", value);
    if (cfg.trials_max == 0) {
      throw usage_error("trials: must be positive");
    }
  } else if (key == "min-errors") {
    cfg.min_errors = detail::to_count("min-errors", value);
  } else if (key == "seed") {
    cfg.master_seed = detail::to_unsigned("seed", value);
  } else if (key == "workers") {
    const auto w = detail::to_unsigned("workers", value);
    if (w == 0 || w > 1024) {
      throw usage_error("workers: expected 1..1024, got '" + value + "'");
    }
    cfg.workers = static_cast<unsigned>(w);
  } else if (key == "fixed-delta") {
    const double d = detail::to_double("fixed-delta", value);
    if (!(std::abs(d) <= 0.5)) {
      throw usage_error("fixed-delta: " + value + " outside [-0.5, 0.5]");
    }
    cfg.fixed_delta = d;
  } else if (key == "output") {
    cfg.output_path = value;
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (value == "json") {
      cfg.format = OutputFormat::json;
    } else {
      throw usage_error("format: expected csv or json, got '" + value + "'");
    }
  } else if (key == "timing") {
    cfg.record_timing = value == "true" || value == "1" || value == "yes";
  } else {
    throw usage_error("unknown setting '" + key + "'");
  }
}

inline std::vector<std::pair<std::string, std::string>> read_config_text(std::istream& in, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto text = detail::trim(line);
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw usage_error(origin + ":" + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(detail::trim(std::string_view(text).substr(0, eq)),
                         detail::trim(std::string_view(text).substr(eq + 1)));
  }
  return entries;
}

struct SweepOptionValues {
  std::optional<std::string> sf, waveform, delta_s, snr, trials, min_errors, seed, workers, fixed_delta, output,
      format, config;
  bool timing = false;
};

// Registers the sweep flags on `app`, storing raw strings into `values`.
inline void add_sweep_options(CLI::App& app, SweepOptionValues& values) {
  app.add_option("--sf", values.sf, "spreading factors, comma separated (default 4,5,6,7)");
  app.add_option("--waveform", values.waveform, "chip waveforms: rect, rc or rect,rc (default both)");
  app.add_option("--delta-s", values.delta_s, "maximum normalized timing errors in [0,1], comma separated");
  app.add_option("--snr", values.snr, "SNR axis start:stop:step in dB (default -4:24:2)");
  app.add_option("--trials", values.trials, "maximum trials per grid point (default 1e6)");
  app.add_option("--min-errors", values.min_errors, "stop a point after this many errors (default 100, 0 = never)");
  app.add_option("--seed", values.seed, "master seed (default 1)");
  app.add_option("--workers", values.workers, "worker threads (default 1, env QSLORA_WORKERS)");
  app.add_option("--fixed-delta", values.fixed_delta, "use this offset for every trial instead of drawing one");
  app.add_option("--output,-o", values.output, "output file, - for stdout (default -)");
  app.add_option("--format", values.format, "csv or json (default csv)");
  app.add_option("--config", values.config, "key=value configuration file");
  app.add_flag("--timing", values.timing, "record wall time per point (output no longer reproducible)");
}

// Builds the configuration from already-parsed flag values.
inline SweepConfig resolve_config(const SweepOptionValues& v, const char* env_workers) {
  SweepConfig cfg;
  if (v.config) {
    std::ifstream in(*v.config);
    if (!in) {
      throw usage_error("config: cannot read '" + *v.config + "'");
    }
    for (const auto& [key, value] : read_config_text(in, *v.config)) {
      apply_setting(cfg, key, value);
    }
  }
  if (env_workers != nullptr && *env_workers != '\0') {
    apply_setting(cfg, "workers", env_workers);
  }
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"sf", &v.sf},         {"waveform", &v.waveform},       {"delta-s", &v.delta_s}, {"snr", &v.snr},
      {"trials", &v.trials}, {"min-errors", &v.min_errors},   {"seed", &v.seed},       {"workers", &v.workers},
      {"fixed-delta", &v.fixed_delta}, {"output", &v.output}, {"format", &v.format}};
  for (const auto& [key, value] : flags) {
    if (*value) {
      apply_setting(cfg, key, **value);
    }
  }
  if (v.timing) {
    cfg.record_timing = true;
  }
  try {
    cfg.validate();
  } catch (const invalid_input& e) {
    throw usage_error(e.what());
  }
  return cfg;
}

// Parses sweep arguments (without the program name). Throws usage_error on
// any malformed, unknown or out-of-range input.
inline SweepConfig parse_config(const std::vector<std::string>& args,
                                const char* env_workers = std::getenv("QSLORA_WORKERS")) {
  CLI::App app{"quasisynchronous LoRa SER sweep"};
  SweepOptionValues values;
  add_sweep_options(app, values);
  parse_args(app, args);
  return resolve_config(values, env_workers);
}

}  // namespace qslora::cli
