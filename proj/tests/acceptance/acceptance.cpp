// Acceptance suite: one PASS/FAIL line per criterion.
//
//   qslora_acceptance            run every criterion
//   qslora_acceptance --only AC7 run one criterion

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qslora/qslora.hpp"

namespace {

using namespace qslora;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void note(const std::string& line) { std::cout << "    " << line << '\n' << std::flush; }

constexpr std::uint64_t seed = 1;

Outcome ac1_orthonormality() {
  double worst = 0.0;
  for (int s = 4; s <= 8; ++s) {
    const SpreadingFactor sf(s);
    std::vector<ModulatedSymbol> syms;
    for (SampleIndex x = 0; x < sf.chips(); ++x) {
      syms.push_back(envelope(x, sf));
    }
    for (SampleIndex i = 0; i < sf.chips(); ++i) {
      for (SampleIndex j = 0; j < sf.chips(); ++j) {
        worst = std::max(worst, std::abs(inner_product(syms[i], syms[j]) - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  return {worst < 1e-10, fmt("sf 4..8 exhaustive, max |<a,b> - delta| = %.3e (tol 1e-10)", worst)};
}

Outcome ac2_correlations() {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double d = -1.0 + 2.0 * i / 999.0;
    worst = std::max(worst, std::abs(autocorr_overlapping_quadrature(ChipWaveform::rectangular, d) - (1.0 - std::abs(d))));
    worst = std::max(worst, std::abs(autocorr_overlapped_quadrature(ChipWaveform::rectangular, d) - std::abs(d)));
  }
  const double energy_err = std::abs(energy(ChipWaveform::raised_cosine) - 1.0);
  const double sixth_err = std::abs(autocorr_overlapping_quadrature(ChipWaveform::raised_cosine, 0.5) - 1.0 / 6.0);
  const bool pass = worst < 1e-9 && energy_err < 1e-9 && sixth_err < 1e-8;
  return {pass, fmt("rect max err %.3e over 1000 offsets, rc energy err %.3e, rc R(0.5) - 1/6 = %.3e", worst,
                    energy_err, sixth_err)};
}

Outcome ac3_certification() {
  bool pass = true;
  std::string detail;
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    RandomStream rng(seed, hash_combine(0xce27ULL, static_cast<std::uint64_t>(w)));
    const double err = certify_discrete_model(SpreadingFactor(4), w, 100, rng);
    pass = pass && err < 1e-6;
    detail += fmt("%s max_abs_error %.3e; ", std::string(to_token(w)).c_str(), err);
  }
  return {pass, detail + "sf 4, 100 realizations each (tol 1e-6)"};
}

Outcome ac4_decomposition() {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> offset(-0.5, 0.5);
  double worst = 0.0;
  for (int s : {4, 5}) {
    const SpreadingFactor sf(s);
    std::uniform_int_distribution<SampleIndex> sym(0, sf.mask());
    for (int t = 0; t < 200; ++t) {
      const SampleIndex xp = sym(gen), xc = sym(gen), xn = sym(gen);
      const double delta = offset(gen);
      const auto w = t % 2 ? ChipWaveform::raised_cosine : ChipWaveform::rectangular;
      RandomStream rng(seed, 0, static_cast<std::uint64_t>(t));
      const auto real = synthesize_chips(xp, xc, xn, delta, w, {1.0, 0.0}, sf, rng);
      const auto dv = despread(real.received_chips, sf);
      for (SampleIndex m = 0; m < sf.chips(); ++m) {
        const cdouble ref = analytic_decision_statistic(xc, delta > 0.0 ? xn : xp, m, delta, w, 1.0, sf);
        worst = std::max(worst, std::abs(ref - dv.stats[m]));
      }
    }
  }
  return {worst < 1e-9, fmt("200 tuples per sf in {4,5}, max deviation %.3e (tol 1e-9)", worst)};
}

Outcome ac5_synchronous() {
  constexpr std::uint64_t trials = 200000;
  bool pass = true;
  int points = 0;
  double worst_sigmas = 0.0;
  for (int s : {4, 5}) {
    const SpreadingFactor sf(s);
    for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
      for (double snr = 0.0; snr <= 16.0; snr += 1.0) {
        const double theory = analytical_ser_sync(sf, snr);
        if (theory < 1e-3 || theory > 1e-1) {
          continue;
        }
        const auto est = run_point({sf, w, 0.0, snr}, {trials, 0}, seed);
        const double sigma = std::sqrt(theory * (1.0 - theory) / static_cast<double>(est.trials));
        const double z = std::abs(est.ser - theory) / sigma;
        worst_sigmas = std::max(worst_sigmas, z);
        ++points;
        if (z > 3.0) {
          pass = false;
          note(fmt("sf %d %s %g dB: mc %.5e theory %.5e (%.2f sigma)", s, std::string(to_token(w)).c_str(), snr,
                   est.ser, theory, z));
        }
      }
    }
  }
  return {pass, fmt("%d points, %llu trials each, worst deviation %.2f sigma (tol 3)", points,
                    static_cast<unsigned long long>(trials), worst_sigmas)};
}

Outcome ac6_error_floor() {
  constexpr std::uint64_t trials = 100000;
  bool pass = true;
  double lowest = 1.0;
  for (int s = 4; s <= 7; ++s) {
    for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
      const auto est = run_point({SpreadingFactor(s), w, 1.0, 20.0}, {trials, 0}, seed);
      note(fmt("sf %d %s: ser %.4e [%.4e, %.4e]", s, std::string(to_token(w)).c_str(), est.ser, est.ci_low,
               est.ci_high));
      lowest = std::min(lowest, est.ser);
      pass = pass && est.ser > 1e-2;
    }
  }
  return {pass, fmt("delta_s 1, 20 dB, sf 4..7, both waveforms: lowest ser %.4e (need > 1e-2)", lowest)};
}

// SNR at which the estimated SER crosses `target`, by linear interpolation
// of log10(SER) between the bracketing grid points.
std::optional<double> required_snr(GridPoint point, double target, double start, double stop, double step,
                                   std::uint64_t trials) {
  std::optional<std::pair<double, double>> prev;
  for (double snr = start; snr <= stop + 1e-9; snr += step) {
    point.snr_db = snr;
    const auto est = run_point(point, {trials, 0}, seed);
    if (est.ser < target) {
      if (!prev) {
        return std::nullopt;
      }
      const double lo = std::log10(std::max(est.ser, 0.5 / static_cast<double>(trials)));
      const double hi = std::log10(prev->second);
      return prev->first + step * (hi - std::log10(target)) / (hi - lo);
    }
    prev = {snr, est.ser};
  }
  return std::nullopt;
}

std::string show(std::optional<double> v) { return v ? fmt("%.2f dB", *v) : std::string("not reached"); }

Outcome ac7_operating_points() {
  constexpr std::uint64_t trials = 500000;
  bool pass_a = true;
  for (int s : {5, 6}) {
    const auto snr = required_snr({SpreadingFactor(s), ChipWaveform::rectangular, 0.4, 0.0}, 1e-3, 8.0, 22.0, 1.0,
                                  trials);
    const bool ok = snr && std::abs(*snr - 14.0) <= 2.0;
    note(fmt("(a) sf %d rect delta_s 0.4: ser 1e-3 at %s (need 14 +- 2 dB) %s", s, show(snr).c_str(),
             ok ? "ok" : "miss"));
    pass_a = pass_a && ok;
  }
  bool pass_b = false;
  for (double ds : {0.4, 0.6, 0.8}) {
    const auto rect = required_snr({SpreadingFactor(4), ChipWaveform::rectangular, ds, 0.0}, 1e-3, 6.0, 24.0, 1.0,
                                   trials);
    const auto rc = required_snr({SpreadingFactor(4), ChipWaveform::raised_cosine, ds, 0.0}, 1e-3, 6.0, 24.0, 1.0,
                                 trials);
    const bool ok = rect && rc && *rc - *rect >= 1.0 && *rc - *rect <= 3.0;
    note(fmt("(b) sf 4 delta_s %.1f: rect %s, rc %s, gap %s (need rc - rect in [1, 3] dB) %s", ds,
             show(rect).c_str(), show(rc).c_str(), rect && rc ? fmt("%.2f dB", *rc - *rect).c_str() : "n/a",
             ok ? "ok" : "miss"));
    pass_b = pass_b || ok;
  }
  return {pass_a && pass_b, fmt("(a) %s, (b) %s; %llu trials per point", pass_a ? "pass" : "fail",
                                pass_b ? "pass" : "fail", static_cast<unsigned long long>(trials))};
}

Outcome ac8_waveform_ordering() {
  constexpr std::uint64_t trials = 100000;
  bool pass = true;
  int compared = 0;
  for (int s = 4; s <= 7; ++s) {
    for (double snr = 0.0; snr <= 20.0; snr += 2.0) {
      const auto rect = run_point({SpreadingFactor(s), ChipWaveform::rectangular, 0.2, snr}, {trials, 2000}, seed);
      if (rect.ser > 1e-1) {
        continue;
      }
      if (rect.ser < 1e-4) {
        break;
      }
      const auto rc = run_point({SpreadingFactor(s), ChipWaveform::raised_cosine, 0.2, snr}, {trials, 2000}, seed);
      const bool ok = rc.ser <= rect.ser || rc.ci_low <= rect.ci_high;
      note(fmt("sf %d %g dB: rc %.4e rect %.4e %s", s, snr, rc.ser, rect.ser, ok ? "ok" : "violated"));
      pass = pass && ok;
      ++compared;
    }
  }
  return {pass && compared > 0, fmt("delta_s 0.2, %d waterfall points across sf 4..7", compared)};
}

Outcome ac9_monotonic() {
  constexpr std::uint64_t trials = 100000;
  bool pass = true;
  for (int s = 4; s <= 7; ++s) {
    for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
      std::optional<SerEstimate> prev;
      std::string row;
      for (double ds : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const auto est = run_point({SpreadingFactor(s), w, ds, 14.0}, {trials, 0}, seed);
        if (prev && est.ci_high < prev->ci_low) {
          pass = false;
          row += "(!)";
        }
        row += fmt(" %.3e", est.ser);
        prev = est;
      }
      note(fmt("sf %d %s:%s", s, std::string(to_token(w)).c_str(), row.c_str()));
    }
  }
  return {pass, "14 dB, delta_s 0..1, sf 4..7, both waveforms; nondecreasing within Wilson intervals"};
}

Outcome ac10_determinism() {
  SweepConfig cfg;
  cfg.trials_max = 10000;
  const auto dir = std::filesystem::temp_directory_path() / "qslora_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> bodies;
  for (unsigned workers : {1U, 8U}) {
    cfg.workers = workers;
    cfg.output_path = (dir / ("sweep_w" + std::to_string(workers) + ".csv")).string();
    std::vector<ResultRecord> records;
    for (const auto& est : run_sweep(cfg)) {
      records.push_back(to_record(est));
    }
    write_results(records, cfg.output_path, cfg.format);
    std::ifstream in(cfg.output_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    bodies.push_back(ss.str());
  }
  std::filesystem::remove_all(dir);
  const bool pass = !bodies[0].empty() && bodies[0] == bodies[1];
  return {pass, fmt("default 720-point sweep at 1e4 trials, workers 1 vs 8: %zu bytes, %s", bodies[0].size(),
                    pass ? "identical" : "different")};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string only;
  app.add_option("--only", only, "run a single criterion, e.g. AC7");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"AC1", "orthonormality", ac1_orthonormality},
      {"AC2", "chip correlation closed forms", ac2_correlations},
      {"AC3", "chip-rate model certification", ac3_certification},
      {"AC4", "analytic decision statistic", ac4_decomposition},
      {"AC5", "synchronous Monte-Carlo vs theory", ac5_synchronous},
      {"AC6", "error floor at delta_s 1", ac6_error_floor},
      {"AC7", "operating points", ac7_operating_points},
      {"AC8", "raised cosine beats rectangular at delta_s 0.2", ac8_waveform_ordering},
      {"AC9", "monotonic degradation in delta_s", ac9_monotonic},
      {"AC10", "determinism across worker counts", ac10_determinism},
  };
  bool all = true;
  bool matched = false;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.id) {
      continue;
    }
    matched = true;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << c.id << ' ' << (out.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << out.detail << '\n'
              << std::flush;
    all = all && out.pass;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return all ? 0 : 1;
}
