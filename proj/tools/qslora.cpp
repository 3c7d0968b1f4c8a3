// qslora: quasisynchronous LoRa symbol-error-rate simulator.
//
//   qslora [sweep] [--sf 4,5] [--waveform rect,rc] [--delta-s 0,0.4] [--snr 0:20:2] ...
//   qslora certify [--sf 4] [--waveform rect,rc] [--trials 100]
//   qslora oracle  [--sf 4,5,6,7] [--snr -4:24:2]
//   qslora corr    [--waveform rc] [--points 11]

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qslora/qslora.hpp"

namespace {

using namespace qslora;

int run_sweep_command(const std::vector<std::string>& args, bool quiet) {
  const SweepConfig cfg = cli::parse_config(args);
  const auto results = qslora::run_sweep(cfg, [&](std::size_t done, std::size_t total, const SerEstimate& est) {
    if (!quiet) {
      std::fprintf(stderr, "[%zu/%zu] sf=%d %s delta_s=%g snr=%g dB: %llu/%llu errors, ser=%.3e\n", done, total,
                   est.point.sf.value(), std::string(to_token(est.point.waveform)).c_str(), est.point.delta_s,
                   est.point.snr_db, static_cast<unsigned long long>(est.errors),
                   static_cast<unsigned long long>(est.trials), est.ser);
    }
  });
  std::vector<ResultRecord> records;
  records.reserve(results.size());
  for (const auto& est : results) {
    records.push_back(to_record(est, cfg.record_timing));
  }
  write_results(records, cfg.output_path, cfg.format);
  return cli::exit_ok;
}

std::vector<ChipWaveform> waveform_list(const std::string& text) {
  std::vector<ChipWaveform> out;
  for (const auto& item : cli::detail::split(text, ',')) {
    try {
      out.push_back(parse_waveform(item));
    } catch (const invalid_input& e) {
      throw cli::usage_error(std::string("waveform: ") + e.what());
    }
  }
  return out;
}

int run_certify_command(const std::vector<std::string>& args) {
  CLI::App app{"certify the chip-rate model against the continuous-time matched filter"};
  int sf = 4;
  std::string waveforms = "rect,rc";
  int trials = 100;
  std::uint64_t seed = 1;
  double delta_s = 1.0;
  int oversampling = 256;
  app.add_option("--sf", sf, "spreading factor");
  app.add_option("--waveform", waveforms, "rect, rc or rect,rc");
  app.add_option("--trials", trials, "random realizations per waveform");
  app.add_option("--seed", seed, "seed");
  app.add_option("--delta-s", delta_s, "maximum normalized timing error");
  app.add_option("--oversampling", oversampling, "samples per chip of the continuous-time grid");
  cli::parse_args(app, args);
  constexpr double threshold = 1e-6;
  bool ok = true;
  for (auto w : waveform_list(waveforms)) {
    RandomStream rng(seed, hash_combine(0xce27ULL, static_cast<std::uint64_t>(w)));
    const double err = certify_discrete_model(SpreadingFactor(sf), w, trials, rng, delta_s, oversampling);
    std::cout << "sf=" << sf << " waveform=" << to_token(w) << " trials=" << trials << " max_abs_error="
              << std::setprecision(3) << std::scientific << err << (err < threshold ? " PASS" : " FAIL") << '\n';
    ok = ok && err < threshold;
  }
  return ok ? cli::exit_ok : cli::exit_runtime;
}

int run_oracle_command(const std::vector<std::string>& args) {
  CLI::App app{"print the synchronous noncoherent SER curve"};
  std::string sfs = "4,5,6,7";
  std::string snr = "-4:24:2";
  app.add_option("--sf", sfs, "spreading factors");
  app.add_option("--snr", snr, "start:stop:step in dB");
  cli::parse_args(app, args);
  SweepConfig cfg;
  cli::apply_setting(cfg, "sf", sfs);
  cfg.snr = cli::parse_snr_axis(snr);
  std::cout << "sf,snr_db,ser\n" << std::setprecision(17);
  for (int sf : cfg.sf_list) {
    for (double s : cfg.snr.values()) {
      std::cout << sf << ',' << s << ',' << analytical_ser_sync(SpreadingFactor(sf), s) << '\n';
    }
  }
  return cli::exit_ok;
}

int run_corr_command(const std::vector<std::string>& args) {
  CLI::App app{"tabulate the partial auto-correlations of a chip waveform"};
  std::string waveform = "rc";
  int points = 11;
  app.add_option("--waveform", waveform, "rect or rc");
  app.add_option("--points", points, "offsets evenly spaced on [0, 1]")->check(CLI::Range(2, 100000));
  cli::parse_args(app, args);
  for (auto w : waveform_list(waveform)) {
    std::cout << "waveform,delta,r_overlapping,r_overlapped\n" << std::setprecision(17);
    for (int i = 0; i < points; ++i) {
      const double d = static_cast<double>(i) / (points - 1);
      std::cout << to_token(w) << ',' << d << ',' << autocorr_overlapping(w, d) << ',' << autocorr_overlapped(w, d)
                << '\n';
    }
  }
  return cli::exit_ok;
}

void print_usage() {
  std::cout << "usage: qslora [sweep|certify|oracle|corr] [options]\n"
               "  sweep    Monte-Carlo SER over the (sf, waveform, delta-s, snr) grid (default)\n"
               "  certify  compare the chip-rate model with the continuous-time matched filter\n"
               "  oracle   synchronous noncoherent SER table\n"
               "  corr     partial auto-correlation table of a chip waveform\n"
               "run `qslora <command> --help` for the options of a command\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string command = "sweep";
  if (!args.empty() && (args[0] == "sweep" || args[0] == "certify" || args[0] == "oracle" || args[0] == "corr")) {
    command = args[0];
    args.erase(args.begin());
  } else if (!args.empty() && (args[0] == "help" || args[0] == "-h" || args[0] == "--help")) {
    print_usage();
    return cli::exit_ok;
  }
  bool quiet = false;
  if (command == "sweep") {
    for (auto it = args.begin(); it != args.end();) {
      if (*it == "--quiet" || *it == "-q") {
        quiet = true;
        it = args.erase(it);
      } else {
        ++it;
      }
    }
  }
  try {
    if (command == "certify") {
      return run_certify_command(args);
    }
    if (command == "oracle") {
      return run_oracle_command(args);
    }
    if (command == "corr") {
      return run_corr_command(args);
    }
    return run_sweep_command(args, quiet);
  } catch (const cli::help_requested& e) {
    std::cout << e.what();
    return cli::exit_ok;
  } catch (const cli::usage_error& e) {
    std::cerr << "qslora: usage error: " << e.what() << '\n';
    return cli::exit_usage;
  } catch (const invalid_input& e) {
    std::cerr << "qslora: usage error: " << e.what() << '\n';
    return cli::exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "qslora: error: " << e.what() << '\n';
    return cli::exit_runtime;
  }
}
