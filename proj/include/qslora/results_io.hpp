#pragma once

// CSV and JSON serialisation of sweep results.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "sweep.hpp"

namespace qslora {

inline constexpr std::string_view tool_version = "1.0.0";

struct ResultRecord {
  int sf = 0;
  std::string waveform;
  double delta_s = 0.0;
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  double elapsed_s = 0.0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

inline constexpr std::array<std::string_view, 11> result_columns{
    "sf", "waveform", "delta_s", "snr_db", "trials", "errors", "ser", "ci_low", "ci_high", "seed", "elapsed_s"};

// Wall time is only kept when asked for, so that output files are a
// function of the configuration alone.
inline ResultRecord to_record(const SerEstimate& est, bool record_timing = false) {
  return {est.point.sf.value(),
          std::string(to_token(est.point.waveform)),
          est.point.delta_s,
          est.point.snr_db,
          est.trials,
          est.errors,
          est.ser,
          est.ci_low,
          est.ci_high,
          est.seed,
          record_timing ? est.elapsed : 0.0};
}

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

template <class T>
T parse_number(std::string_view text, std::string_view column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw io_error("malformed " + std::string(column) + " value '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline std::string format_csv(const std::vector<ResultRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < result_columns.size(); ++i) {
    out += (i ? "," : "");
    out += result_columns[i];
  }
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.sf) + ',' + r.waveform + ',' + detail::format_double(r.delta_s) + ',' +
           detail::format_double(r.snr_db) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.errors) + ',' +
           detail::format_double(r.ser) + ',' + detail::format_double(r.ci_low) + ',' +
           detail::format_double(r.ci_high) + ',' + std::to_string(r.seed) + ',' +
           detail::format_double(r.elapsed_s) + '\n';
  }
  return out;
}

inline std::vector<ResultRecord> parse_csv(std::string_view text) {
  std::vector<ResultRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    ++line_no;
    std::vector<std::string_view> fields;
    for (std::size_t pos = 0;;) {
      const auto comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (fields.size() != result_columns.size()) {
      throw io_error("line " + std::to_string(line_no) + ": expected " + std::to_string(result_columns.size()) +
                     " fields, got " + std::to_string(fields.size()));
    }
    if (line_no == 1) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] != result_columns[i]) {
          throw io_error("unexpected CSV header column '" + std::string(fields[i]) + "'");
        }
      }
      continue;
    }
    ResultRecord r;
    r.sf = detail::parse_number<int>(fields[0], "sf");
    r.waveform = std::string(fields[1]);
    r.delta_s = detail::parse_number<double>(fields[2], "delta_s");
    r.snr_db = detail::parse_number<double>(fields[3], "snr_db");
    r.trials = detail::parse_number<std::uint64_t>(fields[4], "trials");
    r.errors = detail::parse_number<std::uint64_t>(fields[5], "errors");
    r.ser = detail::parse_number<double>(fields[6], "ser");
    r.ci_low = detail::parse_number<double>(fields[7], "ci_low");
    r.ci_high = detail::parse_number<double>(fields[8], "ci_high");
    r.seed = detail::parse_number<std::uint64_t>(fields[9], "seed");
    r.elapsed_s = detail::parse_number<double>(fields[10], "elapsed_s");
    records.push_back(std::move(r));
  }
  if (line_no == 0) {
    throw io_error("empty CSV");
  }
  return records;
}

inline std::string format_json(const std::vector<ResultRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["sf"] = r.sf;
    obj["waveform"] = r.waveform;
    obj["delta_s"] = r.delta_s;
    obj["snr_db"] = r.snr_db;
    obj["trials"] = r.trials;
    obj["errors"] = r.errors;
    obj["ser"] = r.ser;
    obj["ci_low"] = r.ci_low;
    obj["ci_high"] = r.ci_high;
    obj["seed"] = r.seed;
    obj["elapsed_s"] = r.elapsed_s;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

inline std::vector<ResultRecord> parse_json(std::string_view text) {
  std::vector<ResultRecord> records;
  const auto doc = nlohmann::json::parse(text);
  for (const auto& obj : doc) {
    records.push_back({obj.at("sf").get<int>(), obj.at("waveform").get<std::string>(),
                       obj.at("delta_s").get<double>(), obj.at("snr_db").get<double>(),
                       obj.at("trials").get<std::uint64_t>(), obj.at("errors").get<std::uint64_t>(),
                       obj.at("ser").get<double>(), obj.at("ci_low").get<double>(), obj.at("ci_high").get<double>(),
                       obj.at("seed").get<std::uint64_t>(), obj.at("elapsed_s").get<double>()});
  }
  return records;
}

// Writes to `path`, or to stdout when path is "-".
inline void write_results(const std::vector<ResultRecord>& records, const std::string& path, OutputFormat format) {
  if (records.empty()) {
    throw invalid_input("no records to write");
  }
  const std::string body = format == OutputFormat::csv ? format_csv(records) : format_json(records);
  if (path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw io_error("cannot open '" + path + "' for writing");
  }
  out << body;
  out.flush();
  if (!out) {
    throw io_error("write to '" + path + "' failed");
  }
}

}  // namespace qslora
