#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace mhlog::harness {

/// One CSV line. `defined` is false for metrics with no numeric value
/// (FRCR when the cost difference is zero); those print as "undefined".
struct MetricRow {
  std::string figure_id;
  std::string strategy;
  std::string param_name;
  double param_value = 0.0;
  std::string metric_name;
  double mean = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint32_t reps = 0;
  std::uint64_t seed = 0;
  bool defined = true;
};

inline constexpr std::string_view kCsvHeader =
    "figure,strategy,param,value,metric,mean,ci_low,ci_high,reps,seed";

inline std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string to_csv_line(const MetricRow& r) {
  std::string out;
  out += r.figure_id + ',' + r.strategy + ',' + r.param_name + ',' + format_g6(r.param_value) + ',' +
         r.metric_name + ',';
  if (r.defined) {
    out += format_g6(r.mean) + ',' + format_g6(r.ci95_low) + ',' + format_g6(r.ci95_high);
  } else {
    out += "undefined,undefined,undefined";
  }
  out += ',' + std::to_string(r.reps) + ',' + std::to_string(r.seed);
  return out;
}

/// Header, then rows, LF-terminated. Provenance lines, if any, go first as
/// '#' comments.
inline std::string render_csv(const std::vector<MetricRow>& rows,
                              const std::vector<std::string>& provenance = {}) {
  std::string out;
  for (const auto& p : provenance) out += "# " + p + '\n';
  out += kCsvHeader;
  out += '\n';
  for (const auto& r : rows) out += to_csv_line(r) + '\n';
  return out;
}

inline void emit_csv(const std::vector<MetricRow>& rows, const std::string& out_path,
                     const std::vector<std::string>& provenance = {}) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  const std::string body = render_csv(rows, provenance);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("write failed for '" + out_path + "'");
}

/// Inverse of render_csv. Comment lines are skipped.
inline std::vector<MetricRow> parse_csv(std::string_view text) {
  std::vector<MetricRow> rows;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ConfigError("unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    if (f.size() != 10) throw ConfigError("CSV row has " + std::to_string(f.size()) + " fields");
    MetricRow r;
    r.figure_id = f[0];
    r.strategy = f[1];
    r.param_name = f[2];
    r.param_value = std::stod(f[3]);
    r.metric_name = f[4];
    r.defined = f[5] != "undefined";
    if (r.defined) {
      r.mean = std::stod(f[5]);
      r.ci95_low = std::stod(f[6]);
      r.ci95_high = std::stod(f[7]);
    }
    r.reps = static_cast<std::uint32_t>(std::stoul(f[8]));
    r.seed = std::stoull(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mhlog::harness
