#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "../analytic.hpp"
#include "../core_model.hpp"
#include "../engine.hpp"

namespace mhlog::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedConfig {
  SimConfig config;
  bool deadline_set = false;
  // experiment.<figure>.values overrides, keyed by figure id
  std::map<std::string, std::vector<double>> sweep_overrides;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view v) {
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

inline bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true|false, got '" + std::string(v) + "'");
}

inline std::vector<double> to_list(std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_double(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
  return out;
}

using Setter = std::function<void(ParsedConfig&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto dbl = [&t](const char* key, auto member) {
      t[key] = [member](ParsedConfig& c, std::string_view v) { member(c) = to_double(v); };
    };
    dbl("sim.lambda_f", [](ParsedConfig& c) -> double& { return c.config.sim.lambda_f; });
    dbl("sim.lambda_w", [](ParsedConfig& c) -> double& { return c.config.sim.lambda_w; });
    dbl("sim.mu", [](ParsedConfig& c) -> double& { return c.config.sim.mu; });
    dbl("sim.T_c", [](ParsedConfig& c) -> double& { return c.config.sim.T_c; });
    dbl("sim.horizon", [](ParsedConfig& c) -> double& { return c.config.sim.sim_horizon; });
    t["sim.cache_capacity"] = [](ParsedConfig& c, std::string_view v) {
      c.config.sim.cache_capacity = to_int<std::uint32_t>(v);
    };
    t["sim.seed"] = [](ParsedConfig& c, std::string_view v) { c.config.sim.seed = to_int<std::uint64_t>(v); };
    t["sim.replications"] = [](ParsedConfig& c, std::string_view v) {
      c.config.sim.replications = to_int<std::uint32_t>(v);
    };

    dbl("cost.r", [](ParsedConfig& c) -> double& { return c.config.cost.r; });
    dbl("cost.C_c", [](ParsedConfig& c) -> double& { return c.config.cost.C_c; });
    dbl("cost.C_1", [](ParsedConfig& c) -> double& { return c.config.cost.C_1; });
    dbl("cost.C_m", [](ParsedConfig& c) -> double& { return c.config.cost.C_m; });
    dbl("cost.alpha", [](ParsedConfig& c) -> double& { return c.config.cost.alpha; });
    dbl("cost.rho", [](ParsedConfig& c) -> double& { return c.config.cost.rho; });
    dbl("cost.T", [](ParsedConfig& c) -> double& { return c.config.cost.T_load_ckpt; });
    dbl("cost.T_1", [](ParsedConfig& c) -> double& { return c.config.cost.T_load_log; });
    dbl("cost.C_p", [](ParsedConfig& c) -> double& { return c.config.cost.C_p; });

    t["topology.msc"] = [](ParsedConfig& c, std::string_view v) { c.config.topology.msc = to_int<std::uint32_t>(v); };
    t["topology.bsc_per_msc"] = [](ParsedConfig& c, std::string_view v) {
      c.config.topology.bsc_per_msc = to_int<std::uint32_t>(v);
    };
    t["topology.bs_per_bsc"] = [](ParsedConfig& c, std::string_view v) {
      c.config.topology.bs_per_bsc = to_int<std::uint32_t>(v);
    };
    t["topology.adjacency"] = [](ParsedConfig& c, std::string_view v) {
      c.config.topology.adjacency = parse_adjacency(v);
    };
    t["topology.inter_msc_hops"] = [](ParsedConfig& c, std::string_view v) {
      c.config.topology.inter_msc_hops = to_int<std::uint32_t>(v);
    };

    t["strategy"] = [](ParsedConfig& c, std::string_view v) { c.config.strategy = parse_strategy(v); };
    t["frcr.erratum_bound"] = [](ParsedConfig& c, std::string_view v) {
      c.config.frcr_erratum_bound = to_bool(v);
    };
    t["recovery.deadline"] = [](ParsedConfig& c, std::string_view v) {
      c.config.sim.recovery_deadline = to_double(v);
      c.deadline_set = true;
    };
    t["recovery.p_same_region"] = [](ParsedConfig& c, std::string_view v) {
      const double p = to_double(v);
      if (p < 0.0 || p > 1.0) throw std::invalid_argument("must lie in [0, 1]");
      c.config.p_same_region = p;
    };
    t["crosscheck.intervals"] = [](ParsedConfig& c, std::string_view v) {
      c.config.crosscheck_intervals = to_int<std::uint64_t>(v);
    };
    for (const char* fig : {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}) {
      t[std::string("experiment.") + fig + ".values"] = [fig](ParsedConfig& c, std::string_view v) {
        c.sweep_overrides[fig] = to_list(v);
      };
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// Every recognised key, sorted.
inline std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : detail::setters()) out.push_back(k);
  return out;
}

/// Recovery deadline used when the config does not set one: three times the
/// single-fragment retrieval time of the configured parameters.
inline Time calibrated_deadline(const SimParams& sp, const CostParams& cp) {
  return 3.0 * analytic::single_fragment_retrieval_time(sp, cp);
}

/// Parses `key = value` lines. '#' starts a comment. Missing keys keep their
/// defaults. Throws ConfigError (with line number) or ValidationError.
inline ParsedConfig parse_config_text(std::string_view text, std::string_view origin = "<config>") {
  ParsedConfig out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto& table = detail::setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(where() + "unknown key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError(where() + "missing value for '" + std::string(key) + "'");
    try {
      it->second(out, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where() + std::string(key) + ": " + e.what());
    }
  }
  if (!out.deadline_set)
    out.config.sim.recovery_deadline = calibrated_deadline(out.config.sim, out.config.cost);
  validate_params(out.config.sim, out.config.cost);
  try {
    out.config.topology.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(origin) + ": topology: " + e.what());
  }
  return out;
}

inline ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace mhlog::harness
