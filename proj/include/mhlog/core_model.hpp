#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mhlog {

using Time = double;
using Cost = double;

/// Rates and timers that drive one simulated mobile host.
struct SimParams {
  double lambda_f = 0.001;  // failures per time unit
  double lambda_w = 0.5;    // write events per time unit
  double mu = 0.01;         // handoffs per time unit
  Time T_c = 100.0;         // checkpoint interval
  std::uint32_t cache_capacity = 16;
  Time recovery_deadline = 42.0;
  Time sim_horizon = 20000.0;
  std::uint64_t seed = 12345;
  std::uint32_t replications = 20;
};

/// Unit costs. Data and control costs are quoted per wired hop; alpha and
/// rho weight wireless and wired legs respectively.
struct CostParams {
  double r = 0.1;
  double C_c = 5.0;
  double C_1 = 1.0;
  double C_m = 0.5;
  double alpha = 1.0;
  double rho = 1.0;
  Time T_load_ckpt = 10.0;
  Time T_load_log = 1.0;
  double C_p = 3.0;
};

struct LogEntry {
  std::uint64_t seq = 0;
  std::uint64_t origin_checkpoint = 0;
  Time timestamp = 0.0;
};

struct Checkpoint {
  std::uint64_t ckpt_seq = 0;
  std::uint64_t covered_writes = 0;
  Time timestamp = 0.0;
};

struct DerivedQuantities {
  double k_expected = 0.0;
  double eta = 0.0;
  double N_c = 0.0;
  double N_l = 0.0;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
    return os.str();
  }

  std::vector<std::string> violations_;
};

struct ValidatedConfig {
  SimParams sim;
  CostParams cost;
  std::vector<std::string> warnings;
};

inline constexpr const char* kSingleFailureWarning = "single-failure assumption stressed";

/// Checks every invariant and collects all violations before throwing, so a
/// bad config file reports everything wrong with it at once.
inline ValidatedConfig validate_params(const SimParams& sp, const CostParams& cp) {
  std::vector<std::string> errs;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0)) errs.push_back(std::string(name) + " must be > 0");
  };
  auto nonneg = [&](double v, const char* name) {
    if (!(v >= 0.0)) errs.push_back(std::string(name) + " must be >= 0");
  };

  positive(sp.lambda_f, "lambda_f");
  positive(sp.lambda_w, "lambda_w");
  positive(sp.mu, "mu");
  positive(sp.T_c, "T_c");
  if (sp.cache_capacity < 1) errs.emplace_back("cache_capacity must be >= 1");
  positive(sp.recovery_deadline, "recovery_deadline");
  positive(sp.sim_horizon, "sim_horizon");
  if (sp.replications < 1) errs.emplace_back("replications must be >= 1");

  positive(cp.r, "r");
  nonneg(cp.C_c, "C_c");
  nonneg(cp.C_1, "C_1");
  nonneg(cp.C_m, "C_m");
  nonneg(cp.alpha, "alpha");
  nonneg(cp.rho, "rho");
  nonneg(cp.T_load_ckpt, "T_load_ckpt");
  nonneg(cp.T_load_log, "T_load_log");
  nonneg(cp.C_p, "C_p");

  if (!errs.empty()) throw ValidationError(std::move(errs));

  ValidatedConfig out{sp, cp, {}};
  if (sp.lambda_f >= sp.mu) out.warnings.emplace_back(kSingleFailureWarning);
  return out;
}

/// Expected per-interval quantities. eta follows the (k - 1) / 2 rule and is
/// floored at zero.
inline DerivedQuantities derive_quantities(const SimParams& sp, Time horizon) {
  DerivedQuantities d;
  d.k_expected = sp.lambda_w * sp.T_c;
  d.eta = std::max(0.0, (d.k_expected - 1.0) / 2.0);
  d.N_c = horizon / sp.T_c;
  d.N_l = sp.lambda_w * horizon;
  return d;
}

}  // namespace mhlog
