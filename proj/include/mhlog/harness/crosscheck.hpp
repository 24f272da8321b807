#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "../analytic.hpp"
#include "../engine.hpp"

namespace mhlog::harness {

struct IntervalCostEstimate {
  double mean_cost = 0.0;
  double p02_hat = 0.0;
  std::uint64_t intervals = 0;
};

/// Simulated mean cost per handoff interval, priced with the same terms as
/// the closed-form total cost: an interval that completes without failure
/// pays C_01 with the live pending-log size in place of eta; an interval
/// with a failure pays C_r at the pending size seen by the first failure.
inline IntervalCostEstimate simulate_interval_costs(const SimConfig& config, std::uint64_t seed,
                                                    std::uint64_t n_intervals) {
  const SimParams& sp = config.sim;
  const CostParams& cp = config.cost;
  const double k = std::max(1.0, sp.lambda_w * sp.T_c);
  mhlog::detail::Streams rng(seed);

  Time t = 0.0;
  Time next_write = sample_exponential(sp.lambda_w, rng.writes);
  Time next_ckpt = sp.T_c;
  std::uint64_t pending = 0;
  auto advance_to = [&](Time until) {
    for (;;) {
      const Time next = std::min(next_write, next_ckpt);
      if (next > until) return;
      if (next_ckpt <= next_write) {
        pending = 0;
        next_ckpt += sp.T_c;
      } else {
        ++pending;
        next_write += sample_exponential(sp.lambda_w, rng.writes);
      }
    }
  };

  const double fixed01 = cp.r * cp.alpha * cp.C_c / k + cp.rho * cp.alpha * cp.C_1 +
                         cp.rho * cp.alpha * cp.C_m + cp.C_c + cp.C_m;
  double sum = 0.0;
  std::uint64_t failed = 0;
  for (std::uint64_t i = 0; i < n_intervals; ++i) {
    const Time handoff_at = t + sample_exponential(sp.mu, rng.handoffs);
    const Time failure_at = sp.lambda_f > 0.0 ? t + sample_exponential(sp.lambda_f, rng.failures)
                                              : std::numeric_limits<Time>::infinity();
    if (failure_at < handoff_at) {
      advance_to(failure_at);
      sum += cp.r * (static_cast<double>(pending) * cp.C_1 + cp.C_c + cp.C_m);
      ++failed;
      advance_to(handoff_at);
    } else {
      advance_to(handoff_at);
      sum += fixed01 + static_cast<double>(pending) * cp.C_1;
    }
    t = handoff_at;
  }
  IntervalCostEstimate out;
  out.intervals = n_intervals;
  out.mean_cost = n_intervals ? sum / static_cast<double>(n_intervals) : 0.0;
  out.p02_hat = n_intervals ? static_cast<double>(failed) / static_cast<double>(n_intervals) : 0.0;
  return out;
}

struct CrosscheckRow {
  std::string name;
  double analytic = 0.0;
  double empirical = 0.0;
  double rel_error = 0.0;
  double abs_error = 0.0;
  bool flagged = false;  // off by more than the tolerance
};

struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  std::uint64_t intervals = 0;
  double tolerance = 0.05;

  bool ok() const {
    return std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.flagged; });
  }
};

/// Closed-form Markov probabilities and C_t against simulation. lambda_f may
/// be zero here; mu must be positive.
inline CrosscheckReport crosscheck_analytic(const SimConfig& config, double tolerance = 0.05) {
  CrosscheckReport rep;
  rep.intervals = config.crosscheck_intervals;
  rep.tolerance = tolerance;
  const auto& sp = config.sim;
  const auto ar = analytic::markov_probs(sp.lambda_f, sp.mu);

  SimConfig probs_cfg = config;
  const auto est = estimate_transition_probs(probs_cfg, sp.seed, config.crosscheck_intervals);

  const double k = sp.lambda_w * sp.T_c;
  const double eta = std::max(0.0, (k - 1.0) / 2.0);
  const Cost c01 = analytic::total_handoff_cost(std::max(1.0, k), eta, config.cost);
  const Cost cr = analytic::recovery_cost(eta, config.cost);
  const Cost ct = analytic::total_cost(ar.p01, ar.p02, c01, cr);
  const auto sim = simulate_interval_costs(config, split_seed(sp.seed, 1), config.crosscheck_intervals);

  auto add = [&](std::string name, double a, double e, bool relative) {
    CrosscheckRow r{std::move(name), a, e, 0.0, std::abs(a - e), false};
    r.rel_error = a != 0.0 ? std::abs(a - e) / std::abs(a) : (e == 0.0 ? 0.0 : 1.0);
    // Probabilities are compared on an absolute scale: p02 ~ 0.09 makes a
    // relative tolerance far tighter than the sampling error allows.
    r.flagged = relative ? r.rel_error > tolerance : r.abs_error > tolerance;
    rep.rows.push_back(std::move(r));
  };
  add("p01", ar.p01, est.p01_hat, false);
  add("p02", ar.p02, est.p02_hat, false);
  add("C_t", ct, sim.mean_cost, true);
  return rep;
}

}  // namespace mhlog::harness
