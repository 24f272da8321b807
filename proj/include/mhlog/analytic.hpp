#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "core_model.hpp"

// Closed-form cost model. Every formula is evaluated term by term as
// printed, including the ones whose units do not obviously line up.

namespace mhlog::analytic {

struct MarkovProbs {
  double p01 = 1.0;  // handoff interval completes without failure
  double p02 = 0.0;  // failure within the interval
};

inline MarkovProbs markov_probs(double lambda_f, double mu) {
  if (lambda_f < 0.0 || mu < 0.0) throw std::invalid_argument("rates must be non-negative");
  if (lambda_f == 0.0 && mu == 0.0) throw std::invalid_argument("lambda_f and mu are both zero");
  MarkovProbs p;
  p.p02 = lambda_f / (lambda_f + mu);
  p.p01 = 1.0 - p.p02;
  return p;
}

/// C_h = eta * C_1 + C_c + C_m
inline Cost avg_handoff_cost(double eta, const CostParams& cp) {
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  return eta * cp.C_1 + cp.C_c + cp.C_m;
}

/// C_01 = r a C_c / k + rho a C_1 + rho a C_m + eta C_1 + C_c + C_m
inline Cost total_handoff_cost(double k, double eta, const CostParams& cp) {
  if (k < 1.0) throw std::invalid_argument("k must be >= 1");
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  return cp.r * cp.alpha * cp.C_c / k + cp.rho * cp.alpha * cp.C_1 + cp.rho * cp.alpha * cp.C_m +
         eta * cp.C_1 + cp.C_c + cp.C_m;
}

/// C_r = r (eta C_1 + C_c + C_m)
inline Cost recovery_cost(double eta, const CostParams& cp) {
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  return cp.r * (eta * cp.C_1 + cp.C_c + cp.C_m);
}

/// C_t = P01 C_01 + P02 C_r
inline Cost total_cost(double p01, double p02, Cost c01, Cost c_r) {
  if (std::abs(p01 + p02 - 1.0) > 1e-12)
    throw std::invalid_argument("p01 + p02 must equal 1");
  return p01 * c01 + p02 * c_r;
}

/// Log-entry transfer operations between two checkpoints:
///   sum_{n=1}^{N} (1/lambda_f) / (1/mu) * n  =  (mu / lambda_f) * N (N + 1) / 2
/// with N = floor(T_c * lambda_f) as printed, or floor(T_c * mu) (the
/// number of moves per checkpoint interval) when `erratum_bound` is set.
inline double log_transfer_ops(double T_c, double lambda_f, double mu, bool erratum_bound = false) {
  if (!(T_c > 0.0 && lambda_f > 0.0 && mu > 0.0))
    throw std::invalid_argument("T_c, lambda_f and mu must be > 0");
  const double N = std::floor(T_c * (erratum_bound ? mu : lambda_f));
  if (N < 1.0) return 0.0;
  return (mu / lambda_f) * N * (N + 1.0) / 2.0;
}

/// C_prop = (1/lambda_f)/T_c * { r T T_c lambda_f + r T_1 * ops }
inline Cost c_prop(double T_c, double lambda_f, double mu, const CostParams& cp,
                   bool erratum_bound = false) {
  const double ops = log_transfer_ops(T_c, lambda_f, mu, erratum_bound);
  return (1.0 / lambda_f) / T_c *
         (cp.r * cp.T_load_ckpt * T_c * lambda_f + cp.r * cp.T_load_log * ops);
}

/// C_lazy = (1/lambda_f)/T_c * (T_c lambda_f C_p). Reduces to C_p.
inline Cost c_lazy(double T_c, double lambda_f, const CostParams& cp) {
  if (!(T_c > 0.0 && lambda_f > 0.0)) throw std::invalid_argument("T_c and lambda_f must be > 0");
  return (1.0 / lambda_f) / T_c * (T_c * lambda_f * cp.C_p);
}

/// (P_prop - P_lazy) / (C_prop - C_lazy); empty when the costs coincide.
inline std::optional<double> frcr(double p_prop, double p_lazy, Cost c_prop_v, Cost c_lazy_v) {
  const double dc = c_prop_v - c_lazy_v;
  if (dc == 0.0) return std::nullopt;
  return (p_prop - p_lazy) / dc;
}

struct AnalyticReport {
  double k = 0.0;
  double eta = 0.0;
  double p01 = 0.0;
  double p02 = 0.0;
  Cost c_handoff_avg = 0.0;
  Cost c01 = 0.0;
  Cost c_r = 0.0;
  Cost c_t = 0.0;
  Cost c_prop = 0.0;
  Cost c_lazy = 0.0;
  double n_ops = 0.0;
  // FRCR needs measured recovery probabilities; filled in by the harness.
  std::optional<double> frcr;
};

/// Evaluates every closed form for one parameter set. k is clamped to 1 for
/// the C_01 term when fewer than one write is expected per interval.
inline AnalyticReport evaluate(const SimParams& sp, const CostParams& cp, bool erratum_bound = false) {
  AnalyticReport r;
  r.k = sp.lambda_w * sp.T_c;
  r.eta = std::max(0.0, (r.k - 1.0) / 2.0);
  const auto p = markov_probs(sp.lambda_f, sp.mu);
  r.p01 = p.p01;
  r.p02 = p.p02;
  r.c_handoff_avg = avg_handoff_cost(r.eta, cp);
  r.c01 = total_handoff_cost(std::max(1.0, r.k), r.eta, cp);
  r.c_r = recovery_cost(r.eta, cp);
  r.c_t = total_cost(r.p01, r.p02, r.c01, r.c_r);
  r.n_ops = log_transfer_ops(sp.T_c, sp.lambda_f, sp.mu, erratum_bound);
  r.c_prop = c_prop(sp.T_c, sp.lambda_f, sp.mu, cp, erratum_bound);
  r.c_lazy = c_lazy(sp.T_c, sp.lambda_f, cp);
  return r;
}

/// Single-fragment retrieval time: T + T_1 + r (eta C_1 + C_c + C_m).
inline Time single_fragment_retrieval_time(const SimParams& sp, const CostParams& cp) {
  const double eta = std::max(0.0, (sp.lambda_w * sp.T_c - 1.0) / 2.0);
  return cp.T_load_ckpt + cp.T_load_log + cp.r * (eta * cp.C_1 + cp.C_c + cp.C_m);
}

}  // namespace mhlog::analytic
