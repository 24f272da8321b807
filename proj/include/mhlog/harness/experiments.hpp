#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "../analytic.hpp"
#include "../engine.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace mhlog::harness {

enum class FigureId { Fig3, Fig4, Fig5, Fig6, Fig7, Fig8 };

inline constexpr FigureId kAllFigures[] = {FigureId::Fig3, FigureId::Fig4, FigureId::Fig5,
                                           FigureId::Fig6, FigureId::Fig7, FigureId::Fig8};

inline const char* to_string(FigureId f) {
  switch (f) {
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig5: return "fig5";
    case FigureId::Fig6: return "fig6";
    case FigureId::Fig7: return "fig7";
    case FigureId::Fig8: return "fig8";
  }
  return "?";
}

inline FigureId parse_figure(std::string_view s) {
  for (auto f : kAllFigures)
    if (s == to_string(f)) return f;
  throw std::invalid_argument("unknown figure '" + std::string(s) + "' (expected fig3..fig8)");
}

/// Name of the parameter each figure sweeps.
inline const char* swept_param_of(FigureId f) {
  switch (f) {
    case FigureId::Fig3:
    case FigureId::Fig4:
    case FigureId::Fig5: return "mu";
    case FigureId::Fig6: return "lambda_w";
    case FigureId::Fig7:
    case FigureId::Fig8: return "T_c";
  }
  return "?";
}

inline std::vector<double> default_sweep(FigureId f) {
  switch (f) {
    case FigureId::Fig3:
    case FigureId::Fig4:
    case FigureId::Fig5: return {0.005, 0.01, 0.02, 0.05, 0.1};
    case FigureId::Fig6: return {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    case FigureId::Fig7:
    case FigureId::Fig8: return {50, 200, 500, 1000, 2000, 4000};
  }
  return {};
}

struct ExperimentSpec {
  FigureId figure = FigureId::Fig3;
  std::string swept_param;
  std::vector<double> sweep_values;
  std::vector<StrategyKind> strategies;
  std::uint32_t reps = 20;
  std::uint64_t master_seed = 12345;
  SimConfig base;  // fixed parameters; the swept one is overwritten per point
};

inline ExperimentSpec make_experiment(FigureId f, const ParsedConfig& parsed) {
  ExperimentSpec s;
  s.figure = f;
  s.swept_param = swept_param_of(f);
  const auto it = parsed.sweep_overrides.find(to_string(f));
  s.sweep_values = it != parsed.sweep_overrides.end() ? it->second : default_sweep(f);
  if (f == FigureId::Fig8)
    s.strategies = {StrategyKind::Proposed, StrategyKind::Lazy};
  else
    s.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  s.reps = parsed.config.sim.replications;
  s.master_seed = parsed.config.sim.seed;
  s.base = parsed.config;
  return s;
}

inline ExperimentSpec make_experiment(FigureId f, const SimConfig& base) {
  ParsedConfig p;
  p.config = base;
  return make_experiment(f, p);
}

inline void apply_param(SimConfig& c, std::string_view name, double v) {
  if (name == "mu")
    c.sim.mu = v;
  else if (name == "lambda_w")
    c.sim.lambda_w = v;
  else if (name == "T_c")
    c.sim.T_c = v;
  else if (name == "lambda_f")
    c.sim.lambda_f = v;
  else
    throw std::invalid_argument("cannot sweep parameter '" + std::string(name) + "'");
}

inline void validate_spec(const ExperimentSpec& s) {
  if (s.sweep_values.empty()) throw std::invalid_argument("sweep_values must be non-empty");
  bool up = true, down = true;
  for (std::size_t i = 1; i < s.sweep_values.size(); ++i) {
    up = up && s.sweep_values[i] > s.sweep_values[i - 1];
    down = down && s.sweep_values[i] < s.sweep_values[i - 1];
  }
  if (!up && !down) throw std::invalid_argument("sweep_values must be strictly monotone");
  if (s.swept_param != swept_param_of(s.figure))
    throw std::invalid_argument(std::string(to_string(s.figure)) + " sweeps " + swept_param_of(s.figure));
  if (s.strategies.empty()) throw std::invalid_argument("no strategies selected");
  if (s.reps < 1) throw std::invalid_argument("reps must be >= 1");
  validate_params(s.base.sim, s.base.cost);
  for (double v : s.sweep_values) {
    SimConfig c = s.base;
    apply_param(c, s.swept_param, v);
    validate_params(c.sim, c.cost);
  }
}

/// Metrics each figure reports, in output order.
inline std::vector<std::string> figure_metrics(FigureId f) {
  switch (f) {
    case FigureId::Fig3: return {"handoff_cost_per_handoff", "handoff_cost_rate"};
    case FigureId::Fig4: return {"recovery_cost_per_failure", "home_region_recovery_cost_per_failure"};
    case FigureId::Fig5: return {"total_cost_per_handoff_interval"};
    case FigureId::Fig6:
    case FigureId::Fig7: return {"recovery_probability"};
    case FigureId::Fig8: return {"p_prop", "p_lazy", "c_prop", "c_lazy", "frcr"};
  }
  return {};
}

inline std::vector<std::string> provenance(const ExperimentSpec& s) {
  std::vector<std::string> out;
  out.push_back(std::string("figure=") + to_string(s.figure) + " param=" + s.swept_param +
                " reps=" + std::to_string(s.reps) + " seed=" + std::to_string(s.master_seed));
  out.push_back("recovery_deadline=" + format_g6(s.base.sim.recovery_deadline));
  out.push_back(std::string("frcr.erratum_bound=") + (s.base.frcr_erratum_bound ? "true" : "false"));
  return out;
}

namespace detail {

inline MetricRow row_from(const ExperimentSpec& s, std::string strategy, double value,
                          std::string metric, const Summary& sum) {
  MetricRow r;
  r.figure_id = to_string(s.figure);
  r.strategy = std::move(strategy);
  r.param_name = s.swept_param;
  r.param_value = value;
  r.metric_name = std::move(metric);
  r.mean = sum.mean;
  r.ci95_low = sum.ci_low;
  r.ci95_high = sum.ci_high;
  r.reps = s.reps;
  r.seed = s.master_seed;
  return r;
}

inline Summary constant(double v) {
  Summary s;
  s.mean = s.ci_low = s.ci_high = v;
  s.n = 1;
  return s;
}

// FRCR per replication: both schemes run on the same seed, the measured
// probability gap is divided by the closed-form cost gap.
inline void run_frcr_point(const ExperimentSpec& s, const SimConfig& c, double value,
                           std::vector<MetricRow>& rows) {
  std::vector<double> p_prop, p_lazy, ratio;
  const Cost cp = analytic::c_prop(c.sim.T_c, c.sim.lambda_f, c.sim.mu, c.cost, c.frcr_erratum_bound);
  const Cost cl = analytic::c_lazy(c.sim.T_c, c.sim.lambda_f, c.cost);
  for (std::uint32_t i = 0; i < s.reps; ++i) {
    const auto seed = replication_seed(s.master_seed, i);
    const double pp = run_simulation(c, StrategyKind::Proposed, seed).recovery_probability();
    const double pl = run_simulation(c, StrategyKind::Lazy, seed).recovery_probability();
    p_prop.push_back(pp);
    p_lazy.push_back(pl);
    if (const auto f = analytic::frcr(pp, pl, cp, cl)) ratio.push_back(*f);
  }
  rows.push_back(row_from(s, "proposed", value, "p_prop", summarize(p_prop)));
  rows.push_back(row_from(s, "lazy", value, "p_lazy", summarize(p_lazy)));
  rows.push_back(row_from(s, "proposed", value, "c_prop", constant(cp)));
  rows.push_back(row_from(s, "lazy", value, "c_lazy", constant(cl)));
  auto fr = row_from(s, "proposed-vs-lazy", value, "frcr", summarize(ratio));
  fr.defined = !ratio.empty();
  rows.push_back(fr);
}

}  // namespace detail

/// Runs every (sweep value, strategy) point and returns rows in sweep order.
inline std::vector<MetricRow> run_figure(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::vector<MetricRow> rows;
  const auto metrics = figure_metrics(spec.figure);
  for (double v : spec.sweep_values) {
    SimConfig c = spec.base;
    apply_param(c, spec.swept_param, v);
    if (spec.figure == FigureId::Fig8) {
      detail::run_frcr_point(spec, c, v, rows);
      continue;
    }
    for (auto kind : spec.strategies) {
      const auto rep = replicate(c, kind, spec.master_seed, spec.reps);
      for (const auto& m : metrics)
        rows.push_back(detail::row_from(spec, to_string(kind), v, m, rep.summary.at(m)));
    }
  }
  return rows;
}

}  // namespace mhlog::harness
