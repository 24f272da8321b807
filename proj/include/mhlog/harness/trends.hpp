#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "csv.hpp"
#include "experiments.hpp"

namespace mhlog::harness {

struct TrendCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct TrendReport {
  FigureId figure = FigureId::Fig3;
  std::vector<TrendCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
  }
};

/// Rows of one (strategy, metric) series in sweep order.
inline std::vector<MetricRow> series(const std::vector<MetricRow>& rows, std::string_view strategy,
                                     std::string_view metric) {
  std::vector<MetricRow> out;
  for (const auto& r : rows)
    if (r.strategy == strategy && r.metric_name == metric) out.push_back(r);
  return out;
}

inline std::vector<double> means_of(const std::vector<MetricRow>& s) {
  std::vector<double> out;
  for (const auto& r : s) out.push_back(r.mean);
  return out;
}

inline bool ci_overlap(const MetricRow& a, const MetricRow& b) {
  return a.ci95_low <= b.ci95_high && b.ci95_low <= a.ci95_high;
}

/// Ordinary least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  const double mx = std::accumulate(x.begin(), x.begin() + n, 0.0) / n;
  const double my = std::accumulate(y.begin(), y.begin() + n, 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Average ranks, 1-based.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

/// Spearman rank correlation (Pearson on average ranks). NaN when either
/// side is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const std::size_t n = rx.size();
  if (n < 2 || ry.size() != n) return std::nan("");
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline std::string fmt(double v) { return format_g6(v); }

inline std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s + "]";
}

inline std::vector<double> params_of(const std::vector<MetricRow>& s) {
  std::vector<double> out;
  for (const auto& r : s) out.push_back(r.param_value);
  return out;
}

inline TrendCheck pointwise_order(const std::vector<MetricRow>& rows, std::string_view metric,
                                  const std::vector<std::string>& high_to_low) {
  TrendCheck c;
  c.name = metric;
  c.name += ": ";
  for (std::size_t i = 0; i < high_to_low.size(); ++i) c.name += (i ? " >= " : "") + high_to_low[i];
  std::vector<std::vector<double>> m;
  for (const auto& s : high_to_low) m.push_back(means_of(series(rows, s, metric)));
  const std::size_t n = m.front().size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < m.size(); ++j)
      if (i >= m[j + 1].size() || m[j][i] < m[j + 1][i]) {
        c.ok = false;
        c.detail += "point " + std::to_string(i) + ": " + high_to_low[j] + "=" + fmt(m[j][i]) + " < " +
                    high_to_low[j + 1] + "=" + fmt(i < m[j + 1].size() ? m[j + 1][i] : NAN) + "; ";
      }
  return c;
}

inline TrendCheck pointwise_min(const std::vector<MetricRow>& rows, std::string_view metric,
                                const std::string& who, const std::vector<std::string>& others,
                                bool allow_equal) {
  TrendCheck c;
  c.name = std::string(metric) + ": " + who + " lowest";
  const auto mine = means_of(series(rows, who, metric));
  for (const auto& o : others) {
    const auto theirs = means_of(series(rows, o, metric));
    for (std::size_t i = 0; i < mine.size() && i < theirs.size(); ++i) {
      const bool bad = allow_equal ? mine[i] > theirs[i] : mine[i] >= theirs[i];
      if (bad) {
        c.ok = false;
        c.detail += "point " + std::to_string(i) + ": " + who + "=" + fmt(mine[i]) + " vs " + o + "=" +
                    fmt(theirs[i]) + "; ";
      }
    }
  }
  return c;
}

}  // namespace detail

inline TrendReport check_fig3(const std::vector<MetricRow>& rows) {
  TrendReport rep{FigureId::Fig3, {}};
  {
    TrendCheck c{"lazy handoff cost flat across mu", true, {}};
    const auto s = series(rows, "lazy", "handoff_cost_per_handoff");
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (!ci_overlap(s[i], s[j])) {
          c.ok = false;
          c.detail += "CIs at " + detail::fmt(s[i].param_value) + " and " + detail::fmt(s[j].param_value) +
                      " disjoint; ";
        }
    c.detail = c.ok ? "means " + detail::list(means_of(s)) : c.detail;
    rep.checks.push_back(c);
  }
  rep.checks.push_back(
      detail::pointwise_order(rows, "handoff_cost_per_handoff", {"pessimistic", "proposed", "lazy"}));
  {
    TrendCheck c{"pessimistic has the largest slope of handoff_cost_rate vs mu", true, {}};
    double best = -INFINITY;
    std::string who;
    for (auto k : kAllStrategies) {
      const auto s = series(rows, to_string(k), "handoff_cost_rate");
      const double b = ols_slope(detail::params_of(s), means_of(s));
      c.detail += std::string(to_string(k)) + "=" + detail::fmt(b) + " ";
      if (b > best) {
        best = b;
        who = to_string(k);
      }
    }
    c.ok = who == "pessimistic";
    rep.checks.push_back(c);
  }
  return rep;
}

inline TrendReport check_fig4(const std::vector<MetricRow>& rows) {
  TrendReport rep{FigureId::Fig4, {}};
  {
    TrendCheck c{"lazy recovery cost strictly increasing in mu", true, {}};
    const auto m = means_of(series(rows, "lazy", "recovery_cost_per_failure"));
    for (std::size_t i = 1; i < m.size(); ++i) c.ok = c.ok && m[i] > m[i - 1];
    c.detail = "means " + detail::list(m);
    rep.checks.push_back(c);
  }
  rep.checks.push_back(
      detail::pointwise_min(rows, "recovery_cost_per_failure", "pessimistic", {"lazy", "proposed"}, true));
  {
    TrendCheck c{"proposed within 25% of pessimistic (home-region recoveries)", true, {}};
    const auto p = means_of(series(rows, "proposed", "home_region_recovery_cost_per_failure"));
    const auto q = means_of(series(rows, "pessimistic", "home_region_recovery_cost_per_failure"));
    for (std::size_t i = 0; i < p.size() && i < q.size(); ++i) {
      const double rel = q[i] != 0.0 ? std::abs(p[i] - q[i]) / std::abs(q[i]) : INFINITY;
      if (rel > 0.25) c.ok = false;
      c.detail += detail::fmt(rel) + " ";
    }
    c.detail = "relative gaps " + c.detail;
    rep.checks.push_back(c);
  }
  return rep;
}

inline TrendReport check_fig5(const std::vector<MetricRow>& rows) {
  TrendReport rep{FigureId::Fig5, {}};
  rep.checks.push_back(detail::pointwise_min(rows, "total_cost_per_handoff_interval", "proposed",
                                             {"lazy", "pessimistic"}, false));
  return rep;
}

inline TrendReport check_fig6(const std::vector<MetricRow>& rows) {
  TrendReport rep{FigureId::Fig6, {}};
  for (auto k : kAllStrategies) {
    const auto s = series(rows, to_string(k), "recovery_probability");
    const double rho = spearman(detail::params_of(s), means_of(s));
    TrendCheck c{std::string(to_string(k)) + " recovery probability decreasing in lambda_w", true, {}};
    c.ok = s.size() >= 5 && rho <= -0.9;
    c.detail = "spearman=" + detail::fmt(rho) + " means " + detail::list(means_of(s));
    rep.checks.push_back(c);
  }
  TrendCheck c{"proposed recovery probability >= both baselines", true, {}};
  const auto p = means_of(series(rows, "proposed", "recovery_probability"));
  for (const char* o : {"lazy", "pessimistic"}) {
    const auto q = means_of(series(rows, o, "recovery_probability"));
    for (std::size_t i = 0; i < p.size() && i < q.size(); ++i)
      if (p[i] < q[i]) {
        c.ok = false;
        c.detail += "point " + std::to_string(i) + ": proposed=" + detail::fmt(p[i]) + " < " + o + "=" +
                    detail::fmt(q[i]) + "; ";
      }
  }
  rep.checks.push_back(c);
  return rep;
}

/// FRCR rises to an interior maximum and declines after it. Departures from
/// monotonicity whose confidence intervals overlap count as noise. The peak
/// must sit strictly above both end points.
inline TrendCheck frcr_unimodal(const std::vector<MetricRow>& s) {
  TrendCheck c{"frcr unimodal with interior maximum", true, {}};
  const auto m = means_of(s);
  c.detail = "means " + detail::list(m);
  if (s.size() < 3 || std::any_of(s.begin(), s.end(), [](const auto& r) { return !r.defined; })) {
    c.ok = false;
    c.detail += " (too few or undefined points)";
    return c;
  }
  const std::size_t peak = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  c.detail += " peak_index=" + std::to_string(peak);
  if (peak == 0 || peak + 1 == m.size() || !(m[peak] > m.front() && m[peak] > m.back())) {
    c.ok = false;
    return c;
  }
  for (std::size_t i = 1; i <= peak; ++i)
    if (m[i] < m[i - 1] && !ci_overlap(s[i], s[i - 1])) c.ok = false;
  for (std::size_t i = peak + 1; i < m.size(); ++i)
    if (m[i] > m[i - 1] && !ci_overlap(s[i], s[i - 1])) c.ok = false;
  return c;
}

/// |FRCR| at the smallest T_c is within the summed CI half-widths of the
/// smallest |FRCR| over the first half of the sweep.
inline TrendCheck frcr_low_end(const std::vector<MetricRow>& s) {
  TrendCheck c{"|frcr| at smallest T_c near its low-range minimum", true, {}};
  if (s.empty() || !s.front().defined) {
    c.ok = false;
    c.detail = "undefined";
    return c;
  }
  const std::size_t low = std::max<std::size_t>(1, (s.size() + 1) / 2);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < low; ++i)
    if (s[i].defined && std::abs(s[i].mean) < std::abs(s[arg].mean)) arg = i;
  const double hw0 = (s[0].ci95_high - s[0].ci95_low) / 2.0;
  const double hwm = (s[arg].ci95_high - s[arg].ci95_low) / 2.0;
  const double gap = std::abs(s[0].mean) - std::abs(s[arg].mean);
  c.ok = gap <= hw0 + hwm;
  c.detail = "|frcr|(first)=" + detail::fmt(std::abs(s[0].mean)) + " min=" + detail::fmt(std::abs(s[arg].mean)) +
             " gap=" + detail::fmt(gap) + " tolerance=" + detail::fmt(hw0 + hwm);
  return c;
}

inline TrendReport check_fig8(const std::vector<MetricRow>& rows) {
  TrendReport rep{FigureId::Fig8, {}};
  const auto s = series(rows, "proposed-vs-lazy", "frcr");
  rep.checks.push_back(frcr_unimodal(s));
  rep.checks.push_back(frcr_low_end(s));
  return rep;
}

/// Trend assertions for a figure's rows. fig7 carries none.
inline TrendReport check_trends(FigureId f, const std::vector<MetricRow>& rows) {
  switch (f) {
    case FigureId::Fig3: return check_fig3(rows);
    case FigureId::Fig4: return check_fig4(rows);
    case FigureId::Fig5: return check_fig5(rows);
    case FigureId::Fig6: return check_fig6(rows);
    case FigureId::Fig7: return TrendReport{FigureId::Fig7, {}};
    case FigureId::Fig8: return check_fig8(rows);
  }
  return {};
}

}  // namespace mhlog::harness
