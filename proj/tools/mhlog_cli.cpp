// mhlog: command-line front end for the simulator, the closed forms and the
// figure sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "mhlog/mhlog.hpp"

namespace {

using namespace mhlog;
using namespace mhlog::harness;

enum Exit { kOk = 0, kInvalid = 1, kIo = 2, kTrend = 3 };

void print_warnings(const SimConfig& c) {
  for (const auto& w : validate_params(c.sim, c.cost).warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const std::string& path, const std::optional<std::string>& strategy,
                 const std::optional<std::uint64_t>& seed) {
  const auto parsed = parse_config(path);
  SimConfig c = parsed.config;
  print_warnings(c);
  const StrategyKind kind = strategy ? parse_strategy(*strategy) : c.strategy;
  const std::uint64_t s = seed.value_or(c.sim.seed);
  const RunStats st = run_simulation(c, kind, s);

  std::printf("strategy            %s\n", to_string(kind));
  std::printf("seed                %llu\n", static_cast<unsigned long long>(s));
  std::printf("horizon             %s\n", format_g6(st.horizon).c_str());
  std::printf("recovery_deadline   %s\n", format_g6(c.sim.recovery_deadline).c_str());
  std::printf("writes              %llu\n", static_cast<unsigned long long>(st.write_count));
  std::printf("checkpoints         %llu\n", static_cast<unsigned long long>(st.checkpoint_count));
  std::printf("handoffs            %llu (intra %llu, inter %llu)\n",
              static_cast<unsigned long long>(st.handoff_count),
              static_cast<unsigned long long>(st.intra_bsc_count),
              static_cast<unsigned long long>(st.inter_bsc_count));
  std::printf("failures            %llu (recovered %llu)\n", static_cast<unsigned long long>(st.failure_count),
              static_cast<unsigned long long>(st.recovery_success_count));
  for (const auto& [name, v] : run_metrics(st)) std::printf("%-38s %s\n", name.c_str(), format_g6(v).c_str());
  return kOk;
}

int cmd_analytic(const std::string& path) {
  const auto parsed = parse_config(path);
  const SimConfig& c = parsed.config;
  print_warnings(c);
  const auto r = analytic::evaluate(c.sim, c.cost, c.frcr_erratum_bound);
  const std::pair<const char*, double> fields[] = {
      {"k", r.k},         {"eta", r.eta},       {"p01", r.p01},       {"p02", r.p02},
      {"C_h", r.c_handoff_avg}, {"C01", r.c01}, {"C_r", r.c_r},       {"C_t", r.c_t},
      {"ops", r.n_ops},   {"C_prop", r.c_prop}, {"C_lazy", r.c_lazy},
  };
  for (const auto& [k, v] : fields) std::printf("%-8s %s\n", k, format_g6(v).c_str());
  std::printf("\n");
  std::string head, row;
  for (const auto& [k, v] : fields) {
    head += std::string(head.empty() ? "" : ",") + k;
    row += (row.empty() ? "" : ",") + format_g6(v);
  }
  std::printf("%s\n%s\n", head.c_str(), row.c_str());
  return kOk;
}

int cmd_figure(const std::string& fig, const std::string& path, const std::string& out_dir,
               const std::optional<std::uint32_t>& reps, const std::optional<std::uint64_t>& seed,
               bool assert_trends) {
  const FigureId f = parse_figure(fig);
  const auto parsed = parse_config(path);
  print_warnings(parsed.config);
  ExperimentSpec spec = make_experiment(f, parsed);
  if (reps) spec.reps = *reps;
  if (seed) spec.master_seed = *seed;
  const auto rows = run_figure(spec);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  const std::string out = (std::filesystem::path(out_dir) / (std::string(to_string(f)) + ".csv")).string();
  emit_csv(rows, out, provenance(spec));
  std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());

  if (!assert_trends) return kOk;
  const auto rep = check_trends(f, rows);
  for (const auto& c : rep.checks)
    std::printf("%s  %s  %s\n", c.ok ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
  return rep.ok() ? kOk : kTrend;
}

int cmd_crosscheck(const std::string& path) {
  const auto parsed = parse_config(path);
  print_warnings(parsed.config);
  const auto rep = crosscheck_analytic(parsed.config);
  std::printf("intervals %llu, tolerance %s\n", static_cast<unsigned long long>(rep.intervals),
              format_g6(rep.tolerance).c_str());
  std::printf("%-6s %-12s %-12s %-12s %s\n", "metric", "analytic", "simulated", "rel_error", "");
  for (const auto& r : rep.rows)
    std::printf("%-6s %-12s %-12s %-12s %s\n", r.name.c_str(), format_g6(r.analytic).c_str(),
                format_g6(r.empirical).c_str(), format_g6(r.rel_error).c_str(), r.flagged ? "FLAGGED" : "");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile-host log recovery simulator and cost model"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> reps;
  std::string figure, out_dir;
  bool assert_trends = false;

  auto* sim = app.add_subcommand("simulate", "Run one seeded simulation");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--strategy", strategy, "lazy | pessimistic | proposed");
  sim->add_option("--seed", seed, "Run seed");

  auto* ana = app.add_subcommand("analytic", "Evaluate the closed-form cost model");
  ana->add_option("--config", config_path, "Config file")->required();

  auto* fig = app.add_subcommand("figure", "Run a figure sweep and write <fig>.csv");
  fig->add_option("figure", figure, "fig3 .. fig8")->required();
  fig->add_option("--config", config_path, "Config file")->required();
  fig->add_option("--out", out_dir, "Output directory")->required();
  fig->add_option("--reps", reps, "Replications per point");
  fig->add_option("--seed", seed, "Master seed");
  fig->add_flag("--assert-trends", assert_trends, "Exit 3 when a trend check fails");

  auto* cc = app.add_subcommand("crosscheck", "Compare closed forms with simulation");
  cc->add_option("--config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*sim) return cmd_simulate(config_path, strategy, seed);
    if (*ana) return cmd_analytic(config_path);
    if (*fig) return cmd_figure(figure, config_path, out_dir, reps, seed, assert_trends);
    if (*cc) return cmd_crosscheck(config_path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
