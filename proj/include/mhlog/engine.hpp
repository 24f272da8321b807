#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "core_model.hpp"
#include "rng.hpp"
#include "strategies.hpp"
#include "topology.hpp"

namespace mhlog {

struct TopologySpec {
  std::uint32_t msc = 1;
  std::uint32_t bsc_per_msc = 3;
  std::uint32_t bs_per_bsc = 3;
  Adjacency adjacency = Adjacency::Ring;
  std::uint32_t inter_msc_hops = 4;

  NetworkTree build() const {
    return build_topology(msc, bsc_per_msc, bs_per_bsc, adjacency, inter_msc_hops);
  }
};

/// Everything one run needs.
struct SimConfig {
  SimParams sim;
  CostParams cost;
  TopologySpec topology;
  StrategyKind strategy = StrategyKind::Proposed;
  double p_same_region = 0.8;
  bool frcr_erratum_bound = false;
  std::uint64_t crosscheck_intervals = 100000;
};

// ---------------------------------------------------------------------------
// Event queue
// ---------------------------------------------------------------------------

/// Declaration order is the tie-break priority at equal timestamps.
enum class EventKind : std::uint8_t { Checkpoint = 0, Handoff = 1, Write = 2, Failure = 3 };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Checkpoint: return "checkpoint";
    case EventKind::Handoff: return "handoff";
    case EventKind::Write: return "write";
    case EventKind::Failure: return "failure";
  }
  return "?";
}

struct Event {
  Time at = 0.0;
  EventKind kind = EventKind::Write;
  std::uint64_t order = 0;  // insertion counter
};

class EventQueue {
 public:
  void push(Time at, EventKind kind) { heap_.push(Event{at, kind, next_order_++}); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

  const Event& top() const { return heap_.top(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      if (a.at != b.at) return a.at > b.at;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.order > b.order;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_order_ = 0;
};

// ---------------------------------------------------------------------------
// Run statistics
// ---------------------------------------------------------------------------

struct RunStats {
  std::uint64_t handoff_count = 0;
  std::uint64_t intra_bsc_count = 0;
  std::uint64_t inter_bsc_count = 0;
  std::uint64_t failure_count = 0;
  std::uint64_t recovery_success_count = 0;
  std::uint64_t write_count = 0;
  std::uint64_t checkpoint_count = 0;

  Cost total_handoff_cost = 0.0;
  Cost total_recovery_cost = 0.0;
  Cost total_logging_cost = 0.0;
  Cost total_checkpoint_cost = 0.0;

  std::uint64_t home_region_recoveries = 0;
  Cost home_region_recovery_cost = 0.0;
  Time total_retrieval_time = 0.0;
  std::uint64_t peak_fragments = 0;
  std::uint64_t lost_entries = 0;
  std::vector<std::uint64_t> bsc_peak_memory;  // entries, indexed by BSC
  Time horizon = 0.0;

  /// A run without failures has nothing unrecovered and reports 1.
  double recovery_probability() const {
    if (failure_count == 0) return 1.0;
    return static_cast<double>(recovery_success_count) /
           static_cast<double>(std::max<std::uint64_t>(1, failure_count));
  }
  Time mean_retrieval_time() const {
    return failure_count ? total_retrieval_time / static_cast<double>(failure_count) : 0.0;
  }
  /// Handoff plus recovery cost per handoff interval.
  Cost mean_cost_per_handoff_interval() const {
    return (total_handoff_cost + total_recovery_cost) /
           static_cast<double>(std::max<std::uint64_t>(1, handoff_count));
  }
  Cost handoff_cost_per_handoff() const {
    return total_handoff_cost / static_cast<double>(std::max<std::uint64_t>(1, handoff_count));
  }
  Cost handoff_cost_rate() const { return horizon > 0 ? total_handoff_cost / horizon : 0.0; }
  Cost recovery_cost_per_failure() const {
    return total_recovery_cost / static_cast<double>(std::max<std::uint64_t>(1, failure_count));
  }
  Cost home_region_recovery_cost_per_failure() const {
    return home_region_recovery_cost /
           static_cast<double>(std::max<std::uint64_t>(1, home_region_recoveries));
  }
  Cost total_cost() const {
    return total_handoff_cost + total_recovery_cost + total_logging_cost + total_checkpoint_cost;
  }

  /// Sums counts and costs, maxes the peaks.
  RunStats& merge(const RunStats& o) {
    handoff_count += o.handoff_count;
    intra_bsc_count += o.intra_bsc_count;
    inter_bsc_count += o.inter_bsc_count;
    failure_count += o.failure_count;
    recovery_success_count += o.recovery_success_count;
    write_count += o.write_count;
    checkpoint_count += o.checkpoint_count;
    total_handoff_cost += o.total_handoff_cost;
    total_recovery_cost += o.total_recovery_cost;
    total_logging_cost += o.total_logging_cost;
    total_checkpoint_cost += o.total_checkpoint_cost;
    home_region_recoveries += o.home_region_recoveries;
    home_region_recovery_cost += o.home_region_recovery_cost;
    total_retrieval_time += o.total_retrieval_time;
    peak_fragments = std::max(peak_fragments, o.peak_fragments);
    lost_entries += o.lost_entries;
    if (bsc_peak_memory.size() < o.bsc_peak_memory.size())
      bsc_peak_memory.resize(o.bsc_peak_memory.size(), 0);
    for (std::size_t i = 0; i < o.bsc_peak_memory.size(); ++i)
      bsc_peak_memory[i] = std::max(bsc_peak_memory[i], o.bsc_peak_memory[i]);
    horizon += o.horizon;
    return *this;
  }
};

/// Called once per processed event with the cost that event incurred.
using EventObserver = std::function<void(const Event&, const CostDelta&, const HostState&,
                                         const StrategyStore&)>;

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace detail {

/// Independent per-process streams so that, for a fixed seed, the write
/// sequence does not depend on the handoff rate and every strategy sees the
/// same trajectory.
struct Streams {
  SplitMix64 writes, handoffs, failures, mobility, recovery, start;

  explicit Streams(std::uint64_t seed) : Streams(SplitMix64(seed)) {}

 private:
  explicit Streams(SplitMix64 seeder)
      : writes(seeder()),
        handoffs(seeder()),
        failures(seeder()),
        mobility(seeder()),
        recovery(seeder()),
        start(seeder()) {}
};

inline CellId pick_recovery_cell(const NetworkTree& tree, CellId failed_in, double p_same_region,
                                 SplitMix64& rng) {
  const BscId region = tree.bsc_of(failed_in);
  const double u = rng.uniform01();
  const std::uint32_t per = tree.bss_per_bsc();
  const std::uint32_t foreign = tree.cell_count() - per;
  if (u <= p_same_region || foreign == 0) {
    return CellId{region.value * per + static_cast<std::uint32_t>(rng.below(per))};
  }
  auto idx = static_cast<std::uint32_t>(rng.below(foreign));
  if (idx >= region.value * per) idx += per;
  return CellId{idx};
}

inline void track_memory(const NetworkTree& tree, const StrategyStore& store, RunStats& stats) {
  std::vector<std::uint64_t> now(tree.bsc_count(), 0);
  for (const auto& f : store.fragments) {
    if (f.entries.empty()) continue;
    const BscId b = f.site.kind == Site::Kind::BaseStation ? tree.bsc_of(CellId{f.site.index})
                                                           : BscId{f.site.index};
    now[b.value] += f.entries.size();
  }
  for (std::size_t i = 0; i < now.size(); ++i)
    stats.bsc_peak_memory[i] = std::max(stats.bsc_peak_memory[i], now[i]);
}

}  // namespace detail

/// One seeded run of the host under `kind`. Identical (config, kind, seed)
/// gives identical stats.
inline RunStats run_simulation(const SimConfig& config, StrategyKind kind, std::uint64_t seed,
                               const EventObserver& observer = {}) {
  const auto valid = validate_params(config.sim, config.cost);
  const SimParams& sp = valid.sim;
  const NetworkTree tree = config.topology.build();
  const auto strategy = make_strategy(kind, {&tree, valid.cost, sp.cache_capacity});

  detail::Streams rng(seed);
  HostState host = make_host(tree, CellId{static_cast<std::uint32_t>(rng.start.below(tree.cell_count()))});
  StrategyStore store;
  strategy->initialize(host, store);

  RunStats stats;
  stats.horizon = sp.sim_horizon;
  stats.bsc_peak_memory.assign(tree.bsc_count(), 0);

  auto notify = [&](const Event& e, const CostDelta& d) {
    if (observer) observer(e, d, host, store);
  };

  // Initial durable state.
  {
    const CostDelta d = strategy->on_checkpoint(host, store, 0.0);
    stats.total_checkpoint_cost += d.total();
    stats.checkpoint_count += 1;
    notify(Event{0.0, EventKind::Checkpoint, 0}, d);
  }

  EventQueue q;
  q.push(sample_exponential(sp.lambda_w, rng.writes), EventKind::Write);
  q.push(sample_exponential(sp.mu, rng.handoffs), EventKind::Handoff);
  q.push(sample_exponential(sp.lambda_f, rng.failures), EventKind::Failure);
  std::uint64_t next_ckpt = 1;
  q.push(sp.T_c, EventKind::Checkpoint);

  while (!q.empty() && q.top().at <= sp.sim_horizon) {
    const Event e = q.pop();
    CostDelta d;
    switch (e.kind) {
      case EventKind::Write:
        d = strategy->on_write(host, store, e.at);
        stats.total_logging_cost += d.total();
        stats.write_count += 1;
        q.push(e.at + sample_exponential(sp.lambda_w, rng.writes), EventKind::Write);
        break;
      case EventKind::Checkpoint:
        d = strategy->on_checkpoint(host, store, e.at);
        stats.total_checkpoint_cost += d.total();
        stats.checkpoint_count += 1;
        ++next_ckpt;
        q.push(static_cast<double>(next_ckpt) * sp.T_c, EventKind::Checkpoint);
        break;
      case EventKind::Handoff: {
        const CellId from = host.current_cell;
        const CellId to = sample_next_cell(tree, from, rng.mobility);
        if (classify_move(tree, from, to) == MoveKind::IntraBsc)
          stats.intra_bsc_count += 1;
        else
          stats.inter_bsc_count += 1;
        d = strategy->on_handoff(host, store, from, to);
        stats.total_handoff_cost += d.total();
        stats.handoff_count += 1;
        q.push(e.at + sample_exponential(sp.mu, rng.handoffs), EventKind::Handoff);
        break;
      }
      case EventKind::Failure: {
        const CellId cell =
            detail::pick_recovery_cell(tree, host.current_cell, config.p_same_region, rng.recovery);
        const RecoveryOutcome r = strategy->recover(host, store, sp.recovery_deadline, cell);
        d = r.cost;
        stats.failure_count += 1;
        stats.recovery_success_count += r.success ? 1 : 0;
        stats.total_recovery_cost += d.total();
        stats.total_retrieval_time += r.retrieval_time;
        stats.lost_entries += r.lost_entries;
        if (r.recovered_in_home_region) {
          stats.home_region_recoveries += 1;
          stats.home_region_recovery_cost += d.total();
        }
        q.push(e.at + sample_exponential(sp.lambda_f, rng.failures), EventKind::Failure);
        break;
      }
    }
    stats.peak_fragments =
        std::max<std::uint64_t>(stats.peak_fragments, log_locations(host, store).size());
    detail::track_memory(tree, store, stats);
    notify(e, d);
  }
  return stats;
}

struct TransitionEstimate {
  double p01_hat = 0.0;
  double p02_hat = 0.0;
  double multi_failure_fraction = 0.0;  // intervals with two or more failures
  std::uint64_t intervals = 0;
};

/// Handoff intervals simulated as competing exponential clocks: failure
/// (lambda_f) against handoff (mu).
inline TransitionEstimate estimate_transition_probs(const SimConfig& config, std::uint64_t seed,
                                                    std::uint64_t n_intervals) {
  if (n_intervals < 1) throw std::invalid_argument("n_intervals must be >= 1");
  const double lf = config.sim.lambda_f;
  const double mu = config.sim.mu;
  detail::Streams rng(seed);
  std::uint64_t with_failure = 0;
  std::uint64_t multi = 0;
  for (std::uint64_t i = 0; i < n_intervals; ++i) {
    const Time handoff_at = sample_exponential(mu, rng.handoffs);
    unsigned failures = 0;
    if (lf > 0.0) {
      Time t = sample_exponential(lf, rng.failures);
      while (t < handoff_at && failures < 2) {
        ++failures;
        t += sample_exponential(lf, rng.failures);
      }
    }
    if (failures >= 1) ++with_failure;
    if (failures >= 2) ++multi;
  }
  TransitionEstimate out;
  out.intervals = n_intervals;
  out.p02_hat = static_cast<double>(with_failure) / static_cast<double>(n_intervals);
  out.p01_hat = 1.0 - out.p02_hat;
  out.multi_failure_fraction = static_cast<double>(multi) / static_cast<double>(n_intervals);
  return out;
}

/// Mean number of pending (post-checkpoint) log entries seen at probes
/// placed uniformly at random over a trajectory of Poisson writes with a
/// periodic checkpoint timer. One probe per checkpoint interval on average.
inline double probe_pending_log(const SimConfig& config, std::uint64_t seed, std::uint64_t n_probes) {
  if (n_probes < 1) throw std::invalid_argument("n_probes must be >= 1");
  const double lw = config.sim.lambda_w;
  const Time Tc = config.sim.T_c;
  const Time horizon = static_cast<double>(n_probes) * Tc;
  detail::Streams rng(seed);

  std::vector<Time> probes(n_probes);
  for (auto& p : probes) p = rng.recovery.uniform01() * horizon;
  std::sort(probes.begin(), probes.end());

  double sum = 0.0;
  std::uint64_t pending = 0;
  Time next_write = sample_exponential(lw, rng.writes);
  Time next_ckpt = Tc;
  for (const Time p : probes) {
    for (;;) {
      const Time next = std::min(next_write, next_ckpt);
      if (next > p) break;
      if (next_ckpt <= next_write) {
        pending = 0;
        next_ckpt += Tc;
      } else {
        ++pending;
        next_write += sample_exponential(lw, rng.writes);
      }
    }
    sum += static_cast<double>(pending);
  }
  return sum / static_cast<double>(n_probes);
}

// ---------------------------------------------------------------------------
// Replication
// ---------------------------------------------------------------------------

struct Summary {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;

  double half_width() const { return (ci_high - ci_low) / 2.0; }
};

/// Mean with a two-sided 95% Student-t interval. One sample gives width 0.
inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  s.ci_low = s.ci_high = s.mean;
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  const boost::math::students_t dist(static_cast<double>(xs.size() - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  const double hw = t * sd / std::sqrt(static_cast<double>(xs.size()));
  s.ci_low = s.mean - hw;
  s.ci_high = s.mean + hw;
  return s;
}

/// Named scalar metrics of a run, in a fixed order.
inline std::vector<std::pair<std::string, double>> run_metrics(const RunStats& s) {
  return {
      {"handoff_cost_per_handoff", s.handoff_cost_per_handoff()},
      {"handoff_cost_rate", s.handoff_cost_rate()},
      {"recovery_cost_per_failure", s.recovery_cost_per_failure()},
      {"home_region_recovery_cost_per_failure", s.home_region_recovery_cost_per_failure()},
      {"total_cost_per_handoff_interval", s.mean_cost_per_handoff_interval()},
      {"recovery_probability", s.recovery_probability()},
      {"mean_retrieval_time", s.mean_retrieval_time()},
      {"lost_entries", static_cast<double>(s.lost_entries)},
      {"peak_fragments", static_cast<double>(s.peak_fragments)},
  };
}

struct ReplicationResult {
  std::vector<RunStats> runs;
  std::map<std::string, Summary> summary;
};

inline std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t i) {
  return split_seed(master_seed, i);
}

inline ReplicationResult replicate(const SimConfig& config, StrategyKind kind,
                                   std::uint64_t master_seed, std::uint32_t reps) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  ReplicationResult out;
  out.runs.reserve(reps);
  for (std::uint32_t i = 0; i < reps; ++i)
    out.runs.push_back(run_simulation(config, kind, replication_seed(master_seed, i)));

  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : out.runs)
    for (const auto& [name, v] : run_metrics(r)) columns[name].push_back(v);
  for (const auto& [name, xs] : columns) out.summary[name] = summarize(xs);
  return out;
}

}  // namespace mhlog
