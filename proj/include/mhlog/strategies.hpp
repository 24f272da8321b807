#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core_model.hpp"
#include "topology.hpp"

namespace mhlog {

enum class StrategyKind { Lazy, Pessimistic, Proposed };

inline constexpr StrategyKind kAllStrategies[] = {StrategyKind::Lazy, StrategyKind::Pessimistic,
                                                  StrategyKind::Proposed};

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::Lazy: return "lazy";
    case StrategyKind::Pessimistic: return "pessimistic";
    case StrategyKind::Proposed: return "proposed";
  }
  return "?";
}

inline StrategyKind parse_strategy(std::string_view s) {
  if (s == "lazy") return StrategyKind::Lazy;
  if (s == "pessimistic") return StrategyKind::Pessimistic;
  if (s == "proposed") return StrategyKind::Proposed;
  throw std::invalid_argument("unknown strategy '" + std::string(s) +
                              "' (expected lazy|pessimistic|proposed)");
}

struct HostState {
  std::uint32_t host_id = 0;
  CellId current_cell{};
  BscId current_bsc{};
  BscId home_bsc{};  // holder of the consolidated log (proposed scheme)
  std::vector<LogEntry> cache;
  std::optional<Checkpoint> last_checkpoint;
  std::uint64_t write_seq = 0;
  std::uint64_t checkpoint_seq = 0;
};

inline HostState make_host(const NetworkTree& tree, CellId start, std::uint32_t host_id = 0) {
  HostState h;
  h.host_id = host_id;
  h.current_cell = start;
  h.current_bsc = tree.bsc_of(start);
  h.home_bsc = h.current_bsc;
  return h;
}

struct Fragment {
  Site site;
  std::vector<LogEntry> entries;
};

struct StrategyStore {
  std::optional<Site> checkpoint_site;
  std::vector<Fragment> fragments;
  std::uint32_t pointer_chain_length = 0;

  std::size_t durable_entries() const {
    std::size_t n = 0;
    for (const auto& f : fragments) n += f.entries.size();
    return n;
  }
};

struct CostDelta {
  Cost wireless_cost = 0.0;
  Cost wired_cost = 0.0;
  std::uint64_t control_msgs = 0;
  std::uint64_t data_items_moved = 0;
  Time elapsed_transfer_time = 0.0;

  Cost total() const noexcept { return wireless_cost + wired_cost; }

  CostDelta& operator+=(const CostDelta& o) noexcept {
    wireless_cost += o.wireless_cost;
    wired_cost += o.wired_cost;
    control_msgs += o.control_msgs;
    data_items_moved += o.data_items_moved;
    elapsed_transfer_time += o.elapsed_transfer_time;
    return *this;
  }
};

struct RecoveryOutcome {
  bool success = false;
  Time retrieval_time = 0.0;
  CostDelta cost;
  std::uint32_t fragments_fetched = 0;  // checkpoint counts as one
  bool recovered_in_home_region = false;
  std::uint64_t recovered_entries = 0;
  std::uint64_t lost_entries = 0;
};

struct LogLocation {
  Site site;
  std::size_t entry_count = 0;
  bool operator==(const LogLocation&) const = default;
};

struct StrategyContext {
  const NetworkTree* tree = nullptr;
  CostParams cost;
  std::uint32_t cache_capacity = 16;
};

/// Common event interface shared by the three log-management schemes.
/// Implementations mutate the host and its store and return what the event
/// cost on the network; they never touch the event clock.
class LogStrategy {
 public:
  explicit LogStrategy(StrategyContext ctx) : ctx_(std::move(ctx)) {
    if (ctx_.tree == nullptr) throw std::invalid_argument("strategy needs a topology");
  }
  virtual ~LogStrategy() = default;

  virtual StrategyKind kind() const noexcept = 0;

  /// Puts the store in its empty starting layout for a host at its start cell.
  virtual void initialize(const HostState& host, StrategyStore& store) const = 0;

  virtual CostDelta on_write(HostState& host, StrategyStore& store, Time now) const = 0;
  virtual CostDelta on_checkpoint(HostState& host, StrategyStore& store, Time now) const = 0;
  virtual CostDelta on_handoff(HostState& host, StrategyStore& store, CellId from,
                               CellId to) const = 0;
  virtual RecoveryOutcome recover(HostState& host, StrategyStore& store, Time deadline,
                                  CellId recovery_cell) const = 0;

  const StrategyContext& context() const noexcept { return ctx_; }

 protected:
  const NetworkTree& tree() const { return *ctx_.tree; }
  const CostParams& cost() const { return ctx_.cost; }

  unsigned hops(const Site& a, const Site& b) const { return tree().hop_distance(a, b); }

  static LogEntry next_entry(HostState& host, Time now) {
    LogEntry e;
    e.seq = ++host.write_seq;
    e.origin_checkpoint = host.last_checkpoint ? host.last_checkpoint->ckpt_seq : 0;
    e.timestamp = now;
    return e;
  }

  static std::uint64_t pending_writes(const HostState& host, const StrategyStore& store) {
    return store.durable_entries() + host.cache.size();
  }

  void control(CostDelta& d, std::uint64_t n = 1) const {
    d.control_msgs += n;
    d.wired_cost += static_cast<double>(n) * cost().C_m;
    d.elapsed_transfer_time += static_cast<double>(n) * cost().r * cost().C_m;
  }

  // Data of the given per-hop cost moved over `wired_hops` wired links.
  void wired(CostDelta& d, double size, unsigned wired_hops) const {
    d.wired_cost += cost().rho * size * wired_hops;
    d.elapsed_transfer_time += cost().r * size * wired_hops;
  }

  void wireless(CostDelta& d, double size) const {
    d.wireless_cost += cost().alpha * size;
    d.elapsed_transfer_time += size;
  }

  /// New checkpoint at `site`; the log it supersedes is purged everywhere.
  CostDelta take_checkpoint(HostState& host, StrategyStore& store, const Site& site, Time now) const {
    CostDelta d;
    wireless(d, cost().C_c);
    wired(d, cost().C_c, hops(Site::bs(host.current_cell), site));
    d.data_items_moved += 1;
    Checkpoint c;
    c.ckpt_seq = ++host.checkpoint_seq;
    c.covered_writes = pending_writes(host, store);
    c.timestamp = now;
    host.last_checkpoint = c;
    host.cache.clear();
    store.fragments.clear();
    store.pointer_chain_length = 0;
    store.checkpoint_site = site;
    return d;
  }

  /// Fetches the checkpoint and every durable fragment to the recovery cell.
  /// Per-item cost is wired transfer from its site plus the wireless last hop.
  RecoveryOutcome fetch_all(const HostState& host, const StrategyStore& store, Time deadline,
                            CellId recovery_cell, CostDelta d) const {
    RecoveryOutcome out;
    const Site dest = Site::bs(recovery_cell);
    std::uint32_t log_fragments = 0;
    if (store.checkpoint_site) {
      wired(d, cost().C_c, hops(*store.checkpoint_site, dest));
      wireless(d, cost().C_c);
      d.data_items_moved += 1;
      out.fragments_fetched += 1;
    }
    for (const auto& f : store.fragments) {
      if (f.entries.empty()) continue;
      const double size = cost().C_1 * static_cast<double>(f.entries.size());
      wired(d, size, hops(f.site, dest));
      wireless(d, size);
      d.data_items_moved += f.entries.size();
      out.recovered_entries += f.entries.size();
      ++log_fragments;
    }
    out.fragments_fetched += log_fragments;
    out.cost = d;
    out.retrieval_time =
        cost().T_load_ckpt + cost().T_load_log * log_fragments + d.elapsed_transfer_time;
    out.success = out.retrieval_time <= deadline;
    out.recovered_in_home_region = tree().bsc_of(recovery_cell) == host.current_bsc;
    return out;
  }

  CostDelta recovery_request() const {
    CostDelta d;
    d.control_msgs += 1;
    wireless(d, cost().C_m);
    return d;
  }

  // Recovered state is re-homed at `site`; the host restarts at `cell`.
  static void rehome(HostState& host, StrategyStore& store, const Site& site, CellId cell,
                     BscId bsc) {
    std::vector<LogEntry> all;
    for (auto& f : store.fragments)
      for (auto& e : f.entries) all.push_back(e);
    store.fragments.clear();
    if (!all.empty()) store.fragments.push_back({site, std::move(all)});
    if (store.checkpoint_site) store.checkpoint_site = site;
    store.pointer_chain_length = 0;
    host.cache.clear();
    host.current_cell = cell;
    host.current_bsc = bsc;
  }

 private:
  StrategyContext ctx_;
};

/// Log fragments stay at the base station where they were written; each
/// handoff leaves a pointer at the new station.
class LazyStrategy final : public LogStrategy {
 public:
  using LogStrategy::LogStrategy;

  StrategyKind kind() const noexcept override { return StrategyKind::Lazy; }

  void initialize(const HostState&, StrategyStore& store) const override { store = {}; }

  CostDelta on_write(HostState& host, StrategyStore& store, Time now) const override {
    const Site here = Site::bs(host.current_cell);
    if (store.fragments.empty() || !(store.fragments.back().site == here))
      store.fragments.push_back({here, {}});
    store.fragments.back().entries.push_back(next_entry(host, now));
    CostDelta d;
    wireless(d, cost().C_1);
    d.data_items_moved += 1;
    control(d);  // ack
    return d;
  }

  CostDelta on_checkpoint(HostState& host, StrategyStore& store, Time now) const override {
    return take_checkpoint(host, store, Site::bs(host.current_cell), now);
  }

  CostDelta on_handoff(HostState& host, StrategyStore& store, CellId from, CellId to) const override {
    (void)from;
    CostDelta d;
    control(d);  // pointer to the old station
    store.pointer_chain_length += 1;
    host.current_cell = to;
    host.current_bsc = tree().bsc_of(to);
    return d;
  }

  RecoveryOutcome recover(HostState& host, StrategyStore& store, Time deadline,
                          CellId recovery_cell) const override {
    CostDelta d = recovery_request();
    control(d, store.pointer_chain_length);
    auto out = fetch_all(host, store, deadline, recovery_cell, d);
    const BscId bsc = tree().bsc_of(recovery_cell);
    rehome(host, store, Site::bs(recovery_cell), recovery_cell, bsc);
    return out;
  }
};

/// The whole log and checkpoint follow the host to every new base station.
class PessimisticStrategy final : public LogStrategy {
 public:
  using LogStrategy::LogStrategy;

  StrategyKind kind() const noexcept override { return StrategyKind::Pessimistic; }

  void initialize(const HostState& host, StrategyStore& store) const override {
    store = {};
    store.fragments.push_back({Site::bs(host.current_cell), {}});
  }

  CostDelta on_write(HostState& host, StrategyStore& store, Time now) const override {
    ensure_fragment(host, store);
    store.fragments.front().entries.push_back(next_entry(host, now));
    CostDelta d;
    wireless(d, cost().C_1);
    d.data_items_moved += 1;
    control(d);
    return d;
  }

  CostDelta on_checkpoint(HostState& host, StrategyStore& store, Time now) const override {
    auto d = take_checkpoint(host, store, Site::bs(host.current_cell), now);
    ensure_fragment(host, store);
    return d;
  }

  CostDelta on_handoff(HostState& host, StrategyStore& store, CellId from, CellId to) const override {
    ensure_fragment(host, store);
    const Site dest = Site::bs(to);
    auto& frag = store.fragments.front();
    const unsigned h = hops(frag.site, dest);
    const auto n = frag.entries.size();

    CostDelta d;
    double size = cost().C_1 * static_cast<double>(n);
    d.data_items_moved += n;
    if (store.checkpoint_site) {
      size += cost().C_c;
      d.data_items_moved += 1;
      store.checkpoint_site = dest;
    }
    wired(d, size, h);
    control(d);  // ack
    frag.site = dest;
    (void)from;
    host.current_cell = to;
    host.current_bsc = tree().bsc_of(to);
    return d;
  }

  RecoveryOutcome recover(HostState& host, StrategyStore& store, Time deadline,
                          CellId recovery_cell) const override {
    auto out = fetch_all(host, store, deadline, recovery_cell, recovery_request());
    const BscId bsc = tree().bsc_of(recovery_cell);
    rehome(host, store, Site::bs(recovery_cell), recovery_cell, bsc);
    ensure_fragment(host, store);
    return out;
  }

 private:
  static void ensure_fragment(const HostState& host, StrategyStore& store) {
    if (store.fragments.empty()) store.fragments.push_back({Site::bs(host.current_cell), {}});
  }
};

/// Log consolidated at the base station controller. Writes buffer in the host
/// cache and reach the controller when the cache fills or on handoff.
/// Crossing into a new region migrates log and checkpoint from the home
/// controller, which the new controller then replaces.
class ProposedStrategy final : public LogStrategy {
 public:
  using LogStrategy::LogStrategy;

  StrategyKind kind() const noexcept override { return StrategyKind::Proposed; }

  void initialize(const HostState&, StrategyStore& store) const override { store = {}; }

  CostDelta on_write(HostState& host, StrategyStore& store, Time now) const override {
    host.cache.push_back(next_entry(host, now));
    if (host.cache.size() >= context().cache_capacity) return flush(host, store);
    return {};
  }

  CostDelta on_checkpoint(HostState& host, StrategyStore& store, Time now) const override {
    return take_checkpoint(host, store, Site::bsc(host.home_bsc), now);
  }

  CostDelta on_handoff(HostState& host, StrategyStore& store, CellId from, CellId to) const override {
    const MoveKind move = classify_move(tree(), from, to);
    host.current_cell = to;
    host.current_bsc = tree().bsc_of(to);

    CostDelta d;
    if (move == MoveKind::InterBsc) {
      control(d);  // Connect(MHid, PBSCid) to the new controller
      control(d);  // reachability notice to the home controller
      const Site dest = Site::bsc(host.current_bsc);
      const Site home = Site::bsc(host.home_bsc);
      const unsigned h = hops(home, dest);
      double size = 0.0;
      for (auto& f : store.fragments) {
        size += cost().C_1 * static_cast<double>(f.entries.size());
        d.data_items_moved += f.entries.size();
        f.site = dest;
      }
      if (store.checkpoint_site) {
        size += cost().C_c;
        d.data_items_moved += 1;
        store.checkpoint_site = dest;
      }
      wired(d, size, h);
      host.home_bsc = host.current_bsc;
    }
    if (!host.cache.empty()) d += flush(host, store);
    return d;
  }

  RecoveryOutcome recover(HostState& host, StrategyStore& store, Time deadline,
                          CellId recovery_cell) const override {
    const BscId rec_bsc = tree().bsc_of(recovery_cell);
    CostDelta d = recovery_request();
    if (rec_bsc != host.home_bsc) control(d);  // tracking agent HLR/VLR lookup

    const auto lost = host.cache.size();
    host.cache.clear();
    auto out = fetch_all(host, store, deadline, recovery_cell, d);
    out.recovered_in_home_region = rec_bsc == host.home_bsc;
    out.lost_entries = lost;
    rehome(host, store, Site::bsc(rec_bsc), recovery_cell, rec_bsc);
    host.home_bsc = rec_bsc;
    return out;
  }

 private:
  // Whole cache to the current controller, appended after the durable log.
  CostDelta flush(HostState& host, StrategyStore& store) const {
    CostDelta d;
    const auto n = host.cache.size();
    if (n == 0) return d;
    const Site dest = Site::bsc(host.current_bsc);
    if (store.fragments.empty() || !(store.fragments.back().site == dest))
      store.fragments.push_back({dest, {}});
    auto& entries = store.fragments.back().entries;
    entries.insert(entries.end(), host.cache.begin(), host.cache.end());
    host.cache.clear();

    const double size = cost().C_1 * static_cast<double>(n);
    wireless(d, size);
    wired(d, size, hops(Site::bs(host.current_cell), dest));
    d.data_items_moved += n;
    control(d);  // ack from the controller
    return d;
  }
};

inline std::unique_ptr<LogStrategy> make_strategy(StrategyKind kind, StrategyContext ctx) {
  switch (kind) {
    case StrategyKind::Lazy: return std::make_unique<LazyStrategy>(std::move(ctx));
    case StrategyKind::Pessimistic: return std::make_unique<PessimisticStrategy>(std::move(ctx));
    case StrategyKind::Proposed: return std::make_unique<ProposedStrategy>(std::move(ctx));
  }
  throw std::invalid_argument("unknown strategy kind");
}

// Free-function forms of the event interface, dispatching on kind.

inline CostDelta on_write(StrategyKind kind, HostState& host, StrategyStore& store,
                          const NetworkTree& tree, const CostParams& cp,
                          std::uint32_t cache_capacity, Time now = 0.0) {
  return make_strategy(kind, {&tree, cp, cache_capacity})->on_write(host, store, now);
}

inline CostDelta on_checkpoint(StrategyKind kind, HostState& host, StrategyStore& store,
                               const NetworkTree& tree, const CostParams& cp, Time now = 0.0) {
  return make_strategy(kind, {&tree, cp, 1})->on_checkpoint(host, store, now);
}

inline CostDelta on_handoff(StrategyKind kind, HostState& host, StrategyStore& store,
                            const NetworkTree& tree, const CostParams& cp, CellId from, CellId to,
                            std::uint32_t cache_capacity = 16) {
  return make_strategy(kind, {&tree, cp, cache_capacity})->on_handoff(host, store, from, to);
}

inline RecoveryOutcome recover(StrategyKind kind, HostState& host, StrategyStore& store,
                               const NetworkTree& tree, const CostParams& cp, const SimParams& sp,
                               CellId recovery_cell) {
  return make_strategy(kind, {&tree, cp, sp.cache_capacity})
      ->recover(host, store, sp.recovery_deadline, recovery_cell);
}

/// Fragment placement in replay order. The host cache appears as a Host
/// site while it holds un-flushed entries.
inline std::vector<LogLocation> log_locations(const HostState& host, const StrategyStore& store) {
  std::vector<LogLocation> out;
  for (const auto& f : store.fragments) out.push_back({f.site, f.entries.size()});
  if (!host.cache.empty()) out.push_back({Site::host(), host.cache.size()});
  return out;
}

/// Sequence numbers a replay would apply, in order.
inline std::vector<std::uint64_t> replay_sequence(const HostState& host,
                                                  const StrategyStore& store) {
  std::vector<std::uint64_t> out;
  for (const auto& f : store.fragments)
    for (const auto& e : f.entries) out.push_back(e.seq);
  for (const auto& e : host.cache) out.push_back(e.seq);
  return out;
}

}  // namespace mhlog
