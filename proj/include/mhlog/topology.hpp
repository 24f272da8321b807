#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace mhlog {

struct CellId {
  std::uint32_t value = 0;
  auto operator<=>(const CellId&) const = default;
};
struct BscId {
  std::uint32_t value = 0;
  auto operator<=>(const BscId&) const = default;
};
struct MscId {
  std::uint32_t value = 0;
  auto operator<=>(const MscId&) const = default;
};

enum class Adjacency { Ring, Grid };

inline Adjacency parse_adjacency(std::string_view s) {
  if (s == "ring") return Adjacency::Ring;
  if (s == "grid") return Adjacency::Grid;
  throw std::invalid_argument("unknown adjacency '" + std::string(s) + "' (expected ring|grid)");
}

inline const char* to_string(Adjacency a) { return a == Adjacency::Ring ? "ring" : "grid"; }

/// A storage location in the fixed network, or the host itself (its cache).
struct Site {
  enum class Kind : std::uint8_t { BaseStation, Controller, Host };
  Kind kind = Kind::BaseStation;
  std::uint32_t index = 0;

  static Site bs(CellId c) { return {Kind::BaseStation, c.value}; }
  static Site bsc(BscId b) { return {Kind::Controller, b.value}; }
  static Site host() { return {Kind::Host, 0}; }

  bool operator==(const Site&) const = default;
};

inline std::string to_string(const Site& s) {
  switch (s.kind) {
    case Site::Kind::BaseStation: return "BS" + std::to_string(s.index);
    case Site::Kind::Controller: return "BSC" + std::to_string(s.index);
    case Site::Kind::Host: return "MH";
  }
  return "?";
}

enum class MoveKind { IntraBsc, InterBsc };

/// MSC -> BSC -> BS hierarchy. Cells are numbered globally so that the
/// cells of BSC b are [b * bss_per_bsc, (b + 1) * bss_per_bsc) and BSC b
/// belongs to MSC b / bscs_per_msc.
class NetworkTree {
 public:
  NetworkTree(std::uint32_t msc_count, std::uint32_t bscs_per_msc, std::uint32_t bss_per_bsc,
              Adjacency kind, std::uint32_t inter_msc_hops = 4)
      : msc_count_(msc_count),
        bscs_per_msc_(bscs_per_msc),
        bss_per_bsc_(bss_per_bsc),
        kind_(kind),
        inter_msc_hops_(inter_msc_hops) {
    if (msc_count == 0 || bscs_per_msc == 0 || bss_per_bsc == 0)
      throw std::invalid_argument("topology counts must all be >= 1");
    if (cell_count() < 2) throw std::invalid_argument("topology needs at least 2 cells for mobility");
    if (inter_msc_hops < 2) throw std::invalid_argument("inter-MSC BSC distance must be >= 2 hops");
    kind_ == Adjacency::Ring ? build_ring() : build_grid();
  }

  std::uint32_t msc_count() const noexcept { return msc_count_; }
  std::uint32_t bscs_per_msc() const noexcept { return bscs_per_msc_; }
  std::uint32_t bss_per_bsc() const noexcept { return bss_per_bsc_; }
  std::uint32_t bsc_count() const noexcept { return msc_count_ * bscs_per_msc_; }
  std::uint32_t cell_count() const noexcept { return bsc_count() * bss_per_bsc_; }
  std::uint32_t inter_msc_hops() const noexcept { return inter_msc_hops_; }
  Adjacency adjacency_kind() const noexcept { return kind_; }

  bool valid(CellId c) const noexcept { return c.value < cell_count(); }
  bool valid(BscId b) const noexcept { return b.value < bsc_count(); }

  const std::vector<CellId>& neighbors(CellId c) const {
    check(c);
    return adjacency_[c.value];
  }

  BscId bsc_of(CellId c) const {
    check(c);
    return BscId{c.value / bss_per_bsc_};
  }

  MscId msc_of(BscId b) const {
    if (!valid(b)) throw std::out_of_range("unknown BSC " + std::to_string(b.value));
    return MscId{b.value / bscs_per_msc_};
  }

  std::vector<CellId> cells_of(BscId b) const {
    msc_of(b);
    std::vector<CellId> out;
    out.reserve(bss_per_bsc_);
    for (std::uint32_t i = 0; i < bss_per_bsc_; ++i) out.push_back(CellId{b.value * bss_per_bsc_ + i});
    return out;
  }

  /// Wired hop count between two BS/BSC nodes. BSC-to-BSC paths go through
  /// the MSC (2 hops) or across the MSC backbone (inter_msc_hops).
  unsigned hop_distance(const Site& a, const Site& b) const {
    if (a.kind == Site::Kind::Host || b.kind == Site::Kind::Host)
      throw std::invalid_argument("hop_distance is defined on BS and BSC nodes only");
    if (a == b) return 0;
    const BscId ba = controller(a);
    const BscId bb = controller(b);
    const unsigned up = (a.kind == Site::Kind::BaseStation ? 1u : 0u) +
                        (b.kind == Site::Kind::BaseStation ? 1u : 0u);
    return up + bsc_distance(ba, bb);
  }

  unsigned bsc_distance(BscId a, BscId b) const {
    if (a == b) return 0;
    return msc_of(a) == msc_of(b) ? 2u : inter_msc_hops_;
  }

 private:
  void check(CellId c) const {
    if (!valid(c)) throw std::out_of_range("unknown cell " + std::to_string(c.value));
  }

  BscId controller(const Site& s) const {
    if (s.kind == Site::Kind::BaseStation) return bsc_of(CellId{s.index});
    BscId b{s.index};
    msc_of(b);
    return b;
  }

  void link(std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    auto add = [this](std::uint32_t from, std::uint32_t to) {
      auto& v = adjacency_[from];
      for (const auto& c : v)
        if (c.value == to) return;
      v.push_back(CellId{to});
    };
    add(a, b);
    add(b, a);
  }

  void build_ring() {
    const std::uint32_t n = cell_count();
    adjacency_.assign(n, {});
    // neighbor order: successor first, then predecessor
    for (std::uint32_t i = 0; i < n; ++i) {
      adjacency_[i].push_back(CellId{(i + 1) % n});
      if (n > 2) adjacency_[i].push_back(CellId{(i + n - 1) % n});
    }
  }

  // Row-major layout with width ceil(sqrt(n)); the last row may be partial.
  void build_grid() {
    const std::uint32_t n = cell_count();
    adjacency_.assign(n, {});
    const auto width = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t col = i % width;
      if (col + 1 < width && i + 1 < n) link(i, i + 1);
      if (i + width < n) link(i, i + width);
    }
  }

  std::uint32_t msc_count_;
  std::uint32_t bscs_per_msc_;
  std::uint32_t bss_per_bsc_;
  Adjacency kind_;
  std::uint32_t inter_msc_hops_;
  std::vector<std::vector<CellId>> adjacency_;
};

inline NetworkTree build_topology(std::uint32_t msc_count, std::uint32_t bscs_per_msc,
                                  std::uint32_t bss_per_bsc, Adjacency kind,
                                  std::uint32_t inter_msc_hops = 4) {
  return NetworkTree(msc_count, bscs_per_msc, bss_per_bsc, kind, inter_msc_hops);
}

inline BscId bsc_of(const NetworkTree& tree, CellId cell) { return tree.bsc_of(cell); }

inline unsigned hop_distance(const NetworkTree& tree, const Site& a, const Site& b) {
  return tree.hop_distance(a, b);
}

/// Uniform step of the mobility random walk.
inline CellId sample_next_cell(const NetworkTree& tree, CellId current, SplitMix64& rng) {
  const auto& nb = tree.neighbors(current);
  return nb[rng.below(nb.size())];
}

inline MoveKind classify_move(const NetworkTree& tree, CellId from, CellId to) {
  if (from == to) throw std::invalid_argument("classify_move: from == to is not a handoff");
  return tree.bsc_of(from) == tree.bsc_of(to) ? MoveKind::IntraBsc : MoveKind::InterBsc;
}

}  // namespace mhlog
