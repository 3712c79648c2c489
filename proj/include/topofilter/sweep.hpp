#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topofilter/filter.hpp"
#include "topofilter/graph.hpp"
#include "topofilter/metrics.hpp"
#include "topofilter/random.hpp"

namespace topofilter {

struct SweepRow {
  std::size_t d = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double edge_node_ratio = 0.0;
  std::size_t component_count = 0;
  std::size_t largest_component_nodes = 0;
  double largest_component_fraction = 0.0;
  std::optional<double> apl;  // only with SweepOptions::with_apl

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepProfile {
  FilterMode mode = FilterMode::max_dis;
  std::size_t d_min = 0;
  std::size_t d_max = 0;
  std::vector<SweepRow> rows;  // ascending d
};

struct SweepOptions {
  bool with_apl = false;
  // Rows whose subgraph is larger than this get no APL.
  std::size_t apl_node_budget = 5000;
  PathLengthOptions apl;
};

inline constexpr std::size_t kMaxSweepRows = 10'000'000;

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), NodeIndex{0});
  }
  NodeIndex find(NodeIndex v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  // Returns the merged set size, or 0 if already joined.
  std::size_t unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return 0;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return size_[a];
  }

 private:
  std::vector<NodeIndex> parent_;
  std::vector<std::size_t> size_;
};

// Grows an induced subgraph one node at a time, tracking the census.
class IncrementalCensus {
 public:
  explicit IncrementalCensus(const Graph& g)
      : g_(g), sets_(g.node_count()), present_(g.node_count(), 0) {}

  void add(NodeIndex v) {
    present_[v] = 1;
    ++nodes_;
    ++components_;
    largest_ = std::max<std::size_t>(largest_, 1);
    for (NodeIndex w : g_.neighbors(v)) {
      if (!present_[w]) continue;
      ++edges_;
      if (const auto merged = sets_.unite(v, w)) {
        --components_;
        largest_ = std::max(largest_, merged);
      }
    }
  }

  SweepRow row(std::size_t d) const {
    SweepRow r;
    r.d = d;
    r.nodes = nodes_;
    r.edges = edges_;
    r.component_count = components_;
    r.largest_component_nodes = largest_;
    if (nodes_ > 0) {
      r.edge_node_ratio = static_cast<double>(edges_) / static_cast<double>(nodes_);
      r.largest_component_fraction =
          static_cast<double>(largest_) / static_cast<double>(nodes_);
    }
    return r;
  }

  std::size_t largest() const { return largest_; }

 private:
  const Graph& g_;
  DisjointSets sets_;
  std::vector<char> present_;
  std::size_t nodes_ = 0, edges_ = 0, components_ = 0, largest_ = 0;
};

inline std::vector<std::vector<NodeIndex>> degree_buckets(const Graph& g) {
  std::vector<std::vector<NodeIndex>> buckets(g.max_degree() + 1);
  for (NodeIndex v = 0; v < g.node_count(); ++v) buckets[g.degree(v)].push_back(v);
  return buckets;
}

}  // namespace detail

/// One census row per threshold in [d_min, d_max], from a single pass that
/// adds nodes in degree order to a union-find structure.
inline SweepProfile dis_sweep(const Graph& g, FilterMode mode, std::size_t d_min, std::size_t d_max,
                              const SweepOptions& options = {}) {
  if (mode != FilterMode::max_dis && mode != FilterMode::min_dis)
    throw std::invalid_argument("dis_sweep: mode must be max-dis or min-dis");
  if (d_min > d_max) throw std::invalid_argument("dis_sweep: d_min must not exceed d_max");
  if (d_max - d_min >= kMaxSweepRows)
    throw std::invalid_argument("dis_sweep: range spans more than " +
                                std::to_string(kMaxSweepRows) + " rows");

  SweepProfile profile{mode, d_min, d_max, {}};
  profile.rows.reserve(d_max - d_min + 1);
  const auto buckets = detail::degree_buckets(g);
  const std::size_t top = buckets.size();  // degrees are < top
  detail::IncrementalCensus census(g);
  auto add_bucket = [&](std::size_t deg) {
    if (deg < top)
      for (NodeIndex v : buckets[deg]) census.add(v);
  };

  if (mode == FilterMode::max_dis) {
    for (std::size_t deg = 0; deg < std::min(d_min, top); ++deg) add_bucket(deg);
    for (std::size_t d = d_min; d <= d_max; ++d) {
      add_bucket(d);
      profile.rows.push_back(census.row(d));
    }
  } else {
    for (std::size_t deg = top; deg-- > d_max + 1;) add_bucket(deg);
    for (std::size_t d = d_max + 1; d-- > d_min;) {
      add_bucket(d);
      profile.rows.push_back(census.row(d));
    }
    std::reverse(profile.rows.begin(), profile.rows.end());
  }

  if (options.with_apl) {
    for (auto& row : profile.rows) {
      if (row.nodes == 0 || row.nodes > options.apl_node_budget) continue;
      const auto sub = mode == FilterMode::max_dis ? max_dis(g, row.d) : min_dis(g, row.d);
      row.apl = average_path_length(sub.graph, 0, options.apl).value;
    }
  }
  return profile;
}

/// Smallest d such that at most top_fraction of the nodes have degree > d:
/// the suggested boundary between Max-DIS and Min-DIS exploration.
inline std::size_t tail_start(const DegreeDistribution& dist, double top_fraction = 0.05) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0))
    throw std::invalid_argument("tail_start: top_fraction must be in (0, 1)");
  if (dist.node_count == 0) throw std::invalid_argument("tail_start: empty distribution");
  const double allowed = top_fraction * static_cast<double>(dist.node_count);
  // count(deg > d) only changes at observed degrees, so test d = 0 and each
  // observed degree in ascending order.
  std::size_t above = dist.node_count - (dist.histogram.count(0) ? dist.histogram.at(0) : 0);
  if (static_cast<double>(above) <= allowed) return 0;
  for (const auto& [deg, count] : dist.histogram) {
    if (deg == 0) continue;
    above -= count;
    if (static_cast<double>(above) <= allowed) return deg;
  }
  return dist.max_degree;
}

enum class AttackOrder { targeted, random };

inline std::string_view to_string(AttackOrder o) {
  return o == AttackOrder::targeted ? "targeted" : "random";
}

struct AttackPoint {
  std::size_t removed = 0;
  std::size_t largest_component_nodes = 0;
  // Largest component over the nodes still present; 0 once none remain.
  double largest_component_fraction = 0.0;
  friend bool operator==(const AttackPoint&, const AttackPoint&) = default;
};

struct AttackCurve {
  AttackOrder order = AttackOrder::targeted;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  bool recomputed = false;
  std::vector<AttackPoint> points;
};

/// Removal sequence: static degree-descending (ties by index), adaptive
/// highest-current-degree, or a seeded shuffle.
inline std::vector<NodeIndex> removal_order(const Graph& g, AttackOrder order, std::uint64_t seed,
                                            bool recompute) {
  if (order == AttackOrder::random) {
    std::vector<NodeIndex> out(g.node_count());
    std::iota(out.begin(), out.end(), NodeIndex{0});
    Rng rng(seed);
    seeded_shuffle(std::span<NodeIndex>(out), rng);
    return out;
  }
  if (!recompute) return rank_by_degree(g);

  std::vector<std::size_t> deg = g.degrees();
  std::set<std::pair<std::size_t, NodeIndex>, std::greater<>> queue;
  // greater<> on (degree, index) would break ties by larger index; store the
  // complemented index so ties still go to the smaller one.
  const auto key = [](NodeIndex v) { return kNoNode - v; };
  for (NodeIndex v = 0; v < g.node_count(); ++v) queue.emplace(deg[v], key(v));
  std::vector<char> removed(g.node_count(), 0);
  std::vector<NodeIndex> out;
  out.reserve(g.node_count());
  while (!queue.empty()) {
    const NodeIndex v = kNoNode - queue.begin()->second;
    queue.erase(queue.begin());
    removed[v] = 1;
    out.push_back(v);
    for (NodeIndex w : g.neighbors(v)) {
      if (removed[w]) continue;
      queue.erase({deg[w], key(w)});
      queue.emplace(--deg[w], key(w));
    }
  }
  return out;
}

/// Largest-component fraction after each batch of about |V|/steps removals.
inline AttackCurve attack_curve(const Graph& g, AttackOrder order, std::size_t steps,
                                std::uint64_t seed = 0, bool recompute = false) {
  if (steps < 1) throw std::invalid_argument("attack_curve: steps must be >= 1");
  AttackCurve curve{order, seed, steps, recompute, {}};
  const std::size_t n = g.node_count();
  const auto sequence = removal_order(g, order, seed, recompute);

  std::vector<std::size_t> boundaries{0};
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto removed = static_cast<std::size_t>((static_cast<unsigned __int128>(s) * n) / steps);
    if (removed > boundaries.back()) boundaries.push_back(removed);
  }

  // Re-add nodes in reverse removal order; after re-adding sequence[i] the
  // present set is exactly what remains once i nodes were removed.
  std::vector<std::size_t> largest_after(n + 1, 0);
  detail::IncrementalCensus census(g);
  for (std::size_t i = n; i-- > 0;) {
    census.add(sequence[i]);
    largest_after[i] = census.largest();
  }
  for (std::size_t removed : boundaries) {
    AttackPoint p{removed, largest_after[removed], 0.0};
    if (removed < n)
      p.largest_component_fraction =
          static_cast<double>(p.largest_component_nodes) / static_cast<double>(n - removed);
    curve.points.push_back(p);
  }
  return curve;
}

/// Trapezoid area under the curve with x = removed / |V|.
inline double curve_area(const AttackCurve& curve) {
  if (curve.points.size() < 2) return 0.0;
  const auto n = static_cast<double>(curve.points.back().removed);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (static_cast<double>(b.removed - a.removed) / n) *
            (a.largest_component_fraction + b.largest_component_fraction) / 2.0;
  }
  return area;
}

}  // namespace topofilter
