#pragma once

// Degree-induced subgraphs (Max-DIS / Min-DIS), top-k hub selection and the
// k-core for contrast. Degrees are always read from the graph passed in, so
// filtering a filtered graph uses the degrees of that filtered graph.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "topofilter/graph.hpp"

namespace topofilter {

struct FilterSpec {
  FilterMode mode = FilterMode::max_dis;
  std::size_t d = 0;
};

/// Induced subgraph on { v : deg(v) <= d }. No recursion: a kept node may
/// lose neighbors, it is never removed for it.
inline SubgraphResult max_dis(const Graph& g, std::size_t d) {
  std::vector<char> mask(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) mask[v] = g.degree(v) <= d;
  return induced_by_mask(g, mask, {FilterMode::max_dis, static_cast<std::int64_t>(d)});
}

/// Induced subgraph on { v : deg(v) >= d }.
inline SubgraphResult min_dis(const Graph& g, std::size_t d) {
  std::vector<char> mask(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) mask[v] = g.degree(v) >= d;
  return induced_by_mask(g, mask, {FilterMode::min_dis, static_cast<std::int64_t>(d)});
}

/// Maximal subgraph where every node keeps at least k neighbors, found by
/// repeatedly peeling nodes whose remaining degree is below k.
inline SubgraphResult k_core(const Graph& g, std::size_t k) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> deg = g.degrees();
  std::vector<char> alive(n, 1);
  std::vector<NodeIndex> stack;
  for (NodeIndex v = 0; v < n; ++v)
    if (deg[v] < k) {
      alive[v] = 0;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (NodeIndex w : g.neighbors(v)) {
      if (!alive[w]) continue;
      if (--deg[w] < k) {
        alive[w] = 0;
        stack.push_back(w);
      }
    }
  }
  return induced_by_mask(g, alive, {FilterMode::k_core, static_cast<std::int64_t>(k)});
}

/// Dispatch on a FilterSpec (max-dis, min-dis or k-core).
inline SubgraphResult apply_filter(const Graph& g, const FilterSpec& spec) {
  switch (spec.mode) {
    case FilterMode::max_dis: return max_dis(g, spec.d);
    case FilterMode::min_dis: return min_dis(g, spec.d);
    case FilterMode::k_core: return k_core(g, spec.d);
    default:
      throw std::invalid_argument("apply_filter: mode " + std::string(to_string(spec.mode)) +
                                  " is not a threshold filter");
  }
}

struct TopSelection {
  SubgraphResult subgraph;
  // Degree of the k-th ranked node: the Min-DIS threshold this selection
  // corresponds to when there is no tie at the boundary.
  std::size_t implied_d = 0;
};

/// Node indices ranked by degree descending, ties by smaller index.
inline std::vector<NodeIndex> rank_by_degree(const Graph& g) {
  std::vector<NodeIndex> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return g.degree(a) > g.degree(b); });
  return order;
}

/// The k highest-degree nodes. Exactly k nodes are returned; a tie at the
/// k-th degree is broken by smaller node index.
inline TopSelection min_dis_top(const Graph& g, std::size_t k) {
  if (k == 0 || k > g.node_count())
    throw std::invalid_argument("min_dis_top: k must be in [1, " +
                                std::to_string(g.node_count()) + "], got " + std::to_string(k));
  const auto order = rank_by_degree(g);
  std::vector<char> mask(g.node_count(), 0);
  for (std::size_t i = 0; i < k; ++i) mask[order[i]] = 1;
  TopSelection out{induced_by_mask(g, mask, {FilterMode::top_k, static_cast<std::int64_t>(k)}),
                   g.degree(order[k - 1])};
  return out;
}

/// k = round(fraction * |V|), fraction in (0, 1].
inline std::size_t top_count_for_fraction(std::size_t node_count, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("min_dis_top: fraction must be in (0, 1]");
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(node_count)));
}

inline TopSelection min_dis_top_fraction(const Graph& g, double fraction) {
  return min_dis_top(g, top_count_for_fraction(g.node_count(), fraction));
}

}  // namespace topofilter
