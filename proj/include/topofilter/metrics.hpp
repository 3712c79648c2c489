#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "topofilter/graph.hpp"
#include "topofilter/random.hpp"

namespace topofilter {

struct DegreeDistribution {
  std::map<std::size_t, std::size_t> histogram;  // degree -> node count
  std::size_t node_count = 0;
  std::size_t max_degree = 0;
  double mean_degree = 0.0;      // 2|E|/|V|
  double edge_node_ratio = 0.0;  // |E|/|V|, often quoted as "average degree"
  std::vector<std::pair<double, double>> loglog_points;  // (log10 degree, log10 count), degree >= 1

  /// Fraction of nodes whose degree is strictly below d.
  double fraction_below(std::size_t d) const {
    if (node_count == 0) return 0.0;
    std::size_t count = 0;
    for (const auto& [deg, c] : histogram) {
      if (deg >= d) break;
      count += c;
    }
    return static_cast<double>(count) / static_cast<double>(node_count);
  }

  /// Number of nodes whose degree is strictly above d.
  std::size_t count_above(std::size_t d) const {
    std::size_t count = 0;
    for (auto it = histogram.upper_bound(d); it != histogram.end(); ++it) count += it->second;
    return count;
  }
};

inline DegreeDistribution degree_distribution(const Graph& g) {
  DegreeDistribution out;
  out.node_count = g.node_count();
  for (NodeIndex v = 0; v < g.node_count(); ++v) ++out.histogram[g.degree(v)];
  if (!out.histogram.empty()) out.max_degree = out.histogram.rbegin()->first;
  if (out.node_count > 0) {
    const auto n = static_cast<double>(out.node_count);
    out.edge_node_ratio = static_cast<double>(g.edge_count()) / n;
    out.mean_degree = 2.0 * static_cast<double>(g.edge_count()) / n;
  }
  for (const auto& [deg, c] : out.histogram)
    if (deg >= 1)
      out.loglog_points.emplace_back(std::log10(static_cast<double>(deg)),
                                     std::log10(static_cast<double>(c)));
  return out;
}

struct ComponentCensus {
  std::size_t component_count = 0;
  std::vector<std::size_t> sizes;  // descending
  double largest_fraction = 0.0;
  // Component id per node. Ids are ranks: 0 is the largest component, ties
  // ordered by smallest member index.
  std::vector<NodeIndex> membership;

  std::vector<NodeIndex> members(NodeIndex component) const {
    std::vector<NodeIndex> out;
    for (NodeIndex v = 0; v < membership.size(); ++v)
      if (membership[v] == component) out.push_back(v);
    return out;
  }
};

/// Component census by breadth-first traversal. Isolated nodes are
/// components of size one.
inline ComponentCensus connected_components(const Graph& g) {
  auto labels = detail::label_components(g);
  ComponentCensus out;
  out.component_count = labels.sizes.size();
  std::vector<NodeIndex> rank_of(labels.sizes.size());
  std::vector<NodeIndex> by_size(labels.sizes.size());
  std::iota(by_size.begin(), by_size.end(), NodeIndex{0});
  // Discovery order already sorts ties by smallest member index.
  std::stable_sort(by_size.begin(), by_size.end(), [&](NodeIndex a, NodeIndex b) {
    return labels.sizes[a] > labels.sizes[b];
  });
  out.sizes.reserve(by_size.size());
  for (std::size_t r = 0; r < by_size.size(); ++r) {
    rank_of[by_size[r]] = static_cast<NodeIndex>(r);
    out.sizes.push_back(labels.sizes[by_size[r]]);
  }
  out.membership = std::move(labels.label);
  for (auto& c : out.membership) c = rank_of[c];
  if (g.node_count() > 0)
    out.largest_fraction =
        static_cast<double>(out.sizes.front()) / static_cast<double>(g.node_count());
  return out;
}

/// Subgraph holding one component (by rank id from connected_components).
inline SubgraphResult component_subgraph(const Graph& g, const ComponentCensus& census,
                                         NodeIndex component) {
  if (component >= census.component_count)
    throw std::out_of_range("component " + std::to_string(component) + " does not exist (" +
                            std::to_string(census.component_count) + " components)");
  std::vector<char> mask(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) mask[v] = census.membership[v] == component;
  return induced_by_mask(g, mask, {FilterMode::component, component});
}

struct PathLengthOptions {
  // Components larger than this are estimated from sampled sources unless
  // exact is set.
  std::size_t sample_threshold = 20000;
  std::size_t sample_sources = 1000;
  std::uint64_t seed = 0;
  bool exact = false;
  // Forces a sampled run with this many sources (clamped to the component).
  std::optional<std::size_t> forced_sources;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct PathLength {
  std::optional<double> value;  // undefined for components of fewer than 2 nodes
  std::size_t component_nodes = 0;
  std::size_t sources = 0;
  bool sampled = false;
};

namespace detail {

// Sum of BFS distances from source to every node it reaches.
inline std::uint64_t distance_sum(const Graph& g, NodeIndex source, std::vector<std::int32_t>& dist,
                                  std::vector<NodeIndex>& queue) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::uint64_t total = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeIndex v = queue[head];
    const std::int32_t next = dist[v] + 1;
    for (NodeIndex w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = next;
        total += static_cast<std::uint64_t>(next);
        queue.push_back(w);
      }
  }
  for (NodeIndex v : queue) dist[v] = -1;
  return total;
}

}  // namespace detail

/// Mean shortest-path length over distinct node pairs of one component
/// (rank id; 0 is the largest). Exact BFS from every member by default;
/// sampled sources above the configured size.
inline PathLength average_path_length(const Graph& g, NodeIndex component = 0,
                                      const PathLengthOptions& options = {}) {
  PathLength out;
  if (g.empty()) return out;
  const auto census = connected_components(g);
  if (component >= census.component_count)
    throw std::out_of_range("average_path_length: no component " + std::to_string(component));
  std::vector<NodeIndex> members = census.members(component);
  const std::size_t k = members.size();
  out.component_nodes = k;
  if (k < 2) return out;

  std::vector<NodeIndex> sources;
  if (options.forced_sources || (!options.exact && k > options.sample_threshold)) {
    const std::size_t s =
        std::clamp<std::size_t>(options.forced_sources.value_or(options.sample_sources), 1, k);
    Rng rng(options.seed);
    for (std::size_t i = 0; i < s; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, k - i));
      std::swap(members[i], members[j]);
    }
    sources.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(sources.begin(), sources.end());
    out.sampled = true;
  } else {
    sources = std::move(members);
  }
  out.sources = sources.size();

  std::vector<std::uint64_t> per_source(sources.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, sources.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    std::vector<std::int32_t> dist(g.node_count(), -1);
    std::vector<NodeIndex> queue;
    queue.reserve(k);
    for (std::size_t i; (i = next.fetch_add(1)) < sources.size();)
      per_source[i] = detail::distance_sum(g, sources[i], dist, queue);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  // Integer sums: the total does not depend on scheduling.
  const std::uint64_t total = std::accumulate(per_source.begin(), per_source.end(), std::uint64_t{0});
  out.value = static_cast<double>(total) /
              (static_cast<double>(sources.size()) * static_cast<double>(k - 1));
  return out;
}

/// Average local clustering coefficient; nodes of degree < 2 count as 0.
inline double clustering_coefficient(const Graph& g) {
  if (g.empty()) return 0.0;
  double total = 0.0;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto adj = g.neighbors(v);
    const std::size_t d = adj.size();
    if (d < 2) continue;
    std::size_t twice_triangles = 0;
    for (NodeIndex u : adj) {
      const auto other = g.neighbors(u);
      auto a = adj.begin();
      auto b = other.begin();
      while (a != adj.end() && b != other.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++twice_triangles; ++a; ++b; }
      }
    }
    total += static_cast<double>(twice_triangles) / static_cast<double>(d * (d - 1));
  }
  return total / static_cast<double>(g.node_count());
}

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  DegreeDistribution degree;
  ComponentCensus components;
  PathLength apl_largest_component;
  double clustering_coefficient = 0.0;
};

inline MetricsReport metrics_report(const Graph& g, const PathLengthOptions& apl = {}) {
  MetricsReport r;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  r.degree = degree_distribution(g);
  r.components = connected_components(g);
  r.apl_largest_component = average_path_length(g, 0, apl);
  r.clustering_coefficient = clustering_coefficient(g);
  return r;
}

}  // namespace topofilter
