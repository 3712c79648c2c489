#pragma once

// Brute-force reference implementations for tests. They work on plain edge
// lists and adjacency matrices and share no code with the library beyond
// the Graph type used to hand inputs over.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topofilter/graph.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<int, int>>;  // (min, max)

struct RandomGraph {
  int n = 0;
  EdgeSet edges;
};

// G(n, p) with p drawn per graph; std::mt19937 keeps fixtures stable.
inline RandomGraph random_graph(int n, double p, std::uint32_t seed) {
  std::mt19937 rng(seed);
  RandomGraph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (static_cast<double>(rng()) / 4294967296.0 < p) g.edges.emplace(i, j);
  return g;
}

// Graph with node i having external id std::to_string(i), index i.
inline topofilter::Graph to_graph(const RandomGraph& r) {
  topofilter::GraphBuilder b;
  for (int i = 0; i < r.n; ++i) b.add_node(std::to_string(i));
  for (const auto& [u, v] : r.edges)
    b.add_edge(static_cast<topofilter::NodeIndex>(u), static_cast<topofilter::NodeIndex>(v));
  return b.build();
}

inline std::vector<int> degrees(const RandomGraph& g) {
  std::vector<int> deg(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

// Edges of the parent with both endpoints in keep, by scanning the edge list.
inline EdgeSet induced_edges(const EdgeSet& edges, const std::set<int>& keep) {
  EdgeSet out;
  for (const auto& e : edges)
    if (keep.count(e.first) && keep.count(e.second)) out.insert(e);
  return out;
}

// Edge set of a subgraph result expressed in parent indices.
inline EdgeSet parent_edges(const topofilter::SubgraphResult& s) {
  EdgeSet out;
  for (const auto& [u, v] : s.graph.edges()) {
    int a = static_cast<int>(s.parent_node_index[u]);
    int b = static_cast<int>(s.parent_node_index[v]);
    out.emplace(std::min(a, b), std::max(a, b));
  }
  return out;
}

inline std::set<int> parent_nodes(const topofilter::SubgraphResult& s) {
  return {s.parent_node_index.begin(), s.parent_node_index.end()};
}

// k-core by recomputing every degree from scratch until nothing changes.
inline std::set<int> kcore_fixpoint(const RandomGraph& g, int k) {
  std::set<int> alive;
  for (int i = 0; i < g.n; ++i) alive.insert(i);
  for (bool changed = true; changed;) {
    changed = false;
    std::map<int, int> deg;
    for (const auto& [u, v] : induced_edges(g.edges, alive)) {
      ++deg[u];
      ++deg[v];
    }
    for (auto it = alive.begin(); it != alive.end();) {
      if (deg[*it] < k) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return alive;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) { return parent_[x] == x ? x : parent_[x] = find(parent_[x]); }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

// Components of the subgraph induced by nodes, as sorted node sets.
inline std::vector<std::set<int>> components(int n, const EdgeSet& edges,
                                             const std::set<int>& nodes) {
  UnionFind uf(n);
  for (const auto& [u, v] : edges)
    if (nodes.count(u) && nodes.count(v)) uf.unite(u, v);
  std::map<int, std::set<int>> groups;
  for (int v : nodes) groups[uf.find(v)].insert(v);
  std::vector<std::set<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

inline std::vector<std::set<int>> components(const RandomGraph& g) {
  std::set<int> all;
  for (int i = 0; i < g.n; ++i) all.insert(i);
  return components(g.n, g.edges, all);
}

// Average local clustering over all ordered neighbor triples, by adjacency
// matrix lookups.
inline double clustering_triple_scan(const RandomGraph& g) {
  if (g.n == 0) return 0.0;
  std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
  for (const auto& [u, v] : g.edges) adj[u][v] = adj[v][u] = 1;
  double total = 0.0;
  for (int v = 0; v < g.n; ++v) {
    int deg = 0, closed = 0;
    for (int a = 0; a < g.n; ++a) {
      if (!adj[v][a]) continue;
      ++deg;
      for (int b = a + 1; b < g.n; ++b)
        if (adj[v][b] && adj[a][b]) ++closed;
    }
    if (deg >= 2) total += closed / (deg * (deg - 1) / 2.0);
  }
  return total / g.n;
}

// Floyd-Warshall APL over the largest component (ties: smallest member).
inline double apl_floyd(const RandomGraph& g) {
  auto comps = components(g);
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : *a.begin() < *b.begin();
  });
  const std::vector<int> nodes(comps.front().begin(), comps.front().end());
  const int k = static_cast<int>(nodes.size());
  const int inf = 1 << 28;
  std::vector<std::vector<int>> dist(k, std::vector<int>(k, inf));
  for (int i = 0; i < k; ++i) dist[i][i] = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (g.edges.count({std::min(nodes[i], nodes[j]), std::max(nodes[i], nodes[j])}))
        dist[i][j] = 1;
  for (int m = 0; m < k; ++m)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) dist[i][j] = std::min(dist[i][j], dist[i][m] + dist[m][j]);
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) sum += dist[i][j];
  return sum / (k * (k - 1) / 2.0);
}

}  // namespace oracle
