#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "topofilter/graph.hpp"
#include "topofilter/metrics.hpp"

using namespace topofilter;

namespace {

void expect_simple_and_symmetric(const Graph& g) {
  std::size_t total = 0;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto adj = g.neighbors(v);
    total += adj.size();
    EXPECT_TRUE(std::is_sorted(adj.begin(), adj.end()));
    EXPECT_EQ(std::adjacent_find(adj.begin(), adj.end()), adj.end());
    for (NodeIndex w : adj) {
      EXPECT_NE(v, w);
      EXPECT_TRUE(g.has_edge(w, v));
    }
  }
  EXPECT_EQ(total, 2 * g.edge_count());
}

}  // namespace

TEST(BuildGraph, DropsSelfLoopsAndDuplicates) {
  const Graph g = build_graph({{"a", "b"}, {"b", "a"}, {"a", "a"}});
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.id(0), "a");
  EXPECT_EQ(g.id(1), "b");
}

TEST(BuildGraph, Triangle) {
  const Graph g = build_graph({{"a", "b"}, {"b", "c"}, {"c", "a"}});
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  expect_simple_and_symmetric(g);
}

TEST(BuildGraph, EmptyInputIsEmptyGraph) {
  const Graph g = build_graph(std::span<const IdPair>{});
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, ReportsCoercion) {
  GraphBuilder b;
  b.add_edge("x", "x");
  b.add_edge("x", "y");
  b.add_edge("y", "x");
  b.add_edge("x", "y");
  const Graph g = b.build();
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(b.report().self_loops_dropped, 1u);
  EXPECT_EQ(b.report().duplicate_edges_collapsed, 2u);
}

TEST(BuildGraph, MatchesSetBasedDedupOnRandomPairs) {
  std::mt19937 rng(7);
  std::vector<IdPair> pairs;
  std::set<std::string> ids;
  std::set<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < 1000; ++i) {
    std::string a = "n" + std::to_string(rng() % 100);
    std::string b = "n" + std::to_string(rng() % 100);
    pairs.emplace_back(a, b);
    ids.insert(a);
    ids.insert(b);
    if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
  }
  const Graph g = build_graph(pairs);
  EXPECT_EQ(g.node_count(), ids.size());
  EXPECT_EQ(g.edge_count(), edges.size());
  expect_simple_and_symmetric(g);
  // First-seen indexing.
  EXPECT_EQ(g.id(0), pairs[0].first);
  for (const auto& [a, b] : edges) EXPECT_TRUE(g.has_edge(*g.find(a), *g.find(b)));
}

TEST(BuildGraph, LabelsAttachToKnownIds) {
  const std::vector<IdPair> pairs{{"a", "b"}};
  const Graph g = build_graph(pairs, {{"a", "Alpha"}, {"zzz", "ignored"}});
  EXPECT_EQ(g.label(0), "Alpha");
  EXPECT_FALSE(g.label(1).has_value());
  EXPECT_EQ(g.node_count(), 2u);
}

TEST(LargestComponent, TriangleBeatsEdge) {
  const Graph g = build_graph({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"x", "y"}});
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.graph.node_count(), 3u);
  EXPECT_EQ(lcc.graph.edge_count(), 3u);
}

TEST(LargestComponent, ConnectedGraphIsIdentity) {
  const Graph g = build_graph({{"a", "b"}, {"b", "c"}});
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.graph, g);
  EXPECT_EQ(lcc.parent_node_index, (std::vector<NodeIndex>{0, 1, 2}));
}

TEST(LargestComponent, TieGoesToSmallestIndex) {
  const Graph g = build_graph({{"a", "b"}, {"c", "d"}});
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.parent_node_index, (std::vector<NodeIndex>{0, 1}));
}

TEST(LargestComponent, EmptyGraph) {
  EXPECT_TRUE(largest_connected_component(Graph{}).graph.empty());
}

TEST(LargestComponent, MatchesUnionFindAndIsIdempotent) {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    const auto r = oracle::random_graph(50, 0.03, seed);
    const Graph g = oracle::to_graph(r);
    auto comps = oracle::components(r);
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : *a.begin() < *b.begin();
    });
    const auto lcc = largest_connected_component(g);
    EXPECT_EQ(oracle::parent_nodes(lcc), comps.front()) << "seed " << seed;
    const auto again = largest_connected_component(lcc.graph);
    EXPECT_EQ(again.graph, lcc.graph);
  }
}

TEST(InducedSubgraph, K4KeepThreeIsTriangle) {
  const Graph k4 = build_graph({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
  const std::vector<NodeIndex> keep{0, 2, 3};
  const auto sub = induced_subgraph(k4, keep);
  EXPECT_EQ(sub.graph.node_count(), 3u);
  EXPECT_EQ(sub.graph.edge_count(), 3u);
  EXPECT_EQ(sub.graph.id(1), "c");
  EXPECT_EQ(sub.graph.find("d"), NodeIndex{2});
  EXPECT_FALSE(sub.graph.find("b").has_value());
}

TEST(InducedSubgraph, RejectsOutOfRange) {
  const Graph g = build_graph({{"a", "b"}});
  const std::vector<NodeIndex> keep{0, 5};
  EXPECT_THROW(induced_subgraph(g, keep), std::out_of_range);
}

TEST(InducedSubgraph, RandomKeepSetsMatchEdgeScan) {
  std::mt19937 rng(11);
  for (std::uint32_t seed = 0; seed < 40; ++seed) {
    const auto r = oracle::random_graph(30, 0.15, seed);
    const Graph g = oracle::to_graph(r);
    std::vector<NodeIndex> keep;
    std::set<int> keep_set;
    for (int v = 0; v < r.n; ++v)
      if (rng() % 2) {
        keep.push_back(static_cast<NodeIndex>(v));
        keep_set.insert(v);
      }
    std::shuffle(keep.begin(), keep.end(), rng);
    const auto sub = induced_subgraph(g, keep);
    EXPECT_EQ(oracle::parent_nodes(sub), keep_set);
    EXPECT_EQ(oracle::parent_edges(sub), oracle::induced_edges(r.edges, keep_set));
    expect_simple_and_symmetric(sub.graph);
    for (NodeIndex v = 0; v < sub.graph.node_count(); ++v) {
      EXPECT_LE(sub.graph.degree(v), g.degree(sub.parent_node_index[v]));
      EXPECT_EQ(sub.graph.id(v), g.id(sub.parent_node_index[v]));
    }
    // Identity when keeping everything.
    std::vector<NodeIndex> all(g.node_count());
    std::iota(all.begin(), all.end(), NodeIndex{0});
    EXPECT_EQ(induced_subgraph(g, all).graph, g);
  }
}

TEST(ScaleFree, SmallTreeForMOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = generate_scale_free(5, 1, seed);
    EXPECT_EQ(g.node_count(), 5u);
    EXPECT_EQ(g.edge_count(), 4u);
    EXPECT_EQ(connected_components(g).component_count, 1u);
  }
}

TEST(ScaleFree, EdgeCountAndConnectivity) {
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    const std::size_t n = 300;
    const Graph g = generate_scale_free(n, m, 42);
    EXPECT_EQ(g.edge_count(), m * (n - m) + m * (m - 1) / 2);
    EXPECT_EQ(connected_components(g).component_count, 1u);
    expect_simple_and_symmetric(g);
  }
}

TEST(ScaleFree, Deterministic) {
  EXPECT_EQ(generate_scale_free(500, 2, 9), generate_scale_free(500, 2, 9));
  EXPECT_NE(generate_scale_free(500, 2, 9).edges(), generate_scale_free(500, 2, 10).edges());
}

TEST(ScaleFree, RejectsBadParameters) {
  EXPECT_THROW(generate_scale_free(3, 0, 0), std::invalid_argument);
  EXPECT_THROW(generate_scale_free(3, 3, 0), std::invalid_argument);
}

TEST(ScaleFree, HeavyTailedDegrees) {
  const Graph g = generate_scale_free(2000, 2, 1);
  const auto dist = degree_distribution(g);
  EXPECT_GE(static_cast<double>(dist.max_degree), 5.0 * dist.mean_degree);
  // Complementary CDF over observed degrees is strictly decreasing.
  double previous = 2.0;
  std::size_t at_least = g.node_count();
  for (const auto& [deg, count] : dist.histogram) {
    const double ccdf = static_cast<double>(at_least) / static_cast<double>(g.node_count());
    EXPECT_LT(ccdf, previous);
    previous = ccdf;
    at_least -= count;
  }
}
