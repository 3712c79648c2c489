#include <gtest/gtest.h>

#include "oracles.hpp"
#include "topofilter/sweep.hpp"

using namespace topofilter;

namespace {

// Census of a subgraph straight from the union-find oracle.
SweepRow oracle_row(const oracle::RandomGraph& r, std::size_t d, const std::set<int>& keep) {
  SweepRow row;
  row.d = d;
  row.nodes = keep.size();
  row.edges = oracle::induced_edges(r.edges, keep).size();
  const auto comps = oracle::components(r.n, r.edges, keep);
  row.component_count = comps.size();
  for (const auto& c : comps) row.largest_component_nodes = std::max(row.largest_component_nodes, c.size());
  if (row.nodes) {
    row.edge_node_ratio = static_cast<double>(row.edges) / static_cast<double>(row.nodes);
    row.largest_component_fraction =
        static_cast<double>(row.largest_component_nodes) / static_cast<double>(row.nodes);
  }
  return row;
}

Graph complete(std::size_t n) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_node(std::to_string(i));
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = i + 1; j < n; ++j) b.add_edge(i, j);
  return b.build();
}

std::vector<double> fractions(const AttackCurve& c) {
  std::vector<double> out;
  for (const auto& p : c.points) out.push_back(p.largest_component_fraction);
  return out;
}

}  // namespace

TEST(Sweep, RowsMatchOracle) {
  for (std::uint32_t seed = 0; seed < 25; ++seed) {
    const auto r = oracle::random_graph(50, 0.03 + 0.01 * (seed % 6), seed);
    const Graph g = oracle::to_graph(r);
    const auto deg = oracle::degrees(r);
    const auto lo = dis_sweep(g, FilterMode::max_dis, 0, 15);
    const auto hi = dis_sweep(g, FilterMode::min_dis, 0, 15);
    ASSERT_EQ(lo.rows.size(), 16u);
    ASSERT_EQ(hi.rows.size(), 16u);
    for (std::size_t d = 0; d <= 15; ++d) {
      std::set<int> keep_lo, keep_hi;
      for (int v = 0; v < r.n; ++v) {
        if (static_cast<std::size_t>(deg[v]) <= d) keep_lo.insert(v);
        if (static_cast<std::size_t>(deg[v]) >= d) keep_hi.insert(v);
      }
      EXPECT_EQ(lo.rows[d], oracle_row(r, d, keep_lo)) << "max seed " << seed << " d " << d;
      EXPECT_EQ(hi.rows[d], oracle_row(r, d, keep_hi)) << "min seed " << seed << " d " << d;
    }
  }
}

TEST(Sweep, SubrangeMatchesFullRange) {
  const Graph g = generate_scale_free(2000, 2, 6);
  for (auto mode : {FilterMode::max_dis, FilterMode::min_dis}) {
    const auto full = dis_sweep(g, mode, 0, 40);
    const auto part = dis_sweep(g, mode, 7, 19);
    ASSERT_EQ(part.rows.size(), 13u);
    for (std::size_t i = 0; i < part.rows.size(); ++i) EXPECT_EQ(part.rows[i], full.rows[7 + i]);
  }
}

TEST(Sweep, PartitionAcrossModes) {
  const Graph g = generate_scale_free(1500, 3, 11);
  const auto lo = dis_sweep(g, FilterMode::max_dis, 0, 30);
  const auto hi = dis_sweep(g, FilterMode::min_dis, 1, 31);
  for (std::size_t d = 0; d <= 30; ++d) EXPECT_EQ(lo.rows[d].nodes + hi.rows[d].nodes, g.node_count());
}

TEST(Sweep, AplRowsWithinBudget) {
  const Graph g = generate_scale_free(300, 2, 1);
  SweepOptions opts;
  opts.with_apl = true;
  opts.apl_node_budget = 250;
  const auto sweep = dis_sweep(g, FilterMode::max_dis, 2, 40);
  const auto with = dis_sweep(g, FilterMode::max_dis, 2, 40, opts);
  for (std::size_t i = 0; i < with.rows.size(); ++i) {
    const auto& row = with.rows[i];
    if (row.nodes > 250 || row.nodes == 0) {
      EXPECT_FALSE(row.apl.has_value());
    } else {
      const auto sub = max_dis(g, row.d);
      EXPECT_EQ(row.apl, average_path_length(sub.graph).value);
    }
    auto stripped = row;
    stripped.apl.reset();
    EXPECT_EQ(stripped, sweep.rows[i]);
  }
}

TEST(Sweep, RejectsBadArguments) {
  const Graph g = complete(4);
  EXPECT_THROW(dis_sweep(g, FilterMode::k_core, 0, 3), std::invalid_argument);
  EXPECT_THROW(dis_sweep(g, FilterMode::max_dis, 5, 3), std::invalid_argument);
  EXPECT_THROW(dis_sweep(g, FilterMode::max_dis, 0, kMaxSweepRows), std::invalid_argument);
  // Thresholds beyond the maximum degree are fine.
  EXPECT_EQ(dis_sweep(g, FilterMode::min_dis, 0, 10).rows.back().nodes, 0u);
  EXPECT_EQ(dis_sweep(Graph{}, FilterMode::max_dis, 0, 2).rows.size(), 3u);
}

TEST(TailStart, SmallCases) {
  // 20 nodes: one hub of degree 19 and leaves of degree 1.
  GraphBuilder b;
  for (NodeIndex i = 0; i < 20; ++i) b.add_node(std::to_string(i));
  for (NodeIndex i = 1; i < 20; ++i) b.add_edge(NodeIndex{0}, i);
  const auto star = degree_distribution(b.build());
  EXPECT_EQ(tail_start(star, 0.05), 1u);   // one node of 20 above degree 1 is exactly 5%
  EXPECT_EQ(tail_start(star, 0.04), 19u);  // nothing above the hub
  EXPECT_EQ(tail_start(degree_distribution(complete(5)), 0.05), 4u);
  EXPECT_THROW(tail_start(DegreeDistribution{}, 0.05), std::invalid_argument);
  EXPECT_THROW(tail_start(star, 0.0), std::invalid_argument);
  EXPECT_THROW(tail_start(star, 1.0), std::invalid_argument);
}

TEST(TailStart, DefinitionOnRandomGraphs) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const auto dist = degree_distribution(generate_scale_free(500 + seed * 37, 2, seed));
    for (double f : {0.01, 0.05, 0.2}) {
      const auto d = tail_start(dist, f);
      EXPECT_LE(static_cast<double>(dist.count_above(d)), f * dist.node_count);
      if (d > 0) {
        EXPECT_GT(static_cast<double>(dist.count_above(d - 1)), f * dist.node_count);
      }
    }
    EXPECT_GE(tail_start(dist, 0.01), tail_start(dist, 0.05));
    EXPECT_GE(tail_start(dist, 0.05), tail_start(dist, 0.2));
  }
}

TEST(Attack, CompleteGraph) {
  const auto curve = attack_curve(complete(5), AttackOrder::targeted, 5);
  EXPECT_EQ(fractions(curve), (std::vector<double>{1, 1, 1, 1, 1, 0}));
  std::vector<std::size_t> removed;
  for (const auto& p : curve.points) removed.push_back(p.removed);
  EXPECT_EQ(removed, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}

TEST(Attack, StarCollapsesAfterHub) {
  const Graph star = build_graph({{"l1", "c"}, {"c", "l2"}, {"c", "l3"}, {"c", "l4"}, {"c", "l5"}});
  const auto curve = attack_curve(star, AttackOrder::targeted, 6);
  EXPECT_DOUBLE_EQ(curve.points[0].largest_component_fraction, 1.0);
  EXPECT_DOUBLE_EQ(curve.points[1].largest_component_fraction, 0.2);
  EXPECT_EQ(curve.points[1].largest_component_nodes, 1u);
}

TEST(Attack, BatchesAreDeduplicated) {
  const auto curve = attack_curve(complete(3), AttackOrder::random, 10, 1);
  ASSERT_EQ(curve.points.size(), 4u);
  EXPECT_EQ(curve.points.back().removed, 3u);
}

TEST(Attack, MatchesDirectRemoval) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const auto r = oracle::random_graph(40, 0.08, seed);
    const Graph g = oracle::to_graph(r);
    for (bool recompute : {false, true}) {
      const auto order = removal_order(g, AttackOrder::targeted, 0, recompute);
      const auto curve = attack_curve(g, AttackOrder::targeted, 8, 0, recompute);
      for (const auto& p : curve.points) {
        std::set<int> keep;
        for (int v = 0; v < r.n; ++v) keep.insert(v);
        for (std::size_t i = 0; i < p.removed; ++i) keep.erase(static_cast<int>(order[i]));
        std::size_t largest = 0;
        for (const auto& c : oracle::components(r.n, r.edges, keep)) largest = std::max(largest, c.size());
        EXPECT_EQ(p.largest_component_nodes, largest);
      }
    }
  }
}

TEST(Attack, RecomputedOrderPicksCurrentHighestDegree) {
  // b, d and h tie at degree 3; the smaller index goes first.
  const Graph g = build_graph({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}, {"h", "b"}, {"h", "d"}, {"h", "a"}});
  const auto order = removal_order(g, AttackOrder::targeted, 0, true);
  EXPECT_EQ(g.id(order[0]), "b");
  const auto static_order = removal_order(g, AttackOrder::targeted, 0, false);
  EXPECT_EQ(static_order, rank_by_degree(g));
}

TEST(Attack, TargetedBeatsRandomOnScaleFree) {
  const Graph g = generate_scale_free(3000, 2, 21);
  const double targeted = curve_area(attack_curve(g, AttackOrder::targeted, 20));
  double random = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) random += curve_area(attack_curve(g, AttackOrder::random, 20, seed));
  EXPECT_LT(targeted, random / 3.0);
}

TEST(Attack, RandomIsSeeded) {
  const Graph g = generate_scale_free(500, 2, 3);
  EXPECT_EQ(attack_curve(g, AttackOrder::random, 10, 5).points, attack_curve(g, AttackOrder::random, 10, 5).points);
  EXPECT_THROW(attack_curve(g, AttackOrder::random, 0), std::invalid_argument);
}
