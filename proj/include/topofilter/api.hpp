#pragma once

// Response bodies shared by the CLI and the HTTP service. Both front ends
// build their output through these functions, so identical queries produce
// byte-identical text.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topofilter/filter.hpp"
#include "topofilter/format.hpp"
#include "topofilter/io.hpp"
#include "topofilter/layout.hpp"
#include "topofilter/metrics.hpp"
#include "topofilter/sweep.hpp"

namespace topofilter::api {

inline constexpr int kSchemaVersion = 1;

inline Json versioned() {
  Json out = Json::object();
  out["schema_version"] = kSchemaVersion;
  return out;
}

inline std::string body(const Json& j) { return j.dump() + "\n"; }

inline Json error_json(int code, const std::string& message) {
  Json out = versioned();
  out["code"] = code;
  out["message"] = message;
  return out;
}

inline Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json degree_json(const DegreeDistribution& d) {
  Json out = Json::object();
  Json hist = Json::array();
  for (const auto& [deg, count] : d.histogram) hist.push_back(Json::array({deg, count}));
  out["histogram"] = std::move(hist);
  out["max_degree"] = d.max_degree;
  out["mean_degree"] = d.mean_degree;
  out["edge_node_ratio"] = d.edge_node_ratio;
  Json pts = Json::array();
  for (const auto& [x, y] : d.loglog_points) pts.push_back(Json::array({x, y}));
  out["loglog_points"] = std::move(pts);
  return out;
}

inline Json degree_distribution_body(const Graph& g, std::optional<double> tail_fraction) {
  const auto dist = degree_distribution(g);
  Json out = versioned();
  out.update(degree_json(dist));
  if (tail_fraction && dist.node_count > 0) out["tail_start"] = tail_start(dist, *tail_fraction);
  return out;
}

inline Json census_json(const ComponentCensus& c) {
  Json out = Json::object();
  out["count"] = c.component_count;
  out["sizes"] = c.sizes;
  out["largest_fraction"] = c.largest_fraction;
  return out;
}

inline Json metrics_json(const MetricsReport& r) {
  Json out = Json::object();
  out["nodes"] = r.nodes;
  out["edges"] = r.edges;
  out["degree"] = degree_json(r.degree);
  out["components"] = census_json(r.components);
  out["apl_largest_component"] = optional_number(r.apl_largest_component.value);
  out["apl_sources"] = r.apl_largest_component.sources;
  out["apl_sampled"] = r.apl_largest_component.sampled;
  out["clustering_coefficient"] = r.clustering_coefficient;
  return out;
}

inline Json metrics_body(const Graph& g, const PathLengthOptions& apl = {}) {
  Json out = versioned();
  out.update(metrics_json(metrics_report(g, apl)));
  return out;
}

inline Json summary_json(const std::string& name, const Graph& g) {
  Json out = Json::object();
  out["name"] = name;
  out["nodes"] = g.node_count();
  out["edges"] = g.edge_count();
  return out;
}

inline Json coercion_json(const CoercionReport& c) {
  Json out = Json::object();
  out["self_loops_dropped"] = c.self_loops_dropped;
  out["duplicate_edges_collapsed"] = c.duplicate_edges_collapsed;
  out["arcs_symmetrized"] = c.arcs_symmetrized;
  out["weights_ignored"] = c.weights_ignored;
  return out;
}

inline Json upload_body(const GraphDocument& doc) {
  Json out = versioned();
  out.update(summary_json(doc.name, doc.graph));
  out["format"] = to_string(doc.source_format);
  out["coercion"] = coercion_json(doc.coercion);
  return out;
}

/// Parameters of a filtered view request.
struct ViewQuery {
  // No filter means the whole graph.
  std::optional<FilterSpec> filter;
  bool include_metrics = false;
  std::optional<NodeIndex> component;
};

/// A view narrowed to one component, with parent indices composed back to
/// the original graph.
inline SubgraphResult narrow_to_component(const SubgraphResult& view, NodeIndex component) {
  const auto census = connected_components(view.graph);
  auto part = component_subgraph(view.graph, census, component);
  for (auto& idx : part.parent_node_index) idx = view.parent_node_index[idx];
  part.provenance = view.provenance;
  return part;
}

inline SubgraphResult whole_view(const Graph& g) {
  std::vector<NodeIndex> all(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) all[v] = v;
  return {g, std::move(all), {FilterMode::induced, static_cast<std::int64_t>(g.node_count())}};
}

inline Json filter_json(const Provenance& p) {
  Json out = Json::object();
  out["mode"] = to_string(p.mode);
  out[p.mode == FilterMode::top_k ? "k" : "d"] = p.parameter;
  return out;
}

/// Envelope for any view of a graph: provenance, counts, parent mapping,
/// node-link payload and optional metrics.
inline Json view_body(const std::string& name, const SubgraphResult& view,
                      std::optional<NodeIndex> component, bool include_metrics,
                      const LayoutResult* layout = nullptr) {
  Json out = versioned();
  out["graph"] = name;
  if (view.provenance.mode != FilterMode::induced) out["filter"] = filter_json(view.provenance);
  if (component) out["component"] = *component;
  out["nodes"] = view.graph.node_count();
  out["edges"] = view.graph.edge_count();
  out["parent_index"] = view.parent_node_index;
  if (layout) {
    Json info = Json::object();
    info["algorithm"] = to_string(layout->algorithm);
    info["seed"] = layout->seed;
    info["iterations"] = layout->iterations;
    out["layout"] = std::move(info);
    out["view"] = graph_json(view.graph, layout->coords);
  } else {
    out["view"] = graph_json(view.graph);
  }
  if (include_metrics) out["metrics"] = metrics_json(metrics_report(view.graph));
  return out;
}

/// Body for a filtered view, optionally narrowed to one of its components.
inline Json dis_body(const std::string& name, const SubgraphResult& filtered,
                     const ViewQuery& query) {
  if (query.component) {
    const auto part = narrow_to_component(filtered, *query.component);
    return view_body(name, part, query.component, query.include_metrics);
  }
  return view_body(name, filtered, std::nullopt, query.include_metrics);
}

struct LayoutQuery {
  LayoutAlgorithm algorithm = LayoutAlgorithm::force;
  std::uint64_t seed = 0;
  std::size_t iterations = 300;
  CircularOrder order = CircularOrder::index;
  std::optional<NodeIndex> component;
};

struct LaidOutView {
  SubgraphResult view;
  LayoutResult layout;
};

/// Lays out the view handed in (never the parent graph).
inline LaidOutView lay_out(const SubgraphResult& filtered, const LayoutQuery& query) {
  LaidOutView out{query.component ? narrow_to_component(filtered, *query.component) : filtered, {}};
  out.layout = query.algorithm == LayoutAlgorithm::force
                   ? force_layout(out.view.graph, query.seed, query.iterations)
                   : circular_layout(out.view.graph, query.order);
  if (query.algorithm == LayoutAlgorithm::circular) out.layout.seed = query.seed;
  return out;
}

inline Json layout_body(const std::string& name, const LaidOutView& laid,
                        std::optional<NodeIndex> component) {
  return view_body(name, laid.view, component, false, &laid.layout);
}

inline Json top_body(const std::string& name, const TopSelection& top,
                     std::optional<double> fraction) {
  Json out = view_body(name, top.subgraph, std::nullopt, false);
  out["filter"]["implied_d"] = top.implied_d;
  if (fraction) out["filter"]["fraction"] = *fraction;
  return out;
}

inline Json sweep_body(const SweepProfile& p) {
  Json out = versioned();
  out["mode"] = to_string(p.mode);
  out["d_range"] = Json::array({p.d_min, p.d_max});
  Json rows = Json::array();
  const bool has_apl = std::any_of(p.rows.begin(), p.rows.end(),
                                   [](const SweepRow& r) { return r.apl.has_value(); });
  for (const auto& r : p.rows) {
    Json row = Json::object();
    row["d"] = r.d;
    row["nodes"] = r.nodes;
    row["edges"] = r.edges;
    row["edge_node_ratio"] = r.edge_node_ratio;
    row["component_count"] = r.component_count;
    row["largest_component_nodes"] = r.largest_component_nodes;
    row["largest_component_fraction"] = r.largest_component_fraction;
    if (has_apl) row["apl"] = optional_number(r.apl);
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

inline std::string sweep_csv(const SweepProfile& p) {
  const bool has_apl = std::any_of(p.rows.begin(), p.rows.end(),
                                   [](const SweepRow& r) { return r.apl.has_value(); });
  std::string out =
      "d,nodes,edges,edge_node_ratio,component_count,largest_component_nodes,"
      "largest_component_fraction";
  out += has_apl ? ",apl\n" : "\n";
  for (const auto& r : p.rows) {
    out += std::to_string(r.d) + "," + std::to_string(r.nodes) + "," + std::to_string(r.edges) +
           "," + shortest(r.edge_node_ratio) + "," + std::to_string(r.component_count) + "," +
           std::to_string(r.largest_component_nodes) + "," +
           shortest(r.largest_component_fraction);
    if (has_apl) out += "," + (r.apl ? shortest(*r.apl) : std::string());
    out += "\n";
  }
  return out;
}

inline Json attack_body(const AttackCurve& c) {
  Json out = versioned();
  out["order"] = to_string(c.order);
  out["recomputed"] = c.recomputed;
  out["seed"] = c.seed;
  out["steps"] = c.steps;
  out["area"] = curve_area(c);
  Json points = Json::array();
  for (const auto& p : c.points) {
    Json point = Json::object();
    point["removed"] = p.removed;
    point["largest_component_nodes"] = p.largest_component_nodes;
    point["largest_component_fraction"] = p.largest_component_fraction;
    points.push_back(std::move(point));
  }
  out["points"] = std::move(points);
  return out;
}

inline std::string attack_csv(const AttackCurve& c) {
  std::string out = "removed,largest_component_nodes,largest_component_fraction\n";
  for (const auto& p : c.points)
    out += std::to_string(p.removed) + "," + std::to_string(p.largest_component_nodes) + "," +
           shortest(p.largest_component_fraction) + "\n";
  return out;
}

inline Json tail_start_body(const Graph& g, double fraction) {
  Json out = versioned();
  out["fraction"] = fraction;
  out["d"] = tail_start(degree_distribution(g), fraction);
  return out;
}

namespace detail {

inline Json view_stats(const Graph& g, const PathLengthOptions& apl) {
  const auto census = connected_components(g);
  Json out = Json::object();
  out["nodes"] = g.node_count();
  out["edges"] = g.edge_count();
  out["edge_node_ratio"] = g.empty() ? 0.0
                                     : static_cast<double>(g.edge_count()) /
                                           static_cast<double>(g.node_count());
  out["component_count"] = census.component_count;
  out["outside_largest"] = g.empty() ? 0 : g.node_count() - census.sizes.front();
  out["clustering_coefficient"] = clustering_coefficient(g);
  if (!g.empty()) {
    const auto big = component_subgraph(g, census, 0);
    Json largest = Json::object();
    largest["nodes"] = big.graph.node_count();
    largest["edges"] = big.graph.edge_count();
    largest["apl"] = optional_number(average_path_length(big.graph, 0, apl).value);
    out["largest_component"] = std::move(largest);
  }
  return out;
}

}  // namespace detail

/// A fixed set of thresholds in one report:
/// Max-DIS at 5/10/15/25/50, Min-DIS of the top 10, top 20 and top 5% nodes,
/// and Min-DIS just above the 5% tail start.
inline Json paper_preset_body(const std::string& name, const Graph& g, bool lcc_applied,
                              const PathLengthOptions& apl = {}) {
  Json out = versioned();
  out["graph"] = name;
  out["largest_component_only"] = lcc_applied;
  const auto dist = degree_distribution(g);
  Json whole = detail::view_stats(g, apl);
  whole["max_degree"] = dist.max_degree;
  whole["fraction_degree_below_4"] = dist.fraction_below(4);
  out["whole"] = std::move(whole);

  Json max_rows = Json::array();
  for (std::size_t d : {5, 10, 15, 25, 50}) {
    Json row = Json::object();
    row["d"] = d;
    row.update(detail::view_stats(max_dis(g, d).graph, apl));
    max_rows.push_back(std::move(row));
  }
  out["max_dis"] = std::move(max_rows);

  Json min_rows = Json::array();
  auto top_row = [&](const std::string& label, std::size_t k) {
    Json row = Json::object();
    row["selection"] = label;
    if (k == 0 || k > g.node_count()) {
      row["k"] = k;
      row["skipped"] = true;
      min_rows.push_back(std::move(row));
      return;
    }
    const auto top = min_dis_top(g, k);
    row["k"] = k;
    row["implied_d"] = top.implied_d;
    row.update(detail::view_stats(top.subgraph.graph, apl));
    min_rows.push_back(std::move(row));
  };
  top_row("top-10", 10);
  top_row("top-20", 20);
  if (!g.empty()) top_row("top-5%", top_count_for_fraction(g.node_count(), 0.05));
  out["min_dis_top"] = std::move(min_rows);

  if (!g.empty()) {
    const std::size_t boundary = tail_start(dist, 0.05);
    out["tail_start"] = boundary;
    Json tail = Json::object();
    tail["d"] = boundary + 1;
    tail.update(detail::view_stats(min_dis(g, boundary + 1).graph, apl));
    out["min_dis_tail"] = std::move(tail);
  }
  return out;
}

}  // namespace topofilter::api
