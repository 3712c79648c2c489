#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topofilter/random.hpp"

namespace topofilter {

using NodeIndex = std::uint32_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

// External ids and labels, shared between a graph and every subgraph
// derived from it.
struct NameTable {
  std::vector<std::string> ids;
  std::vector<std::optional<std::string>> labels;
  std::unordered_map<std::string, NodeIndex> by_id;
};

class GraphBuilder;
class Graph;
Graph make_induced(const Graph& g, std::span<const NodeIndex> sorted_keep);

/// Immutable simple undirected graph in compressed sparse row form.
///
/// Nodes are dense indices 0..node_count()-1. Every adjacency list is sorted
/// ascending and symmetric; there are no self-loops or parallel edges.
class Graph {
 public:
  Graph() : offsets_(1, 0), names_(std::make_shared<NameTable>()) {}

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  bool empty() const { return node_count() == 0; }

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeIndex v = 0; v < node_count(); ++v) best = std::max(best, degree(v));
    return best;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out(node_count());
    for (NodeIndex v = 0; v < node_count(); ++v) out[v] = degree(v);
    return out;
  }

  bool has_edge(NodeIndex u, NodeIndex v) const {
    const auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  const std::string& id(NodeIndex v) const { return names_->ids[name_slot(v)]; }
  const std::optional<std::string>& label(NodeIndex v) const {
    return names_->labels[name_slot(v)];
  }
  bool has_labels() const {
    for (NodeIndex v = 0; v < node_count(); ++v)
      if (label(v)) return true;
    return false;
  }

  std::optional<NodeIndex> find(std::string_view external_id) const {
    const auto it = names_->by_id.find(std::string(external_id));
    if (it == names_->by_id.end()) return std::nullopt;
    if (name_index_.empty()) return it->second;
    const auto pos = std::lower_bound(name_index_.begin(), name_index_.end(), it->second);
    if (pos == name_index_.end() || *pos != it->second) return std::nullopt;
    return static_cast<NodeIndex>(pos - name_index_.begin());
  }

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeIndex u = 0; u < node_count(); ++u)
      for (NodeIndex v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.offsets_ != b.offsets_ || a.targets_ != b.targets_) return false;
    for (NodeIndex v = 0; v < a.node_count(); ++v)
      if (a.id(v) != b.id(v) || a.label(v) != b.label(v)) return false;
    return true;
  }

 private:
  friend class GraphBuilder;
  friend Graph make_induced(const Graph& g, std::span<const NodeIndex> sorted_keep);

  std::size_t name_slot(NodeIndex v) const {
    return name_index_.empty() ? v : name_index_[v];
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> targets_;
  std::shared_ptr<const NameTable> names_;
  // Empty means identity into names_. Always ascending when present.
  std::vector<NodeIndex> name_index_;
};

/// What build-time coercion to a simple undirected graph changed.
struct CoercionReport {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_collapsed = 0;
  std::size_t arcs_symmetrized = 0;
  std::size_t weights_ignored = 0;
};

/// Accumulates nodes and edges with string ids. Ids are assigned dense
/// indices in first-seen order.
class GraphBuilder {
 public:
  NodeIndex add_node(std::string_view id) {
    auto [it, inserted] = names_.by_id.try_emplace(std::string(id), 0);
    if (inserted) {
      it->second = static_cast<NodeIndex>(names_.ids.size());
      names_.ids.emplace_back(id);
      names_.labels.emplace_back();
    }
    return it->second;
  }

  void add_edge(std::string_view a, std::string_view b) {
    const NodeIndex u = add_node(a);
    const NodeIndex v = add_node(b);
    add_edge(u, v);
  }

  void add_edge(NodeIndex u, NodeIndex v) {
    if (u >= names_.ids.size() || v >= names_.ids.size())
      throw std::out_of_range("edge endpoint " + std::to_string(std::max(u, v)) +
                              " is not a node");
    if (u == v) {
      ++report_.self_loops_dropped;
      return;
    }
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  void set_label(NodeIndex v, std::string label) { names_.labels.at(v) = std::move(label); }
  void set_label(std::string_view id, std::string label) {
    set_label(add_node(id), std::move(label));
  }

  std::optional<NodeIndex> lookup(std::string_view id) const {
    const auto it = names_.by_id.find(std::string(id));
    if (it == names_.by_id.end()) return std::nullopt;
    return it->second;
  }

  void note_arc() { ++report_.arcs_symmetrized; }
  void note_weight() { ++report_.weights_ignored; }

  std::size_t node_count() const { return names_.ids.size(); }
  const CoercionReport& report() const { return report_; }

  /// Finalizes the graph. The builder is left empty.
  Graph build() {
    std::sort(edges_.begin(), edges_.end());
    const auto last = std::unique(edges_.begin(), edges_.end());
    report_.duplicate_edges_collapsed += static_cast<std::size_t>(edges_.end() - last);
    edges_.erase(last, edges_.end());

    Graph g;
    const std::size_t n = names_.ids.size();
    g.offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges_) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic edge order leaves every list sorted: smaller neighbors
    // arrive first (as second endpoints), then larger ones.
    for (const auto& [u, v] : edges_) {
      g.targets_[cursor[u]++] = v;
      g.targets_[cursor[v]++] = u;
    }
    g.names_ = std::make_shared<NameTable>(std::move(names_));
    names_ = {};
    edges_.clear();
    return g;
  }

 private:
  NameTable names_;
  std::vector<Edge> edges_;
  CoercionReport report_;
};

using IdPair = std::pair<std::string, std::string>;

/// Builds a simple graph from id pairs: self-loops dropped, duplicates in
/// either orientation collapsed, ids indexed in first-seen order.
inline Graph build_graph(std::span<const IdPair> edges,
                         const std::unordered_map<std::string, std::string>& labels = {}) {
  GraphBuilder b;
  for (const auto& [a, c] : edges) b.add_edge(a, c);
  // Labels apply only to ids that appear; insertion order stays edge-driven.
  for (const auto& [id, text] : labels)
    if (const auto v = b.lookup(id)) b.set_label(*v, text);
  return b.build();
}

inline Graph build_graph(std::initializer_list<IdPair> edges) {
  return build_graph(std::span<const IdPair>(edges.begin(), edges.size()));
}

enum class FilterMode { induced, component, max_dis, min_dis, k_core, top_k, attack };

inline std::string_view to_string(FilterMode m) {
  switch (m) {
    case FilterMode::induced: return "induced";
    case FilterMode::component: return "component";
    case FilterMode::max_dis: return "max-dis";
    case FilterMode::min_dis: return "min-dis";
    case FilterMode::k_core: return "k-core";
    case FilterMode::top_k: return "top-k";
    case FilterMode::attack: return "attack";
  }
  return "?";
}

struct Provenance {
  FilterMode mode = FilterMode::induced;
  std::int64_t parameter = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// An induced subgraph together with the index of each of its nodes in the
/// parent graph.
struct SubgraphResult {
  Graph graph;
  std::vector<NodeIndex> parent_node_index;
  Provenance provenance;
};

// keep must be sorted ascending, unique and in range.
inline Graph make_induced(const Graph& g, std::span<const NodeIndex> sorted_keep) {
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> local(n, kNoNode);
  for (std::size_t i = 0; i < sorted_keep.size(); ++i)
    local[sorted_keep[i]] = static_cast<NodeIndex>(i);

  Graph out;
  out.names_ = g.names_;
  out.offsets_.assign(sorted_keep.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < sorted_keep.size(); ++i) {
    for (NodeIndex w : g.neighbors(sorted_keep[i]))
      if (local[w] != kNoNode) ++total;
    out.offsets_[i + 1] = total;
  }
  out.targets_.reserve(total);
  // local[] is monotone in parent index, so mapped lists stay sorted.
  for (NodeIndex v : sorted_keep)
    for (NodeIndex w : g.neighbors(v))
      if (local[w] != kNoNode) out.targets_.push_back(local[w]);

  if (sorted_keep.size() != n || !g.name_index_.empty()) {
    out.name_index_.resize(sorted_keep.size());
    for (std::size_t i = 0; i < sorted_keep.size(); ++i)
      out.name_index_[i] = static_cast<NodeIndex>(g.name_slot(sorted_keep[i]));
    bool identity = out.name_index_.size() == out.names_->ids.size();
    for (std::size_t i = 0; identity && i < out.name_index_.size(); ++i)
      identity = out.name_index_[i] == i;
    if (identity) out.name_index_.clear();
  }
  return out;
}

/// Subgraph on the nodes whose mask entry is nonzero.
inline SubgraphResult induced_by_mask(const Graph& g, std::span<const char> mask,
                                      Provenance provenance) {
  std::vector<NodeIndex> keep;
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (mask[v]) keep.push_back(v);
  Graph sub = make_induced(g, keep);
  return {std::move(sub), std::move(keep), provenance};
}

/// Induced subgraph on an arbitrary node set. Duplicates are ignored; an
/// out-of-range index throws std::out_of_range.
inline SubgraphResult induced_subgraph(const Graph& g, std::span<const NodeIndex> keep) {
  std::vector<char> mask(g.node_count(), 0);
  for (NodeIndex v : keep) {
    if (v >= g.node_count())
      throw std::out_of_range("induced_subgraph: node index " + std::to_string(v) +
                              " out of range for graph with " +
                              std::to_string(g.node_count()) + " nodes");
    mask[v] = 1;
  }
  return induced_by_mask(g, mask, {FilterMode::induced, static_cast<std::int64_t>(keep.size())});
}

namespace detail {

// Component ids by BFS in node order: component c is discovered before c+1
// and contains a smaller minimum index.
struct ComponentLabels {
  std::vector<NodeIndex> label;
  std::vector<std::size_t> sizes;
};

inline ComponentLabels label_components(const Graph& g) {
  ComponentLabels out;
  out.label.assign(g.node_count(), kNoNode);
  std::vector<NodeIndex> queue;
  queue.reserve(g.node_count());
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (out.label[s] != kNoNode) continue;
    const auto c = static_cast<NodeIndex>(out.sizes.size());
    queue.clear();
    queue.push_back(s);
    out.label[s] = c;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeIndex w : g.neighbors(queue[head]))
        if (out.label[w] == kNoNode) {
          out.label[w] = c;
          queue.push_back(w);
        }
    out.sizes.push_back(queue.size());
  }
  return out;
}

}  // namespace detail

/// The component with the most nodes; ties go to the component holding the
/// smallest node index.
inline SubgraphResult largest_connected_component(const Graph& g) {
  if (g.empty()) return {Graph{}, {}, {FilterMode::component, 0}};
  const auto comps = detail::label_components(g);
  const auto best = static_cast<NodeIndex>(
      std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin());
  std::vector<char> mask(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) mask[v] = comps.label[v] == best;
  return induced_by_mask(g, mask, {FilterMode::component, 0});
}

/// Preferential-attachment graph: an m-clique seed, then each new node links
/// to m distinct existing nodes drawn from the list of edge endpoints.
/// Node ids are "0".."n-1".
inline Graph generate_scale_free(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_scale_free: m must be >= 1");
  if (n < m + 1)
    throw std::invalid_argument("generate_scale_free: need n >= m + 1 (n=" + std::to_string(n) +
                                ", m=" + std::to_string(m) + ")");
  GraphBuilder b;
  for (std::size_t v = 0; v < n; ++v) b.add_node(std::to_string(v));

  Rng rng(seed);
  std::vector<NodeIndex> endpoints;
  endpoints.reserve(2 * (m * (n - m) + m * (m - 1) / 2));
  for (NodeIndex u = 0; u < m; ++u)
    for (NodeIndex v = u + 1; v < m; ++v) {
      b.add_edge(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<NodeIndex> targets;
  for (auto v = static_cast<NodeIndex>(m); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      // With m = 1 the seed has no edges yet; fall back to uniform choice.
      const NodeIndex t = endpoints.empty()
                              ? static_cast<NodeIndex>(uniform_below(rng, v))
                              : endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeIndex t : targets) {
      b.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return b.build();
}

}  // namespace topofilter
