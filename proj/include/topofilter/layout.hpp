#pragma once

// Deterministic 2D layouts: a Barnes-Hut spring embedder with optional
// multilevel coarsening, and a circular layout.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "topofilter/filter.hpp"
#include "topofilter/format.hpp"
#include "topofilter/graph.hpp"
#include "topofilter/random.hpp"

namespace topofilter {

using Point = std::pair<double, double>;

enum class LayoutAlgorithm { force, circular };

inline std::string_view to_string(LayoutAlgorithm a) {
  return a == LayoutAlgorithm::force ? "force" : "circular";
}

struct LayoutResult {
  std::vector<Point> coords;
  std::uint64_t seed = 0;
  LayoutAlgorithm algorithm = LayoutAlgorithm::force;
  std::size_t iterations = 0;
};

struct ForceOptions {
  std::size_t iterations = 300;
  // Barnes-Hut opening angle; 0 gives exact pairwise repulsion.
  double theta = 0.8;
  double gravity = 0.05;
  // Graphs above this size are coarsened first.
  std::size_t multilevel_threshold = 5000;
  std::size_t coarsest_size = 500;
};

namespace detail {

// Weighted graph used on every level of the multilevel hierarchy.
struct LevelGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeIndex> targets;
  std::vector<double> weights;
  std::vector<double> mass;

  std::size_t size() const { return mass.size(); }

  static LevelGraph from(const Graph& g) {
    LevelGraph out;
    out.offsets.assign(g.node_count() + 1, 0);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      for (NodeIndex w : g.neighbors(v)) {
        out.targets.push_back(w);
        out.weights.push_back(1.0);
      }
      out.offsets[v + 1] = out.targets.size();
    }
    out.mass.assign(g.node_count(), 1.0);
    return out;
  }
};

// Heavy-edge matching in node order. parent[v] is v's node on the coarse
// level.
inline LevelGraph coarsen(const LevelGraph& g, std::vector<NodeIndex>& parent) {
  const std::size_t n = g.size();
  std::vector<NodeIndex> mate(n, kNoNode);
  for (NodeIndex v = 0; v < n; ++v) {
    if (mate[v] != kNoNode) continue;
    NodeIndex best = kNoNode;
    double best_weight = -1.0;
    for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      const NodeIndex w = g.targets[e];
      if (w == v || mate[w] != kNoNode) continue;
      // Prefer heavy edges, then light endpoints to keep masses balanced.
      const double score = g.weights[e] / (g.mass[v] + g.mass[w]);
      if (score > best_weight) {
        best_weight = score;
        best = w;
      }
    }
    mate[v] = best == kNoNode ? v : best;
    if (best != kNoNode) mate[best] = v;
  }
  parent.assign(n, kNoNode);
  NodeIndex next = 0;
  for (NodeIndex v = 0; v < n; ++v)
    if (parent[v] == kNoNode) {
      parent[v] = next;
      parent[mate[v]] = next;
      ++next;
    }

  LevelGraph out;
  out.mass.assign(next, 0.0);
  std::vector<std::vector<NodeIndex>> members(next);
  for (NodeIndex v = 0; v < n; ++v) {
    out.mass[parent[v]] += g.mass[v];
    members[parent[v]].push_back(v);
  }
  std::vector<double> acc(next, 0.0);
  std::vector<NodeIndex> touched;
  out.offsets.assign(next + 1, 0);
  for (NodeIndex c = 0; c < next; ++c) {
    touched.clear();
    for (NodeIndex v : members[c])
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        const NodeIndex pc = parent[g.targets[e]];
        if (pc == c) continue;
        if (acc[pc] == 0.0) touched.push_back(pc);
        acc[pc] += g.weights[e];
      }
    std::sort(touched.begin(), touched.end());
    for (NodeIndex pc : touched) {
      out.targets.push_back(pc);
      out.weights.push_back(acc[pc]);
      acc[pc] = 0.0;
    }
    out.offsets[c + 1] = out.targets.size();
  }
  return out;
}

class QuadTree {
 public:
  explicit QuadTree(const std::vector<Point>& pos, const std::vector<double>& mass)
      : pos_(pos), mass_(mass) {
    double min_x = pos[0].first, max_x = min_x, min_y = pos[0].second, max_y = min_y;
    for (const auto& [x, y] : pos) {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
    const double half = std::max({max_x - min_x, max_y - min_y, 1e-9}) / 2.0 * 1.0001;
    cells_.emplace_back((min_x + max_x) / 2.0, (min_y + max_y) / 2.0, half);
    for (NodeIndex i = 0; i < pos.size(); ++i) insert(0, i, 0);
    finalize(0);
  }

  // Repulsive force on body i: strength * m_i * m_j / distance, pointing away.
  Point repulsion(NodeIndex i, double strength, double theta) const {
    double fx = 0.0, fy = 0.0;
    const auto [x, y] = pos_[i];
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const Cell& c = cells_[stack.back()];
      stack.pop_back();
      if (c.mass == 0.0) continue;
      const double dx = x - c.com_x;
      const double dy = y - c.com_y;
      const double dist2 = dx * dx + dy * dy;
      if (c.leaf()) {
        for (NodeIndex j : c.bodies) {
          if (j == i) continue;
          add_pair(i, j, strength, fx, fy);
        }
        continue;
      }
      const double size = 2.0 * c.half;
      if (size * size < theta * theta * dist2) {
        const double dist = std::sqrt(dist2);
        const double f = strength * mass_[i] * c.mass / dist;
        fx += f * dx / dist;
        fy += f * dy / dist;
        continue;
      }
      for (std::size_t child : c.children)
        if (child) stack.push_back(child);
    }
    return {fx, fy};
  }

 private:
  struct Cell {
    Cell(double x, double y, double h) : cx(x), cy(y), half(h) {}
    double cx, cy, half;
    double mass = 0.0, com_x = 0.0, com_y = 0.0;
    std::array<std::size_t, 4> children{};  // 0 = none (root is never a child)
    std::vector<NodeIndex> bodies;
    bool split = false;
    bool leaf() const { return !split; }
  };

  static constexpr int kMaxDepth = 48;

  void add_pair(NodeIndex i, NodeIndex j, double strength, double& fx, double& fy) const {
    double dx = pos_[i].first - pos_[j].first;
    double dy = pos_[i].second - pos_[j].second;
    double dist2 = dx * dx + dy * dy;
    if (dist2 < 1e-18) {
      // Coincident bodies: separate along a direction fixed by the indices.
      const double angle = static_cast<double>((i * 2654435761u) ^ j) * 1e-3;
      dx = std::cos(angle) * 1e-6;
      dy = std::sin(angle) * 1e-6;
      dist2 = 1e-12;
    }
    const double dist = std::sqrt(dist2);
    const double f = strength * mass_[i] * mass_[j] / dist;
    fx += f * dx / dist;
    fy += f * dy / dist;
  }

  int quadrant(const Cell& c, const Point& p) const {
    return (p.first >= c.cx ? 1 : 0) + (p.second >= c.cy ? 2 : 0);
  }

  void insert(std::size_t cell, NodeIndex body, int depth) {
    for (;;) {
      Cell& c = cells_[cell];
      if (!c.split) {
        c.bodies.push_back(body);
        if (c.bodies.size() == 1 || depth >= kMaxDepth) return;
        // Split and push the existing bodies down.
        auto bodies = std::move(c.bodies);
        cells_[cell].bodies.clear();
        cells_[cell].split = true;
        for (NodeIndex b : bodies) insert_child(cell, b, depth);
        return;
      }
      cell = child_for(cell, body);
      ++depth;
    }
  }

  void insert_child(std::size_t cell, NodeIndex body, int depth) {
    insert(child_for(cell, body), body, depth + 1);
  }

  std::size_t child_for(std::size_t cell, NodeIndex body) {
    const int q = quadrant(cells_[cell], pos_[body]);
    if (!cells_[cell].children[q]) {
      const Cell& c = cells_[cell];
      const double h = c.half / 2.0;
      cells_.emplace_back(c.cx + (q & 1 ? h : -h), c.cy + (q & 2 ? h : -h), h);
      cells_[cell].children[q] = cells_.size() - 1;
    }
    return cells_[cell].children[q];
  }

  void finalize(std::size_t cell) {
    Cell& c = cells_[cell];
    double m = 0.0, sx = 0.0, sy = 0.0;
    if (c.leaf()) {
      for (NodeIndex b : c.bodies) {
        m += mass_[b];
        sx += mass_[b] * pos_[b].first;
        sy += mass_[b] * pos_[b].second;
      }
    } else {
      for (std::size_t child : c.children) {
        if (!child) continue;
        finalize(child);
        const Cell& k = cells_[child];
        m += k.mass;
        sx += k.mass * k.com_x;
        sy += k.mass * k.com_y;
      }
    }
    Cell& cc = cells_[cell];
    cc.mass = m;
    if (m > 0.0) {
      cc.com_x = sx / m;
      cc.com_y = sy / m;
    }
  }

  const std::vector<Point>& pos_;
  const std::vector<double>& mass_;
  std::vector<Cell> cells_;
};

// Fruchterman-Reingold style refinement with Barnes-Hut repulsion and a
// linear cooling schedule. Natural edge length is 1.
inline void refine(const LevelGraph& g, std::vector<Point>& pos, std::size_t iterations,
                   double initial_temperature, const ForceOptions& options) {
  const std::size_t n = g.size();
  if (n < 2) return;
  std::vector<Point> disp(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    const double temperature =
        initial_temperature * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    double cx = 0.0, cy = 0.0, total_mass = 0.0;
    for (NodeIndex v = 0; v < n; ++v) {
      cx += g.mass[v] * pos[v].first;
      cy += g.mass[v] * pos[v].second;
      total_mass += g.mass[v];
    }
    cx /= total_mass;
    cy /= total_mass;

    const QuadTree tree(pos, g.mass);
    for (NodeIndex v = 0; v < n; ++v) disp[v] = tree.repulsion(v, 1.0, options.theta);
    for (NodeIndex v = 0; v < n; ++v) {
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        const NodeIndex w = g.targets[e];
        const double dx = pos[v].first - pos[w].first;
        const double dy = pos[v].second - pos[w].second;
        const double dist = std::sqrt(dx * dx + dy * dy);
        // dist^2 attraction, scaled by edge weight; each direction once.
        disp[v].first -= g.weights[e] * dist * dx;
        disp[v].second -= g.weights[e] * dist * dy;
      }
      disp[v].first -= options.gravity * g.mass[v] * (pos[v].first - cx);
      disp[v].second -= options.gravity * g.mass[v] * (pos[v].second - cy);
    }
    for (NodeIndex v = 0; v < n; ++v) {
      const double dx = disp[v].first / g.mass[v];
      const double dy = disp[v].second / g.mass[v];
      const double len = std::sqrt(dx * dx + dy * dy);
      if (len <= 0.0 || !std::isfinite(len)) continue;
      const double step = std::min(len, temperature);
      pos[v].first += dx / len * step;
      pos[v].second += dy / len * step;
    }
  }
}

}  // namespace detail

/// Spring embedder; identical inputs give bit-identical coordinates.
/// Coordinates are centered on the origin.
inline LayoutResult force_layout(const Graph& g, std::uint64_t seed, std::size_t iterations,
                                 ForceOptions options = {}) {
  options.iterations = std::max<std::size_t>(iterations, 1);
  LayoutResult result{{}, seed, LayoutAlgorithm::force, options.iterations};
  const std::size_t n = g.node_count();
  if (n == 0) return result;
  Rng rng(seed);

  std::vector<detail::LevelGraph> levels{detail::LevelGraph::from(g)};
  std::vector<std::vector<NodeIndex>> parents;
  if (n > options.multilevel_threshold) {
    while (levels.back().size() > options.coarsest_size) {
      std::vector<NodeIndex> parent;
      auto coarse = detail::coarsen(levels.back(), parent);
      if (coarse.size() * 10 > levels.back().size() * 9) break;  // stalled
      parents.push_back(std::move(parent));
      levels.push_back(std::move(coarse));
    }
  }

  const auto& coarsest = levels.back();
  const double side = std::sqrt(static_cast<double>(coarsest.size()));
  std::vector<Point> pos(coarsest.size());
  for (auto& p : pos) p = {(uniform_unit(rng) - 0.5) * side, (uniform_unit(rng) - 0.5) * side};
  detail::refine(coarsest, pos, options.iterations, std::max(1.0, side / 4.0), options);

  for (std::size_t level = levels.size() - 1; level-- > 0;) {
    const auto& parent = parents[level];
    const auto& fine = levels[level];
    std::vector<Point> finer(fine.size());
    for (NodeIndex v = 0; v < fine.size(); ++v)
      finer[v] = {pos[parent[v]].first + (uniform_unit(rng) - 0.5) * 0.1,
                  pos[parent[v]].second + (uniform_unit(rng) - 0.5) * 0.1};
    pos = std::move(finer);
    detail::refine(fine, pos, std::max<std::size_t>(options.iterations / 4, 10), 1.0, options);
  }

  double cx = 0.0, cy = 0.0;
  for (const auto& [x, y] : pos) {
    cx += x;
    cy += y;
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  for (auto& [x, y] : pos) {
    x -= cx;
    y -= cy;
  }
  result.coords = std::move(pos);
  return result;
}

enum class CircularOrder { index, degree_desc };

/// Nodes on the unit circle, equally spaced, starting at angle 0 and going
/// counter-clockwise in the requested order.
inline LayoutResult circular_layout(const Graph& g, CircularOrder order = CircularOrder::index) {
  LayoutResult result{{}, 0, LayoutAlgorithm::circular, 0};
  const std::size_t n = g.node_count();
  result.coords.resize(n);
  std::vector<NodeIndex> sequence;
  if (order == CircularOrder::degree_desc) {
    sequence = rank_by_degree(g);
  } else {
    sequence.resize(n);
    std::iota(sequence.begin(), sequence.end(), NodeIndex{0});
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    result.coords[sequence[r]] = {std::cos(angle), std::sin(angle)};
  }
  return result;
}

/// Plain SVG 1.1: edges as lines, nodes as circles with radius growing with
/// log(1 + degree), viewBox fitted to the coordinates with a 5% margin.
inline std::string emit_svg(const Graph& g, const LayoutResult& layout) {
  const auto& pos = layout.coords;
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  if (!pos.empty()) {
    min_x = max_x = pos[0].first;
    min_y = max_y = pos[0].second;
    for (const auto& [x, y] : pos) {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  double width = max_x - min_x, height = max_y - min_y;
  const double extent = std::max({width, height, 1.0});
  if (width <= 0.0) { min_x -= extent / 2; width = extent; }
  if (height <= 0.0) { min_y -= extent / 2; height = extent; }
  const double mx = 0.05 * width, my = 0.05 * height;
  const double unit = 0.006 * extent;
  auto num = [](double v) { return fixed(v, 4); };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         num(min_x - mx) + " " + num(min_y - my) + " " + num(width + 2 * mx) + " " +
         num(height + 2 * my) + "\">\n";
  out += "<g stroke=\"#888888\" stroke-width=\"" + num(unit * 0.3) + "\">\n";
  for (const auto& [u, v] : g.edges())
    out += "<line x1=\"" + num(pos[u].first) + "\" y1=\"" + num(pos[u].second) + "\" x2=\"" +
           num(pos[v].first) + "\" y2=\"" + num(pos[v].second) + "\"/>\n";
  out += "</g>\n<g fill=\"#1f77b4\">\n";
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    out += "<circle cx=\"" + num(pos[v].first) + "\" cy=\"" + num(pos[v].second) + "\" r=\"" +
           num(unit * (1.0 + std::log1p(static_cast<double>(g.degree(v))))) + "\"/>\n";
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace topofilter
