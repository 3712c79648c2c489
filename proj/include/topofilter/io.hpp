#pragma once

// Edge-list, Pajek (subset) and JSON node-link formats.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "topofilter/graph.hpp"

namespace topofilter {

using Json = nlohmann::ordered_json;

/// Malformed input. line is 1-based; 0 when the problem is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class GraphFormat { edge_list, pajek, json };

inline std::string_view to_string(GraphFormat f) {
  switch (f) {
    case GraphFormat::edge_list: return "edge-list";
    case GraphFormat::pajek: return "pajek";
    case GraphFormat::json: return "json";
  }
  return "?";
}

inline std::optional<GraphFormat> parse_format(std::string_view name) {
  if (name == "edge-list" || name == "edgelist" || name == "txt") return GraphFormat::edge_list;
  if (name == "pajek" || name == "net") return GraphFormat::pajek;
  if (name == "json") return GraphFormat::json;
  return std::nullopt;
}

inline GraphFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".net" || ext == ".paj") return GraphFormat::pajek;
  if (ext == ".json") return GraphFormat::json;
  return GraphFormat::edge_list;
}

struct LoadedGraph {
  Graph graph;
  CoercionReport coercion;
};

struct GraphDocument {
  std::string name;
  Graph graph;
  GraphFormat source_format = GraphFormat::edge_list;
  CoercionReport coercion;
};

namespace detail {

// Splits on \n, \r\n or \r.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}
  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const auto end = text_.find_first_of("\r\n", pos_);
    if (end == std::string_view::npos) {
      line = text_.substr(pos_);
      pos_ = text_.size();
    } else {
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      if (text_[end] == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    }
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Whitespace-separated id pairs, one per line. Blank lines and lines
/// starting with '#' or '%' are skipped.
inline LoadedGraph parse_edge_list(std::string_view text) {
  GraphBuilder b;
  detail::LineReader lines(text);
  std::string_view line;
  while (lines.next(line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;
    const auto tok = detail::tokens(line);
    if (tok.size() != 2)
      throw ParseError(lines.number(),
                       "expected 2 tokens, found " + std::to_string(tok.size()));
    b.add_edge(tok[0], tok[1]);
  }
  Graph g = b.build();
  return {std::move(g), b.report()};
}

/// Pajek subset: *Vertices n, optional `index "label"` lines, then *Edges or
/// *Arcs sections of index pairs. Arcs are symmetrized; trailing tokens on
/// edge lines (weights) are ignored. External ids are the 1-based vertex
/// numbers.
inline LoadedGraph parse_pajek(std::string_view text) {
  GraphBuilder b;
  enum class Section { none, vertices, edges, arcs } section = Section::none;
  bool have_vertices = false;
  std::size_t n = 0;

  detail::LineReader lines(text);
  std::string_view line;
  auto vertex = [&](std::string_view tok) -> NodeIndex {
    const auto idx = detail::to_index(tok);
    if (!idx) throw ParseError(lines.number(), "bad vertex index '" + std::string(tok) + "'");
    if (*idx < 1 || *idx > n)
      throw ParseError(lines.number(), "vertex index " + std::to_string(*idx) +
                                           " out of range 1.." + std::to_string(n));
    return static_cast<NodeIndex>(*idx - 1);
  };

  while (lines.next(line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '%') continue;
    if (line.front() == '*') {
      const auto tok = detail::tokens(line);
      const std::string keyword = detail::lower(tok[0]);
      if (keyword == "*network") continue;
      if (keyword == "*vertices") {
        if (have_vertices) throw ParseError(lines.number(), "duplicate *Vertices header");
        const auto count = tok.size() >= 2 ? detail::to_index(tok[1]) : std::nullopt;
        if (!count) throw ParseError(lines.number(), "*Vertices needs a vertex count");
        n = *count;
        for (std::size_t i = 1; i <= n; ++i) b.add_node(std::to_string(i));
        have_vertices = true;
        section = Section::vertices;
      } else if (keyword == "*edges" || keyword == "*arcs") {
        if (!have_vertices) throw ParseError(lines.number(), "missing *Vertices header");
        section = keyword == "*edges" ? Section::edges : Section::arcs;
      } else {
        throw ParseError(lines.number(), "unsupported Pajek section " + std::string(tok[0]) +
                                             " (only *Vertices, *Edges and *Arcs are read)");
      }
      continue;
    }

    switch (section) {
      case Section::none:
        throw ParseError(lines.number(), "missing *Vertices header");
      case Section::vertices: {
        const auto tok = detail::tokens(line);
        const NodeIndex v = vertex(tok[0]);
        std::string_view rest = detail::trim(line.substr(tok[0].size()));
        if (rest.empty()) break;
        if (rest.front() == '"') {
          const auto close = rest.find('"', 1);
          if (close == std::string_view::npos)
            throw ParseError(lines.number(), "unterminated vertex label");
          b.set_label(v, std::string(rest.substr(1, close - 1)));
        } else {
          b.set_label(v, std::string(detail::tokens(rest)[0]));
        }
        break;
      }
      case Section::edges:
      case Section::arcs: {
        const auto tok = detail::tokens(line);
        if (tok.size() < 2)
          throw ParseError(lines.number(), "expected a vertex pair, found " +
                                               std::to_string(tok.size()) + " token(s)");
        b.add_edge(vertex(tok[0]), vertex(tok[1]));
        if (section == Section::arcs) b.note_arc();
        if (tok.size() > 2) b.note_weight();
        break;
      }
    }
  }
  if (!have_vertices) throw ParseError(0, "missing *Vertices header");
  Graph g = b.build();
  return {std::move(g), b.report()};
}

/// Node-link JSON: {"nodes":[{"id","label"?,"degree","x"?,"y"?}],"edges":[[i,j],...]}
/// with i < j in lexicographic order.
inline Json graph_json(const Graph& g, std::span<const std::pair<double, double>> coords = {}) {
  if (!coords.empty() && coords.size() != g.node_count())
    throw std::invalid_argument("graph_json: " + std::to_string(coords.size()) +
                                " coordinates for " + std::to_string(g.node_count()) + " nodes");
  Json nodes = Json::array();
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    Json node = Json::object();
    node["id"] = g.id(v);
    if (const auto& label = g.label(v)) node["label"] = *label;
    node["degree"] = g.degree(v);
    if (!coords.empty()) {
      node["x"] = coords[v].first;
      node["y"] = coords[v].second;
    }
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (NodeIndex u = 0; u < g.node_count(); ++u)
    for (NodeIndex v : g.neighbors(u))
      if (u < v) edges.push_back(Json::array({u, v}));
  Json out = Json::object();
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

inline std::string emit_graph_json(const Graph& g,
                                   std::span<const std::pair<double, double>> coords = {}) {
  return graph_json(g, coords).dump();
}

inline LoadedGraph parse_graph_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") ||
      !doc["nodes"].is_array() || !doc["edges"].is_array())
    throw ParseError(0, "expected an object with 'nodes' and 'edges' arrays");
  GraphBuilder b;
  std::size_t position = 0;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_object() || !node.contains("id") || !node["id"].is_string())
      throw ParseError(0, "node " + std::to_string(position) + " has no string 'id'");
    const auto id = node["id"].get<std::string>();
    if (b.lookup(id)) throw ParseError(0, "duplicate node id '" + id + "'");
    const NodeIndex v = b.add_node(id);
    if (node.contains("label")) b.set_label(v, node["label"].get<std::string>());
    ++position;
  }
  for (const auto& edge : doc["edges"]) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_unsigned() ||
        !edge[1].is_number_unsigned())
      throw ParseError(0, "edges must be [i, j] index pairs");
    const auto u = edge[0].get<std::uint64_t>();
    const auto v = edge[1].get<std::uint64_t>();
    if (u >= b.node_count() || v >= b.node_count())
      throw ParseError(0, "edge endpoint out of range");
    b.add_edge(static_cast<NodeIndex>(u), static_cast<NodeIndex>(v));
  }
  Graph g = b.build();
  return {std::move(g), b.report()};
}

/// One "id id" line per edge. Isolated nodes are not representable.
inline std::string emit_edge_list(const Graph& g) {
  std::string out;
  for (const auto& [u, v] : g.edges()) {
    out += g.id(u);
    out += ' ';
    out += g.id(v);
    out += '\n';
  }
  return out;
}

/// Pajek with *Vertices/*Edges. Vertex numbers are 1-based node indices;
/// labels are written when present.
inline std::string emit_pajek(const Graph& g) {
  std::string out = "*Vertices " + std::to_string(g.node_count()) + "\n";
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (const auto& label = g.label(v))
      out += std::to_string(v + 1) + " \"" + *label + "\"\n";
  out += "*Edges\n";
  for (const auto& [u, v] : g.edges())
    out += std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  return out;
}

inline LoadedGraph parse_graph(std::string_view text, GraphFormat format) {
  switch (format) {
    case GraphFormat::edge_list: return parse_edge_list(text);
    case GraphFormat::pajek: return parse_pajek(text);
    case GraphFormat::json: return parse_graph_json(text);
  }
  throw std::invalid_argument("unknown graph format");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

inline GraphDocument load_document(const std::filesystem::path& path,
                                   std::optional<GraphFormat> format = std::nullopt,
                                   std::string name = {}) {
  const GraphFormat fmt = format.value_or(format_from_path(path));
  auto loaded = parse_graph(read_file(path), fmt);
  if (name.empty()) name = path.stem().string();
  return {std::move(name), std::move(loaded.graph), fmt, loaded.coercion};
}

}  // namespace topofilter
