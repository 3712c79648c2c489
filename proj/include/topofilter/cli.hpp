#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "topofilter/api.hpp"
#include "topofilter/catalog.hpp"
#include "topofilter/server.hpp"

namespace topofilter::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

struct Environment {
  bool color = false;  // colored diagnostics on stderr
};

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string path;
  std::string format;  // empty: from extension
  std::string name;    // empty: file stem
  bool lcc = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("input", path, "Graph file (edge list, Pajek .net or JSON)")->required();
    cmd->add_option("--input-format", format, "Override input format: edge-list, pajek or json");
    cmd->add_option("--name", name, "Graph name used in output (default: file stem)");
    cmd->add_flag("--lcc", lcc, "Restrict the input to its largest connected component");
  }

  GraphDocument load(std::ostream& err) const {
    std::optional<GraphFormat> fmt;
    if (!format.empty()) {
      fmt = parse_format(format);
      if (!fmt) throw UsageError("unknown input format '" + format + "'");
    }
    GraphDocument doc = load_document(path, fmt, name);
    const auto& c = doc.coercion;
    if (c.self_loops_dropped || c.duplicate_edges_collapsed || c.arcs_symmetrized ||
        c.weights_ignored)
      err << "note: " << path << ": dropped " << c.self_loops_dropped << " self-loop(s), collapsed "
          << c.duplicate_edges_collapsed << " duplicate edge(s), symmetrized "
          << c.arcs_symmetrized << " arc(s), ignored " << c.weights_ignored << " weight(s)\n";
    if (lcc) doc.graph = largest_connected_component(doc.graph).graph;
    return doc;
  }
};

inline FilterMode mode_from(const std::string& text) {
  if (text == "max" || text == "max-dis") return FilterMode::max_dis;
  if (text == "min" || text == "min-dis") return FilterMode::min_dis;
  if (text == "kcore" || text == "k-core") return FilterMode::k_core;
  throw UsageError("mode must be max, min or kcore, got '" + text + "'");
}

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const Environment& env = {}) {
  CLI::App app{"Degree-induced subgraph filtering and network metrics", "topofilter"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string output_path;
  std::string preset;
  detail::Input top_input;
  app.add_option("--preset", preset, "Named analysis preset (paper)")
      ->check(CLI::IsMember({"paper"}));
  app.add_option("input", top_input.path, "Graph file for --preset");
  app.add_option("--input-format", top_input.format, "Override input format");
  app.add_option("--name", top_input.name, "Graph name used in output");
  app.add_option("-o,--out", output_path, "Write output to this file instead of stdout");

  // info
  auto* info = app.add_subcommand("info", "Metrics report for a graph");
  detail::Input info_in;
  info_in.add_to(info);
  bool distribution = false;
  bool exact_apl = false;
  std::string info_preset;
  info->add_flag("--distribution", distribution, "Print the degree distribution instead");
  info->add_flag("--exact-apl", exact_apl, "Never sample path lengths");
  info->add_option("--preset", info_preset, "Named analysis preset (paper)")
      ->check(CLI::IsMember({"paper"}));

  // dis / kcore
  auto* dis = app.add_subcommand("dis", "Degree-induced subgraph (max, min) or k-core");
  detail::Input dis_in;
  dis_in.add_to(dis);
  std::string dis_mode = "max";
  std::size_t dis_d = 0;
  bool dis_metrics = false;
  std::optional<NodeIndex> dis_component;
  dis->add_option("--mode", dis_mode, "max, min or kcore")->required();
  dis->add_option("--d", dis_d, "Degree threshold")->required();
  dis->add_flag("--include-metrics", dis_metrics, "Attach a metrics report of the view");
  dis->add_option("--component", dis_component, "Only component K (0 = largest)");

  auto* kcore = app.add_subcommand("kcore", "k-core by recursive removal");
  detail::Input kcore_in;
  kcore_in.add_to(kcore);
  std::size_t kcore_k = 0;
  bool kcore_metrics = false;
  std::optional<NodeIndex> kcore_component;
  kcore->add_option("--k", kcore_k, "Minimum internal degree")->required();
  kcore->add_flag("--include-metrics", kcore_metrics, "Attach a metrics report of the view");
  kcore->add_option("--component", kcore_component, "Only component K (0 = largest)");

  // dis-top
  auto* top = app.add_subcommand("dis-top", "Subgraph of the k highest-degree nodes");
  detail::Input top_in;
  top_in.add_to(top);
  std::optional<std::size_t> top_k;
  std::optional<double> top_fraction;
  auto* k_opt = top->add_option("--k", top_k, "Number of nodes");
  auto* f_opt = top->add_option("--fraction", top_fraction, "Fraction of nodes in (0, 1]");
  k_opt->excludes(f_opt);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Census of every DIS over a threshold range");
  detail::Input sweep_in;
  sweep_in.add_to(sweep);
  std::string sweep_mode;
  std::optional<std::size_t> dmin, dmax;
  bool sweep_apl = false;
  std::string sweep_format = "json";
  sweep->add_option("--mode", sweep_mode, "max or min")->required();
  sweep->add_option("--dmin", dmin, "Lowest threshold (default 0)");
  sweep->add_option("--dmax", dmax, "Highest threshold (default max degree)");
  sweep->add_flag("--apl", sweep_apl, "Add exact APL of the largest component per row");
  sweep->add_option("--format", sweep_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // attack
  auto* attack = app.add_subcommand("attack", "Largest-component curve under node removal");
  detail::Input attack_in;
  attack_in.add_to(attack);
  std::string attack_order = "targeted";
  std::size_t attack_steps = 20;
  std::uint64_t attack_seed = 0;
  bool recompute = false;
  std::string attack_format = "json";
  attack->add_option("--order", attack_order, "targeted or random")
      ->check(CLI::IsMember({"targeted", "random"}));
  attack->add_option("--steps", attack_steps, "Number of removal batches");
  attack->add_option("--seed", attack_seed, "Seed for random order");
  attack->add_flag("--recompute", recompute, "Targeted: re-rank by current degree after each removal");
  attack->add_option("--format", attack_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // layout
  auto* layout = app.add_subcommand("layout", "2D layout of a (filtered) graph");
  detail::Input layout_in;
  layout_in.add_to(layout);
  std::optional<std::string> layout_mode;
  std::optional<std::size_t> layout_d;
  std::string algorithm = "force";
  std::string circle_order = "index";
  api::LayoutQuery lq;
  std::string layout_format = "json";
  layout->add_option("--mode", layout_mode, "Filter first: max, min or kcore");
  layout->add_option("--d", layout_d, "Threshold for --mode");
  layout->add_option("--algorithm", algorithm, "force or circular")
      ->check(CLI::IsMember({"force", "circular"}));
  layout->add_option("--seed", lq.seed, "Seed for initial positions");
  layout->add_option("--iterations", lq.iterations, "Force iterations")->check(CLI::PositiveNumber);
  layout->add_option("--order", circle_order, "Circular order: index or degree")
      ->check(CLI::IsMember({"index", "degree"}));
  layout->add_option("--component", lq.component, "Only component K (0 = largest)");
  layout->add_option("--format", layout_format, "json or svg")->check(CLI::IsMember({"json", "svg"}));

  // tail-start
  auto* tail = app.add_subcommand("tail-start", "Suggested Max/Min boundary from the degree tail");
  detail::Input tail_in;
  tail_in.add_to(tail);
  double tail_fraction = 0.05;
  tail->add_option("--fraction", tail_fraction, "Fraction of nodes allowed above the boundary");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a scale-free graph");
  std::size_t gen_n = 1000, gen_m = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_format = "edge-list";
  gen->add_option("--n", gen_n, "Node count");
  gen->add_option("--m", gen_m, "Edges per new node");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--format", gen_format, "edge-list, pajek or json")
      ->check(CLI::IsMember({"edge-list", "pajek", "json"}));

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  std::vector<std::string> preload;
  std::string host = "127.0.0.1";
  int port = 8080;
  long budget_ms = 2000;
  serve_cmd->add_option("graphs", preload, "Graph files to load at startup (name = file stem)");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  serve_cmd->add_option("--job-budget-ms", budget_ms, "Latency budget before a request becomes a job");

  std::vector<const char*> argv{"topofilter"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto diag = [&](const std::string& message) {
    err << (env.color ? "\033[31merror:\033[0m " : "error: ") << message << "\n";
  };

  try {
    std::string text;
    const auto emit_json = [&](const Json& j) { text = api::body(j); };

    if (app.got_subcommand(info)) {
      const auto doc = info_in.load(err);
      PathLengthOptions apl;
      apl.exact = exact_apl;
      if (info_preset == "paper") {
        const auto lcc = largest_connected_component(doc.graph).graph;
        emit_json(api::paper_preset_body(doc.name, lcc, true, apl));
      } else if (distribution) {
        emit_json(api::degree_distribution_body(doc.graph, 0.05));
      } else {
        emit_json(api::metrics_body(doc.graph, apl));
      }
    } else if (app.got_subcommand(dis)) {
      const auto doc = dis_in.load(err);
      const FilterSpec spec{detail::mode_from(dis_mode), dis_d};
      emit_json(api::dis_body(doc.name, apply_filter(doc.graph, spec),
                              {spec, dis_metrics, dis_component}));
    } else if (app.got_subcommand(kcore)) {
      const auto doc = kcore_in.load(err);
      const FilterSpec spec{FilterMode::k_core, kcore_k};
      emit_json(api::dis_body(doc.name, k_core(doc.graph, kcore_k),
                              {spec, kcore_metrics, kcore_component}));
    } else if (app.got_subcommand(top)) {
      if (!top_k && !top_fraction) throw detail::UsageError("give --k or --fraction");
      const auto doc = top_in.load(err);
      const auto sel = top_k ? min_dis_top(doc.graph, *top_k)
                             : min_dis_top_fraction(doc.graph, *top_fraction);
      emit_json(api::top_body(doc.name, sel, top_fraction));
    } else if (app.got_subcommand(sweep)) {
      const auto mode = detail::mode_from(sweep_mode);
      if (mode == FilterMode::k_core) throw detail::UsageError("sweep mode must be max or min");
      const auto doc = sweep_in.load(err);
      SweepOptions options;
      options.with_apl = sweep_apl;
      const auto profile = dis_sweep(doc.graph, mode, dmin.value_or(0),
                                     dmax.value_or(doc.graph.max_degree()), options);
      if (sweep_format == "csv") text = api::sweep_csv(profile);
      else emit_json(api::sweep_body(profile));
    } else if (app.got_subcommand(attack)) {
      const auto doc = attack_in.load(err);
      const auto curve = attack_curve(
          doc.graph, attack_order == "random" ? AttackOrder::random : AttackOrder::targeted,
          attack_steps, attack_seed, recompute);
      if (attack_format == "csv") text = api::attack_csv(curve);
      else emit_json(api::attack_body(curve));
    } else if (app.got_subcommand(layout)) {
      const auto doc = layout_in.load(err);
      lq.algorithm = algorithm == "circular" ? LayoutAlgorithm::circular : LayoutAlgorithm::force;
      lq.order = circle_order == "degree" ? CircularOrder::degree_desc : CircularOrder::index;
      SubgraphResult view;
      if (layout_mode) {
        if (!layout_d) throw detail::UsageError("--mode needs --d");
        view = apply_filter(doc.graph, {detail::mode_from(*layout_mode), *layout_d});
      } else {
        view = api::whole_view(doc.graph);
      }
      const auto laid = api::lay_out(view, lq);
      if (layout_format == "svg") text = emit_svg(laid.view.graph, laid.layout);
      else emit_json(api::layout_body(doc.name, laid, lq.component));
    } else if (app.got_subcommand(tail)) {
      const auto doc = tail_in.load(err);
      emit_json(api::tail_start_body(doc.graph, tail_fraction));
    } else if (app.got_subcommand(gen)) {
      const auto g = generate_scale_free(gen_n, gen_m, gen_seed);
      if (gen_format == "json") text = emit_graph_json(g) + "\n";
      else if (gen_format == "pajek") text = emit_pajek(g);
      else text = emit_edge_list(g);
    } else if (app.got_subcommand(serve_cmd)) {
      Catalog catalog;
      for (const auto& path : preload) {
        auto doc = load_document(path);
        err << "loaded " << doc.name << " (" << doc.graph.node_count() << " nodes, "
            << doc.graph.edge_count() << " edges)\n";
        catalog.put(std::move(doc));
      }
      ServerOptions options;
      options.job_budget = std::chrono::milliseconds(budget_ms);
      Server server(catalog, options);
      const int bound = server.bind(host, port);
      err << "listening on http://" << host << ":" << bound << "\n";
      server.run();
      return kOk;
    } else if (preset == "paper") {
      if (top_input.path.empty()) throw detail::UsageError("--preset paper needs an input file");
      const auto doc = top_input.load(err);
      const auto lcc = largest_connected_component(doc.graph).graph;
      emit_json(api::paper_preset_body(doc.name, lcc, true));
    } else {
      err << app.help();
      return kUsage;
    }

    if (output_path.empty()) {
      out << text;
    } else {
      std::ofstream file(output_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + output_path);
      file << text;
    }
    return kOk;
  } catch (const detail::UsageError& e) {
    diag(e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    diag(e.what());
    return kUsage;
  } catch (const std::out_of_range& e) {
    diag(e.what());
    return kUsage;
  } catch (const ParseError& e) {
    diag(e.what());
    return kData;
  } catch (const std::exception& e) {
    diag(e.what());
    return kData;
  }
}

}  // namespace topofilter::cli
