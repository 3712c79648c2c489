#pragma once

// HTTP/JSON service over a Catalog. Every body is produced by topofilter::api
// so it matches the CLI output for the same query.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "httplib.h"

#include "topofilter/api.hpp"
#include "topofilter/catalog.hpp"

namespace topofilter {

struct ServerOptions {
  // Requests that take longer than this turn into a pollable job.
  std::chrono::milliseconds job_budget{2000};
  std::size_t max_jobs = 256;
  PathLengthOptions apl;
};

/// Status code plus body, as sent.
struct Reply {
  int status = 200;
  std::string body;
};

/// Thrown by handlers to produce an error reply.
struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& message)
      : std::runtime_error(message), status(status) {}
  int status;
};

namespace query {

inline std::optional<std::string> get(const httplib::Request& req, const std::string& key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

template <typename T>
std::optional<T> number(const httplib::Request& req, const std::string& key) {
  const auto text = get(req, key);
  if (!text) return std::nullopt;
  T value{};
  const auto* end = text->data() + text->size();
  const auto [ptr, ec] = std::from_chars(text->data(), end, value);
  if (ec != std::errc{} || ptr != end || text->empty())
    throw HttpError(400, "parameter '" + key + "' is not a valid number: '" + *text + "'");
  return value;
}

template <typename T>
T required(const httplib::Request& req, const std::string& key) {
  const auto v = number<T>(req, key);
  if (!v) throw HttpError(400, "missing parameter '" + key + "'");
  return *v;
}

inline bool flag(const httplib::Request& req, const std::string& key) {
  const auto v = get(req, key);
  return v && (*v == "true" || *v == "1");
}

inline FilterMode dis_mode(const std::string& text) {
  if (text == "max" || text == "max-dis") return FilterMode::max_dis;
  if (text == "min" || text == "min-dis") return FilterMode::min_dis;
  if (text == "kcore" || text == "k-core") return FilterMode::k_core;
  throw HttpError(400, "mode must be max, min or kcore, got '" + text + "'");
}

}  // namespace query

class Server {
 public:
  explicit Server(Catalog& catalog, ServerOptions options = {})
      : catalog_(catalog), options_(std::move(options)) {
    http_.set_payload_max_length(std::size_t{1} << 30);
    http_.set_default_headers({{"X-Schema-Version", std::to_string(api::kSchemaVersion)},
                               {"Access-Control-Allow-Origin", "*"}});
    routes();
  }

  /// Binds to a port (0 picks a free one). Returns the bound port.
  int bind(const std::string& host, int port) {
    const int bound = port == 0 ? http_.bind_to_any_port(host) : (http_.bind_to_port(host, port) ? port : -1);
    if (bound < 0)
      throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  /// Blocks serving requests until stop().
  void run() { http_.listen_after_bind(); }
  void stop() { http_.stop(); }
  void wait_until_ready() const { http_.wait_until_ready(); }

  /// Handles one request in-process: the same path as over the wire.
  Reply dispatch(const std::string& path, const httplib::Params& params = {}) {
    httplib::Request req;
    req.path = path;
    req.params = params;
    for (const auto& [pattern, handler] : get_routes_) {
      if (std::regex_match(req.path, req.matches, pattern)) return guarded([&] { return handler(req); });
    }
    return error(404, "no route for " + path);
  }

 private:
  using Handler = std::function<Reply(const httplib::Request&)>;

  static Reply json_reply(int status, const Json& j) { return {status, api::body(j)}; }
  static Reply error(int status, const std::string& message) {
    return json_reply(status, api::error_json(status, message));
  }

  template <typename F>
  static Reply guarded(F&& fn) {
    try {
      return fn();
    } catch (const HttpError& e) {
      return error(e.status, e.what());
    } catch (const ParseError& e) {
      return error(422, e.what());
    } catch (const std::invalid_argument& e) {
      return error(400, e.what());
    } catch (const std::out_of_range& e) {
      return error(400, e.what());
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

  Catalog::Entry entry(const httplib::Request& req) const {
    const std::string name = req.matches[1];
    auto found = catalog_.find(name);
    if (!found) throw HttpError(404, "unknown graph '" + name + "'");
    return *found;
  }

  // Runs fn off the accept path; if it misses the budget the client gets a
  // job id to poll.
  Reply with_budget(std::function<Reply()> fn) {
    std::shared_future<Reply> future =
        std::async(std::launch::async, [fn = std::move(fn)] { return guarded(fn); }).share();
    if (future.wait_for(options_.job_budget) == std::future_status::ready) return future.get();
    std::lock_guard lock(jobs_mutex_);
    const std::uint64_t id = ++next_job_;
    jobs_.emplace(id, future);
    while (jobs_.size() > options_.max_jobs) {
      const auto oldest = std::find_if(jobs_.begin(), jobs_.end(), [](const auto& kv) {
        return kv.second.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
      });
      if (oldest == jobs_.end()) break;
      jobs_.erase(oldest);
    }
    return pending(id);
  }

  static Reply pending(std::uint64_t id) {
    Json out = api::versioned();
    out["job"] = id;
    out["status"] = "pending";
    out["poll"] = "/jobs/" + std::to_string(id);
    return json_reply(202, out);
  }

  Reply job(const httplib::Request& req) {
    std::uint64_t id = 0;
    const std::string text = req.matches[1];
    std::from_chars(text.data(), text.data() + text.size(), id);
    std::shared_future<Reply> future;
    {
      std::lock_guard lock(jobs_mutex_);
      const auto it = jobs_.find(id);
      if (it == jobs_.end()) throw HttpError(404, "unknown job " + text);
      future = it->second;
    }
    if (future.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return pending(id);
    return future.get();
  }

  void get(const std::string& pattern, Handler handler) {
    get_routes_.emplace_back(std::regex(pattern), handler);
    http_.Get(pattern, [this, handler](const httplib::Request& req, httplib::Response& res) {
      const Reply reply = guarded([&] { return handler(req); });
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
  }

  void routes() {
    get(R"(/graphs)", [this](const httplib::Request&) {
      Json list = Json::array();
      for (const auto& [name, e] : *catalog_.snapshot())
        list.push_back(api::summary_json(name, e.document->graph));
      return json_reply(200, list);
    });

    http_.Post(R"(/graphs)", [this](const httplib::Request& req, httplib::Response& res) {
      const Reply reply = guarded([&] { return upload(req); });
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });

    get(R"(/graphs/([^/]+)/metrics)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      return with_budget([e, apl = options_.apl] {
        return json_reply(200, api::metrics_body(e.document->graph, apl));
      });
    });

    get(R"(/graphs/([^/]+)/degree-distribution)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const double fraction = query::number<double>(req, "fraction").value_or(0.05);
      return json_reply(200, api::degree_distribution_body(e.document->graph, fraction));
    });

    get(R"(/graphs/([^/]+)/dis)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const FilterSpec spec{query::dis_mode(query::get(req, "mode").value_or("")),
                            query::required<std::size_t>(req, "d")};
      api::ViewQuery q{spec, query::get(req, "include") == "metrics",
                       query::number<NodeIndex>(req, "component")};
      const auto view = catalog_.view(e, spec);
      if (!q.include_metrics) return json_reply(200, api::dis_body(e.document->name, *view, q));
      return with_budget([e, view, q] {
        return json_reply(200, api::dis_body(e.document->name, *view, q));
      });
    });

    get(R"(/graphs/([^/]+)/dis-top)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const auto k = query::number<std::size_t>(req, "k");
      const auto fraction = query::number<double>(req, "fraction");
      if (k.has_value() == fraction.has_value())
        throw HttpError(400, "give exactly one of 'k' or 'fraction'");
      const auto& g = e.document->graph;
      const auto top = k ? min_dis_top(g, *k) : min_dis_top_fraction(g, *fraction);
      return json_reply(200, api::top_body(e.document->name, top, fraction));
    });

    get(R"(/graphs/([^/]+)/layout)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      api::LayoutQuery q;
      const auto algorithm = query::get(req, "algorithm").value_or("force");
      if (algorithm == "circular") q.algorithm = LayoutAlgorithm::circular;
      else if (algorithm != "force") throw HttpError(400, "algorithm must be force or circular");
      q.seed = query::number<std::uint64_t>(req, "seed").value_or(0);
      q.iterations = query::number<std::size_t>(req, "iterations").value_or(q.iterations);
      if (q.iterations == 0) throw HttpError(400, "iterations must be >= 1");
      const auto order = query::get(req, "order").value_or("index");
      if (order == "degree") q.order = CircularOrder::degree_desc;
      else if (order != "index") throw HttpError(400, "order must be index or degree");
      q.component = query::number<NodeIndex>(req, "component");
      std::shared_ptr<const SubgraphResult> view;
      if (const auto mode = query::get(req, "mode")) {
        view = catalog_.view(e, {query::dis_mode(*mode), query::required<std::size_t>(req, "d")});
      } else {
        view = std::make_shared<const SubgraphResult>(api::whole_view(e.document->graph));
      }
      return with_budget([e, view, q] {
        return json_reply(200, api::layout_body(e.document->name, api::lay_out(*view, q), q.component));
      });
    });

    get(R"(/graphs/([^/]+)/sweep)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const auto mode = query::dis_mode(query::get(req, "mode").value_or(""));
      if (mode == FilterMode::k_core) throw HttpError(400, "sweep mode must be max or min");
      const auto& g = e.document->graph;
      const auto dmin = query::number<std::size_t>(req, "dmin").value_or(0);
      const auto dmax = query::number<std::size_t>(req, "dmax").value_or(g.max_degree());
      SweepOptions options;
      options.with_apl = query::flag(req, "apl");
      options.apl = options_.apl;
      if (!options.with_apl) return json_reply(200, api::sweep_body(dis_sweep(g, mode, dmin, dmax)));
      return with_budget([e, mode, dmin, dmax, options] {
        return json_reply(200, api::sweep_body(dis_sweep(e.document->graph, mode, dmin, dmax, options)));
      });
    });

    get(R"(/graphs/([^/]+)/attack)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const auto order_text = query::get(req, "order").value_or("targeted");
      AttackOrder order = AttackOrder::targeted;
      if (order_text == "random") order = AttackOrder::random;
      else if (order_text != "targeted") throw HttpError(400, "order must be targeted or random");
      const auto steps = query::number<std::size_t>(req, "steps").value_or(20);
      const auto seed = query::number<std::uint64_t>(req, "seed").value_or(0);
      const bool recompute = query::flag(req, "recompute");
      return json_reply(200, api::attack_body(
                                 attack_curve(e.document->graph, order, steps, seed, recompute)));
    });

    get(R"(/graphs/([^/]+)/tail-start)", [this](const httplib::Request& req) {
      const auto e = entry(req);
      const double fraction = query::number<double>(req, "fraction").value_or(0.05);
      return json_reply(200, api::tail_start_body(e.document->graph, fraction));
    });

    get(R"(/jobs/(\d+))", [this](const httplib::Request& req) { return job(req); });
  }

  Reply upload(const httplib::Request& req) {
    const auto name = query::get(req, "name").value_or("");
    if (name.empty()) throw HttpError(400, "missing parameter 'name'");
    if (name.find('/') != std::string::npos) throw HttpError(400, "graph names cannot contain '/'");
    const auto format_text = query::get(req, "format").value_or("edge-list");
    const auto format = parse_format(format_text);
    if (!format) throw HttpError(400, "unknown format '" + format_text + "'");
    auto loaded = parse_graph(req.body, *format);
    GraphDocument doc{name, std::move(loaded.graph), *format, loaded.coercion};
    const Json summary = api::upload_body(doc);
    catalog_.put(std::move(doc));
    return json_reply(201, summary);
  }

  Catalog& catalog_;
  ServerOptions options_;
  httplib::Server http_;
  std::vector<std::pair<std::regex, Handler>> get_routes_;

  std::mutex jobs_mutex_;
  std::map<std::uint64_t, std::shared_future<Reply>> jobs_;
  std::uint64_t next_job_ = 0;
};

/// Binds and serves until the process is stopped.
inline void serve(Catalog& catalog, const std::string& host, int port, ServerOptions options = {}) {
  Server server(catalog, std::move(options));
  server.bind(host, port);
  server.run();
}

}  // namespace topofilter
