#pragma once

// HTTP/JSON front-end:
//   POST /api/solve   SolveRequest JSON  -> {meta, t, u}
//   POST /api/fit     series + grids     -> FitReport JSON
//   GET  /api/plot    solve params in the query string -> image/svg+xml
//   GET  /api/health  -> {status, version}
//   GET  /api/metrics -> request counters
// Static UI files are served from ServiceConfig::static_dir at "/".
//
// Each route is a pure function of its request (handle_*), so the same code
// is exercised in-process by tests and through httplib by the server.

#include "fro/analytic.hpp"
#include "fro/dataio.hpp"
#include "fro/problem.hpp"
#include "fro/solver.hpp"
#include "fro/svg.hpp"
#include "fro/version.hpp"

#include "httplib.h"
#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace fro::service {

using json = nlohmann::ordered_json;

struct ServiceConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::size_t max_nodes = 100'000;
    std::size_t max_fit_pairs = 10'000;
    std::size_t max_body_bytes = 1u << 20;
    std::string static_dir;

    /// Overrides from FRO_PORT, FRO_MAX_NODES, FRO_MAX_FIT_PAIRS, FRO_STATIC_DIR.
    static ServiceConfig from_environment() {
        ServiceConfig c;
        if (const char* v = std::getenv("FRO_PORT")) c.port = std::atoi(v);
        if (const char* v = std::getenv("FRO_MAX_NODES")) c.max_nodes = std::strtoull(v, nullptr, 10);
        if (const char* v = std::getenv("FRO_MAX_FIT_PAIRS")) c.max_fit_pairs = std::strtoull(v, nullptr, 10);
        if (const char* v = std::getenv("FRO_STATIC_DIR")) c.static_dir = v;
        return c;
    }
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct Metrics {
    std::atomic<std::uint64_t> requests{0};
    std::atomic<std::uint64_t> client_errors{0};
    std::atomic<std::uint64_t> server_errors{0};

    void record(int status) {
        ++requests;
        if (status >= 500) {
            ++server_errors;
        } else if (status >= 400) {
            ++client_errors;
        }
    }
};

namespace detail {

struct RequestError {
    int status;
    json body;
};

inline ApiResponse error_response(int status, const std::string& message, json extra = json::object()) {
    json body = {{"error", message}};
    for (auto& [k, v] : extra.items()) body[k] = v;
    return {status, "application/json", body.dump()};
}

inline ApiResponse json_response(const json& body) { return {200, "application/json", body.dump()}; }

struct SolveRequest {
    FroProblem problem;
    Method method = Method::pece;
};

// Accessor for string-keyed parameters, backed by a JSON object or a query map.
class Params {
public:
    explicit Params(const json& obj) : json_(&obj) {}
    explicit Params(const std::multimap<std::string, std::string>& query) : query_(&query) {}

    std::optional<double> number(const std::string& key) const {
        if (json_) {
            const auto it = json_->find(key);
            if (it == json_->end() || it->is_null()) return std::nullopt;
            if (!it->is_number()) throw RequestError{400, {{"error", "field '" + key + "' must be a number"}, {"field", key}}};
            return it->get<double>();
        }
        const auto it = query_->find(key);
        if (it == query_->end()) return std::nullopt;
        const std::string& text = it->second;
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size()) {
            throw RequestError{400, {{"error", "parameter '" + key + "' must be a number"}, {"field", key}}};
        }
        return v;
    }

    std::optional<std::string> text(const std::string& key) const {
        if (json_) {
            const auto it = json_->find(key);
            if (it == json_->end() || it->is_null()) return std::nullopt;
            if (!it->is_string()) throw RequestError{400, {{"error", "field '" + key + "' must be a string"}, {"field", key}}};
            return it->get<std::string>();
        }
        const auto it = query_->find(key);
        if (it == query_->end()) return std::nullopt;
        return it->second;
    }

private:
    const json* json_ = nullptr;
    const std::multimap<std::string, std::string>* query_ = nullptr;
};

inline SolveRequest parse_solve_request(const Params& params) {
    SolveRequest req;
    FroProblem& p = req.problem;
    p.alpha = params.number("alpha").value_or(defaults::alpha);
    p.relax_coeff = params.number("coeff").value_or(defaults::relax_coeff);
    p.step = params.number("dt").value_or(defaults::step);
    p.duration = params.number("duration").value_or(defaults::duration);
    p.y0 = params.number("y0").value_or(defaults::y0);
    p.y0_prime = params.number("yp0").value_or(defaults::y0_prime);
    const std::string forcing = params.text("forcing").value_or(defaults::forcing);
    try {
        p.forcing = Forcing::parse(forcing);
    } catch (const expr::ExprError& e) {
        throw RequestError{422, {{"error", std::string("forcing: ") + e.what()},
                                 {"field", "forcing"},
                                 {"position", e.position()}}};
    }
    const std::string method = params.text("method").value_or("pece");
    if (method == "pece") {
        req.method = Method::pece;
    } else if (method == "analytic") {
        req.method = Method::analytic;
    } else {
        throw RequestError{400, {{"error", "method must be \"pece\" or \"analytic\""}, {"field", "method"}}};
    }
    return req;
}

inline json parse_json_object(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw RequestError{400, {{"error", "request body is not valid JSON"}}};
    if (!j.is_object()) throw RequestError{400, {{"error", "request body must be a JSON object"}}};
    return j;
}

inline Trajectory run_solve(const SolveRequest& req, const ServiceConfig& cfg) {
    if (auto r = find_rejection(req.problem)) {
        throw RequestError{400, {{"error", r->message}, {"field", r->field}, {"kind", to_string(r->kind)}}};
    }
    const std::size_t nodes = *step_count(req.problem.step, req.problem.duration) + 1;
    if (nodes > cfg.max_nodes) {
        throw RequestError{413, {{"error", "grid of " + std::to_string(nodes) + " nodes exceeds the service cap of " +
                                               std::to_string(cfg.max_nodes)}}};
    }
    try {
        return req.method == Method::pece ? solve_pece(req.problem) : analytic_solution(req.problem);
    } catch (const ForcingError& e) {
        throw RequestError{422, {{"error", e.what()}, {"field", "forcing"}}};
    } catch (const DivergenceError& e) {
        throw RequestError{422, {{"error", e.what()}}};
    }
}

template <class F>
ApiResponse guarded(F&& f) {
    try {
        return f();
    } catch (const RequestError& e) {
        return {e.status, "application/json", e.body.dump()};
    } catch (const std::exception& e) {
        return error_response(500, std::string("internal error: ") + e.what());
    }
}

inline std::vector<double> parse_grid(const json& j, const std::string& key, std::vector<double> fallback) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        if (it->is_array()) {
            std::vector<double> out;
            for (const auto& v : *it) {
                if (!v.is_number()) throw std::invalid_argument("non-numeric entry");
                out.push_back(v.get<double>());
            }
            if (out.empty()) throw std::invalid_argument("empty grid");
            return out;
        }
        if (it->is_object()) {
            return data::linspace_step(it->at("min").get<double>(), it->at("max").get<double>(),
                                       it->at("step").get<double>());
        }
    } catch (const std::exception& e) {
        throw RequestError{400, {{"error", "invalid '" + key + "': " + e.what()}, {"field", key}}};
    }
    throw RequestError{400, {{"error", "'" + key + "' must be an array or {min, max, step}"}, {"field", key}}};
}

inline data::ExperimentalSeries parse_fit_series(const json& j) {
    try {
        if (const auto it = j.find("csv"); it != j.end()) {
            if (!it->is_string()) throw data::SeriesError("'csv' must be a string");
            return data::parse_series(it->get<std::string>(), "inline");
        }
        if (const auto it = j.find("points"); it != j.end()) {
            if (!it->is_array()) throw data::SeriesError("'points' must be an array of [time, value] pairs");
            data::ExperimentalSeries s;
            s.label = "inline";
            for (const auto& pt : *it) {
                if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                    throw data::SeriesError("each point must be a [time, value] pair of numbers");
                }
                s.points.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
            data::validate(s);
            return s;
        }
    } catch (const data::SeriesError& e) {
        throw RequestError{400, {{"error", std::string("series: ") + e.what()}, {"field", "series"}}};
    }
    throw RequestError{400, {{"error", "request needs a series as 'points' or 'csv'"}, {"field", "series"}}};
}

}  // namespace detail

/// Grids used when a fit request omits them.
inline std::vector<double> default_alpha_grid() { return data::linspace_step(0.1, 0.95, 0.05); }
inline std::vector<double> default_coeff_grid() { return data::linspace_step(0.05, 3.0, 0.05); }

inline ApiResponse handle_solve(const std::string& body, const ServiceConfig& cfg) {
    return detail::guarded([&] {
        const json j = detail::parse_json_object(body);
        const auto req = detail::parse_solve_request(detail::Params(j));
        return detail::json_response(data::trajectory_to_json(detail::run_solve(req, cfg)));
    });
}

inline ApiResponse handle_plot(const std::multimap<std::string, std::string>& query, const ServiceConfig& cfg) {
    return detail::guarded([&] {
        const auto req = detail::parse_solve_request(detail::Params(query));
        const Trajectory traj = detail::run_solve(req, cfg);
        svg::PlotStyle style;
        style.title = "alpha = " + fro::detail::num(req.problem.alpha) + ", A = " +
                      fro::detail::num(req.problem.relax_coeff) + ", f(t) = " + req.problem.forcing.text();
        return ApiResponse{200, "image/svg+xml", svg::render(traj, style)};
    });
}

inline ApiResponse handle_fit(const std::string& body, const ServiceConfig& cfg) {
    return detail::guarded([&] {
        const json j = detail::parse_json_object(body);
        const auto series = detail::parse_fit_series(j);
        const auto alphas = detail::parse_grid(j, "alpha_grid", default_alpha_grid());
        const auto coeffs = detail::parse_grid(j, "coeff_grid", default_coeff_grid());
        if (alphas.size() * coeffs.size() > cfg.max_fit_pairs) {
            throw detail::RequestError{413, {{"error", "fit grid of " + std::to_string(alphas.size() * coeffs.size()) +
                                                           " pairs exceeds the service cap of " +
                                                           std::to_string(cfg.max_fit_pairs)}}};
        }
        const detail::Params params(j);
        FroProblem templ;
        templ.step = params.number("dt").value_or(defaults::step);
        const double last = series.points.back().time;
        templ.duration = params.number("duration").value_or(
            templ.step > 0.0 ? std::max(1.0, std::ceil(last / templ.step - 1e-9)) * templ.step : last);
        templ.y0 = params.number("y0").value_or(series.points.front().value);
        templ.y0_prime = params.number("yp0").value_or(0.0);
        if (auto r = find_rejection(templ)) {
            throw detail::RequestError{400, {{"error", r->message}, {"field", r->field}, {"kind", to_string(r->kind)}}};
        }
        const std::size_t nodes = *step_count(templ.step, templ.duration) + 1;
        if (nodes > cfg.max_nodes) {
            throw detail::RequestError{413, {{"error", "grid of " + std::to_string(nodes) +
                                                           " nodes exceeds the service cap of " +
                                                           std::to_string(cfg.max_nodes)}}};
        }
        try {
            return detail::json_response(data::report_to_json(data::grid_fit(series, alphas, coeffs, templ)));
        } catch (const ValidationError& e) {
            throw detail::RequestError{400, {{"error", e.what()}, {"field", e.rejection().field}}};
        } catch (const data::OutOfRangeError& e) {
            throw detail::RequestError{400, {{"error", e.what()}}};
        } catch (const data::GridPointError& e) {
            throw detail::RequestError{422, {{"error", e.what()}}};
        }
    });
}

inline ApiResponse handle_health() {
    return detail::json_response({{"status", "ok"}, {"version", std::string(version)}});
}

inline ApiResponse handle_metrics(const Metrics& m) {
    return detail::json_response({{"requests", m.requests.load()},
                                  {"client_errors", m.client_errors.load()},
                                  {"server_errors", m.server_errors.load()}});
}

/// Register every route on `server`. `metrics` must outlive the server.
inline void install_routes(httplib::Server& server, const ServiceConfig& cfg, Metrics& metrics) {
    const auto reply = [&metrics](httplib::Response& res, const ApiResponse& r) {
        metrics.record(r.status);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server.set_payload_max_length(cfg.max_body_bytes);
    server.Post("/api/solve", [cfg, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, handle_solve(req.body, cfg));
    });
    server.Post("/api/fit", [cfg, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, handle_fit(req.body, cfg));
    });
    server.Get("/api/plot", [cfg, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, handle_plot(req.params, cfg));
    });
    server.Get("/api/health", [reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_health());
    });
    server.Get("/api/metrics", [&metrics, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_metrics(metrics));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty() && res.status >= 400) {
            const std::string msg = res.status == 413 ? "request body exceeds the size cap"
                                                      : std::string(httplib::status_message(res.status));
            res.set_content(json{{"error", msg}}.dump(), "application/json");
        }
    });
    if (!cfg.static_dir.empty() && std::filesystem::is_directory(cfg.static_dir)) {
        server.set_mount_point("/", cfg.static_dir);
    }
}

}  // namespace fro::service
