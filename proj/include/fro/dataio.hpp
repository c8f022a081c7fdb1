#pragma once

// Experimental series I/O, trajectory export, model-vs-data residuals and
// the exhaustive (alpha, A) grid fit.

#include "fro/problem.hpp"
#include "fro/solver.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace fro::data {

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid series content. line() is 0 when not line-specific.
class SeriesError : public std::invalid_argument {
public:
    SeriesError(const std::string& what, std::size_t line = 0)
        : std::invalid_argument(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class OutOfRangeError : public std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Solve failure at one (alpha, A) grid point.
class GridPointError : public std::runtime_error {
public:
    GridPointError(double alpha, double coeff, const std::string& what)
        : std::runtime_error("grid point alpha = " + fro::detail::num(alpha) + ", coeff = " + fro::detail::num(coeff) + ": " +
                             what),
          alpha_(alpha), coeff_(coeff) {}
    double alpha() const noexcept { return alpha_; }
    double coeff() const noexcept { return coeff_; }

private:
    double alpha_, coeff_;
};

struct DataPoint {
    double time;
    double value;
};

struct ExperimentalSeries {
    std::vector<DataPoint> points;
    std::string label;
};

struct FitReport {
    double rmse = 0.0;
    double max_abs_error = 0.0;
    double relative_rmse = 0.0;
    FroProblem params;
    std::size_t evaluated = 1;  // grid pairs examined
    std::size_t diverged = 0;   // grid pairs whose solve blew up (scored as +inf)
};

/// Throws SeriesError unless times are non-negative and strictly increasing,
/// values finite and there are at least two points.
inline void validate(const ExperimentalSeries& s) {
    if (s.points.size() < 2) {
        throw SeriesError("series needs at least 2 points; got " + std::to_string(s.points.size()));
    }
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        if (!std::isfinite(p.time) || !std::isfinite(p.value)) {
            throw SeriesError("point " + std::to_string(i + 1) + " is not finite");
        }
        if (p.time < 0.0) throw SeriesError("point " + std::to_string(i + 1) + " has a negative time");
        if (i > 0 && !(p.time > s.points[i - 1].time)) {
            throw SeriesError("times must be strictly increasing (non-increasing time " + fro::detail::num(p.time) +
                              " at point " + std::to_string(i + 1) + ")");
        }
    }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_field(std::string_view field, std::size_t line, const char* name) {
    const std::string text(trim(field));
    if (text.empty()) throw SeriesError(std::string("empty ") + name + " field", line);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw SeriesError(std::string("cannot parse ") + name + " '" + text + "'", line);
    }
    if (used != text.size()) throw SeriesError(std::string("cannot parse ") + name + " '" + text + "'", line);
    return v;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parse "time,value" CSV text. Blank lines and '#' lines are skipped; LF or
/// CRLF line endings are accepted.
inline ExperimentalSeries parse_series(std::istream& in, std::string label = {}) {
    ExperimentalSeries s;
    s.label = std::move(label);
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (!header_seen) {
            if (comma == std::string_view::npos || detail::trim(line.substr(0, comma)) != "time" ||
                detail::trim(line.substr(comma + 1)) != "value") {
                throw SeriesError("expected header 'time,value'", line_no);
            }
            header_seen = true;
            continue;
        }
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw SeriesError("expected exactly two comma-separated fields", line_no);
        }
        const double t = detail::parse_field(line.substr(0, comma), line_no, "time");
        const double v = detail::parse_field(line.substr(comma + 1), line_no, "value");
        s.points.push_back({t, v});
    }
    if (!header_seen) throw SeriesError("missing header 'time,value'");
    validate(s);
    return s;
}

inline ExperimentalSeries parse_series(const std::string& text, std::string label = {}) {
    std::istringstream in(text);
    return parse_series(in, std::move(label));
}

inline ExperimentalSeries load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_series(in, path);
}

inline void write_csv(const Trajectory& traj, std::ostream& out) {
    out << "time,value\n";
    for (std::size_t n = 0; n < traj.size(); ++n) {
        out << detail::fmt17(traj.time(n)) << ',' << detail::fmt17(traj.values[n]) << '\n';
    }
}

inline nlohmann::ordered_json problem_to_json(const FroProblem& p) {
    return {{"alpha", p.alpha},  {"coeff", p.relax_coeff}, {"dt", p.step},
            {"duration", p.duration}, {"y0", p.y0},       {"yp0", p.y0_prime},
            {"forcing", p.forcing.text()}};
}

/// {meta: problem echo + method, t: [...], u: [...]}
inline nlohmann::ordered_json trajectory_to_json(const Trajectory& traj) {
    nlohmann::ordered_json meta = problem_to_json(traj.problem);
    meta["method"] = to_string(traj.method);
    meta["nodes"] = traj.size();
    meta["notices"] = traj.notices;
    nlohmann::ordered_json t = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < traj.size(); ++n) t.push_back(traj.time(n));
    return {{"meta", std::move(meta)}, {"t", std::move(t)}, {"u", traj.values}};
}

inline nlohmann::ordered_json report_to_json(const FitReport& r) {
    return {{"rmse", r.rmse},
            {"max_abs_error", r.max_abs_error},
            {"relative_rmse", r.relative_rmse},
            {"params", problem_to_json(r.params)},
            {"evaluated", r.evaluated},
            {"diverged", r.diverged}};
}

enum class Format { csv, json };

inline void write_trajectory(const Trajectory& traj, std::ostream& out, Format format) {
    if (format == Format::csv) {
        write_csv(traj, out);
    } else {
        out << trajectory_to_json(traj).dump(2) << '\n';
    }
}

inline void export_trajectory(const Trajectory& traj, const std::string& path, Format format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_trajectory(traj, out, format);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

/// Model value at time t by linear interpolation between trajectory nodes.
inline double interpolate(const Trajectory& traj, double t) {
    const double end = traj.grid.duration();
    if (t < 0.0 || t > end * (1.0 + 1e-12)) {
        throw OutOfRangeError("time " + fro::detail::num(t) + " lies outside the trajectory range [0, " +
                              fro::detail::num(end) + "]");
    }
    const double pos = t / traj.grid.step;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= traj.size() - 1) return traj.values.back();
    const double frac = pos - static_cast<double>(i);
    return traj.values[i] + frac * (traj.values[i + 1] - traj.values[i]);
}

inline FitReport residuals(const Trajectory& traj, const ExperimentalSeries& series) {
    if (series.points.empty()) throw SeriesError("series is empty");
    double sum_sq = 0.0;
    double data_sq = 0.0;
    double max_abs = 0.0;
    for (const auto& p : series.points) {
        const double r = interpolate(traj, p.time) - p.value;
        sum_sq += r * r;
        data_sq += p.value * p.value;
        max_abs = std::max(max_abs, std::fabs(r));
    }
    const auto n = static_cast<double>(series.points.size());
    FitReport rep;
    rep.rmse = std::sqrt(sum_sq / n);
    rep.max_abs_error = max_abs;
    const double data_rms = std::sqrt(data_sq / n);
    rep.relative_rmse = data_rms > 0.0 ? rep.rmse / data_rms : (rep.rmse == 0.0 ? 0.0 : INFINITY);
    rep.params = traj.problem;
    return rep;
}

/// Evenly spaced grid lo, lo + step, ..., hi (hi included when reached within rounding).
inline std::vector<double> linspace_step(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("grid range needs lo <= hi and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

/// Exhaustive search over alpha_grid x coeff_grid with solve_pece.
///
/// Returns the report with the smallest rmse; ties go to the smaller alpha,
/// then the smaller A. The explicit predictor is only conditionally stable,
/// so pairs with small alpha and large A can diverge; those score +inf and are
/// counted in `diverged`. Any other solve failure is rethrown tagged with its
/// grid point. Grid points are evaluated on up to `threads` workers
/// (0 = hardware concurrency) and reduced in grid order.
inline FitReport grid_fit(const ExperimentalSeries& series, const std::vector<double>& alpha_grid,
                          const std::vector<double>& coeff_grid, const FroProblem& templ, unsigned threads = 0) {
    validate(series);
    if (alpha_grid.empty() || coeff_grid.empty()) throw std::invalid_argument("grid_fit: empty parameter grid");
    for (double a : alpha_grid) {
        FroProblem p = templ;
        p.alpha = a;
        if (auto r = find_rejection(p)) throw ValidationError(std::move(*r));
    }
    const TimeGrid grid = make_grid(templ);
    if (series.points.back().time > grid.duration() * (1.0 + 1e-12)) {
        throw OutOfRangeError("data time " + fro::detail::num(series.points.back().time) +
                              " lies beyond the model duration " + fro::detail::num(grid.duration()));
    }

    const std::size_t total = alpha_grid.size() * coeff_grid.size();
    std::vector<FitReport> reports(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            FroProblem p = templ;
            p.alpha = alpha_grid[i / coeff_grid.size()];
            p.relax_coeff = coeff_grid[i % coeff_grid.size()];
            try {
                reports[i] = residuals(solve_pece(p), series);
            } catch (const DivergenceError&) {
                reports[i].params = p;
                reports[i].rmse = reports[i].max_abs_error = reports[i].relative_rmse = INFINITY;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    }

    std::size_t best = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (errors[i]) {
            const double a = alpha_grid[i / coeff_grid.size()];
            const double c = coeff_grid[i % coeff_grid.size()];
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw GridPointError(a, c, e.what());
            }
        }
        const auto& r = reports[i];
        const auto& b = reports[best];
        if (r.rmse < b.rmse ||
            (r.rmse == b.rmse && (r.params.alpha < b.params.alpha ||
                                  (r.params.alpha == b.params.alpha && r.params.relax_coeff < b.params.relax_coeff)))) {
            best = i;
        }
    }
    FitReport out = reports[best];
    if (!std::isfinite(out.rmse)) throw GridPointError(out.params.alpha, out.params.relax_coeff, "every grid point diverged");
    out.evaluated = total;
    out.diverged = static_cast<std::size_t>(
        std::count_if(reports.begin(), reports.end(), [](const FitReport& r) { return !std::isfinite(r.rmse); }));
    return out;
}

}  // namespace fro::data
