#pragma once

// Command-line front-end. Subcommands:
//   solve     PECE trajectory (CSV or JSON)
//   analytic  Mittag-Leffler closed-form trajectory
//   ml        one value of E_{alpha,beta}(z)
//   fit       grid fit of (alpha, A) to a time,value CSV
//   converge  error table over a halving step ladder, with the fitted slope
//
// Exit status: 0 success, 2 usage or validation error, 1 I/O or internal error.

#include "fro/analytic.hpp"
#include "fro/convergence.hpp"
#include "fro/dataio.hpp"
#include "fro/mittag_leffler.hpp"
#include "fro/problem.hpp"
#include "fro/solver.hpp"
#include "fro/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fro::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

namespace detail {

struct ProblemFlags {
    double alpha = defaults::alpha;
    double coeff = defaults::relax_coeff;
    double dt = defaults::step;
    double duration = defaults::duration;
    double y0 = defaults::y0;
    double yp0 = defaults::y0_prime;
    std::string forcing = defaults::forcing;

    void add_to(CLI::App& app, bool with_forcing = true) {
        app.add_option("--alpha", alpha, "fractional order, within (0, 2]")->capture_default_str();
        app.add_option("--coeff", coeff, "relaxation coefficient A")->capture_default_str();
        app.add_option("--dt", dt, "time step h")->capture_default_str();
        app.add_option("--duration", duration, "total duration T")->capture_default_str();
        app.add_option("--y0", y0, "initial value u(0)")->capture_default_str();
        app.add_option("--yp0", yp0, "initial derivative u'(0), used when alpha > 1")->capture_default_str();
        if (with_forcing) app.add_option("--forcing", forcing, "forcing f(t), e.g. \"5*cos(t^2)*exp(-t)\"")->capture_default_str();
    }

    FroProblem problem() const {
        FroProblem p;
        p.alpha = alpha;
        p.relax_coeff = coeff;
        p.step = dt;
        p.duration = duration;
        p.y0 = y0;
        p.y0_prime = yp0;
        p.forcing = Forcing::parse(forcing);
        return p;
    }
};

struct OutputFlags {
    std::string out;
    std::string format = "csv";

    void add_to(CLI::App& app) {
        app.add_option("-o,--out", out, "write to this file instead of stdout");
        app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    }

    void write(const Trajectory& traj, std::ostream& stdout_) const {
        const auto fmt = format == "json" ? data::Format::json : data::Format::csv;
        if (out.empty()) {
            data::write_trajectory(traj, stdout_, fmt);
        } else {
            data::export_trajectory(traj, out, fmt);
        }
    }
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Run one invocation. `args` excludes the program name.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional relaxation-oscillation solver: D^alpha u + A u = f(t), Caputo, 0 < alpha <= 2", "fro"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    detail::ProblemFlags solve_flags;
    detail::OutputFlags solve_out;
    auto* solve = app.add_subcommand("solve", "solve with the predictor-corrector scheme");
    solve_flags.add_to(*solve);
    solve_out.add_to(*solve);

    detail::ProblemFlags analytic_flags;
    detail::OutputFlags analytic_out;
    auto* analytic = app.add_subcommand("analytic", "evaluate the Mittag-Leffler closed-form solution");
    analytic_flags.add_to(*analytic);
    analytic_out.add_to(*analytic);

    double ml_alpha = defaults::alpha;
    double ml_beta = 1.0;
    double ml_z = 0.0;
    auto* ml_cmd = app.add_subcommand("ml", "print E_{alpha,beta}(z) for z <= 0");
    ml_cmd->add_option("--alpha", ml_alpha, "first parameter, within (0, 2]")->capture_default_str();
    ml_cmd->add_option("--beta", ml_beta, "second parameter")->capture_default_str();
    ml_cmd->add_option("--z", ml_z, "argument, z <= 0")->required();

    std::string fit_data;
    double a_min = 0.1, a_max = 0.95, a_step = 0.05;
    double c_min = 0.05, c_max = 3.0, c_step = 0.05;
    double fit_dt = defaults::step;
    std::optional<double> fit_duration, fit_y0;
    std::string fit_out, fit_curve;
    unsigned fit_threads = 0;
    auto* fit = app.add_subcommand("fit", "grid-fit (alpha, A) of the f = 0 relaxation model to a data file");
    fit->add_option("--data", fit_data, "CSV file with header time,value")->required();
    fit->add_option("--alpha-min", a_min, "smallest alpha")->capture_default_str();
    fit->add_option("--alpha-max", a_max, "largest alpha")->capture_default_str();
    fit->add_option("--alpha-step", a_step, "alpha spacing")->capture_default_str();
    fit->add_option("--coeff-min", c_min, "smallest A")->capture_default_str();
    fit->add_option("--coeff-max", c_max, "largest A")->capture_default_str();
    fit->add_option("--coeff-step", c_step, "A spacing")->capture_default_str();
    fit->add_option("--dt", fit_dt, "time step h")->capture_default_str();
    fit->add_option("--duration", fit_duration, "model duration (default: last data time, rounded up to dt)");
    fit->add_option("--y0", fit_y0, "initial value (default: first data value)");
    fit->add_option("--threads", fit_threads, "worker threads, 0 = all cores")->capture_default_str();
    fit->add_option("-o,--out", fit_out, "write the JSON report to this file instead of stdout");
    fit->add_option("--curve", fit_curve, "also write the best-fit trajectory as CSV");

    detail::ProblemFlags conv_flags;
    int levels = 4;
    auto* converge = app.add_subcommand("converge", "max-norm error of the scheme on a halving step ladder (f = 0)");
    conv_flags.add_to(*converge, false);
    converge->add_option("--levels", levels, "number of step sizes, dt, dt/2, ...")->capture_default_str()->check(
        CLI::Range(3, 30));

    std::vector<const char*> argv{"fro"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
        return exit_usage;
    }

    try {
        if (solve->parsed()) {
            solve_out.write(solve_pece(solve_flags.problem()), out);
        } else if (analytic->parsed()) {
            analytic_out.write(analytic_solution(analytic_flags.problem()), out);
        } else if (ml_cmd->parsed()) {
            out << detail::fmt17(ml::mittag_leffler(ml_alpha, ml_beta, ml_z)) << '\n';
        } else if (fit->parsed()) {
            const auto series = data::load_series(fit_data);
            FroProblem templ;
            templ.step = fit_dt;
            const double last = series.points.back().time;
            templ.duration = fit_duration.value_or(std::max(1.0, std::ceil(last / fit_dt - 1e-9)) * fit_dt);
            templ.y0 = fit_y0.value_or(series.points.front().value);
            const auto report = data::grid_fit(series, data::linspace_step(a_min, a_max, a_step),
                                               data::linspace_step(c_min, c_max, c_step), templ, fit_threads);
            const std::string text = data::report_to_json(report).dump(2) + "\n";
            if (fit_out.empty()) {
                out << text;
            } else {
                std::ofstream f(fit_out, std::ios::binary | std::ios::trunc);
                if (!(f << text)) throw data::IoError("cannot write '" + fit_out + "'");
            }
            if (!fit_curve.empty()) data::export_trajectory(solve_pece(report.params), fit_curve, data::Format::csv);
        } else if (converge->parsed()) {
            const FroProblem base = conv_flags.problem();
            validate(base);
            std::vector<double> steps;
            for (int i = 0; i < levels; ++i) steps.push_back(base.step / static_cast<double>(1u << i));
            const auto study = empirical_order(base, steps);
            out << "h,nodes,max_error\n";
            for (const auto& l : study.levels) {
                out << detail::fmt17(l.step) << ',' << l.nodes << ',' << detail::fmt17(l.max_error) << '\n';
            }
            char buf[128];
            std::snprintf(buf, sizeof buf, "# slope %.4f (expected order %.4f)\n", study.slope,
                          expected_order(base.alpha));
            out << buf;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const expr::ExprError& e) {
        err << "error: forcing: " << e.what() << '\n';
        return exit_usage;
    } catch (const data::SeriesError& e) {
        err << "error: " << fit_data << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const data::IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_ok;
}

}  // namespace fro::cli
