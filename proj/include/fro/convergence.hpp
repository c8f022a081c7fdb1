#pragma once

// Empirical convergence order of the PECE solver against a reference solution.

#include "fro/analytic.hpp"
#include "fro/problem.hpp"
#include "fro/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fro {

class ReferenceUnavailable : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact solution u(t) used as the error reference.
using ReferenceSolution = std::function<double(double)>;

struct ConvergenceLevel {
    double step;
    std::size_t nodes;
    double max_error;
    double end_error;  // |error| at t = T
};

struct ConvergenceStudy {
    std::vector<ConvergenceLevel> levels;
    double slope;           // least-squares slope of log(max error) against log(h)
    double endpoint_slope;  // same fit for the error at t = T
};

/// Expected order q = min(2, 1 + alpha).
inline double expected_order(double alpha) { return std::min(2.0, 1.0 + alpha); }

inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Solve `base` at each step in `steps` and fit the max-norm error decay.
///
/// Without an explicit `reference` the Mittag-Leffler closed form is used,
/// which is only exact for f == 0; other forcings need a caller-supplied
/// reference.
inline ConvergenceStudy empirical_order(const FroProblem& base, std::span<const double> steps,
                                        ReferenceSolution reference = {}) {
    if (steps.size() < 3) throw std::invalid_argument("empirical_order: needs at least 3 step sizes");
    const double ratio = steps[1] / steps[0];
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (std::fabs(steps[i] / steps[i - 1] - ratio) > 1e-9 * ratio) {
            throw std::invalid_argument("empirical_order: step sizes must form a geometric progression");
        }
    }
    if (!reference && !base.forcing.is_zero()) {
        throw ReferenceUnavailable("empirical_order: no closed-form reference for a non-zero forcing; "
                                   "supply a reference solution");
    }

    ConvergenceStudy study;
    std::vector<double> log_h, log_e, log_end;
    for (double h : steps) {
        FroProblem p = base;
        p.step = h;
        const Trajectory num = solve_pece(p);
        std::vector<double> exact;
        if (reference) {
            exact.resize(num.size());
            for (std::size_t n = 0; n < num.size(); ++n) exact[n] = reference(num.time(n));
        } else {
            exact = analytic_solution(p, num.grid).values;
        }
        double err = 0.0;
        for (std::size_t n = 0; n < num.size(); ++n) err = std::max(err, std::fabs(num.values[n] - exact[n]));
        const double end_err = std::fabs(num.values.back() - exact.back());
        study.levels.push_back({num.grid.step, num.size(), err, end_err});
        log_h.push_back(std::log(num.grid.step));
        log_e.push_back(std::log(err));
        log_end.push_back(std::log(end_err));
    }
    study.slope = least_squares_slope(log_h, log_e);
    study.endpoint_slope = least_squares_slope(log_h, log_end);
    return study;
}

}  // namespace fro
