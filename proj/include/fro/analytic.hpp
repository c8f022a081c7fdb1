#pragma once

// Closed-form solutions through Mittag-Leffler functions:
//   relaxation  (0 < a <= 1):  u(t) = y0 E_{a,1}(-A t^a) + (G * f)(t)
//   oscillation (1 < a <= 2):  u(t) = y0 E_{a,1}(-A t^a) + y0' t E_{a,2}(-A t^a) + (G * f)(t)
// with Green function G(t) = t^{a-1} E_{a,a}(-A t^a).
//
// The convolution is done by product integration: f is linear on each grid
// panel and the kernel moments are integrated by 32-point Gauss-Legendre.
// On the panel touching the kernel origin the substitution s = v^{1/a}
// absorbs the t^{a-1} singularity.

#include "fro/mittag_leffler.hpp"
#include "fro/problem.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fro {

struct GreenFunction {
    double alpha;
    double relax_coeff;

    double operator()(double t) const {
        if (!(t > 0.0)) throw std::domain_error("green: requires t > 0");
        return std::pow(t, alpha - 1.0) * ml::mittag_leffler(alpha, alpha, -relax_coeff * std::pow(t, alpha));
    }
};

inline double green(const GreenFunction& gf, double t) { return gf(t); }

namespace detail {

struct GaussLegendre32 {
    std::array<double, 32> x{};  // nodes on [0, 1]
    std::array<double, 32> w{};

    GaussLegendre32() {
        constexpr int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = 0.0;
                for (int k = 1; k <= n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
            x[i] = 0.5 * (1.0 - z);
            x[n - 1 - i] = 0.5 * (1.0 + z);
            w[i] = w[n - 1 - i] = 0.5 * weight;
        }
    }

    static const GaussLegendre32& get() {
        static const GaussLegendre32 rule;
        return rule;
    }
};

// Kernel moments over panel m of a uniform grid:
//   near[m] = h int_0^1 G(h(m+u)) u du,  far[m] = h int_0^1 G(h(m+u)) (1-u) du.
struct KernelMoments {
    std::vector<double> near;
    std::vector<double> far;
};

inline KernelMoments kernel_moments(const GreenFunction& g, double h, std::size_t panels) {
    const auto& gl = GaussLegendre32::get();
    KernelMoments km{std::vector<double>(panels, 0.0), std::vector<double>(panels, 0.0)};
    for (std::size_t m = 0; m < panels; ++m) {
        double s_near = 0.0;
        double s_far = 0.0;
        if (m == 0) {
            // The first panel holds the t^(a-1) singularity; its moments have
            // closed forms:  int_0^h G = h^a E_{a,a+1}(-x),
            // int_0^h (h-s) G(s) ds / h = h^a E_{a,a+2}(-x),  x = A h^a.
            const double ha = std::pow(h, g.alpha);
            const double x = -g.relax_coeff * ha;
            const double full = ha * ml::mittag_leffler(g.alpha, g.alpha + 1.0, x);
            km.far[0] = ha * ml::mittag_leffler(g.alpha, g.alpha + 2.0, x);
            km.near[0] = full - km.far[0];
            continue;
        }
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double u = gl.x[q];
            const double kern = g(h * (static_cast<double>(m) + u));
            s_near += gl.w[q] * kern * u;
            s_far += gl.w[q] * kern * (1.0 - u);
        }
        km.near[m] = h * s_near;
        km.far[m] = h * s_far;
    }
    return km;
}

}  // namespace detail

/// (G * f)(t_n) on every node of `grid`, f piecewise linear between nodes.
inline std::vector<double> forced_response(const GreenFunction& g, const Forcing& f, const TimeGrid& grid) {
    std::vector<double> out(grid.n_points, 0.0);
    if (f.is_zero() || grid.n_points < 2) return out;
    const std::size_t n_steps = grid.steps();
    std::vector<double> fv(grid.n_points);
    for (std::size_t n = 0; n < grid.n_points; ++n) fv[n] = f(grid.time(n));
    const auto km = detail::kernel_moments(g, grid.step, n_steps);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t m = n - 1 - j;
            s += fv[j] * km.near[m] + fv[j + 1] * km.far[m];
        }
        out[n] = s;
    }
    return out;
}

namespace detail {

inline Trajectory analytic_trajectory(const FroProblem& p, const TimeGrid& grid, bool with_velocity) {
    validate(p);
    if (grid.n_points < 1 || !(grid.step > 0.0)) throw std::invalid_argument("analytic: empty or invalid grid");
    Trajectory out;
    out.grid = grid;
    out.method = Method::analytic;
    out.problem = p;
    out.values = forced_response(GreenFunction{p.alpha, p.relax_coeff}, p.forcing, grid);
    if (!with_velocity && p.y0_prime != 0.0) {
        out.notices.emplace_back("y0_prime is ignored for alpha <= 1 (only u(0) is an initial condition)");
    }
    for (std::size_t n = 0; n < grid.n_points; ++n) {
        const double t = grid.time(n);
        const double z = -p.relax_coeff * std::pow(t, p.alpha);
        double u = p.y0 == 0.0 ? 0.0 : p.y0 * ml::mittag_leffler(p.alpha, 1.0, z);
        if (with_velocity && p.y0_prime != 0.0) u += p.y0_prime * t * ml::mittag_leffler(p.alpha, 2.0, z);
        out.values[n] += u;
    }
    return out;
}

}  // namespace detail

/// Relaxation regime, 0 < alpha <= 1.
inline Trajectory relaxation_solution(const FroProblem& p, const TimeGrid& grid) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw std::invalid_argument("relaxation_solution: requires 0 < alpha <= 1");
    }
    return detail::analytic_trajectory(p, grid, false);
}

/// Oscillation regime, 1 < alpha <= 2.
inline Trajectory oscillation_solution(const FroProblem& p, const TimeGrid& grid) {
    if (!(p.alpha > 1.0 && p.alpha <= 2.0)) {
        throw std::invalid_argument("oscillation_solution: requires 1 < alpha <= 2");
    }
    return detail::analytic_trajectory(p, grid, true);
}

/// Picks the relaxation or oscillation form from alpha.
inline Trajectory analytic_solution(const FroProblem& p, const TimeGrid& grid) {
    validate(p);
    return p.alpha <= 1.0 ? relaxation_solution(p, grid) : oscillation_solution(p, grid);
}

inline Trajectory analytic_solution(const FroProblem& p) { return analytic_solution(p, make_grid(p)); }

}  // namespace fro
