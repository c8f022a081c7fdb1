#pragma once

// Fractional Adams predictor-corrector (PECE) for
//     D^alpha y(t) = f(t) - A y(t),   y^(k)(0) = y0^(k),  k < ceil(alpha).
//
// The problem is solved in its Volterra form
//     y(t) = sum_k y0^(k) t^k / k!  +  1/Gamma(alpha) int_0^t (t - s)^(alpha-1) F(s) ds
// with F(s) = f(s) - A y(s). Each step predicts with product-rectangle
// weights b_{j,k+1}, then corrects once with product-trapezoid weights
// a_{j,k+1}. Max-norm error is O(h^q), q = min(2, 1 + alpha) for smooth data.

#include "fro/mittag_leffler.hpp"
#include "fro/problem.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fro {

/// Raised when |y| grows beyond 1e300.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(double t) : std::runtime_error(message(t)), t_(t) {}
    double time() const noexcept { return t_; }

private:
    static std::string message(double t) {
        std::ostringstream os;
        os.precision(10);
        os << "solution diverged (|u| > 1e300) at t = " << t;
        return os.str();
    }
    double t_;
};

inline constexpr double divergence_bound = 1e300;

/// Predictor weight b_{j,k+1} = h^a / a * ((k+1-j)^a - (k-j)^a),  0 <= j <= k.
inline double predictor_weight(std::size_t j, std::size_t k, double alpha, double h) {
    if (j > k) throw std::out_of_range("predictor_weight: requires j <= k");
    const auto m = static_cast<double>(k - j);
    return std::pow(h, alpha) / alpha * (std::pow(m + 1.0, alpha) - std::pow(m, alpha));
}

/// Corrector weight a_{j,k+1},  0 <= j <= k + 1.
inline double corrector_weight(std::size_t j, std::size_t k, double alpha, double h) {
    if (j > k + 1) throw std::out_of_range("corrector_weight: requires j <= k + 1");
    const double scale = std::pow(h, alpha) / (alpha * (alpha + 1.0));
    const auto kd = static_cast<double>(k);
    if (j == 0) return scale * (std::pow(kd, alpha + 1.0) - (kd - alpha) * std::pow(kd + 1.0, alpha));
    if (j == k + 1) return scale;
    const auto m = static_cast<double>(k - j);
    return scale * (std::pow(m + 2.0, alpha + 1.0) + std::pow(m, alpha + 1.0) - 2.0 * std::pow(m + 1.0, alpha + 1.0));
}

/// Right-hand side f(t) - A y.
inline double rhs(const FroProblem& p, double t, double y) { return p.forcing(t) - p.relax_coeff * y; }

namespace detail {

// Weight tables for one (alpha, N): the history weights depend only on k - j.
// Differences of large powers are formed in long double.
struct WeightTable {
    std::vector<double> pred;  // pred[m]: (m+1)^a - m^a
    std::vector<double> corr;  // corr[m]: (m+2)^(a+1) + m^(a+1) - 2 (m+1)^(a+1)
    std::vector<double> first; // first[k]: k^(a+1) - (k-a)(k+1)^a

    WeightTable(double alpha, std::size_t n) : pred(n + 1), corr(n + 1), first(n + 1) {
        const long double a = alpha;
        std::vector<long double> pw(n + 3), pw1(n + 3);
        for (std::size_t m = 0; m < n + 3; ++m) {
            const long double md = static_cast<long double>(m);
            pw[m] = m == 0 ? 0.0L : std::pow(md, a);
            pw1[m] = m == 0 ? 0.0L : std::pow(md, a + 1.0L);
        }
        for (std::size_t m = 0; m <= n; ++m) {
            pred[m] = static_cast<double>(pw[m + 1] - pw[m]);
            corr[m] = static_cast<double>(pw1[m + 2] + pw1[m] - 2.0L * pw1[m + 1]);
            first[m] = static_cast<double>(pw1[m] - (static_cast<long double>(m) - a) * pw[m + 1]);
        }
    }
};

}  // namespace detail

/// Solve the problem on its uniform grid with one predictor and one corrector
/// pass per step. Throws ValidationError, ForcingError or DivergenceError.
inline Trajectory solve_pece(const FroProblem& p) {
    const TimeGrid grid = make_grid(p);
    const std::size_t n_steps = grid.steps();
    const double h = grid.step;
    const double alpha = p.alpha;
    const double coeff = p.relax_coeff;
    const bool second_order_ic = alpha > 1.0;

    Trajectory out;
    out.grid = grid;
    out.method = Method::pece;
    out.problem = p;
    if (!second_order_ic && p.y0_prime != 0.0) {
        out.notices.emplace_back("y0_prime is ignored for alpha <= 1 (only u(0) is an initial condition)");
    }
    if (n_steps > cost_warning_steps) {
        out.notices.emplace_back("large step count " + std::to_string(n_steps) + ": cost grows as N^2");
    }

    const detail::WeightTable w(alpha, n_steps);
    const double inv_gamma = 1.0 / ml::gamma(alpha);
    const double h_alpha = std::pow(h, alpha);
    const double pred_scale = h_alpha / alpha * inv_gamma;
    const double corr_scale = h_alpha / (alpha * (alpha + 1.0)) * inv_gamma;

    std::vector<double>& y = out.values;
    y.assign(grid.n_points, 0.0);
    std::vector<double> history(grid.n_points, 0.0);  // F_j = f(t_j) - A y_j
    y[0] = p.y0;
    history[0] = rhs(p, 0.0, p.y0);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next = grid.time(k + 1);
        const double head = second_order_ic ? p.y0 + t_next * p.y0_prime : p.y0;

        double pred_sum = 0.0;
        for (std::size_t j = 0; j <= k; ++j) pred_sum += w.pred[k - j] * history[j];
        const double y_pred = head + pred_scale * pred_sum;

        double corr_sum = w.first[k] * history[0];
        for (std::size_t j = 1; j <= k; ++j) corr_sum += w.corr[k - j] * history[j];
        const double f_next = p.forcing(t_next);
        const double y_next = head + corr_scale * (corr_sum + (f_next - coeff * y_pred));

        if (!(std::fabs(y_next) <= divergence_bound)) throw DivergenceError(t_next);
        y[k + 1] = y_next;
        history[k + 1] = f_next - coeff * y_next;
    }
    return out;
}

}  // namespace fro
