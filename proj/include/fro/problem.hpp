#pragma once

// Problem description for  D^alpha u(t) + A u(t) = f(t)  (Caputo, 0 < alpha <= 2)
// together with its uniform time grid and solution container.

#include "fro/expr.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fro {

/// Defaults shown in the toolbox parameter panel.
namespace defaults {
inline constexpr double alpha = 0.5;
inline constexpr double relax_coeff = 1.0;
inline constexpr double step = 0.1;
inline constexpr double duration = 10.0;
inline constexpr double y0 = 0.0;
inline constexpr double y0_prime = 0.0;
inline constexpr const char* forcing = "0";
}  // namespace defaults

/// Largest accepted number of time steps (the history sums cost O(N^2)).
inline constexpr std::size_t max_steps = 1'000'000;
/// Above this many steps a cost notice is attached to the result.
inline constexpr std::size_t cost_warning_steps = 100'000;

/// Raised when the forcing cannot be evaluated at some time.
class ForcingError : public std::runtime_error {
public:
    ForcingError(const std::string& what, double t)
        : std::runtime_error("forcing f(t) failed at t = " + format_time(t) + ": " + what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    static std::string format_time(double t) {
        std::ostringstream os;
        os.precision(10);
        os << t;
        return os.str();
    }
    double t_;
};

/// The forcing term f(t): a parsed expression or an arbitrary callable.
class Forcing {
public:
    using Function = std::function<double(double)>;

    Forcing() : Forcing(expr::Expression{}) {}
    explicit Forcing(expr::Expression e) : expr_(std::move(e)), text_(expr_->source()) {}
    Forcing(Function fn, std::string label) : fn_(std::move(fn)), text_(std::move(label)) {}

    static Forcing zero() { return Forcing(); }
    static Forcing parse(const std::string& text) { return Forcing(expr::parse(text)); }

    double operator()(double t) const {
        try {
            return expr_ ? expr::evaluate(*expr_, t) : fn_(t);
        } catch (const expr::DomainError& e) {
            throw ForcingError(e.what(), t);
        }
    }

    /// True only when f is known to vanish identically.
    bool is_zero() const { return expr_ && expr_->is_constant() && expr::evaluate(*expr_, 0.0) == 0.0; }
    bool is_expression() const { return expr_.has_value(); }
    const std::string& text() const { return text_; }

private:
    std::optional<expr::Expression> expr_;
    Function fn_;
    std::string text_;
};

struct FroProblem {
    double alpha = defaults::alpha;
    double relax_coeff = defaults::relax_coeff;  // A
    Forcing forcing;
    double y0 = defaults::y0;
    double y0_prime = defaults::y0_prime;  // used only when alpha > 1
    double step = defaults::step;          // h
    double duration = defaults::duration;  // T
};

enum class RejectionKind {
    order_out_of_range,
    non_positive_step,
    non_positive_duration,
    non_integer_step_count,
    non_finite_parameter,
    too_many_steps,
};

inline const char* to_string(RejectionKind k) {
    switch (k) {
    case RejectionKind::order_out_of_range: return "order-out-of-range";
    case RejectionKind::non_positive_step: return "non-positive-step";
    case RejectionKind::non_positive_duration: return "non-positive-duration";
    case RejectionKind::non_integer_step_count: return "non-integer-step-count";
    case RejectionKind::non_finite_parameter: return "non-finite-parameter";
    case RejectionKind::too_many_steps: return "too-many-steps";
    }
    return "unknown";
}

struct Rejection {
    RejectionKind kind;
    std::string field;
    std::string message;
};

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(Rejection r) : std::invalid_argument(r.message), rejection_(std::move(r)) {}
    const Rejection& rejection() const noexcept { return rejection_; }
    RejectionKind kind() const noexcept { return rejection_.kind; }

private:
    Rejection rejection_;
};

namespace detail {
inline std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}
}  // namespace detail

/// Number of steps N = T/h, or nullopt when T/h is not an integer
/// within 1e-9 relative.
inline std::optional<std::size_t> step_count(double step, double duration) {
    const double ratio = duration / step;
    const double n = std::round(ratio);
    if (n < 1.0 || std::fabs(ratio - n) > 1e-9 * ratio) return std::nullopt;
    if (n > static_cast<double>(max_steps) * 10.0) return static_cast<std::size_t>(max_steps) * 10;
    return static_cast<std::size_t>(n);
}

/// First violated invariant of `p`, if any.
inline std::optional<Rejection> find_rejection(const FroProblem& p) {
    using detail::num;
    const struct {
        const char* name;
        double value;
    } finite_fields[] = {{"alpha", p.alpha},     {"coeff", p.relax_coeff}, {"y0", p.y0},
                         {"yp0", p.y0_prime},    {"dt", p.step},           {"duration", p.duration}};
    for (const auto& f : finite_fields) {
        if (!std::isfinite(f.value)) {
            return Rejection{RejectionKind::non_finite_parameter, f.name,
                             std::string(f.name) + " must be a finite number; got " + num(f.value)};
        }
    }
    if (!(p.alpha > 0.0 && p.alpha <= 2.0)) {
        return Rejection{RejectionKind::order_out_of_range, "alpha",
                         "fractional order alpha must lie within (0, 2]; got " + num(p.alpha)};
    }
    if (!(p.step > 0.0)) {
        return Rejection{RejectionKind::non_positive_step, "dt", "time step dt must be positive; got " + num(p.step)};
    }
    if (!(p.duration > 0.0)) {
        return Rejection{RejectionKind::non_positive_duration, "duration",
                         "total duration must be positive; got " + num(p.duration)};
    }
    const auto n = step_count(p.step, p.duration);
    if (!n) {
        return Rejection{RejectionKind::non_integer_step_count, "dt",
                         "duration / dt must be a whole number of steps; got " + num(p.duration) + " / " +
                             num(p.step) + " = " + num(p.duration / p.step)};
    }
    if (*n > max_steps) {
        return Rejection{RejectionKind::too_many_steps, "dt",
                         "duration / dt exceeds the limit of " + std::to_string(max_steps) + " steps"};
    }
    return std::nullopt;
}

inline void validate(const FroProblem& p) {
    if (auto r = find_rejection(p)) throw ValidationError(std::move(*r));
}

/// Uniform grid t_n = n h, n = 0..N.
struct TimeGrid {
    std::size_t n_points = 0;
    double step = 0.0;

    double time(std::size_t n) const { return static_cast<double>(n) * step; }
    std::size_t steps() const { return n_points - 1; }
    double duration() const { return time(steps()); }
    std::vector<double> times() const {
        std::vector<double> t(n_points);
        for (std::size_t n = 0; n < n_points; ++n) t[n] = time(n);
        return t;
    }
};

/// Grid for a validated problem; h is taken as T/N.
inline TimeGrid make_grid(const FroProblem& p) {
    validate(p);
    const std::size_t n = *step_count(p.step, p.duration);
    return TimeGrid{n + 1, p.duration / static_cast<double>(n)};
}

enum class Method { pece, analytic };

inline const char* to_string(Method m) { return m == Method::pece ? "pece" : "analytic"; }

struct Trajectory {
    TimeGrid grid;
    std::vector<double> values;
    Method method = Method::pece;
    FroProblem problem;
    std::vector<std::string> notices;

    double time(std::size_t n) const { return grid.time(n); }
    std::size_t size() const { return values.size(); }
};

}  // namespace fro
