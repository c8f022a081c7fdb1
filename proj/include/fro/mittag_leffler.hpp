#pragma once

// Gamma function and the two-parameter Mittag-Leffler function E_{a,b}(z)
// on the non-positive real axis.
//
// E_{a,b}(z) is evaluated by numerical inversion of its Laplace transform
//     L[t^{b-1} E_{a,b}(t^a z)](s) = s^{a-b} / (s^a - z)
// along an optimal parabolic contour (Garrappa, SIAM J. Numer. Anal. 53,
// 2015), with the poles s* = |z|^{1/a} exp(i(pi + 2k pi)/a) that lie to the
// right of the contour added back as residues. Unlike a series/asymptotic
// split this stays accurate across the whole (a, z) box, including the
// oscillatory pole contributions that appear for 1 < a <= 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fro::ml {

class PoleError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Gamma function. Throws PoleError at 0, -1, -2, ...
inline double gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        throw PoleError("gamma: pole at x = " + std::to_string(x));
    }
    return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

namespace detail {

struct ContourParams {
    double mu = 0.0;
    double h = 0.0;
    double n = std::numeric_limits<double>::infinity();
};

inline constexpr double log_eps_machine = -36.043653389117154;  // log(2^-52)

// Contour parameters when the integration region is bounded by two
// singularities with real parts phi_j < phi_j1.
inline ContourParams optimal_param_bounded(double t, double phi_j, double phi_j1, double p, double q,
                                           double log_epsilon) {
    constexpr double fac = 1.01;
    const double f_max = std::exp(log_epsilon - log_eps_machine);

    const double sq_phi_j = std::sqrt(phi_j);
    const double threshold = 2.0 * std::sqrt((log_epsilon - log_eps_machine) / t);
    const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);

    double sq_phibar_j = 0.0;
    double sq_phibar_j1 = 0.0;
    double f_bar = 1.0;
    bool admissible = false;

    if (p < 1.0e-14 && q < 1.0e-14) {
        sq_phibar_j = sq_phi_j;
        sq_phibar_j1 = sq_phi_j1;
        admissible = true;
    } else if (p < 1.0e-14) {
        sq_phibar_j = sq_phi_j;
        const double f_min = sq_phi_j > 0.0 ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), q) : fac;
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fq = std::pow(f_bar, -1.0 / q);
            sq_phibar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
            admissible = true;
        }
    } else if (q < 1.0e-14) {
        sq_phibar_j1 = sq_phi_j1;
        const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), p);
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / p);
            sq_phibar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
            admissible = true;
        }
    } else {
        double f_min = fac * (sq_phi_j + sq_phi_j1) / std::pow(sq_phi_j1 - sq_phi_j, std::max(p, q));
        if (f_min < f_max) {
            f_min = std::max(f_min, 1.5);
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / p);
            const double fq = std::pow(f_bar, -1.0 / q);
            const double w = -phi_j1 * t / log_epsilon;
            const double den = 2.0 + w - (1.0 + w) * fp + fq;
            sq_phibar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
            sq_phibar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
            admissible = true;
        }
    }

    if (!admissible) return {};

    const double le = log_epsilon - std::log(f_bar);
    const double w = -sq_phibar_j1 * sq_phibar_j1 * t / le;
    ContourParams out;
    const double m = ((1.0 + w) * sq_phibar_j + sq_phibar_j1) / (2.0 + w);
    out.mu = m * m;
    out.h = -2.0 * std::numbers::pi / le * (sq_phibar_j1 - sq_phibar_j) /
            ((1.0 + w) * sq_phibar_j + sq_phibar_j1);
    out.n = std::ceil(std::sqrt(1.0 - le / t / out.mu) / out.h);
    return out;
}

// Contour parameters when the region is unbounded on the right.
inline ContourParams optimal_param_unbounded(double t, double phi_j, double p, double log_epsilon) {
    const double sq_phi_j = std::sqrt(phi_j);
    double phibar_j = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
    double sq_phibar_j = std::sqrt(phibar_j);

    constexpr double f_min = 1.0;
    constexpr double f_max = 10.0;
    constexpr double f_tar = 5.0;

    double n = 0.0;
    double a = 0.0;
    double sq_mu = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double phi_t = phibar_j * t;
        const double log_eps_phi_t = log_epsilon / phi_t;
        n = std::ceil(phi_t / std::numbers::pi * (1.0 - 3.0 * log_eps_phi_t / 2.0 + std::sqrt(1.0 - 2.0 * log_eps_phi_t)));
        a = std::numbers::pi * n / phi_t;
        sq_mu = sq_phibar_j * std::fabs(4.0 - a) / std::fabs(7.0 - std::sqrt(1.0 + 12.0 * a));
        const double fbar = std::pow((sq_phibar_j - sq_phi_j) / sq_mu, -p);
        if (p < 1.0e-14 || (f_min < fbar && fbar < f_max)) break;
        sq_phibar_j = std::pow(f_tar, -1.0 / p) * sq_mu + sq_phi_j;
        phibar_j = sq_phibar_j * sq_phibar_j;
    }

    ContourParams out;
    out.mu = sq_mu * sq_mu;
    out.h = (-3.0 * a - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n;
    out.n = n;

    // Keep round-off under control for large mu.
    const double threshold = (log_epsilon - log_eps_machine) / t;
    if (out.mu > threshold) {
        const double qq = std::fabs(p) < 1.0e-14 ? 0.0 : std::pow(f_tar, -1.0 / p) * std::sqrt(out.mu);
        const double phibar = (qq + sq_phi_j) * (qq + sq_phi_j);
        if (phibar < threshold) {
            const double w = std::sqrt(log_eps_machine / (log_eps_machine - log_epsilon));
            const double u = std::sqrt(-phibar * t / log_eps_machine);
            out.mu = threshold;
            out.n = std::ceil(w * log_epsilon / 2.0 / std::numbers::pi / (u * w - 1.0));
            out.h = std::sqrt(log_eps_machine / (log_eps_machine - log_epsilon)) / out.n;
        } else {
            out.n = std::numeric_limits<double>::infinity();
            out.h = 0.0;
        }
    }
    return out;
}

// Inverse Laplace transform of s^{a-b}/(s^a - lambda) at t = 1.
inline double invert_laplace(double lambda, double alpha, double beta, double log_epsilon) {
    using cd = std::complex<double>;
    constexpr double pi = std::numbers::pi;

    // Poles s^a = lambda on the principal sheet.
    const double theta = std::arg(cd(lambda, 0.0));
    const int kmin = static_cast<int>(std::ceil(-alpha / 2.0 - theta / 2.0 / pi));
    const int kmax = static_cast<int>(std::floor(alpha / 2.0 - theta / 2.0 / pi));
    struct Singularity {
        cd s;
        double phi;
    };
    std::vector<Singularity> poles;
    const double r = std::pow(std::fabs(lambda), 1.0 / alpha);
    for (int k = kmin; k <= kmax; ++k) {
        const cd s = std::polar(r, (theta + 2.0 * k * pi) / alpha);
        const double phi = (s.real() + std::abs(s)) / 2.0;
        if (phi > 1.0e-15) poles.push_back({s, phi});
    }
    std::stable_sort(poles.begin(), poles.end(),
                     [](const Singularity& x, const Singularity& y) { return x.phi < y.phi; });

    // Origin first, then poles; phi list closed by +inf.
    std::vector<cd> s_star{cd(0.0, 0.0)};
    std::vector<double> phi{0.0};
    for (const auto& pl : poles) {
        s_star.push_back(pl.s);
        phi.push_back(pl.phi);
    }
    const std::size_t j1_count = s_star.size();
    std::vector<double> p(j1_count, 1.0);
    std::vector<double> q(j1_count, 1.0);
    p[0] = std::max(0.0, -2.0 * (alpha - beta + 1.0));
    q.back() = std::numeric_limits<double>::infinity();
    phi.push_back(std::numeric_limits<double>::infinity());

    double le = log_epsilon;
    std::vector<ContourParams> params;
    std::size_t best = 0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<std::size_t> regions;
        for (std::size_t j = 0; j < j1_count; ++j) {
            if (phi[j] < (le - log_eps_machine) && phi[j] < phi[j + 1]) regions.push_back(j);
        }
        params.assign(j1_count, ContourParams{});
        for (std::size_t j : regions) {
            params[j] = j + 1 < j1_count ? optimal_param_bounded(1.0, phi[j], phi[j + 1], p[j], q[j], le)
                                         : optimal_param_unbounded(1.0, phi[j], p[j], le);
        }
        best = 0;
        for (std::size_t j = 1; j < j1_count; ++j) {
            if (params[j].n < params[best].n) best = j;
        }
        if (params[best].n <= 200.0) break;
        le += std::log(10.0);
    }
    const ContourParams& cp = params[best];
    if (!std::isfinite(cp.n)) {
        throw std::runtime_error("mittag_leffler: no admissible integration contour");
    }

    const long n = static_cast<long>(cp.n);
    const double ab = alpha - beta;
    cd sum(0.0, 0.0);
    for (long k = -n; k <= n; ++k) {
        const double u = cp.h * static_cast<double>(k);
        const cd z = cp.mu * (cd(1.0, u) * cd(1.0, u));
        const cd zd(-2.0 * cp.mu * u, 2.0 * cp.mu);
        const cd log_z = std::log(z);
        const cd f = std::exp(ab * log_z) / (std::exp(alpha * log_z) - lambda) * zd;
        sum += std::exp(z) * f;
    }
    const cd integral = cp.h * sum / (2.0 * pi * cd(0.0, 1.0));

    cd residues(0.0, 0.0);
    for (std::size_t j = best + 1; j < j1_count; ++j) {
        residues += (1.0 / alpha) * std::pow(s_star[j], 1.0 - beta) * std::exp(s_star[j]);
    }
    return (integral + residues).real();
}

}  // namespace detail

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z <= 0.
///
/// Supported region: 0 < alpha <= 2, z <= 0. Any finite beta is accepted,
/// though accuracy is only verified for beta in {1, 2, alpha}.
/// Absolute error is around 1e-15 in that region.
inline double mittag_leffler(double alpha, double beta, double z) {
    if (!(alpha > 0.0) || alpha > 2.0) {
        throw std::domain_error("mittag_leffler: alpha must lie within (0, 2]");
    }
    if (!(z <= 0.0)) throw std::domain_error("mittag_leffler: only z <= 0 is supported");
    if (!std::isfinite(beta) || !std::isfinite(z)) {
        throw std::domain_error("mittag_leffler: arguments must be finite");
    }
    if (std::fabs(z) < 1.0e-15) return rgamma(beta);
    // Exact exponential keeps relative accuracy deep in the tail, where the
    // contour sum only resolves ~1e-16 absolute.
    if (alpha == 1.0 && beta == 1.0) return std::exp(z);
    return detail::invert_laplace(z, alpha, beta, std::log(1.0e-15));
}

}  // namespace fro::ml
