#pragma once

// Numerical counterparts of the closed forms: every function here computes a
// quantity by quadrature or truncated series without using the closed form it
// is meant to check.

#include <algorithm>
#include <map>
#include <mutex>
#include <cmath>
#include <numbers>
#include <vector>

#include "ldev/bulk_density.hpp"
#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/fluctuation.hpp"
#include "ldev/quadrature.hpp"

namespace ldev::oracle {

namespace detail {

// int_{lo}^{hi} rho(t) f(t) dt with t = center + half cos(theta); the square
// root zeros of rho become smooth in theta, so adaptive Gauss-Kronrod converges
// quickly.
template <class Rho, class F>
double support_integral(const Edges& e, Rho&& rho, F&& f, double rel_tol = 1e-13)
{
    const double c = e.center(), h = 0.5 * e.width();
    auto g = [&](double th) {
        const double t = c + h * std::cos(th);
        return rho(t) * f(t) * h * std::sin(th);
    };
    const auto r = quad::adaptive(g, 0.0, std::numbers::pi, rel_tol, 1e-15, 20000);
    if (!r.converged) throw nonconvergence("support_integral: adaptive quadrature did not converge");
    return r.value;
}

// (1/pi) int f(t) / sqrt((hi-t)(t-lo)) dt by Gauss-Chebyshev of the first kind,
// doubling the node count until two passes agree.
template <class F>
double arcsine_average(const Edges& e, F&& f, double tol = 1e-14)
{
    const double c = e.center(), h = 0.5 * e.width();
    double prev = 0.0;
    for (int n = 64; n <= (1 << 20); n *= 2) {
        const auto rule = quad::gauss_chebyshev1(n);
        const double v = rule.average([&](double s) { return f(c + h * s); });
        if (n > 64 && std::fabs(v - prev) <= tol * std::max(1.0, std::fabs(v))) return v;
        prev = v;
    }
    throw nonconvergence("arcsine_average: no convergence");
}

// Large Gauss-Legendre rules are costly to build; keep them per size.
inline const quad::GaussRule& cached_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, quad::GaussRule> rules;
    const std::lock_guard<std::mutex> lock(mu);
    auto it = rules.find(n);
    if (it == rules.end()) it = rules.emplace(n, quad::gauss_legendre(n)).first;
    return it->second;
}

} // namespace detail

/// int mp(t) log|x - t| dt by quadrature.
inline double mp_log_integral(const LaguerreEnsemble& ens, double x)
{
    return detail::support_integral(
        ens.edges(), [&](double t) { return mp_density(ens, t); }, [&](double t) { return std::log(std::fabs(x - t)); });
}

/// (1/pi) int log|x - t| / sqrt((a2^2-t)(t-a1^2)) dt by Gauss-Chebyshev.
inline double arcsine_log_integral(const Edges& e, double x)
{
    return detail::arcsine_average(e, [&](double t) { return std::log(std::fabs(x - t)); });
}

/// Mean difference from the corrected density, every integral done numerically:
/// N int rho_inf log|x-t| + (1/beta - 1/2)(atoms - arcsine integral).
inline double mean_diff_laguerre(const LaguerreEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    const double atoms = 0.5 * (std::log(std::fabs(x - e.lower)) + std::log(std::fabs(x - e.upper)));
    return ens.n() * oracle::mp_log_integral(ens, x) + (1.0 / ens.beta() - 0.5) * (atoms - arcsine_log_integral(e, x));
}

/// 2 int rho_inf(X) log|x - X| dX against jacobi_bulk_density.
inline double jacobi_log_potential(const JacobiEnsemble& ens, double x)
{
    return 2.0 * detail::support_integral(
                     ens.edges(), [&](double t) { return jacobi_bulk_density(ens, t); },
                     [&](double t) { return std::log(std::fabs(x - t)); });
}

inline double mean_diff_jacobi(const JacobiEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    const double atoms = 0.5 * (std::log(std::fabs(x - e.lower)) + std::log(std::fabs(x - e.upper)));
    return 0.5 * ens.n() * oracle::jacobi_log_potential(ens, x) +
           (1.0 / ens.beta() - 0.5) * (atoms - arcsine_log_integral(e, x));
}

/// 2 int rho_inf(X) / (w - X) dX by quadrature; w must lie off the support.
inline double jacobi_stieltjes(const JacobiEnsemble& ens, double w)
{
    return 2.0 * detail::support_integral(
                     ens.edges(), [&](double t) { return jacobi_bulk_density(ens, t); },
                     [&](double t) { return 1.0 / (w - t); });
}

/// d/dx of the closed-form log potential by a fourth-order central difference.
inline double potential_derivative_fd(const JacobiEnsemble& ens, double x, double h)
{
    auto f = [&](double y) { return ldev::jacobi_log_potential(ens, y).value(); };
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
}

/// a_k = (2/pi) int_0^pi log(1 - cos(theta)/x_tilde) cos(k theta) d theta by
/// Gauss-Legendre on (0, pi), k = 1..k_max.
inline std::vector<double> cheb_log_coefficients(double x_tilde, int k_max, int nodes = 2000)
{
    const auto& rule = detail::cached_legendre(nodes);
    std::vector<double> a(k_max, 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double th = 0.5 * std::numbers::pi * (rule.nodes[i] + 1.0);
        const double v = std::log1p(-std::cos(th) / x_tilde) * rule.weights[i];
        // weights sum to one over (0, pi): (2/pi) * pi * sum = 2 sum
        double ck_prev = 1.0, ck = std::cos(th);
        const double two_c = 2.0 * ck;
        for (int k = 1; k <= k_max; ++k) {
            a[k - 1] += 2.0 * v * ck;
            const double next = two_c * ck - ck_prev;
            ck_prev = ck;
            ck = next;
        }
    }
    return a;
}

/// Coefficients a_1..a_K of v(center + half cos theta) from a discrete cosine
/// transform on M = `points` Chebyshev angles; aliasing is negligible when the
/// coefficients have decayed well before K < M.
template <class V>
std::vector<double> cheb_coefficients(const Edges& e, V&& v, int k_max, int points)
{
    ldev::detail::require(points > k_max, "cheb_coefficients: need more points than coefficients");
    const double c = e.center(), h = 0.5 * e.width();
    std::vector<double> a(k_max, 0.0);
    for (int j = 0; j < points; ++j) {
        const double th = std::numbers::pi * (j + 0.5) / points;
        const double cs = std::cos(th);
        const double f = v(c + h * cs) * 2.0 / points;
        double ck_prev = 1.0, ck = cs;
        for (int k = 1; k <= k_max; ++k) {
            a[k - 1] += f * ck;
            const double next = 2.0 * cs * ck - ck_prev;
            ck_prev = ck;
            ck = next;
        }
    }
    return a;
}

struct VarianceSeries {
    double value = 0.0;
    int k_max = 0;
    int points = 0;
};

/// (1/(2 beta)) sum k (a_k^(1)^2 - a_k^(2)^2) for the Jacobi choices, with the
/// a_k computed numerically.  The truncation uses the slowest geometric rate
/// among the singular points x, 0 and 1.
inline VarianceSeries variance_series_jacobi(const JacobiEnsemble& ens, double x, double tol = 1e-14)
{
    const Edges& e = ens.edges();
    const double a1 = ens.alpha1(), a2 = ens.alpha2();
    const double nu = std::max({std::fabs(nu_x(x, e)), std::fabs(nu_x(0.0, e)), std::fabs(nu_x(1.0, e))});
    const int k_max = select_k_max(nu, 2.0 + a1 + a2, tol);
    const int points = 4 * k_max + 64;
    auto v2 = [&](double t) { return 0.5 * a1 * std::log(t) + 0.5 * a2 * std::log1p(-t); };
    auto v1 = [&](double t) { return std::log(std::fabs(x - t)) + v2(t); };
    const auto c1 = cheb_coefficients(e, v1, k_max, points);
    const auto c2 = cheb_coefficients(e, v2, k_max, points);
    double s = 0.0;
    for (int k = k_max; k >= 1; --k) s += k * (c1[k - 1] * c1[k - 1] - c2[k - 1] * c2[k - 1]);
    return {s / (2.0 * ens.beta()), k_max, points};
}

/// The Laguerre variance difference from numerically computed coefficients of
/// both choices of v (log|x-t| + alpha/2 log t - t/2 and the same without the log).
inline VarianceSeries variance_series_laguerre(const LaguerreEnsemble& ens, double x, double tol = 1e-14)
{
    const Edges& e = ens.edges();
    const double alpha = ens.alpha();
    const double nu = std::max(std::fabs(nu_x(x, e)), std::fabs(nu_0(alpha)));
    const int k_max = select_k_max(nu, 2.0 + alpha, tol);
    const int points = 4 * k_max + 64;
    auto v2 = [&](double t) { return 0.5 * alpha * std::log(t) - 0.5 * t; };
    auto v1 = [&](double t) { return std::log(std::fabs(x - t)) + v2(t); };
    const auto c1 = cheb_coefficients(e, v1, k_max, points);
    const auto c2 = cheb_coefficients(e, v2, k_max, points);
    double s = 0.0;
    for (int k = k_max; k >= 1; --k) s += k * (c1[k - 1] * c1[k - 1] - c2[k - 1] * c2[k - 1]);
    return {s / (2.0 * ens.beta()), k_max, points};
}

} // namespace ldev::oracle
