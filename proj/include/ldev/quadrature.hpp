#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "ldev/error.hpp"
#include "ldev/recurrence.hpp"
#include "ldev/tridiagonal.hpp"

namespace ldev::quad {

/// Gauss rule whose weights sum to one; the integral of the weight function
/// is exp(log_mass).  Keeping the mass in log form lets rules for weights like
/// x^150 (1-x)^150 be used without underflow.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double log_mass = 0.0;

    std::size_t size() const { return nodes.size(); }

    /// sum w_i f(x_i), without the mass factor.
    template <class F>
    double average(F&& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }

    template <class F>
    double integrate(F&& f) const
    {
        return std::exp(log_mass) * average(std::forward<F>(f));
    }
};

namespace detail {

inline GaussRule golub_welsch(std::vector<double> diag, std::vector<double> off, double log_mass)
{
    auto eig = eigen_with_first_components(SymTridiagonal{std::move(diag), std::move(off)});
    GaussRule rule;
    rule.nodes = std::move(eig.values);
    rule.weights.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) rule.weights[i] = eig.first_components[i] * eig.first_components[i];
    rule.log_mass = log_mass;
    return rule;
}

} // namespace detail

/// Golub-Welsch rule from a recurrence.
inline GaussRule from_recurrence(const Recurrence& rec)
{
    const int n = rec.size();
    std::vector<double> off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) off[k - 1] = rec.b[k];
    return detail::golub_welsch(rec.alpha, std::move(off), rec.log_mass);
}

/// Gauss-Legendre on (-1, 1) by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n)
{
    ldev::detail::require(n >= 1, "gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w / 2.0;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 1.0;
    }
    rule.log_mass = std::log(2.0);
    return rule;
}

/// Gauss rule on (0,1) for the weight s^p (1-s)^q, p, q > -1.
inline GaussRule gauss_jacobi01(int n, double p, double q)
{
    return from_recurrence(jacobi01_recurrence(n, p, q));
}

/// Gauss rule on (0, inf) for the weight s^p e^{-s}, p > -1.
inline GaussRule gauss_laguerre(int n, double p)
{
    return from_recurrence(laguerre_recurrence(n, p));
}

/// Gauss-Chebyshev, first kind: integral of f(t)/sqrt(1-t^2) over (-1,1).
inline GaussRule gauss_chebyshev1(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.assign(n, 1.0 / n);
    for (int i = 0; i < n; ++i) rule.nodes[i] = std::cos(std::numbers::pi * (n - i - 0.5) / n);
    rule.log_mass = std::log(std::numbers::pi);
    return rule;
}

/// Gauss-Chebyshev, second kind: integral of f(t) sqrt(1-t^2) over (-1,1).
inline GaussRule gauss_chebyshev2(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double th = std::numbers::pi * (n - i) / (n + 1.0);
        rule.nodes[i] = std::cos(th);
        rule.weights[i] = 2.0 / (n + 1.0) * std::sin(th) * std::sin(th);
    }
    rule.log_mass = std::log(std::numbers::pi / 2.0);
    return rule;
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

namespace detail {

template <class F>
double g7k15(F& f, double a, double b, double& err)
{
    static constexpr double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                     0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                     0.207784955007898468, 0.0};
    static constexpr double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                     0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                     0.204432940075298892, 0.209482141084727828};
    static constexpr double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                     0.417959183673469388};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = wk[7] * fc, g7 = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double y = f(c - h * xk[j]) + f(c + h * xk[j]);
        k15 += wk[j] * y;
        if (j % 2 == 1) g7 += wg[j / 2] * y;
    }
    err = std::fabs((k15 - g7) * h);
    return k15 * h;
}

} // namespace detail

/// Adaptive Gauss-Kronrod (7/15) on a finite interval with bisection.
template <class F>
AdaptiveResult adaptive(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-300,
                        int max_intervals = 4000)
{
    struct Piece {
        double a, b, value, error;
    };
    std::vector<Piece> pieces;
    double err0;
    const double v0 = detail::g7k15(f, a, b, err0);
    pieces.push_back({a, b, v0, err0});
    AdaptiveResult res;
    while (true) {
        double total = 0.0, total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            total += pieces[i].value;
            total_err += pieces[i].error;
            if (pieces[i].error > pieces[worst].error) worst = i;
        }
        res.value = total;
        res.error = total_err;
        if (total_err <= std::max(abs_tol, rel_tol * std::fabs(total))) {
            res.converged = true;
            return res;
        }
        if (static_cast<int>(pieces.size()) >= max_intervals) return res;
        const Piece p = pieces[worst];
        const double mid = 0.5 * (p.a + p.b);
        double e1, e2;
        const double v1 = detail::g7k15(f, p.a, mid, e1);
        const double v2 = detail::g7k15(f, mid, p.b, e2);
        pieces[worst] = {p.a, mid, v1, e1};
        pieces.push_back({mid, p.b, v2, e2});
    }
}

} // namespace ldev::quad
