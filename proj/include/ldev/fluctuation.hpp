#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"

namespace ldev {

/// Choice of linear statistic v(t): WithLog includes log|x - t|, WithoutLog
/// keeps only the weight's log-potential part.
enum class Choice { WithLog, WithoutLog };

struct LinearStatistic {
    Flavor flavor = Flavor::Laguerre;
    Choice choice = Choice::WithLog;
    double x = 0.0;
};

/// Chebyshev-cosine coefficients a_1..a_{k_max}; a[k-1] holds a_k.
struct ChebCoefficients {
    int k_max = 0;
    std::vector<double> a;
};

/// Mean difference split into its N-proportional part and the O(1) part
/// coming from the (1/beta - 1/2) correction of the density.
struct MeanDiff {
    double n_linear = 0.0;
    double correction = 0.0;
    double total() const { return n_linear + correction; }
};

/// The external point mapped to the reference interval (-1, 1).
inline double x_tilde(double x, const Edges& e) { return (x - e.center()) / (0.5 * e.width()); }

/// nu of a point outside the closed support: |nu| < 1 and (nu + 1/nu)/2 = x_tilde.
inline double nu_of_tilde(double xt)
{
    if (std::fabs(xt) <= 1.0) throw invalid_parameter("nu: point inside the closed support");
    // xt - sqrt(xt^2-1) for xt > 1, written without cancellation.
    const double r = std::sqrt((xt - 1.0) * (xt + 1.0));
    return xt > 0.0 ? 1.0 / (xt + r) : 1.0 / (xt - r);
}

inline double nu_x(double x, const Edges& e) { return nu_of_tilde(x_tilde(x, e)); }

/// nu at x = 0 for the Laguerre support: -1/sqrt(alpha+1).
inline double nu_0(double alpha) { return -1.0 / std::sqrt(alpha + 1.0); }

/// Smallest K with c^2 nu^{2(K+1)} / ((K+1)(1-nu^2)) < tol, where |a_k| <= c nu^k / k.
/// Returns cap if the bound is not met by then.
inline int select_k_max(double nu_max, double c, double tol = 1e-14, int cap = 10000)
{
    nu_max = std::fabs(nu_max);
    if (nu_max == 0.0) return 1;
    const double one_minus = 1.0 - nu_max * nu_max;
    for (int k = 1; k < cap; ++k) {
        const double bound = c * c * std::pow(nu_max, 2.0 * (k + 1)) / ((k + 1.0) * one_minus);
        if (bound < tol) return k;
    }
    return cap;
}

inline double tail_bound(double nu_max, double c, int k_max)
{
    nu_max = std::fabs(nu_max);
    return c * c * std::pow(nu_max, 2.0 * (k_max + 1)) / ((k_max + 1.0) * (1.0 - nu_max * nu_max));
}

// ---------------------------------------------------------------- Laguerre

/// a_k = -2 nu_x^k / k - (alpha/k) nu_0^k - [k=1] sqrt(alpha+1); the nu_x
/// term is dropped for the WithoutLog choice.
inline ChebCoefficients cheb_coeffs_laguerre(const LaguerreEnsemble& ens, const LinearStatistic& stat, int k_max)
{
    detail::require(stat.flavor == Flavor::Laguerre, "cheb_coeffs_laguerre: Laguerre statistic required");
    detail::require(k_max >= 1, "cheb_coeffs_laguerre: k_max must be >= 1");
    const double alpha = ens.alpha();
    const double nx = stat.choice == Choice::WithLog ? nu_x(stat.x, ens.edges()) : 0.0;
    const double n0 = nu_0(alpha);
    ChebCoefficients c;
    c.k_max = k_max;
    c.a.resize(k_max);
    double px = 1.0, p0 = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        px *= nx;
        p0 *= n0;
        double ak = -2.0 * px / k - alpha / k * p0;
        if (k == 1) ak -= std::sqrt(alpha + 1.0);
        c.a[k - 1] = ak;
    }
    return c;
}

/// sum_k k a_k^2 over the stored coefficients.
inline double weighted_square_sum(const ChebCoefficients& c)
{
    double s = 0.0;
    for (int k = c.k_max; k >= 1; --k) s += k * c.a[k - 1] * c.a[k - 1];
    return s;
}

/// 2 int mp(t) log|x-t| dt / 2, i.e. int (1/(2 pi t)) sqrt((t-a1^2)(a2^2-t)) log|x-t| dt in closed form.
inline double mp_log_integral(const LaguerreEnsemble& ens, double x)
{
    const double alpha = ens.alpha();
    const double u = ens.u(x);
    return 0.5 * (x - alpha - u - 2.0 + alpha * std::log(std::fabs((alpha * (alpha + u - x) - 2.0 * x) / (2.0 * x * x))) +
                  (2.0 + alpha) * std::log(std::fabs((u + x - 2.0 - alpha) / 2.0)));
}

/// (1/pi) int log|x-t| / sqrt((a2^2-t)(t-a1^2)) dt, in the u-form.
inline double arcsine_log_integral(const LaguerreEnsemble& ens, double x)
{
    const double u = ens.u(x);
    return std::log(std::fabs((u + x - 2.0 - ens.alpha()) / 2.0));
}

/// The same integral in its x_tilde form: log((a2^2-a1^2)/2) + log(|x_tilde +- sqrt(x_tilde^2-1)|/2).
inline double arcsine_log_integral_tilde(const LaguerreEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    const double xt = x_tilde(x, e);
    const double r = std::sqrt((xt - 1.0) * (xt + 1.0));
    const double v = xt > 0.0 ? xt + r : xt - r;
    return std::log(0.5 * e.width()) + std::log(0.5 * std::fabs(v));
}

inline MeanDiff mean_diff_laguerre(const LaguerreEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "mean_diff_laguerre");
    MeanDiff m;
    m.n_linear = ens.n() * mp_log_integral(ens, x);
    const double c = 1.0 / ens.beta() - 0.5;
    m.correction = c * (std::log(std::fabs(ens.u(x))) - arcsine_log_integral(ens, x));
    return m;
}

/// Variance difference in the nu form, before substituting the u identities.
inline double variance_diff_laguerre_nu(const LaguerreEnsemble& ens, double x)
{
    const double alpha = ens.alpha();
    const double u = ens.u(x);
    const double nx = nu_x(x, ens.edges());
    const double n0 = nu_0(alpha);
    return (2.0 * (x - (alpha + 2.0) - u) - 4.0 * std::log1p(-nx * nx) - 4.0 * alpha * std::log1p(-nx * n0)) /
           (2.0 * ens.beta());
}

/// Closed-form variance difference in terms of u.
inline double variance_diff_laguerre(const LaguerreEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "variance_diff_laguerre");
    const double alpha = ens.alpha(), beta = ens.beta();
    const double u = ens.u(x);
    return (x - (alpha + 2.0) - u) / beta - 2.0 / beta * std::log(std::fabs(u)) +
           2.0 / beta * std::log(std::fabs(x - (alpha + 2.0) + u) / 2.0) -
           2.0 * alpha / beta * std::log(std::fabs(x + alpha - u) / (2.0 * (alpha + 1.0)));
}

struct SeriesReport {
    double closed_form = 0.0;
    double series = 0.0;
    double tail_bound = 0.0;
    int k_max = 0;
};

/// Variance difference by truncating (1/(2 beta)) sum k (a_k^(1)^2 - a_k^(2)^2),
/// next to the closed form.  Throws nonconvergence if the tail bound stays above tol.
inline SeriesReport variance_series_laguerre(const LaguerreEnsemble& ens, double x, double tol = 1e-12)
{
    detail::require_tail(ens, x, "variance_series_laguerre");
    const double nx = nu_x(x, ens.edges()), n0 = nu_0(ens.alpha());
    const double c = 2.0 + ens.alpha();
    const double nmax = std::max(std::fabs(nx), std::fabs(n0));
    SeriesReport r;
    r.k_max = select_k_max(nmax, c);
    r.tail_bound = tail_bound(nmax, c, r.k_max);
    if (r.tail_bound > tol) throw nonconvergence("variance_series_laguerre: series tail bound above tolerance");
    const auto a1 = cheb_coeffs_laguerre(ens, {Flavor::Laguerre, Choice::WithLog, x}, r.k_max);
    const auto a2 = cheb_coeffs_laguerre(ens, {Flavor::Laguerre, Choice::WithoutLog, x}, r.k_max);
    r.series = (weighted_square_sum(a1) - weighted_square_sum(a2)) / (2.0 * ens.beta());
    r.closed_form = variance_diff_laguerre(ens, x);
    return r;
}

// ---------------------------------------------------------------- Jacobi

namespace detail {

struct JacobiPieces {
    double u, half_shift, l1, l2;
};

// half_shift = log|(x - (c1+c2)/2 + u)/2|, l1, l2 the two rate logs shared by
// the mean, variance and moment formulas.
inline JacobiPieces jacobi_pieces(const JacobiEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    const double c1 = e.lower, c2 = e.upper;
    const double u = ens.u(x);
    const double sc1 = std::sqrt(c1), sc2 = std::sqrt(c2);
    const double sd1 = std::sqrt(1.0 - c1), sd2 = std::sqrt(1.0 - c2);
    JacobiPieces p;
    p.u = u;
    p.half_shift = std::log(std::fabs(0.5 * (x - e.center() + u)));
    p.l1 = std::log(2.0 * std::fabs(sc1 * sc2 + x - u) / ((sc1 + sc2) * (sc1 + sc2)));
    p.l2 = std::log(2.0 * std::fabs(sd1 * sd2 + 1.0 - x + u) / ((sd1 + sd2) * (sd1 + sd2)));
    return p;
}

// |x(c1+c2) - 2 c1 c2 - 2 sqrt(c1 c2) u|, using R R' = x^2 (c2-c1)^2 to pick
// the factor that does not cancel.
inline double abs_r(double x, double c1, double c2, double u)
{
    const double base = x * (c1 + c2) - 2.0 * c1 * c2;
    const double t = 2.0 * std::sqrt(c1 * c2) * u;
    const double r = base - t, rp = base + t;
    if (std::fabs(r) >= std::fabs(rp)) return std::fabs(r);
    return x * x * (c2 - c1) * (c2 - c1) / std::fabs(rp);
}

} // namespace detail

struct JacobiPotential {
    double antiderivative_form = 0.0; // printed anti-derivative with R
    double simplified_form = 0.0;     // the equivalent simplified form
    double value() const { return simplified_form; }
};

/// 2 int rho_inf(X) log|x - X| dX over (c1, c2), in both closed forms.
inline JacobiPotential jacobi_log_potential(const JacobiEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "jacobi_log_potential");
    const Edges& e = ens.edges();
    const double c1 = e.lower, c2 = e.upper;
    const double a1 = ens.alpha1(), a2 = ens.alpha2();
    const auto p = detail::jacobi_pieces(ens, x);
    JacobiPotential out;
    const double sq = std::sqrt(c1) - std::sqrt(c2);
    const double sqm = std::sqrt(1.0 - c1) - std::sqrt(1.0 - c2);
    const double r1 = detail::abs_r(x, c1, c2, p.u);
    // Mirrored point 1-x has edges (1-c2, 1-c1) and u of the opposite sign.
    const double r2 = detail::abs_r(1.0 - x, 1.0 - c2, 1.0 - c1, -p.u);
    out.antiderivative_form = (a1 + a2 + 2.0) * p.half_shift + a1 * std::log(r1 / (x * x * sq * sq)) +
                              a2 * std::log(r2 / ((1.0 - x) * (1.0 - x) * sqm * sqm));
    out.simplified_form = 2.0 * p.half_shift - 2.0 * a1 * p.l1 - 2.0 * a2 * p.l2;
    return out;
}

/// 2 int rho_inf(X)/(w - X) dX in closed form (the Stieltjes transform).
inline double jacobi_stieltjes(const JacobiEnsemble& ens, double w)
{
    const double a1 = ens.alpha1(), a2 = ens.alpha2();
    return -a1 / w + a2 / (1.0 - w) - (a1 + a2 + 2.0) * ens.u(w) / (w * (1.0 - w));
}

inline MeanDiff mean_diff_jacobi(const JacobiEnsemble& ens, double x)
{
    const auto pot = jacobi_log_potential(ens, x);
    const auto p = detail::jacobi_pieces(ens, x);
    MeanDiff m;
    m.n_linear = 0.5 * ens.n() * pot.value();
    m.correction = (1.0 / ens.beta() - 0.5) * (std::log(std::fabs(p.u)) - p.half_shift);
    return m;
}

inline double variance_diff_jacobi(const JacobiEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "variance_diff_jacobi");
    const auto p = detail::jacobi_pieces(ens, x);
    const double b = ens.beta();
    return -2.0 / b * std::log(std::fabs(p.u)) + 2.0 / b * p.half_shift - 2.0 * ens.alpha1() / b * p.l1 -
           2.0 * ens.alpha2() / b * p.l2;
}

} // namespace ldev
