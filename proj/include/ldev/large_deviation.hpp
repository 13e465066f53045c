#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/fluctuation.hpp"
#include "ldev/log_value.hpp"

namespace ldev {

/// Tail density in log form, split into the three displayed factors:
/// the exponential of order N, the algebraic factor and the prefactor.
struct AsymptoticDensity {
    LogValue log_density;
    double rate = 0.0;           // factors[0] / N
    double subleading_log = 0.0; // factors[1] + factors[2]
    Region region = Region::Bulk;
    std::array<double, 3> factors{};

    double log() const { return log_density.log_abs(); }
};

// ------------------------------------------------ characteristic polynomial

/// log < prod |x - lambda_l|^beta > over the n-point ensemble whose exponent
/// and scale are set by n+1.
inline LogValue char_poly_moment_laguerre(const LaguerreEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "char_poly_moment_laguerre");
    const double alpha = ens.alpha(), beta = ens.beta();
    const double u = ens.u(x);
    const double w = std::fabs((u + x - 2.0 - alpha) / 2.0);
    const double m = ens.n() + 1.0;
    const double lin = x - u - alpha - 2.0 + 2.0 * std::log(w) -
                       2.0 * alpha * std::log(std::fabs((u - x - alpha) / (2.0 * (1.0 + alpha))));
    const double v = m * beta / 2.0 * lin + (1.0 - 1.5 * beta) * std::log(std::fabs(u)) - (1.0 - beta / 2.0) * std::log(w);
    return LogValue::from_log(v);
}

/// beta * mean difference + beta^2 * variance difference / 2.
inline double char_poly_recomposed_laguerre(const LaguerreEnsemble& ens, double x)
{
    const double b = ens.beta();
    return b * mean_diff_laguerre(ens, x).total() + b * b * variance_diff_laguerre(ens, x) / 2.0;
}

inline LogValue char_poly_moment_jacobi(const JacobiEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "char_poly_moment_jacobi");
    const auto p = detail::jacobi_pieces(ens, x);
    const double beta = ens.beta(), m = ens.n() + 1.0;
    const double lin = p.half_shift - ens.alpha1() * p.l1 - ens.alpha2() * p.l2;
    const double v = m * beta * lin + (1.0 - 1.5 * beta) * std::log(std::fabs(p.u)) - (1.0 - beta / 2.0) * p.half_shift;
    return LogValue::from_log(v);
}

inline double char_poly_recomposed_jacobi(const JacobiEnsemble& ens, double x)
{
    const double b = ens.beta();
    return b * mean_diff_jacobi(ens, x).total() + b * b * variance_diff_jacobi(ens, x) / 2.0;
}

// ------------------------------------------------ normalizations

/// log of int prod lambda^p e^{-c lambda} |Delta|^beta over (0, inf)^n.
inline double log_partition_laguerre(double beta, int n, double p, double c)
{
    const double g = beta / 2.0;
    double s = -(n * (p + 1.0) + g * n * (n - 1.0)) * std::log(c);
    for (int j = 0; j < n; ++j) s += std::lgamma(p + 1.0 + j * g) + std::lgamma(1.0 + (j + 1) * g) - std::lgamma(1.0 + g);
    return s;
}

/// Selberg integral: log of int prod x^p1 (1-x)^p2 |Delta|^beta over (0,1)^n.
inline double log_partition_jacobi(double beta, int n, double p1, double p2)
{
    const double g = beta / 2.0, a = p1 + 1.0, b = p2 + 1.0;
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        s += std::lgamma(a + j * g) + std::lgamma(b + j * g) + std::lgamma(1.0 + (j + 1) * g) -
             std::lgamma(a + b + (n + j - 1.0) * g) - std::lgamma(1.0 + g);
    }
    return s;
}

/// C_N / C_{N+1} in log form: exact log-gamma value and the Stirling display.
struct NormRatio {
    LogValue exact;
    LogValue stirling;
    LogValue value() const { return exact; }
};

/// Stirling form with the exponent scale m_exp (the N+1 of the display) and
/// the (2/(beta m_pref))^{beta/2} prefactor kept separate.
inline double norm_ratio_stirling_laguerre(double beta, double alpha, double m_exp, double m_pref)
{
    return std::log(1.0 / (2.0 * std::numbers::pi)) + beta / 2.0 * std::log(2.0 / (beta * m_pref)) +
           beta * m_exp * (1.0 + alpha / 2.0) + std::lgamma(1.0 + beta / 2.0) +
           (-m_exp * (1.0 + alpha) * beta / 2.0 + 0.5) * std::log1p(alpha);
}

inline double norm_ratio_stirling_jacobi(double beta, double a1, double a2, double m_exp, double m_pref)
{
    const double s = a1 + a2 + 2.0;
    double v = std::lgamma(1.0 + beta / 2.0) - std::log(2.0 * std::numbers::pi) + beta / 2.0 * std::log(2.0 / (beta * m_pref)) +
               0.5 * std::log((1.0 + a1) * (1.0 + a2) * (1.0 + a1 + a2)) - (beta / 2.0 + 1.0) * std::log(s);
    v += beta * m_exp * (2.0 * std::log(s) - 0.5 * std::log1p(a1) - 0.5 * std::log1p(a2) - 0.5 * std::log1p(a1 + a2));
    v += beta * m_exp * a1 * (std::log(s) - 0.5 * std::log1p(a1) - 0.5 * std::log1p(a1 + a2));
    v += beta * m_exp * a2 * (std::log(s) - 0.5 * std::log1p(a2) - 0.5 * std::log1p(a1 + a2));
    return v;
}

/// Weight lambda^{alpha(N+1)beta/2 + beta/2 - 1} e^{-(N+1) beta lambda/2}, N = ens.n().
inline NormRatio norm_ratio_laguerre(const LaguerreEnsemble& ens)
{
    const double beta = ens.beta(), m = ens.n() + 1.0;
    const double p = ens.alpha() * m * beta / 2.0 + beta / 2.0 - 1.0;
    const double c = m * beta / 2.0;
    const int n = ens.n();
    NormRatio r;
    r.exact = LogValue::from_log(log_partition_laguerre(beta, n, p, c) - log_partition_laguerre(beta, n + 1, p, c));
    r.stirling = LogValue::from_log(norm_ratio_stirling_laguerre(beta, ens.alpha(), m, n));
    return r;
}

inline NormRatio norm_ratio_jacobi(const JacobiEnsemble& ens)
{
    const double beta = ens.beta(), m = ens.n() + 1.0;
    const double p1 = ens.alpha1() * m * beta / 2.0 + beta / 2.0 - 1.0;
    const double p2 = ens.alpha2() * m * beta / 2.0 + beta / 2.0 - 1.0;
    const int n = ens.n();
    NormRatio r;
    r.exact = LogValue::from_log(log_partition_jacobi(beta, n, p1, p2) - log_partition_jacobi(beta, n + 1, p1, p2));
    r.stirling = LogValue::from_log(norm_ratio_stirling_jacobi(beta, ens.alpha1(), ens.alpha2(), m, n));
    return r;
}

// ------------------------------------------------ headline densities

/// N rho(N x) for the Laguerre ensemble, x in a tail.
inline AsymptoticDensity asym_density_laguerre(const LaguerreEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "asym_density_laguerre");
    const double alpha = ens.alpha(), beta = ens.beta(), n = ens.n();
    const double u = ens.u(x);
    const double sa = std::sqrt(1.0 + alpha);
    AsymptoticDensity d;
    d.region = ens.region(x);
    const double lin = -u + 2.0 * std::log(std::fabs((u + x - 2.0 - alpha) / (2.0 * sa))) -
                       2.0 * alpha * std::log(std::fabs((u - x - alpha) / (2.0 * std::sqrt(x) * sa)));
    d.factors[0] = n * beta / 2.0 * lin;
    d.factors[1] = (1.0 - 1.5 * beta) * std::log(std::fabs(u)) -
                   (1.0 - beta / 2.0) * std::log(std::fabs(x * (u + x - 2.0 - alpha) / 2.0));
    d.factors[2] = std::log(n * sa / (2.0 * std::numbers::pi)) + beta / 2.0 * std::log(2.0 / (beta * n)) +
                   std::lgamma(1.0 + beta / 2.0);
    d.rate = beta / 2.0 * lin;
    d.subleading_log = d.factors[1] + d.factors[2];
    d.log_density = LogValue::from_log(d.factors[0] + d.factors[1] + d.factors[2]);
    return d;
}

/// rho(x) for the Jacobi ensemble, x in a tail.
inline AsymptoticDensity asym_density_jacobi(const JacobiEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "asym_density_jacobi");
    const Edges& e = ens.edges();
    const double c1 = e.lower, c2 = e.upper;
    const double a1 = ens.alpha1(), a2 = ens.alpha2(), beta = ens.beta(), n = ens.n();
    const double u = ens.u(x);
    const double sc1 = std::sqrt(c1), sc2 = std::sqrt(c2), sd1 = std::sqrt(1.0 - c1), sd2 = std::sqrt(1.0 - c2);
    AsymptoticDensity d;
    d.region = ens.region(x);
    const double lin = std::log(std::fabs((x - e.center() + u) / (0.5 * (c2 - c1)))) -
                       a1 * std::log(std::fabs(sc1 * sc2 + x - u) / ((sc1 + sc2) * std::sqrt(x))) -
                       a2 * std::log(std::fabs(sd1 * sd2 - x + 1.0 + u) / ((sd1 + sd2) * std::sqrt(1.0 - x)));
    d.factors[0] = n * beta * lin;
    d.factors[1] = (1.0 - 1.5 * beta) * std::log(std::fabs(u)) -
                   (1.0 - beta / 2.0) * std::log(std::fabs(x * (1.0 - x) * (u + x - e.center()) / (2.0 + a1 + a2)));
    d.factors[2] = std::log(n * (c2 - c1) / (4.0 * std::numbers::pi)) + beta / 2.0 * std::log(1.0 / (beta * n)) +
                   std::lgamma(1.0 + beta / 2.0);
    d.rate = beta * lin;
    d.subleading_log = d.factors[1] + d.factors[2];
    d.log_density = LogValue::from_log(d.factors[0] + d.factors[1] + d.factors[2]);
    return d;
}

/// The same Laguerre density built the long way: (N+1) C_N/C_{N+1} w(x) < prod |x-lambda|^beta >
/// with the Stirling normalization ratio, relabelled so that N+1 is ens.n().
inline double assembled_log_density_laguerre(const LaguerreEnsemble& ens, double x)
{
    detail::require(ens.n() >= 2, "assembled_log_density_laguerre: n must be >= 2");
    const double beta = ens.beta(), alpha = ens.alpha(), m = ens.n();
    const double log_w = (alpha * m * beta / 2.0 + beta / 2.0 - 1.0) * std::log(x) - m * beta * x / 2.0;
    return std::log(m) + norm_ratio_stirling_laguerre(beta, alpha, m, m) + log_w +
           char_poly_moment_laguerre(ens.with_n(ens.n() - 1), x).log_abs();
}

inline double assembled_log_density_jacobi(const JacobiEnsemble& ens, double x)
{
    detail::require(ens.n() >= 2, "assembled_log_density_jacobi: n must be >= 2");
    const double beta = ens.beta(), m = ens.n();
    const double log_w = (ens.alpha1() * m * beta / 2.0 + beta / 2.0 - 1.0) * std::log(x) +
                         (ens.alpha2() * m * beta / 2.0 + beta / 2.0 - 1.0) * std::log1p(-x);
    return std::log(m) + norm_ratio_stirling_jacobi(beta, ens.alpha1(), ens.alpha2(), m, m) + log_w +
           char_poly_moment_jacobi(ens.with_n(ens.n() - 1), x).log_abs();
}

// ------------------------------------------------ prior leading-order forms

/// Earlier leading-order rate (coefficient of N in the log density).
inline double rate_log_form(const LaguerreEnsemble& ens, double x)
{
    const double alpha = ens.alpha(), beta = ens.beta();
    const double u = ens.u(x);
    const double sa = std::sqrt(alpha + 1.0);
    return beta / 2.0 *
           (-u + alpha * std::log(std::fabs((alpha * (alpha + u - x) - 2.0 * x) / (2.0 * sa * x))) +
            (2.0 + alpha) * std::log(std::fabs((u + x - 2.0 - alpha) / (2.0 * sa))));
}

/// Left-edge rate function Phi_-^min(y), y = a1^2 - x > 0.
inline double phi_min_left(double alpha, double y)
{
    const double r = std::sqrt(alpha + 1.0);
    const double sy = std::sqrt(y), sy4 = std::sqrt(y + 4.0 * r);
    return -0.5 * std::sqrt(y * (y + 4.0 * r)) - alpha / 2.0 * std::log1p(-y / ((1.0 - r) * (1.0 - r))) +
           2.0 * std::log((sy4 - sy) / std::sqrt(4.0 * r)) +
           alpha * std::log1p(2.0 * sy / (r - 1.0) * ((sy4 - sy) / (4.0 * r)));
}

/// The same leading rate via Phi_-^min; defined on the left tail only.
inline std::optional<double> rate_phi_form(const LaguerreEnsemble& ens, double x)
{
    if (!(x > 0.0 && x < ens.edges().lower)) return std::nullopt;
    return -ens.beta() * phi_min_left(ens.alpha(), ens.edges().lower - x);
}

inline double arcosh(double y) { return std::log(y + std::sqrt(y * y - 1.0)); }

namespace detail {

inline double kappa_arcosh_terms(const LaguerreEnsemble& ens, double x)
{
    const double a1s = ens.edges().lower, a2s = ens.edges().upper;
    const double a1a2 = std::sqrt(a1s * a2s);
    const double t1 = std::fabs((1.0 / x - 0.5 * (1.0 / a1s + 1.0 / a2s)) / (0.5 * (1.0 / a1s - 1.0 / a2s)));
    const double t2 = std::fabs(((a1s + a2s) / 2.0 - x) / ((a1s - a2s) / 2.0));
    return a1a2 * arcosh(t1) - (a1s + a2s) / 2.0 * arcosh(t2);
}

} // namespace detail

/// kappa of the beta = 2 result with algebraic correction; the density is ~ e^{-N kappa}.
/// The signed root enters with a plus sign: this is the sign for which
/// e^{-N kappa} decays in both tails and agrees with the log form of the rate.
inline double kappa(const LaguerreEnsemble& ens, double x) { return ens.u(x) + detail::kappa_arcosh_terms(ens, x); }

/// kappa as displayed, with -u; differs from kappa() by exactly 2u.
inline double kappa_printed(const LaguerreEnsemble& ens, double x)
{
    return -ens.u(x) + detail::kappa_arcosh_terms(ens, x);
}

struct RateReport {
    double rate_log_form = 0.0;
    std::optional<double> rate_phi_form;
    double minus_kappa = 0.0;
    double rate_headline = 0.0; // factors[0]/N of the headline density
    std::optional<double> diff_log_phi;
    std::optional<double> diff_log_kappa; // only comparable at beta = 2
    std::optional<double> diff_log_kappa_printed;
    double diff_log_headline = 0.0;
};

inline RateReport rate_identity_checks(const LaguerreEnsemble& ens, double x)
{
    detail::require_tail(ens, x, "rate_identity_checks");
    RateReport r;
    r.rate_log_form = rate_log_form(ens, x);
    r.rate_phi_form = rate_phi_form(ens, x);
    r.minus_kappa = ens.alpha() > 0.0 ? -kappa(ens, x) : std::nan("");
    r.rate_headline = asym_density_laguerre(ens, x).rate;
    if (r.rate_phi_form) r.diff_log_phi = std::fabs(r.rate_log_form - *r.rate_phi_form);
    if (ens.beta() == 2.0 && ens.alpha() > 0.0) {
        r.diff_log_kappa = std::fabs(r.rate_log_form - r.minus_kappa);
        r.diff_log_kappa_printed = std::fabs(r.rate_log_form + kappa_printed(ens, x));
    }
    r.diff_log_headline = std::fabs(r.rate_log_form - r.rate_headline);
    return r;
}

} // namespace ldev
