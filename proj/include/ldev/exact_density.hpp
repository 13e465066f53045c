#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/log_value.hpp"
#include "ldev/orthopoly.hpp"
#include "ldev/quadrature.hpp"
#include "ldev/recurrence.hpp"

namespace ldev {

/// Which beta = 1 construction to evaluate.
///   exact:   (N-1)-point beta = 2 kernel plus the skew correction; integrates to N.
///   printed: N-point beta = 2 kernel plus the same correction; integrates to N+1.
enum class Beta1Form { exact, printed };

inline const char* to_string(Beta1Form f) { return f == Beta1Form::exact ? "exact" : "printed"; }

namespace detail {

inline void require_beta(double beta, double want, const char* what)
{
    if (beta != want) throw invalid_parameter(std::string(what) + ": wrong beta for this formula");
}

inline int node_count(int n, double extra) { return 48 + n + static_cast<int>(std::ceil(extra)); }

// Christoffel-Darboux form for the n-point beta = 2 Laguerre density with weight x^a e^{-x}:
//   Gamma(n+1)/Gamma(n+a) x^a e^{-x} (L_{n-1}^a L_{n-1}^{a+1} - L_n^a L_{n-2}^{a+1}).
inline LogValue laguerre_cd_density(int n, double a, double x, RenormPolicy policy)
{
    const double log_w = a * std::log(x) - x;
    if (n == 1) return LogValue::from_log(log_w - std::lgamma(a + 1.0));
    const auto la = laguerre_sequence(n, a, x, policy);
    const auto lb = laguerre_sequence(n - 1, a + 1.0, x, policy);
    const ScaledFloat bracket = la[n - 1] * lb[n - 1] - la[n] * lb[n - 2];
    return bracket.to_log().scaled(std::lgamma(n + 1.0) - std::lgamma(n + a) + log_w);
}

} // namespace detail

/// Exact beta = 2 Laguerre density rho(x) (unscaled argument) for a = alpha N,
/// weight x^a e^{-x}, in Christoffel-Darboux form.
inline LogValue exact_density_laguerre_beta2(const LaguerreEnsemble& ens, double x, RenormPolicy policy = {})
{
    detail::require_beta(ens.beta(), 2.0, "exact_density_laguerre_beta2");
    if (!(x > 0.0)) throw invalid_parameter("exact_density_laguerre_beta2: x must be positive");
    return detail::laguerre_cd_density(ens.n(), ens.exponent(), x, policy);
}

/// Same density as a sum of squares of orthonormal polynomials.
inline LogValue exact_density_laguerre_beta2_sum(const LaguerreEnsemble& ens, double x, RenormPolicy policy = {})
{
    detail::require_beta(ens.beta(), 2.0, "exact_density_laguerre_beta2_sum");
    if (!(x > 0.0)) throw invalid_parameter("exact_density_laguerre_beta2_sum: x must be positive");
    const double a = ens.exponent();
    const auto rec = laguerre_recurrence(ens.n(), a);
    return LogValue::from_log(a * std::log(x) - x - rec.log_mass + log_kernel_diagonal(rec, ens.n(), x, policy));
}

/// int sgn(x - t) L_{n}^a(t) t^b e^{-t/2} dt over (0, inf), b = (a-1)/2.
inline LogValue laguerre_sgn_integral(int n, double a, double x)
{
    const double b = (a - 1.0) / 2.0;
    detail::require(b > -1.0, "laguerre_sgn_integral: exponent must exceed -1");
    auto lag = [&](double t) {
        double l0 = 1.0;
        if (n == 0) return l0;
        double l1 = 1.0 + a - t;
        for (int k = 1; k < n; ++k) {
            const double l2 = ((2.0 * k + 1.0 + a - t) * l1 - (k + a) * l0) / (k + 1.0);
            l0 = l1;
            l1 = l2;
        }
        return l1;
    };
    // Whole line: t = 2r with weight r^b e^{-r}, exact for a polynomial of degree n.
    const auto gl = quad::gauss_laguerre(n / 2 + 2, b);
    const LogValue total =
        LogValue::from_double(gl.average([&](double r) { return lag(2.0 * r); })).scaled((b + 1.0) * std::log(2.0) + gl.log_mass);
    // (0, x): t = x s with weight s^b.
    const auto gj = quad::gauss_jacobi01(detail::node_count(n, 0.6 * x), b, 0.0);
    const LogValue lower = LogValue::from_double(gj.average([&](double s) { return std::exp(-x * s / 2.0) * lag(x * s); }))
                               .scaled((b + 1.0) * std::log(x) + gj.log_mass);
    return lower + lower - total;
}

/// Exact beta = 1 Laguerre density for weight x^{(a-1)/2} e^{-x/2}, a = alpha N, N even.
inline LogValue exact_density_laguerre_beta1(const LaguerreEnsemble& ens, double x, Beta1Form form = Beta1Form::exact,
                                             RenormPolicy policy = {})
{
    detail::require_beta(ens.beta(), 1.0, "exact_density_laguerre_beta1");
    const int n = ens.n();
    if (n % 2 != 0) throw invalid_parameter("exact_density_laguerre_beta1: N must be even");
    if (!(x > 0.0)) throw invalid_parameter("exact_density_laguerre_beta1: x must be positive");
    const double a = ens.exponent();
    const int kernel_n = form == Beta1Form::exact ? n - 1 : n;
    const LogValue kernel = detail::laguerre_cd_density(kernel_n, a, x, policy);
    const LogValue lnm1 = laguerre_sequence(n - 1, a, x, policy).back().to_log();
    const LogValue s = laguerre_sgn_integral(n - 2, a, x);
    const double log_c = std::lgamma(static_cast<double>(n)) - std::log(4.0) - std::lgamma(a + n - 1.0);
    const LogValue corr = (lnm1 * s).scaled(log_c + (a - 1.0) / 2.0 * std::log(x) - x / 2.0);
    return kernel - corr;
}

// ---------------------------------------------------------------- Jacobi

/// Exact beta = 2 Jacobi density for weight x^{a1} (1-x)^{a2}: weighted
/// Christoffel-Darboux diagonal of the orthonormal shifted-Jacobi family.
inline LogValue exact_density_jacobi_beta2(const JacobiEnsemble& ens, double x, RenormPolicy policy = {})
{
    detail::require_beta(ens.beta(), 2.0, "exact_density_jacobi_beta2");
    if (!(x > 0.0 && x < 1.0)) throw invalid_parameter("exact_density_jacobi_beta2: x must lie in (0,1)");
    const double a1 = ens.exponent1(), a2 = ens.exponent2();
    const auto rec = jacobi01_recurrence(ens.n(), a1, a2);
    return LogValue::from_log(a1 * std::log(x) + a2 * std::log1p(-x) - rec.log_mass +
                              log_kernel_diagonal(rec, ens.n(), x, policy));
}

/// Pieces of the beta = 1 Jacobi construction for a fixed ensemble.  With
/// w1 = x^{b1} (1-x)^{b2} / B(b1+1, b2+1), b_i = (a_i - 1)/2, and q_k the
/// orthonormal family of x^{a1} (1-x)^{a2}:
///   S(x) = int sgn(x-t) w1(t) q_{N-2}(t) dt,
///   J    = int w1(x) q_{N-1}(x) S(x) dx,
///   rho  = kernel - c w1(x) q_{N-1}(x) S(x),  c = -1/J.
class JacobiBeta1 {
public:
    explicit JacobiBeta1(const JacobiEnsemble& ens) : ens_(ens)
    {
        detail::require_beta(ens.beta(), 1.0, "JacobiBeta1");
        n_ = ens.n();
        if (n_ % 2 != 0) throw invalid_parameter("exact_density_jacobi_beta1: N must be even");
        a1_ = ens.exponent1();
        a2_ = ens.exponent2();
        b1_ = (a1_ - 1.0) / 2.0;
        b2_ = (a2_ - 1.0) / 2.0;
        detail::require(b1_ > -1.0 && b2_ > -1.0, "exact_density_jacobi_beta1: exponents too small");
        rec_ = jacobi01_recurrence(n_, a1_, a2_);
        log_b_ = std::lgamma(b1_ + 1.0) + std::lgamma(b2_ + 1.0) - std::lgamma(b1_ + b2_ + 2.0);
        m_ = detail::node_count(n_, 0.5 * (b1_ + b2_));
        gj_b1_ = quad::gauss_jacobi01(m_, b1_, 0.0);
        gj_b2_ = quad::gauss_jacobi01(m_, b2_, 0.0);
        g1_ = quad::gauss_jacobi01(n_ / 2 + 2, b1_, b2_).average([&](double t) { return q(n_ - 2, t); });
        skew_ = compute_skew();
    }

    double q(int k, double t) const { return orthonormal_value(rec_, k, t); }

    /// G(x)/x^{b1+1}, x <= 1/2.
    double g_lower(double x) const
    {
        const double v = gj_b1_.average([&](double s) { return std::pow(1.0 - x * s, b2_) * q(n_ - 2, x * s); });
        return v * std::exp(gj_b1_.log_mass - log_b_);
    }

    /// (G1 - G(x))/(1-x)^{b2+1}, x > 1/2.
    double g_upper(double x) const
    {
        const double y = 1.0 - x;
        const double v = gj_b2_.average([&](double s) { return std::pow(1.0 - y * s, b1_) * q(n_ - 2, 1.0 - y * s); });
        return v * std::exp(gj_b2_.log_mass - log_b_);
    }

    double total() const { return g1_; }

    /// S(x) = 2 G(x) - G1.
    double sgn_integral(double x) const
    {
        if (x <= 0.5) return 2.0 * std::exp((b1_ + 1.0) * std::log(x)) * g_lower(x) - g1_;
        return g1_ - 2.0 * std::exp((b2_ + 1.0) * std::log1p(-x)) * g_upper(x);
    }

    double skew() const { return skew_; }

    LogValue density(double x, Beta1Form form, RenormPolicy policy = {}) const
    {
        if (!(x > 0.0 && x < 1.0)) throw invalid_parameter("exact_density_jacobi_beta1: x must lie in (0,1)");
        const int kn = form == Beta1Form::exact ? n_ - 1 : n_;
        const LogValue kernel = LogValue::from_log(a1_ * std::log(x) + a2_ * std::log1p(-x) - rec_.log_mass +
                                                   log_kernel_diagonal(rec_, kn, x, policy));
        const LogValue qn = orthonormal_sequence(rec_, n_, x, policy).back().to_log();
        const double log_w1 = b1_ * std::log(x) + b2_ * std::log1p(-x) - log_b_;
        // -c = 1/J
        const LogValue corr = (qn * LogValue::from_double(sgn_integral(x)) / LogValue::from_double(skew_)).scaled(log_w1);
        return kernel + corr;
    }

private:
    double compute_skew() const
    {
        // Lower half, x = s/2.
        const auto r_lo2 = quad::gauss_jacobi01(m_, 2.0 * b1_ + 1.0, 0.0);
        const double a_part =
            r_lo2.average([&](double s) { return std::pow(1.0 - s / 2.0, b2_) * q(n_ - 1, s / 2.0) * g_lower(s / 2.0); }) *
            std::exp(r_lo2.log_mass - (2.0 * b1_ + 2.0) * std::log(2.0) - log_b_);
        const double c_part =
            gj_b1_.average([&](double s) { return std::pow(1.0 - s / 2.0, b2_) * q(n_ - 1, s / 2.0); }) *
            std::exp(gj_b1_.log_mass - (b1_ + 1.0) * std::log(2.0) - log_b_);
        // Upper half, x = 1 - s/2.
        const auto r_hi2 = quad::gauss_jacobi01(m_, 2.0 * b2_ + 1.0, 0.0);
        const double d_part =
            r_hi2.average([&](double s) { return std::pow(1.0 - s / 2.0, b1_) * q(n_ - 1, 1.0 - s / 2.0) * g_upper(1.0 - s / 2.0); }) *
            std::exp(r_hi2.log_mass - (2.0 * b2_ + 2.0) * std::log(2.0) - log_b_);
        const double e_part =
            gj_b2_.average([&](double s) { return std::pow(1.0 - s / 2.0, b1_) * q(n_ - 1, 1.0 - s / 2.0); }) *
            std::exp(gj_b2_.log_mass - (b2_ + 1.0) * std::log(2.0) - log_b_);
        // J = int_0^1/2 w1 q (2G - G1) + int_1/2^1 w1 q (G1 - 2 (G1 - G))
        return 2.0 * a_part - g1_ * c_part + g1_ * e_part - 2.0 * d_part;
    }

    JacobiEnsemble ens_;
    int n_ = 0;
    double a1_ = 0, a2_ = 0, b1_ = 0, b2_ = 0, log_b_ = 0, g1_ = 0, skew_ = 0;
    int m_ = 0;
    Recurrence rec_;
    quad::GaussRule gj_b1_, gj_b2_;
};

inline LogValue exact_density_jacobi_beta1(const JacobiEnsemble& ens, double x, Beta1Form form = Beta1Form::exact,
                                           RenormPolicy policy = {})
{
    return JacobiBeta1(ens).density(x, form, policy);
}

} // namespace ldev
