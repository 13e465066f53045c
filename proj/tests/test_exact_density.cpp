#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "ldev/brute_force.hpp"
#include "ldev/bulk_density.hpp"
#include "ldev/exact_density.hpp"
#include "ldev/orthopoly.hpp"
#include "ldev/quadrature.hpp"

using namespace ldev;
using quad128 = boost::multiprecision::cpp_bin_float_quad;
using float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

quad128 laguerre_recurrence_128(int n, const quad128& a, const quad128& x)
{
    quad128 prev = 1, cur = 1 + a - x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const quad128 next = ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

// sum_k (-1)^k binom(n+a, n-k) x^k / k! for integer a
float50 laguerre_explicit_50(int n, int a, const float50& x)
{
    float50 s = 0;
    for (int k = 0; k <= n; ++k) {
        float50 binom = 1;
        for (int j = 1; j <= n - k; ++j) binom = binom * (a + k + j) / j;
        float50 term = binom * boost::multiprecision::pow(x, k);
        for (int j = 2; j <= k; ++j) term /= j;
        s += (k % 2 ? -term : term);
    }
    return s;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// int_0^inf rho via the Gauss rule of the weight x^p e^{-x} (exact for the beta = 2 polynomial part)
template <class Rho>
double laguerre_mass(Rho rho, double p, int nodes)
{
    const auto rule = quad::gauss_laguerre(nodes, p);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = rule.nodes[i];
        s += rule.weights[i] * std::exp(rho(x) - p * std::log(x) + x);
    }
    return s * std::exp(rule.log_mass);
}

} // namespace

TEST(LaguerrePoly, Base)
{
    EXPECT_EQ(laguerre_poly(0, 2.5, 3.0).value.to_double(), 1.0);
    EXPECT_DOUBLE_EQ(laguerre_poly(1, 2.5, 3.0).value.to_double(), 0.5);
    EXPECT_DOUBLE_EQ(laguerre_poly(1, 2.5, 3.0).derivative.to_double(), -1.0);
}

TEST(LaguerrePoly, ExtendedPrecisionOracle)
{
    const auto v = laguerre_poly(30, 30.0, 60.0);
    const double want = static_cast<double>(laguerre_recurrence_128(30, 30, 60));
    EXPECT_TRUE(std::isfinite(v.value.log_abs()));
    EXPECT_LT(rel(v.value.to_double(), want), 1e-12);
    EXPECT_LT(rel(want, static_cast<double>(laguerre_explicit_50(30, 30, 60))), 1e-12);
    const double dwant = -static_cast<double>(laguerre_recurrence_128(29, 31, 60));
    EXPECT_LT(rel(v.derivative.to_double(), dwant), 1e-12);
    for (double x : {0.5, 7.0, 33.0, 95.0}) {
        EXPECT_LT(rel(laguerre_poly(30, 30.0, x).value.to_double(),
                      static_cast<double>(laguerre_recurrence_128(30, 30, quad128(x)))),
                  1e-12)
            << x;
    }
}

TEST(LaguerrePoly, Orthogonality)
{
    const double a = 1.5;
    const auto rule = quad::gauss_laguerre(24, a);
    for (int m = 0; m <= 10; ++m) {
        for (int n = 0; n <= m; ++n) {
            double s = 0.0, dm = 0.0, dn = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const double lm = laguerre_poly(m, a, rule.nodes[i]).value.to_double();
                const double ln = laguerre_poly(n, a, rule.nodes[i]).value.to_double();
                s += rule.weights[i] * lm * ln;
                dm += rule.weights[i] * lm * lm;
                dn += rule.weights[i] * ln * ln;
            }
            if (m != n) EXPECT_LT(std::fabs(s) / std::sqrt(dm * dn), 1e-8);
            else EXPECT_NEAR(s * std::exp(rule.log_mass), std::exp(std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0)),
                             1e-8 * s * std::exp(rule.log_mass));
        }
    }
}

TEST(LaguerrePoly, RenormalizationThresholdInvariance)
{
    for (double x : {1.0, 60.0, 400.0}) {
        const double base = laguerre_poly(30, 30.0, x, {128}).value.log_abs();
        for (int bits : {64, 256, 512}) EXPECT_NEAR(laguerre_poly(30, 30.0, x, {bits}).value.log_abs(), base, 1e-12);
        const LaguerreEnsemble ens(2.0, 30, 1.0);
        const double d = exact_density_laguerre_beta2(ens, x, {128}).log_abs();
        EXPECT_NEAR(exact_density_laguerre_beta2(ens, x, {64}).log_abs(), d, 1e-12 * std::max(1.0, std::fabs(d)));
        EXPECT_NEAR(exact_density_laguerre_beta2(ens, x, {256}).log_abs(), d, 1e-12 * std::max(1.0, std::fabs(d)));
    }
}

TEST(LaguerreBeta2, NormalizationAndSum)
{
    for (int n = 1; n <= 30; ++n) {
        const LaguerreEnsemble ens(2.0, n, 1.0);
        const double mass =
            laguerre_mass([&](double x) { return exact_density_laguerre_beta2(ens, x).log_abs(); }, ens.exponent(), n + 2);
        EXPECT_NEAR(mass / n, 1.0, 1e-8) << n;
    }
    const LaguerreEnsemble ens(2.0, 12, 1.0);
    for (double x : {0.3, 5.0, 40.0, 90.0})
        EXPECT_NEAR(exact_density_laguerre_beta2(ens, x).log_abs(), exact_density_laguerre_beta2_sum(ens, x).log_abs(),
                    1e-10);
}

TEST(LaguerreBeta2, NonnegativeOnGrid)
{
    const LaguerreEnsemble ens(2.0, 24, 1.0);
    for (int i = 1; i <= 1000; ++i) {
        const auto v = exact_density_laguerre_beta2(ens, 0.2 * i);
        EXPECT_GE(v.sign(), 0);
        EXPECT_GE(v.to_double(), 0.0);
    }
    EXPECT_THROW(exact_density_laguerre_beta2(ens, 0.0), invalid_parameter);
}

TEST(LaguerreBeta2, MatchesBruteForce)
{
    const LaguerreEnsemble ens(2.0, 2, 0.0);
    for (double x : {0.1, 1.0, 3.0, 8.0}) {
        const auto bf = brute_force_density(ens, x);
        EXPECT_LT(rel(exact_density_laguerre_beta2(ens, x).to_double(), bf.value), 1e-10) << x;
    }
}

TEST(LaguerreBeta1, NormalizationAndBruteForce)
{
    const LaguerreEnsemble ens(1.0, 6, 1.0);
    auto f = [&](double x) { return exact_density_laguerre_beta1(ens, x).to_double(); };
    const auto r = quad::adaptive(f, 1e-12, 6.0 * (ens.edges().upper + 4.0) + 40.0, 1e-10);
    EXPECT_NEAR(r.value / 6.0, 1.0, 1e-6);
    const LaguerreEnsemble two(1.0, 2, 1.0);
    for (double x : {0.2, 1.0, 4.0, 9.0}) {
        const auto bf = brute_force_density(two, x);
        EXPECT_LT(rel(exact_density_laguerre_beta1(two, x).to_double(), bf.value), 1e-8) << x;
    }
    EXPECT_THROW(exact_density_laguerre_beta1(LaguerreEnsemble(1.0, 5, 1.0), 1.0), invalid_parameter);
    EXPECT_THROW(exact_density_laguerre_beta1(ens, -1.0), invalid_parameter);
}

TEST(JacobiBeta2, NormalizationAndBruteForce)
{
    for (int n : {1, 2, 6, 12, 30}) {
        const JacobiEnsemble ens(2.0, n, 5.0, 5.0);
        const auto rule = quad::gauss_jacobi01(n + 2, ens.exponent1(), ens.exponent2());
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double x = rule.nodes[i];
            s += rule.weights[i] * std::exp(exact_density_jacobi_beta2(ens, x).log_abs() - ens.exponent1() * std::log(x) -
                                            ens.exponent2() * std::log1p(-x) + rule.log_mass);
        }
        EXPECT_NEAR(s / n, 1.0, 1e-8) << n;
    }
    const JacobiEnsemble small(2.0, 3, 1.0 / 3.0, 2.0 / 3.0);
    for (double x : {0.05, 0.3, 0.6, 0.95}) {
        const auto bf = brute_force_density(small, x);
        EXPECT_LT(rel(exact_density_jacobi_beta2(small, x).to_double(), bf.value), 1e-9) << x;
    }
    EXPECT_THROW(exact_density_jacobi_beta2(small, 1.0), invalid_parameter);
}

TEST(JacobiBeta1, BruteForceGate)
{
    const JacobiEnsemble ens(1.0, 4, 5.0, 5.0);
    const Edges& e = ens.edges();
    for (int i = 1; i <= 5; ++i) {
        for (double x : {e.lower * i / 6.0, e.upper + (1.0 - e.upper) * i / 6.0}) {
            const auto bf = brute_force_density(ens, x);
            EXPECT_LT(bf.rel_change, 1e-6);
            EXPECT_LT(rel(exact_density_jacobi_beta1(ens, x).to_double(), bf.value), 1e-6) << x;
        }
    }
    EXPECT_THROW(exact_density_jacobi_beta1(JacobiEnsemble(1.0, 3, 5.0, 5.0), 0.5), invalid_parameter);
}

TEST(JacobiBeta1, Normalization)
{
    const JacobiEnsemble ens(1.0, 6, 5.0, 5.0);
    const JacobiBeta1 j(ens);
    auto f = [&](double x) { return j.density(x, Beta1Form::exact).to_double(); };
    const auto r = quad::adaptive(f, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(r.value / 6.0, 1.0, 1e-6);
}

TEST(BruteForce, SinglePointAndLimits)
{
    // N = 1: density is the normalized weight
    const LaguerreEnsemble one(2.0, 1, 2.0);
    for (double x : {0.5, 2.0, 6.0}) {
        const double want = std::exp(2.0 * std::log(x) - x - std::lgamma(3.0));
        EXPECT_LT(rel(brute_force_density(one, x).value, want), 1e-13);
    }
    EXPECT_THROW(brute_force_density(LaguerreEnsemble(2.0, 7, 1.0), 1.0), invalid_parameter);
}

TEST(BulkConvergence, Beta2BothFlavors)
{
    const auto lag_sup = [](int n) {
        const LaguerreEnsemble ens(2.0, n, 1.0);
        const Edges& e = ens.edges();
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double x = e.lower + e.width() * (0.1 + 0.8 * (i - 0.5) / 20.0);
            const double rho = std::exp(exact_density_laguerre_beta2(ens, n * x).log_abs());
            worst = std::max(worst, std::fabs(rho / mp_density(ens, x) - 1.0));
        }
        return worst;
    };
    const auto jac_sup = [](int n) {
        const JacobiEnsemble ens(2.0, n, 5.0, 5.0);
        const Edges& e = ens.edges();
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double x = e.lower + e.width() * (0.1 + 0.8 * (i - 0.5) / 20.0);
            const double rho = exact_density_jacobi_beta2(ens, x).to_double();
            worst = std::max(worst, std::fabs(rho / (n * jacobi_bulk_density(ens, x)) - 1.0));
        }
        return worst;
    };
    EXPECT_GT(lag_sup(6), lag_sup(12));
    EXPECT_GT(lag_sup(12), lag_sup(24));
    EXPECT_GT(jac_sup(6), jac_sup(12));
    EXPECT_GT(jac_sup(12), jac_sup(24));
}
