#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ldev/large_deviation.hpp"
#include "ldev/ratio_table.hpp"

using namespace ldev;

namespace {

std::vector<double> tail_grid(const Edges& e, double right_end, int per_tail)
{
    std::vector<double> xs;
    for (int i = 1; i <= per_tail; ++i) {
        const double f = static_cast<double>(i) / (per_tail + 1);
        if (e.lower > 0.0) xs.push_back(e.lower * f);
        xs.push_back(e.upper + (right_end - e.upper) * f);
    }
    return xs;
}

} // namespace

TEST(CharPoly, LaguerreLargeX)
{
    const LaguerreEnsemble ens(2.0, 10, 1.0);
    // the moment uses the scale of n+1, so the leading term is n beta log x
    for (double x : {1e6, 1e9})
        EXPECT_NEAR(char_poly_moment_laguerre(ens, x).log_abs() - 10.0 * 2.0 * std::log(x), 0.0, 1e-2 * std::log(x));
}

TEST(CharPoly, RecomposedFromFluctuations)
{
    // n eigenvalues at the scale of n+1: the n+1 recomposition less one
    // eigenvalue's share of the linear mean term
    for (double beta : {1.0, 2.0, 4.0}) {
        const LaguerreEnsemble ens(beta, 10, 1.0);
        const auto big = ens.with_n(11);
        for (double x : {0.1, 10.0, 25.0}) {
            const double expect = char_poly_recomposed_laguerre(big, x) - beta * mean_diff_laguerre(big, x).n_linear / 11.0;
            EXPECT_NEAR(char_poly_moment_laguerre(ens, x).log_abs(), expect, 1e-12 * std::max(1.0, std::fabs(expect)));
        }
        const JacobiEnsemble j(beta, 10, 5.0, 5.0);
        const auto jbig = j.with_n(11);
        for (double x : {0.05, 0.9}) {
            const double expect = char_poly_recomposed_jacobi(jbig, x) - beta * mean_diff_jacobi(jbig, x).n_linear / 11.0;
            EXPECT_NEAR(char_poly_moment_jacobi(j, x).log_abs(), expect, 1e-12 * std::max(1.0, std::fabs(expect)));
        }
    }
}

TEST(CharPoly, JacobiMirror)
{
    const JacobiEnsemble ens(1.0, 10, 2.0, 7.0);
    for (double x : {0.02, 0.6, 0.95}) {
        if (ens.edges().strictly_inside(x)) continue;
        EXPECT_NEAR(char_poly_moment_jacobi(ens, x).log_abs(), char_poly_moment_jacobi(ens.mirrored(), 1.0 - x).log_abs(),
                    1e-10);
    }
}

TEST(NormRatio, ExactAgainstStirling)
{
    const auto gap = [](int n) {
        const auto r = norm_ratio_laguerre(LaguerreEnsemble(2.0, n, 1.0));
        return std::fabs(r.exact.log_abs() - r.stirling.log_abs());
    };
    EXPECT_LT(gap(12), gap(6));
    EXPECT_LT(gap(24), gap(12));
    EXPECT_LT(gap(96), 0.05);
    const auto jgap = [](int n) {
        const auto r = norm_ratio_jacobi(JacobiEnsemble(2.0, n, 5.0, 5.0));
        return std::fabs(r.exact.log_abs() - r.stirling.log_abs());
    };
    EXPECT_LT(jgap(48), jgap(12));
    EXPECT_LT(jgap(192), 0.05);
}

TEST(NormRatio, PartitionSmallCases)
{
    // n = 1: int x^p e^{-c x} = Gamma(p+1) / c^{p+1}
    EXPECT_NEAR(log_partition_laguerre(2.0, 1, 3.0, 2.0), std::lgamma(4.0) - 4.0 * std::log(2.0), 1e-13);
    // n = 1 Jacobi: Beta(p1+1, p2+1)
    EXPECT_NEAR(log_partition_jacobi(2.0, 1, 2.0, 3.0), std::lgamma(3.0) + std::lgamma(4.0) - std::lgamma(7.0), 1e-13);
}

TEST(AsymDensity, FactorsSumToTotal)
{
    const LaguerreEnsemble ens(1.0, 12, 1.0);
    for (double x : tail_grid(ens.edges(), 20.0, 5)) {
        const auto d = asym_density_laguerre(ens, x);
        EXPECT_NEAR(d.log(), d.factors[0] + d.factors[1] + d.factors[2], 1e-14 * std::max(1.0, std::fabs(d.log())));
        EXPECT_NEAR(d.factors[0], ens.n() * d.rate, 1e-12 * std::max(1.0, std::fabs(d.factors[0])));
    }
    EXPECT_THROW(asym_density_laguerre(ens, 2.0), invalid_parameter);
    EXPECT_THROW(asym_density_jacobi(JacobiEnsemble(2.0, 6, 5.0, 5.0), 0.5), invalid_parameter);
}

TEST(AsymDensity, AssemblyConsistency)
{
    for (double beta : {1.0, 2.0, 4.0}) {
        const LaguerreEnsemble ens(beta, 12, 1.0);
        for (double x : tail_grid(ens.edges(), 20.0, 5))
            EXPECT_NEAR(asym_density_laguerre(ens, x).log(), assembled_log_density_laguerre(ens, x), 1e-10) << x;
        const JacobiEnsemble j(beta, 12, 2.0, 7.0);
        for (double x : tail_grid(j.edges(), 0.999, 5))
            EXPECT_NEAR(asym_density_jacobi(j, x).log(), assembled_log_density_jacobi(j, x), 1e-10) << x;
    }
}

TEST(AsymDensity, JacobiMirror)
{
    const JacobiEnsemble ens(2.0, 10, 2.0, 7.0);
    for (double x : tail_grid(ens.edges(), 0.995, 6))
        EXPECT_NEAR(asym_density_jacobi(ens, x).log(), asym_density_jacobi(ens.mirrored(), 1.0 - x).log(), 1e-12);
}

TEST(AsymDensity, TabulatedRatios)
{
    const auto lag2 = default_ratio_table(Flavor::Laguerre, 2.0);
    EXPECT_NEAR(ratio_cell(lag2, 6, 10.0).ratio, 1.122, 0.005);
    const auto lag1 = default_ratio_table(Flavor::Laguerre, 1.0);
    EXPECT_NEAR(ratio_cell(lag1, 30, 0.1).ratio, 1.023, 0.005);
    const auto jac2 = default_ratio_table(Flavor::Jacobi, 2.0);
    EXPECT_NEAR(ratio_cell(jac2, 6, 0.8).ratio, 1.866, 0.005);
    EXPECT_NEAR(ratio_cell(jac2, 6, 0.9).ratio, 1.115, 0.005);
    const auto jac1 = default_ratio_table(Flavor::Jacobi, 1.0);
    EXPECT_NEAR(ratio_cell(jac1, 30, 0.9).ratio, 1.011, 0.01);
}

TEST(Rates, LogFormAgainstPhiForm)
{
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const LaguerreEnsemble ens(2.0, 100, alpha);
        for (int i = 0; i < 100; ++i) {
            const double x = ens.edges().lower * u(g);
            const auto r = rate_identity_checks(ens, x);
            ASSERT_TRUE(r.diff_log_phi.has_value());
            EXPECT_LT(*r.diff_log_phi, 1e-10) << x;
        }
        EXPECT_FALSE(rate_phi_form(ens, ens.edges().upper + 1.0).has_value());
    }
}

TEST(Rates, KappaOnBothTails)
{
    for (double alpha : {0.5, 1.0, 2.0}) {
        const LaguerreEnsemble ens(2.0, 100, alpha);
        for (double x : tail_grid(ens.edges(), ens.edges().upper + 3.0 * ens.edges().width(), 20)) {
            const auto r = rate_identity_checks(ens, x);
            ASSERT_TRUE(r.diff_log_kappa.has_value());
            EXPECT_LT(*r.diff_log_kappa, 1e-10) << x;
            EXPECT_LT(r.diff_log_headline, 1e-10) << x;
            // the displayed sign of u differs from the log form by exactly 2u
            EXPECT_NEAR(kappa(ens, x) - kappa_printed(ens, x), 2.0 * ens.u(x), 1e-12);
        }
    }
}

TEST(Rates, Arcosh)
{
    for (double y : {1.0, 1.5, 2.0, 10.0, 1e3, 1e8, 1.0000001, 3.3, 42.0, 7.0})
        EXPECT_NEAR(arcosh(y), std::acosh(y), 1e-12 * std::max(1.0, std::acosh(y)));
}
