#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ldev/bulk_density.hpp"
#include "ldev/quadrature.hpp"

using namespace ldev;

namespace {

// Integral over the support after t = center + half cos(theta), which removes
// the square-root edges; adaptive Gauss-Kronrod on (0, pi).
template <class F>
double support_integral(const Edges& e, F f)
{
    const double c = e.center(), h = 0.5 * e.width();
    auto g = [&](double th) { return f(c + h * std::cos(th)) * h * std::sin(th); };
    const auto r = quad::adaptive(g, 0.0, std::numbers::pi, 1e-13);
    EXPECT_TRUE(r.converged);
    return r.value;
}

} // namespace

TEST(MpDensity, Midpoint)
{
    const LaguerreEnsemble ens(2.0, 10, 0.0);
    EXPECT_NEAR(mp_density(ens, 2.0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
}

TEST(MpDensity, VanishesAtSoftEdge)
{
    const LaguerreEnsemble ens(2.0, 10, 1.0);
    const double b = ens.edges().upper;
    const double d1 = mp_density(ens, b - 1e-6), d2 = mp_density(ens, b - 4e-6);
    EXPECT_LT(d1, 1e-3);
    EXPECT_NEAR(d2 / d1, 2.0, 1e-5);
}

TEST(MpDensity, Normalized)
{
    for (double a : {0.5, 1.0, 2.0, 9.0}) {
        const LaguerreEnsemble ens(2.0, 10, a);
        EXPECT_NEAR(support_integral(ens.edges(), [&](double t) { return mp_density(ens, t); }), 1.0, 1e-10);
    }
}

TEST(MpDensity, RejectsOutside)
{
    const LaguerreEnsemble ens(2.0, 10, 1.0);
    EXPECT_THROW(mp_density(ens, 10.0), invalid_parameter);
    EXPECT_THROW(mp_density(ens, ens.edges().upper), invalid_parameter);
}

TEST(JacobiBulk, Midpoint)
{
    const JacobiEnsemble ens(2.0, 10, 0.0, 0.0);
    EXPECT_NEAR(jacobi_bulk_density(ens, 0.5), 2.0 / std::numbers::pi, 1e-14);
}

TEST(JacobiBulk, NormalizedAndMirrored)
{
    for (auto [a1, a2] : {std::pair{5.0, 5.0}, std::pair{2.0, 7.0}, std::pair{0.3, 1.5}}) {
        const JacobiEnsemble ens(2.0, 10, a1, a2);
        EXPECT_NEAR(support_integral(ens.edges(), [&](double t) { return jacobi_bulk_density(ens, t); }), 1.0, 1e-10);
        const JacobiEnsemble m = ens.mirrored();
        for (double f : {0.1, 0.4, 0.77}) {
            const double x = ens.edges().lower + f * ens.edges().width();
            EXPECT_NEAR(jacobi_bulk_density(ens, x), jacobi_bulk_density(m, 1.0 - x), 1e-12);
        }
    }
    EXPECT_THROW(jacobi_bulk_density(JacobiEnsemble(2.0, 10, 5.0, 5.0), 0.9), invalid_parameter);
}

TEST(CorrectedDensity, Coefficients)
{
    const auto c2 = corrected_density(LaguerreEnsemble(2.0, 8, 1.0));
    EXPECT_EQ(c2.atom_lower, 0.0);
    EXPECT_EQ(c2.atom_upper, 0.0);
    EXPECT_EQ(c2.inv_sqrt_coeff, 0.0);
    const auto c1 = corrected_density(LaguerreEnsemble(1.0, 8, 1.0));
    EXPECT_DOUBLE_EQ(c1.atom_lower, 0.25);
    EXPECT_DOUBLE_EQ(c1.atom_upper, 0.25);
    EXPECT_DOUBLE_EQ(c1.inv_sqrt_coeff, 0.5);
    const auto c4 = corrected_density(JacobiEnsemble(4.0, 8, 5.0, 5.0));
    EXPECT_DOUBLE_EQ(c4.atom_lower, -0.125);
    EXPECT_DOUBLE_EQ(c4.inv_sqrt_coeff, -0.25);
}

TEST(CorrectedDensity, CorrectionIntegratesToZero)
{
    for (double beta : {1.0, 2.0, 4.0, 0.5}) {
        const int n = 12;
        const auto check = [&](const CorrectedDensity& c) {
            const double smooth = support_integral(c.edges, c.smooth);
            // the inverse square root term integrates to -coeff exactly; use Chebyshev-1 nodes
            const auto rule = quad::gauss_chebyshev1(40);
            const double h = 0.5 * c.edges.width(), m = c.edges.center();
            const double inv = rule.integrate([&](double s) {
                const double t = m + h * s;
                return h * c.inv_sqrt_term(t) * std::sqrt(1.0 - s * s);
            });
            EXPECT_NEAR(inv, -c.inv_sqrt_coeff, 1e-12);
            EXPECT_NEAR(smooth + c.atom_lower + c.atom_upper + inv, n, 1e-8);
        };
        check(corrected_density(LaguerreEnsemble(beta, n, 1.0)));
        check(corrected_density(JacobiEnsemble(beta, n, 2.0, 7.0)));
    }
}
