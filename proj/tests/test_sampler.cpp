#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "ldev/bulk_density.hpp"
#include "ldev/checks.hpp"
#include "ldev/exact_density.hpp"
#include "ldev/quadrature.hpp"
#include "ldev/sampler.hpp"

using namespace ldev;

namespace {

// Histogram bins against bin averages of a reference density; returns max |z|.
template <class Ref>
double worst_z(const EmpiricalSummary& h, Ref ref)
{
    double worst = 0.0;
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
        const double lo = h.bin_edges[b], hi = h.bin_edges[b + 1];
        const double expect = quad::adaptive(ref, lo, hi, 1e-10).value / (hi - lo);
        if (h.standard_errors[b] == 0.0) {
            EXPECT_LT(expect, 1e-4);
            continue;
        }
        worst = std::max(worst, std::fabs(h.estimates[b] - expect) / h.standard_errors[b]);
    }
    return worst;
}

} // namespace

TEST(Rng, SeedsAreStable)
{
    EXPECT_NE(rng::sample_seed(1, 0), rng::sample_seed(1, 1));
    EXPECT_NE(rng::sample_seed(1, 0), rng::sample_seed(2, 0));
    rng::Stream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
    EXPECT_THROW(a.gamma(0.0), invalid_parameter);
}

TEST(Rng, GammaMoments)
{
    rng::Stream s(9);
    for (double k : {0.4, 1.0, 3.5}) {
        double m = 0.0, m2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double g = s.gamma(k);
            m += g;
            m2 += g * g;
        }
        m /= n;
        m2 /= n;
        EXPECT_NEAR(m, k, 5.0 * std::sqrt(k / n));
        EXPECT_NEAR(m2 - m * m, k, 0.03 * k + 5.0 * std::sqrt((6.0 * k + 2.0 * k * k) / n));
    }
}

TEST(Spectrum, SortedAndInDomain)
{
    const LaguerreEnsemble l(1.0, 30, 1.0);
    const JacobiEnsemble j(4.0, 30, 2.0, 7.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = sample_laguerre(l, seed).eigenvalues;
        const auto b = sample_jacobi(j, seed).eigenvalues;
        ASSERT_EQ(a.size(), 30u);
        EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
        EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
        EXPECT_GT(a.front(), 0.0);
        EXPECT_GT(b.front(), 0.0);
        EXPECT_LT(b.back(), 1.0);
    }
    EXPECT_EQ(sample_laguerre(l, 5).eigenvalues, sample_laguerre(l, 5).eigenvalues);
}

TEST(Spectrum, SinglePointLaws)
{
    // N = 1: Laguerre is Gamma(power + 1) scaled by 2/beta, Jacobi is Beta
    const int n = 40000;
    double lag = 0.0, jac = 0.0;
    for (int i = 0; i < n; ++i) {
        rng::Stream s(rng::sample_seed(7, i));
        lag += laguerre_spectrum(1.0, 1, 1.5, s)[0];
        jac += jacobi_spectrum(2.0, 1, 2.0, 4.0, s)[0];
    }
    // weight lambda^{1.5} e^{-lambda/2}: mean 2 * 2.5
    EXPECT_NEAR(lag / n, 5.0, 5.0 * std::sqrt(10.0 / n));
    // weight x^2 (1-x)^4: Beta(3, 5), mean 3/8
    EXPECT_NEAR(jac / n, 0.375, 5.0 * std::sqrt(0.026 / n));
}

TEST(Spectrum, MatchesExactSmallN)
{
    SamplingOptions opt;
    opt.n_samples = 20000;
    opt.bins = 20;
    opt.seed = 11;
    const LaguerreEnsemble l(1.0, 4, 1.0);
    opt.lo = 0.0;
    opt.hi = 4.0 * l.edges().upper;
    const auto hl = estimate_density(l, opt);
    EXPECT_LT(worst_z(hl, [&](double x) { return x > 0.0 ? exact_density_laguerre_beta1(l, 4.0 * x).to_double() : 0.0; }),
              4.5);
    const JacobiEnsemble j(1.0, 4, 5.0, 5.0);
    opt.lo = 0.0;
    opt.hi = 1.0;
    const auto hj = estimate_density(j, opt);
    std::uint64_t total = std::accumulate(hj.counts.begin(), hj.counts.end(), std::uint64_t{0});
    EXPECT_EQ(total, opt.n_samples * 4);
    const JacobiBeta1 exact(j);
    EXPECT_LT(worst_z(hj, [&](double x) { return x > 0.0 && x < 1.0 ? exact.density(x, Beta1Form::exact).to_double() / 4.0 : 0.0; }),
              4.5);
}

TEST(Estimators, ThreadCountInvariance)
{
    const JacobiEnsemble j(2.0, 20, 5.0, 5.0);
    SamplingOptions opt;
    opt.n_samples = 500;
    opt.seed = 99;
    const auto a = estimate_density(j, opt);
    opt.threads = 3;
    const auto b = estimate_density(j, opt);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.estimates, b.estimates);
    const std::vector<double> s = {0.01, 0.02, 0.05};
    EXPECT_EQ(estimate_gap_probability(2.0, 20, 0.0, s, 300, 5, 1).counts,
              estimate_gap_probability(2.0, 20, 0.0, s, 300, 5, 4).counts);
}

TEST(Estimators, BulkHistogramSmall)
{
    SamplingOptions opt;
    // at N = 50 the finite-N bias already exceeds the noise of 2000 samples,
    // so use a larger N with fewer samples
    opt.n_samples = 500;
    opt.seed = 4;
    const LaguerreEnsemble l(2.0, 200, 1.0);
    const auto rep = check_bulk_histogram(l, [&](double x) { return mp_density(l, x); }, opt, 4.0);
    EXPECT_TRUE(rep.pass()) << rep.worst()->residual;
}

TEST(Estimators, MaxPdfNormalized)
{
    const LaguerreEnsemble l(2.0, 10, 1.0);
    SamplingOptions opt;
    opt.n_samples = 2000;
    opt.lo = 0.0;
    opt.hi = 20.0;
    const auto h = estimate_max_pdf(l, opt);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.estimates.size(); ++b) mass += h.estimates[b] * (h.bin_edges[b + 1] - h.bin_edges[b]);
    EXPECT_NEAR(mass, 1.0, 1e-12);
    opt.n_samples = 10;
    EXPECT_THROW(estimate_max_pdf(l, opt), invalid_parameter);
}

TEST(Estimators, GapProbabilitySinglePoint)
{
    // N = 1, beta = 2, a = 0: the eigenvalue is Exp(1), so E(0; (0,s)) = e^{-s}
    const std::vector<double> s = {0.1, 0.5, 1.0, 2.0};
    const auto g = estimate_gap_probability(2.0, 1, 0.0, s, 40000, 3);
    for (std::size_t i = 0; i < s.size(); ++i)
        EXPECT_NEAR(g.estimates[i], std::exp(-s[i]), 5.0 * g.standard_errors[i] + 1e-12);
    EXPECT_THROW(estimate_gap_probability(2.0, 1, -1.0, s, 10, 3), invalid_parameter);
}

TEST(Estimators, SlopeFitOnExactData)
{
    EmpiricalSummary e;
    e.n_samples = 2000000; // every point below n_samples, so all eight are used
    std::vector<double> xs;
    for (int i = 0; i < 8; ++i) {
        xs.push_back(i);
        e.counts.push_back(static_cast<std::uint64_t>(std::llround(1e6 * std::exp(-0.5 * i))));
    }
    const auto fit = fit_log_slope(xs, e);
    EXPECT_NEAR(fit.slope, -0.5, 1e-5);
    EXPECT_EQ(fit.points, 8);
    EmpiricalSummary empty;
    empty.n_samples = 10;
    empty.counts = {0, 0};
    EXPECT_THROW(fit_log_slope({1.0, 2.0}, empty), nonconvergence);
}
