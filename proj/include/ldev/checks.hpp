#pragma once

// Named verification suites shared by the command-line tool and the test
// binaries. Each suite reports a residual and a tolerance per item.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ldev/brute_force.hpp"
#include "ldev/bulk_density.hpp"
#include "ldev/ensemble.hpp"
#include "ldev/exact_density.hpp"
#include "ldev/fluctuation.hpp"
#include "ldev/large_deviation.hpp"
#include "ldev/oracles.hpp"
#include "ldev/quadrature.hpp"
#include "ldev/ratio_table.hpp"
#include "ldev/sampler.hpp"
#include "ldev/soft_edge.hpp"

namespace ldev {

struct CheckItem {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::string suite;
    std::vector<CheckItem> items;
    double seconds = 0.0;

    bool pass() const
    {
        return !items.empty() && std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
    }

    /// First failing item, or the item closest to its tolerance when all pass.
    const CheckItem* worst() const
    {
        const CheckItem* w = nullptr;
        double score = -1.0;
        for (const auto& i : items) {
            if (!i.pass) return &i;
            const double r = i.tolerance > 0.0 ? i.residual / i.tolerance : 0.0;
            if (r > score) {
                score = r;
                w = &i;
            }
        }
        return w;
    }

    void add(std::string name, double residual, double tolerance)
    {
        // NaN residuals fail
        items.push_back({std::move(name), residual, tolerance, residual <= tolerance});
    }
};

/// Default thresholds; the command-line tool can replace them from a config file.
struct Tolerances {
    double rates = 1e-10;
    double fluctuation = 1e-8;
    double normalization_beta2 = 1e-8;
    double normalization_beta1 = 1e-6;
    double brute_force = 1e-6;
    double table_beta2 = 0.005;
    double table_laguerre_beta1 = 0.005;
    double table_jacobi_beta1 = 0.01;
    double scaling = 0.05;
    double bulk_z = 4.0;
    double hard_edge_slope = 0.15;
};

namespace detail {

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::string fmt_point(const char* label, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", label, v);
    return buf;
}

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

// running maximum that keeps a NaN once seen
inline double worse(double acc, double v) { return std::isnan(acc) || std::isnan(v) ? std::nan("") : std::max(acc, v); }

} // namespace detail

// ---------------------------------------------------------------- rates

/// The log form of the rate against the phi form at random left-tail points
/// for each alpha, and against -kappa at beta = 2 on both tails.
inline CheckReport check_rates(const std::vector<double>& alphas = {0.5, 1.0, 2.0}, int points = 100,
                               std::uint64_t seed = 1, double tol = Tolerances{}.rates)
{
    detail::Stopwatch sw;
    CheckReport rep{"rates", {}, 0.0};
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (double alpha : alphas) {
        const LaguerreEnsemble ens(2.0, 100, alpha);
        const Edges& e = ens.edges();
        double worst_phi = 0.0, worst_kappa = 0.0;
        for (int i = 0; i < points; ++i) {
            const double x = e.lower * unit(gen);
            const auto r = rate_identity_checks(ens, x);
            worst_phi = detail::worse(worst_phi, r.diff_log_phi.value_or(std::nan("")));
            worst_kappa = detail::worse(worst_kappa, r.diff_log_kappa.value_or(std::nan("")));
        }
        for (int i = 0; i < points; ++i) {
            const double x = e.upper + 3.0 * e.width() * unit(gen);
            worst_kappa = detail::worse(worst_kappa, rate_identity_checks(ens, x).diff_log_kappa.value_or(std::nan("")));
        }
        rep.add("log vs phi form, left tail, " + detail::fmt_point("alpha", alpha), worst_phi, tol);
        rep.add("log form vs -kappa, both tails, " + detail::fmt_point("alpha", alpha), worst_kappa, tol);
    }
    rep.seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------- fluctuation

/// Tail grids placed as fractions of each tail: 20 points per tail.
inline std::vector<double> laguerre_tail_grid(const Edges& e, int per_tail = 20)
{
    std::vector<double> xs;
    for (int i = 0; i < per_tail; ++i) {
        const double f = per_tail == 1 ? 0.5 : static_cast<double>(i) / (per_tail - 1);
        xs.push_back(e.lower * (0.05 + 0.9 * f));
        xs.push_back(e.upper + e.width() * (0.05 + 2.95 * f));
    }
    return xs;
}

inline std::vector<double> jacobi_tail_grid(const Edges& e, int per_tail = 20)
{
    std::vector<double> xs;
    for (int i = 0; i < per_tail; ++i) {
        const double f = per_tail == 1 ? 0.5 : static_cast<double>(i) / (per_tail - 1);
        xs.push_back(e.lower * (0.05 + 0.9 * f));
        xs.push_back(e.upper + (1.0 - e.upper) * (0.05 + 0.9 * f));
    }
    return xs;
}

/// Every closed-form mean and variance piece against its numerical counterpart.
inline CheckReport check_fluctuation(double tol = Tolerances{}.fluctuation, int n = 50)
{
    detail::Stopwatch sw;
    CheckReport rep{"fluctuation", {}, 0.0};
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (double beta : {1.0, 2.0, 4.0}) {
            const LaguerreEnsemble ens(beta, n, alpha);
            double mean = 0.0, var = 0.0, coeff = 0.0, mp = 0.0, arc = 0.0;
            for (double x : laguerre_tail_grid(ens.edges())) {
                const auto md = mean_diff_laguerre(ens, x);
                mean = detail::worse(mean, detail::rel_diff(md.total(), oracle::mean_diff_laguerre(ens, x)));
                mp = detail::worse(mp, std::fabs(mp_log_integral(ens, x) - oracle::mp_log_integral(ens, x)));
                arc = detail::worse(arc, std::fabs(arcsine_log_integral(ens, x) -
                                              oracle::arcsine_log_integral(ens.edges(), x)));
                var = detail::worse(var, std::fabs(variance_diff_laguerre(ens, x) - oracle::variance_series_laguerre(ens, x).value));
                const auto with = cheb_coeffs_laguerre(ens, {Flavor::Laguerre, Choice::WithLog, x}, 20);
                const auto without = cheb_coeffs_laguerre(ens, {Flavor::Laguerre, Choice::WithoutLog, x}, 20);
                const auto o = oracle::cheb_log_coefficients(x_tilde(x, ens.edges()), 20);
                for (int k = 0; k < 20; ++k) coeff = detail::worse(coeff, std::fabs(with.a[k] - without.a[k] - o[k]));
            }
            const std::string tag = " laguerre " + detail::fmt_point("alpha", alpha) + " " + detail::fmt_point("beta", beta);
            rep.add("mean difference (relative)" + tag, mean, tol);
            rep.add("log integral against bulk law" + tag, mp, tol);
            rep.add("arcsine log integral" + tag, arc, tol);
            rep.add("variance difference" + tag, var, tol);
            rep.add("log coefficients" + tag, coeff, tol);
        }
    }
    for (auto [a1, a2] : {std::pair{5.0, 5.0}, std::pair{2.0, 7.0}}) {
        for (double beta : {1.0, 2.0, 4.0}) {
            const JacobiEnsemble ens(beta, n, a1, a2);
            double mean = 0.0, var = 0.0, stieltjes = 0.0, pot_forms = 0.0, pot = 0.0;
            for (double x : jacobi_tail_grid(ens.edges())) {
                const auto md = mean_diff_jacobi(ens, x);
                mean = detail::worse(mean, detail::rel_diff(md.total(), oracle::mean_diff_jacobi(ens, x)));
                const auto p = jacobi_log_potential(ens, x);
                pot = detail::worse(pot, std::fabs(p.value() - oracle::jacobi_log_potential(ens, x)));
                pot_forms = detail::worse(pot_forms, std::fabs(p.antiderivative_form - p.simplified_form));
                stieltjes = detail::worse(stieltjes, std::fabs(jacobi_stieltjes(ens, x) - oracle::jacobi_stieltjes(ens, x)));
                var = detail::worse(var, std::fabs(variance_diff_jacobi(ens, x) - oracle::variance_series_jacobi(ens, x).value));
            }
            const std::string tag = " jacobi " + detail::fmt_point("alpha1", a1) + " " + detail::fmt_point("alpha2", a2) +
                                    " " + detail::fmt_point("beta", beta);
            rep.add("mean difference (relative)" + tag, mean, tol);
            rep.add("log potential" + tag, pot, tol);
            rep.add("log potential, two forms" + tag, pot_forms, tol);
            rep.add("stieltjes transform" + tag, stieltjes, tol);
            rep.add("variance difference" + tag, var, tol);
        }
    }
    rep.seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------- normalization

/// Beta = 2 densities against exact Gauss rules for their weight; beta = 1
/// densities by adaptive quadrature.
inline CheckReport check_normalization(double tol2 = Tolerances{}.normalization_beta2,
                                       double tol1 = Tolerances{}.normalization_beta1, int n_max = 30)
{
    detail::Stopwatch sw;
    CheckReport rep{"normalization", {}, 0.0};
    for (double alpha : {1.0, 0.5}) {
        double worst = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            const LaguerreEnsemble ens(2.0, n, alpha);
            const double a = ens.exponent();
            const auto rule = quad::gauss_laguerre(n + 2, a);
            const double mass = std::exp(rule.log_mass) * rule.average([&](double x) {
                return std::exp(exact_density_laguerre_beta2(ens, x).log_abs() - a * std::log(x) + x);
            });
            worst = detail::worse(worst, std::fabs(mass / n - 1.0));
        }
        rep.add("laguerre beta=2 N<=" + std::to_string(n_max) + " " + detail::fmt_point("alpha", alpha), worst, tol2);
    }
    for (auto [a1, a2] : {std::pair{5.0, 5.0}, std::pair{2.0, 7.0}}) {
        double worst = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            const JacobiEnsemble ens(2.0, n, a1, a2);
            const double p = ens.exponent1(), q = ens.exponent2();
            const auto rule = quad::gauss_jacobi01(n + 2, p, q);
            const double mass = std::exp(rule.log_mass) * rule.average([&](double x) {
                return std::exp(exact_density_jacobi_beta2(ens, x).log_abs() - p * std::log(x) - q * std::log1p(-x));
            });
            worst = detail::worse(worst, std::fabs(mass / n - 1.0));
        }
        rep.add("jacobi beta=2 N<=" + std::to_string(n_max) + " " + detail::fmt_point("alpha1", a1) + " " +
                    detail::fmt_point("alpha2", a2),
                worst, tol2);
    }
    {
        double worst = 0.0;
        for (int n = 2; n <= n_max; n += 2) {
            const LaguerreEnsemble ens(1.0, n, 1.0);
            // beyond N (upper edge + 4) the density is below e^{-N}
            const double cut = n * (ens.edges().upper + 4.0) + 40.0;
            const auto r = quad::adaptive([&](double x) { return exact_density_laguerre_beta1(ens, x).to_double(); }, 0.0,
                                          cut, 1e-10, 1e-300, 20000);
            worst = detail::worse(worst, r.converged ? std::fabs(r.value / n - 1.0) : std::nan(""));
        }
        rep.add("laguerre beta=1 even N<=" + std::to_string(n_max) + " alpha=1", worst, tol1);
    }
    {
        double worst = 0.0;
        for (int n = 2; n <= n_max; n += 2) {
            const JacobiBeta1 jb(JacobiEnsemble(1.0, n, 5.0, 5.0));
            const auto r = quad::adaptive([&](double x) { return jb.density(x, Beta1Form::exact).to_double(); }, 0.0,
                                          1.0, 1e-10, 1e-300, 20000);
            worst = detail::worse(worst, r.converged ? std::fabs(r.value / n - 1.0) : std::nan(""));
        }
        rep.add("jacobi beta=1 even N<=" + std::to_string(n_max) + " alpha1=5 alpha2=5", worst, tol1);
    }
    rep.seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------- brute force

struct BruteForceCase {
    Flavor flavor = Flavor::Laguerre;
    double beta = 2.0;
    int n = 2;
    double alpha1 = 1.0;
    double alpha2 = 0.0;
};

/// Ten tail points: five per tail, in the variable of the exact formula
/// (unscaled for Laguerre).
inline std::vector<double> brute_force_points(const BruteForceCase& c)
{
    std::vector<double> xs;
    if (c.flavor == Flavor::Laguerre) {
        const Edges e = laguerre_support(c.alpha1);
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) xs.push_back(c.n * e.lower * f);
        for (double f : {0.1, 0.3, 0.6, 1.0, 1.5}) xs.push_back(c.n * (e.upper + e.width() * f));
    } else {
        const Edges e = jacobi_support(c.alpha1, c.alpha2);
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) xs.push_back(e.lower * f);
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) xs.push_back(e.upper + (1.0 - e.upper) * f);
    }
    return xs;
}

inline double formula_density(const BruteForceCase& c, double x)
{
    if (c.flavor == Flavor::Laguerre) {
        const LaguerreEnsemble ens(c.beta, c.n, c.alpha1);
        return c.beta == 2.0 ? exact_density_laguerre_beta2(ens, x).log_abs()
                             : exact_density_laguerre_beta1(ens, x, Beta1Form::exact).log_abs();
    }
    const JacobiEnsemble ens(c.beta, c.n, c.alpha1, c.alpha2);
    return c.beta == 2.0 ? exact_density_jacobi_beta2(ens, x).log_abs()
                         : exact_density_jacobi_beta1(ens, x, Beta1Form::exact).log_abs();
}

inline std::string describe(const BruteForceCase& c)
{
    std::string s = std::string(to_string(c.flavor)) + " " + detail::fmt_point("beta", c.beta) + " N=" + std::to_string(c.n) +
                    " " + detail::fmt_point("alpha1", c.alpha1);
    if (c.flavor == Flavor::Jacobi) s += " " + detail::fmt_point("alpha2", c.alpha2);
    return s;
}

/// For each case: the worst relative gap between formula and oracle over the
/// ten points, and separately the oracle's own convergence monitor. A case
/// passes only when both are below tol.
inline CheckReport check_brute_force(const std::vector<BruteForceCase>& cases, double tol = Tolerances{}.brute_force,
                                     int threads = 1)
{
    detail::Stopwatch sw;
    CheckReport rep{"brute_force", {}, 0.0};
    BruteForceOptions opt;
    opt.threads = threads;
    for (const auto& c : cases) {
        double gap = 0.0, monitor = 0.0;
        for (double x : brute_force_points(c)) {
            const double a1 = c.alpha1 * c.n, a2 = c.alpha2 * c.n;
            const auto bf = brute_force_density(c.flavor, c.beta, c.n, a1, a2, x, opt);
            const double f = std::exp(formula_density(c, x));
            gap = detail::worse(gap, std::fabs(f - bf.value) / std::fabs(bf.value));
            monitor = detail::worse(monitor, bf.rel_change);
        }
        rep.add("formula vs oracle " + describe(c), gap, tol);
        rep.add("oracle convergence " + describe(c), monitor, tol);
    }
    rep.seconds = sw.seconds();
    return rep;
}

inline std::vector<BruteForceCase> default_brute_force_cases()
{
    std::vector<BruteForceCase> cases;
    for (int n : {2, 4, 6}) cases.push_back({Flavor::Laguerre, 2.0, n, 1.0, 0.0});
    for (int n : {2, 4, 6}) cases.push_back({Flavor::Laguerre, 1.0, n, 1.0, 0.0});
    for (int n : {2, 3, 4, 6}) cases.push_back({Flavor::Jacobi, 2.0, n, 5.0, 5.0});
    for (int n : {2, 4, 6}) cases.push_back({Flavor::Jacobi, 1.0, n, 5.0, 5.0});
    return cases;
}

// ---------------------------------------------------------------- tables

/// Cells against their tabulated values. The suspect cell is reported but
/// excluded from pass/fail when it carries the annotation.
inline CheckReport check_table(const RatioTableSpec& spec, double tol)
{
    detail::Stopwatch sw;
    CheckReport rep{std::string("table ") + to_string(spec.flavor) + " beta=" + (spec.beta == 1.0 ? "1" : "2"), {}, 0.0};
    const auto t = ratio_table(spec);
    for (const auto& c : t.cells) {
        if (!c.printed) continue;
        const std::string name = "N=" + std::to_string(c.n) + " " + detail::fmt_point("x", c.x) +
                                 detail::fmt_point(" computed", c.ratio) + detail::fmt_point(" printed", *c.printed);
        if (!c.annotation.empty()) {
            rep.items.push_back({name + " [" + c.annotation + "]", std::fabs(c.ratio - *c.printed), tol, true});
            continue;
        }
        rep.add(name, std::fabs(c.ratio - *c.printed), tol);
    }
    rep.seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------- scaling

/// Ratio to the soft-edge tail law within tol of one at N = 10^4, and closer
/// to one there than at N = 10^2.
inline CheckReport check_scaling(double tol = Tolerances{}.scaling)
{
    detail::Stopwatch sw;
    CheckReport rep{"scaling", {}, 0.0};
    const std::vector<double> X = {2.0, 4.0, 6.0};
    const std::vector<int> N = {100, 10000};
    auto one = [&](const std::string& label, const std::vector<ScalingRow>& rows) {
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
            const auto& lo = rows[i];
            const auto& hi = rows[i + 1];
            const std::string tag = label + " " + detail::fmt_point("beta", hi.beta) + " " + detail::fmt_point("X", hi.X);
            if (hi.edge_band || lo.edge_band) {
                rep.add(tag + " outside tail", std::nan(""), tol);
                continue;
            }
            rep.add(tag + detail::fmt_point(" ratio(N=1e4)", hi.ratio), std::fabs(hi.ratio - 1.0), tol);
            rep.add(tag + " improves from N=1e2 to N=1e4", std::fabs(hi.ratio - 1.0) - std::fabs(lo.ratio - 1.0), 0.0);
        }
    };
    for (double beta : {1.0, 2.0, 4.0}) {
        one("laguerre alpha=1", scaling_limit_check(LaguerreEnsemble(beta, 100, 1.0), X, N));
        one("jacobi alpha1=5 alpha2=5", scaling_limit_check(JacobiEnsemble(beta, 100, 5.0, 5.0), X, N));
    }
    rep.seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------- Monte Carlo

/// Interior histogram bins against the bulk law, in standard errors.
template <class Ensemble, class Bulk>
CheckReport check_bulk_histogram(const Ensemble& ens, Bulk bulk, const SamplingOptions& opt, double z_max)
{
    detail::Stopwatch sw;
    CheckReport rep{std::string("bulk ") + to_string(Ensemble::flavor), {}, 0.0};
    const auto h = estimate_density(ens, opt);
    double worst = 0.0;
    int interior = 0;
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
        const double lo = h.bin_edges[b], hi = h.bin_edges[b + 1];
        if (!(lo > ens.edges().lower && hi < ens.edges().upper)) continue;
        ++interior;
        const double expect = quad::adaptive([&](double x) { return bulk(x); }, lo, hi, 1e-10).value / (hi - lo);
        worst = detail::worse(worst, std::fabs(h.estimates[b] - expect) / h.standard_errors[b]);
    }
    rep.add("worst interior bin |z| over " + std::to_string(interior) + " bins", interior > 0 ? worst : std::nan(""), z_max);
    rep.seconds = sw.seconds();
    return rep;
}

struct HardEdgeStudy {
    SlopeFit fit;
    double target = 0.0;
    EmpiricalSummary gap;
};

/// Gap probability on X = 5, 7.5, ..., 40 with s = X / (4N) and the slope of log E.
inline HardEdgeStudy hard_edge_study(double beta, int n, double a, std::uint64_t n_samples, std::uint64_t seed,
                                     int threads = 1)
{
    std::vector<double> X, s;
    for (double x = 5.0; x <= 40.0 + 1e-9; x += 2.5) {
        X.push_back(x);
        s.push_back(x / (4.0 * n));
    }
    HardEdgeStudy st;
    st.gap = estimate_gap_probability(beta, n, a, s, n_samples, seed, threads);
    st.fit = fit_log_slope(X, st.gap);
    st.target = hard_edge_coefficients(beta, a).linear;
    return st;
}

inline CheckReport check_hard_edge(std::uint64_t n_samples = 200000, std::uint64_t seed = 3, int threads = 1,
                                   double tol = Tolerances{}.hard_edge_slope)
{
    detail::Stopwatch sw;
    CheckReport rep{"hard_edge", {}, 0.0};
    const auto st = hard_edge_study(2.0, 200, 0.0, n_samples, seed, threads);
    rep.add(detail::fmt_point("slope", st.fit.slope) + detail::fmt_point(" target", st.target) + " (relative)",
            std::fabs(st.fit.slope / st.target - 1.0), tol);
    rep.seconds = sw.seconds();
    return rep;
}

} // namespace ldev
