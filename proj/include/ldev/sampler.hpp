#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/tridiagonal.hpp"

namespace ldev {

// Variate generators are written out rather than taken from <random>'s
// distributions, whose algorithms are implementation-defined; std::mt19937_64
// itself is fully specified, so samples are identical on every platform.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of sample i under master seed s; independent of how samples are split among workers.
inline std::uint64_t sample_seed(std::uint64_t master, std::uint64_t i)
{
    return splitmix64(splitmix64(master) ^ splitmix64(i + 0x632BE59BD9B4E019ULL));
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform()
    {
        double u;
        do u = static_cast<double>(eng_() >> 11) * 0x1p-53;
        while (u == 0.0);
        return u;
    }

    /// Standard normal by the Marsaglia polar method.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the U^{1/shape} boost.
    double gamma(double shape)
    {
        if (!(shape > 0.0)) throw invalid_parameter("gamma variate: shape must be positive");
        if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// chi with k degrees of freedom.
    double chi(double k) { return std::sqrt(2.0 * gamma(k / 2.0)); }

    /// Beta(a, b) as G_a / (G_a + G_b).
    double beta(double a, double b)
    {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rng

struct SpectrumSample {
    std::vector<double> eigenvalues; // ascending
    std::uint64_t seed = 0;
};

enum class EstimatorKind { Density, MaxCdf, MinCdf, MaxPdf, GapProb };

inline const char* to_string(EstimatorKind k)
{
    switch (k) {
    case EstimatorKind::Density: return "density";
    case EstimatorKind::MaxCdf: return "max_cdf";
    case EstimatorKind::MinCdf: return "min_cdf";
    case EstimatorKind::MaxPdf: return "max_pdf";
    case EstimatorKind::GapProb: return "gap_prob";
    }
    return "?";
}

/// Histogram or probability estimates.  For histograms bin_edges has one more
/// entry than counts; for gap probabilities bin_edges holds the s grid and
/// counts[i] the number of samples with no eigenvalue in (0, s_i).
struct EmpiricalSummary {
    EstimatorKind kind = EstimatorKind::Density;
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> counts;
    std::vector<double> estimates;       // density per unit length, or probability
    std::vector<double> standard_errors; // of estimates
    std::uint64_t n_samples = 0;
    int n = 0; // eigenvalues per sample
};

/// Dumitriu-Edelman bidiagonal model.  With B lower bidiagonal, diagonal
/// chi_{2 a'}, chi_{2 a' - beta}, ... and subdiagonal chi_{beta (N-1)}, ..., chi_beta,
/// the eigenvalues of B B^T / beta have weight lambda^{a' - 1 - beta(N-1)/2} e^{-beta lambda/2};
/// a' is chosen so that power equals the requested weight exponent.
inline SymTridiagonal laguerre_matrix(double beta, int n, double power, rng::Stream& s)
{
    detail::require(beta > 0.0 && n >= 1, "laguerre_matrix: invalid parameters");
    detail::require(power > -1.0, "laguerre_matrix: weight exponent must exceed -1");
    const double a_de = power + 1.0 + beta * (n - 1) / 2.0;
    std::vector<double> d(n), sub(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) d[i] = s.chi(2.0 * a_de - beta * i);
    for (int i = 0; i + 1 < n; ++i) sub[i] = s.chi(beta * (n - 1 - i));
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) t.diag[i] = (d[i] * d[i] + (i > 0 ? sub[i - 1] * sub[i - 1] : 0.0)) / beta;
    for (int i = 0; i + 1 < n; ++i) t.off[i] = d[i] * sub[i] / beta;
    return t;
}

inline std::vector<double> laguerre_spectrum(double beta, int n, double power, rng::Stream& s)
{
    auto t = laguerre_matrix(beta, n, power, s);
    return t.size() == 1 ? t.diag : eigenvalues(std::move(t));
}

/// Edelman-Sutton model: B11 upper bidiagonal with diagonal c_N, c_{N-1} s'_{N-1}, ..., c_1 s'_1
/// and superdiagonal -s_N c'_{N-1}, ..., -s_2 c'_1, where
/// c_k^2 ~ Beta(beta(a+k)/2, beta(b+k)/2), c'_k^2 ~ Beta(beta k/2, beta(a+b+1+k)/2).
/// Eigenvalues of B11 B11^T have weight x^{beta(a+1)/2-1} (1-x)^{beta(b+1)/2-1}.
inline std::vector<double> jacobi_spectrum(double beta, int n, double a, double b, rng::Stream& s)
{
    detail::require(beta > 0.0 && n >= 1, "jacobi_spectrum: invalid parameters");
    detail::require(a > -1.0 && b > -1.0, "jacobi_spectrum: exponents must exceed -1");
    std::vector<double> c2(n + 1), cp2(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) c2[k] = s.beta(beta * (a + k) / 2.0, beta * (b + k) / 2.0);
    for (int k = 1; k < n; ++k) cp2[k] = s.beta(beta * k / 2.0, beta * (a + b + 1.0 + k) / 2.0);
    // row i of B11 (0-based) holds diagonal d_i and superdiagonal e_i
    std::vector<double> d(n), e(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int k = n - i;
        d[i] = std::sqrt(c2[k] * (i == 0 ? 1.0 : 1.0 - cp2[k]));
        if (i + 1 < n) e[i] = -std::sqrt((1.0 - c2[k]) * cp2[k - 1]);
    }
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) t.diag[i] = d[i] * d[i] + e[i] * e[i];
    for (int i = 0; i + 1 < n; ++i) t.off[i] = e[i] * d[i + 1];
    return t.diag.size() == 1 ? t.diag : eigenvalues(std::move(t));
}

/// One Laguerre sample: unscaled eigenvalues with the library weight for a = alpha N.
inline SpectrumSample sample_laguerre(const LaguerreEnsemble& ens, std::uint64_t seed)
{
    rng::Stream s(seed);
    const double power = ens.beta() * (ens.exponent() + 1.0) / 2.0 - 1.0;
    return {laguerre_spectrum(ens.beta(), ens.n(), power, s), seed};
}

inline SpectrumSample sample_jacobi(const JacobiEnsemble& ens, std::uint64_t seed)
{
    rng::Stream s(seed);
    return {jacobi_spectrum(ens.beta(), ens.n(), ens.exponent1(), ens.exponent2(), s), seed};
}

namespace detail {

// Runs body(i, stream) for samples i in [0, n_samples) over `threads` workers.
// Each worker keeps its own accumulator; accumulators are merged in worker
// order, and since every reduction here is an integer count the merged result
// does not depend on the split.
template <class Acc, class Body>
Acc parallel_samples(std::uint64_t n_samples, std::uint64_t master, int threads, const Acc& init, Body body)
{
    const int t = std::max(1, threads);
    std::vector<Acc> acc(t, init);
    auto work = [&](int w) {
        for (std::uint64_t i = w; i < n_samples; i += t) {
            rng::Stream s(rng::sample_seed(master, i));
            body(acc[w], s);
        }
    };
    if (t == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < t; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    Acc out = acc[0];
    for (int w = 1; w < t; ++w) out.merge(acc[w]);
    return out;
}

struct BinCounts {
    std::vector<std::uint64_t> sum;
    std::vector<std::uint64_t> sum_sq; // of per-sample counts, for correlated eigenvalues
    std::uint64_t outside = 0;

    void merge(const BinCounts& o)
    {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += o.sum[i];
            sum_sq[i] += o.sum_sq[i];
        }
        outside += o.outside;
    }
};

inline std::vector<double> uniform_edges(double lo, double hi, int bins)
{
    std::vector<double> e(bins + 1);
    for (int i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * i / bins;
    e[bins] = hi;
    return e;
}

inline int bin_of(double v, double lo, double hi, int bins)
{
    if (v < lo || v >= hi) return -1;
    return std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
}

} // namespace detail

struct SamplingOptions {
    std::uint64_t n_samples = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    int bins = 40;
    // histogram range; an empty range means the support widened by a quarter of its width
    double lo = 0.0;
    double hi = 0.0;
};

/// Spectrum generator in the variable used by the bulk laws: lambda / N for
/// Laguerre, x itself for Jacobi.
using SpectrumFn = std::function<std::vector<double>(rng::Stream&)>;

inline SpectrumFn scaled_spectrum_fn(const LaguerreEnsemble& ens)
{
    const double power = ens.beta() * (ens.exponent() + 1.0) / 2.0 - 1.0;
    return [beta = ens.beta(), n = ens.n(), power](rng::Stream& s) {
        auto ev = laguerre_spectrum(beta, n, power, s);
        for (double& v : ev) v /= n;
        return ev;
    };
}

inline SpectrumFn scaled_spectrum_fn(const JacobiEnsemble& ens)
{
    return [beta = ens.beta(), n = ens.n(), a = ens.exponent1(), b = ens.exponent2()](rng::Stream& s) {
        return jacobi_spectrum(beta, n, a, b, s);
    };
}

namespace detail {

// Histogram of f(spectrum) values, one or many per sample.  Standard errors use
// the spread of per-sample bin counts, which accounts for the dependence of
// eigenvalues within one sample.
template <class Select>
EmpiricalSummary histogram(const SpectrumFn& gen, int n, const SamplingOptions& opt, double lo, double hi,
                           EstimatorKind kind, Select select)
{
    require(opt.bins >= 1, "histogram: bins must be >= 1");
    require(hi > lo, "histogram: empty range");
    const int bins = opt.bins;
    BinCounts init{std::vector<std::uint64_t>(bins, 0), std::vector<std::uint64_t>(bins, 0), 0};
    auto counts = parallel_samples(opt.n_samples, opt.seed, opt.threads, init, [&](BinCounts& acc, rng::Stream& s) {
        std::vector<std::uint64_t> local(bins, 0);
        for (double v : select(gen(s))) {
            const int b = bin_of(v, lo, hi, bins);
            if (b < 0) ++acc.outside;
            else ++local[b];
        }
        for (int b = 0; b < bins; ++b) {
            acc.sum[b] += local[b];
            acc.sum_sq[b] += local[b] * local[b];
        }
    });
    EmpiricalSummary out;
    out.kind = kind;
    out.n = n;
    out.n_samples = opt.n_samples;
    out.bin_edges = uniform_edges(lo, hi, bins);
    out.counts = counts.sum;
    const double ns = static_cast<double>(opt.n_samples);
    const double per = kind == EstimatorKind::Density ? static_cast<double>(n) : 1.0;
    for (int b = 0; b < bins; ++b) {
        const double w = out.bin_edges[b + 1] - out.bin_edges[b];
        const double mean = counts.sum[b] / ns;
        const double var = std::max(0.0, counts.sum_sq[b] / ns - mean * mean);
        out.estimates.push_back(mean / (per * w));
        out.standard_errors.push_back(std::sqrt(var / std::max(1.0, ns - 1.0)) / (per * w));
    }
    return out;
}

inline std::pair<double, double> default_range(const Edges& e, const SamplingOptions& opt, double floor, double ceil)
{
    if (opt.hi > opt.lo) return {opt.lo, opt.hi};
    const double pad = 0.25 * e.width();
    return {std::max(floor, e.lower - pad), std::min(ceil, e.upper + pad)};
}

} // namespace detail

/// Pooled eigenvalue histogram normalized per eigenvalue (integrates to the
/// fraction of eigenvalues inside the range).
template <class Ensemble>
EmpiricalSummary estimate_density(const Ensemble& ens, const SamplingOptions& opt = {})
{
    const double ceil = Ensemble::flavor == Flavor::Jacobi ? 1.0 : std::numeric_limits<double>::infinity();
    const auto [lo, hi] = detail::default_range(ens.edges(), opt, 0.0, ceil);
    return detail::histogram(scaled_spectrum_fn(ens), ens.n(), opt, lo, hi, EstimatorKind::Density,
                             [](std::vector<double> ev) { return ev; });
}

/// Histogram estimate of the PDF of the largest eigenvalue (scaled variable).
/// The default range is wide enough that every sample lands inside; the
/// binomial standard error of each bin is reported.
template <class Ensemble>
EmpiricalSummary estimate_max_pdf(const Ensemble& ens, const SamplingOptions& opt = {})
{
    detail::require(opt.n_samples >= 1000, "estimate_max_pdf: at least 1000 samples are required");
    const double ceil = Ensemble::flavor == Flavor::Jacobi ? 1.0 : std::numeric_limits<double>::infinity();
    const auto [lo, hi] = detail::default_range(ens.edges(), opt, 0.0, ceil);
    auto out = detail::histogram(scaled_spectrum_fn(ens), ens.n(), opt, lo, hi, EstimatorKind::MaxPdf,
                                 [](std::vector<double> ev) { return std::vector<double>{ev.back()}; });
    return out;
}

/// Probability that (0, s) holds no eigenvalue, for the Laguerre weight
/// lambda^{beta a/2} e^{-beta lambda/2} with a fixed exponent a (not scaled with N).
inline EmpiricalSummary estimate_gap_probability(double beta, int n, double a, const std::vector<double>& s_grid,
                                                 std::uint64_t n_samples, std::uint64_t seed, int threads = 1)
{
    detail::require(beta > 0.0 && n >= 1, "estimate_gap_probability: invalid parameters");
    detail::require(a >= 0.0, "estimate_gap_probability: a must be >= 0");
    for (double s : s_grid) detail::require(s >= 0.0, "estimate_gap_probability: s must be >= 0");
    const double power = beta * a / 2.0;
    struct Acc {
        std::vector<std::uint64_t> free;
        void merge(const Acc& o)
        {
            for (std::size_t i = 0; i < free.size(); ++i) free[i] += o.free[i];
        }
    };
    auto acc = detail::parallel_samples(n_samples, seed, threads, Acc{std::vector<std::uint64_t>(s_grid.size(), 0)},
                                        [&](Acc& ac, rng::Stream& st) {
                                            // a Sturm count per s decides the event without the full spectrum
                                            const auto t = laguerre_matrix(beta, n, power, st);
                                            for (std::size_t i = 0; i < s_grid.size(); ++i) {
                                                if (count_below(t.diag, t.off, s_grid[i]) == 0) ++ac.free[i];
                                            }
                                        });
    EmpiricalSummary out;
    out.kind = EstimatorKind::GapProb;
    out.n = n;
    out.n_samples = n_samples;
    out.bin_edges = s_grid;
    out.counts = acc.free;
    const double ns = static_cast<double>(n_samples);
    for (auto c : acc.free) {
        const double p = c / ns;
        out.estimates.push_back(p);
        out.standard_errors.push_back(std::sqrt(p * (1.0 - p) / ns));
    }
    return out;
}

/// Weighted least-squares slope of log E against X over the points with at
/// least min_count successes; weights from the delta-method variance of log E.
struct SlopeFit {
    double slope = 0.0;
    double slope_error = 0.0;
    double intercept = 0.0;
    int points = 0;
};

inline SlopeFit fit_log_slope(const std::vector<double>& xs, const EmpiricalSummary& e, std::uint64_t min_count = 25)
{
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    SlopeFit fit;
    const double ns = static_cast<double>(e.n_samples);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (e.counts[i] < min_count || e.counts[i] == e.n_samples) continue;
        const double p = e.counts[i] / ns;
        const double var = (1.0 - p) / (p * ns);
        const double w = 1.0 / var;
        const double y = std::log(p);
        sw += w;
        sx += w * xs[i];
        sy += w * y;
        sxx += w * xs[i] * xs[i];
        sxy += w * xs[i] * y;
        ++fit.points;
    }
    if (fit.points < 2) throw nonconvergence("fit_log_slope: fewer than two usable points");
    const double det = sw * sxx - sx * sx;
    fit.slope = (sw * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    fit.slope_error = std::sqrt(sw / det);
    return fit;
}

} // namespace ldev
