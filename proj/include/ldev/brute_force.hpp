#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/large_deviation.hpp"
#include "ldev/quadrature.hpp"

namespace ldev {

struct BruteForceOptions {
    // Chamber scheme: the innermost variable gets inner_nodes Gauss nodes per
    // piece and each outer level adds step more, since the iterated integrals
    // grow in polynomial degree toward the outside.
    int inner_nodes = 12;
    int step = 5;
    int min_nodes = 18; // floor per level; the inner levels limit accuracy far out in the tails
    int coarse_drop = 2; // the check pass removes this many nodes per level
    int threads = 1;
};

struct BruteForceResult {
    double value = 0.0;
    double check = 0.0;      // second pass with a different node count
    double rel_change = 0.0; // |value - check| / |value|
    std::vector<int> nodes;  // per level, outermost first
    bool tensor = false;     // even beta: exact tensor Gauss rule instead of the chamber
};

namespace detail {

// Neumaier summation.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        comp_ += std::fabs(sum_) >= std::fabs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0, comp_ = 0.0;
};

// Iterated Gauss quadrature of the (N-1)-fold integral defining rho(x) over the
// ordered chamber y_1 < ... < y_{N-1}.  Every 1-d integral is split at x so the
// integrand is smooth on each piece for integer beta; endpoint powers at 0 and
// 1 are removed by quadratic maps and the half line uses Gauss-Laguerre.
class ChamberIntegrator {
public:
    // nodes[k] is the rule size used for the k-th (outermost first) variable.
    ChamberIntegrator(Flavor flavor, double beta, int n, double p1, double p2, double x, std::vector<int> nodes)
        : flavor_(flavor), beta_(beta), n_(n), p1_(p1), p2_(p2), x_(x)
    {
        nodes.resize(std::max(1, n - 1), nodes.empty() ? 24 : nodes.back());
        for (int m : nodes) {
            Rule lag_rule;
            gl_.push_back(legendre01(m));
            bridge_.push_back(legendre01(2 * m / 3 + 2));
            if (flavor == Flavor::Laguerre) {
                const auto lag = quad::gauss_laguerre(m, 0.0);
                lag_rule.nodes = lag.nodes;
                lag_rule.weights = lag.weights;
            }
            lag_.push_back(std::move(lag_rule));
        }
        if (flavor == Flavor::Laguerre) {
            c_ = beta / 2.0;
            peak_ = std::max(p1 / c_, 1e-300);
            scale_ = 1.0 + peak_;
        } else {
            peak_ = (p1 + p2 > 0.0) ? std::clamp(p1 / (p1 + p2), 1e-12, 1.0 - 1e-12) : 0.5;
            scale_ = 1.0;
        }
        log_w_peak_ = log_weight(peak_);
    }

    double log_weight(double y) const
    {
        if (flavor_ == Flavor::Laguerre) return p1_ * std::log(y) - c_ * y;
        return p1_ * std::log(y) + p2_ * std::log1p(-y);
    }

    /// log of the full (N-1)-fold integral (without the (N-1)! factor).
    double log_integral(int threads) const
    {
        const int dims = n_ - 1;
        if (dims == 0) return 0.0;
        const double log_scale = dims * log_w_peak_ + beta_ * n_ * (n_ - 1) / 2.0 * std::log(scale_);
        const auto top = nodes_for(0.0, 0);
        std::vector<double> contrib(top.size(), 0.0);
        auto work = [&](std::size_t begin, std::size_t step) {
            std::vector<double> ys(dims);
            for (std::size_t i = begin; i < top.size(); i += step) {
                ys[0] = top[i].y;
                const double f = top[i].w * factor(ys, 0);
                contrib[i] = f == 0.0 ? 0.0 : (dims == 1 ? f : f * level(ys, 1));
            }
        };
        const int t = std::max(1, threads);
        if (t == 1) {
            work(0, 1);
        } else {
            std::vector<std::thread> pool;
            for (int k = 0; k < t; ++k) pool.emplace_back(work, k, t);
            for (auto& th : pool) th.join();
        }
        CompensatedSum s;
        for (double c : contrib) s.add(c);
        return std::log(s.value()) + log_scale;
    }

private:
    struct Node {
        double y, w;
    };
    struct Rule {
        std::vector<double> nodes, weights;
    };

    static constexpr double kSmoothPower = 6.0;

    static Rule legendre01(int m)
    {
        Rule r;
        const auto gl = quad::gauss_legendre(m);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            r.nodes.push_back(0.5 * (gl.nodes[i] + 1.0));
            r.weights.push_back(gl.weights[i]);
        }
        return r;
    }

    // Factor contributed by y_k: scaled weight, |x - y_k|^beta and the pairs with earlier y's.
    double factor(const std::vector<double>& ys, int k) const
    {
        const double y = ys[k];
        double f = std::exp(log_weight(y) - log_w_peak_) * std::pow(std::fabs(x_ - y) / scale_, beta_);
        for (int j = 0; j < k; ++j) f *= std::pow(std::fabs(y - ys[j]) / scale_, beta_);
        return f;
    }

    double level(std::vector<double>& ys, int k) const
    {
        const auto nodes = nodes_for(ys[k - 1], k);
        CompensatedSum s;
        const bool last = k + 1 == n_ - 1;
        for (const auto& nd : nodes) {
            ys[k] = nd.y;
            const double f = nd.w * factor(ys, k);
            if (f == 0.0) continue;
            s.add(last ? f : f * level(ys, k + 1));
        }
        return s.value();
    }

    // Pieces close to a rough endpoint (0, or 1 for Jacobi) relative to their
    // length are integrated in t = sqrt(y) (or sqrt(1-y)), which turns the
    // endpoint power y^p into the smooth t^{2p+1}.  Large powers are already
    // smooth enough and the map would double the polynomial degree, so it is
    // skipped for p >= kSmoothPower.
    void add_finite(std::vector<Node>& out, double lo, double hi, const Rule& gl) const
    {
        const double len = hi - lo;
        if (!(len > 0.0)) return;
        constexpr double inf = std::numeric_limits<double>::infinity();
        const double d0 = p1_ < kSmoothPower ? lo : inf;
        const double d1 = flavor_ == Flavor::Jacobi && p2_ < kSmoothPower ? 1.0 - hi : inf;
        const bool map_lo = d0 <= d1 && d0 < len;
        const bool map_hi = !map_lo && d1 < len;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double s = gl.nodes[i];
            if (map_lo) {
                const double a = std::sqrt(lo), b = std::sqrt(hi);
                const double t = a + (b - a) * s;
                out.push_back({t * t, gl.weights[i] * 2.0 * t * (b - a)});
            } else if (map_hi) {
                const double a = std::sqrt(1.0 - hi), b = std::sqrt(1.0 - lo);
                const double t = a + (b - a) * s;
                out.push_back({1.0 - t * t, gl.weights[i] * 2.0 * t * (b - a)});
            } else {
                out.push_back({lo + len * s, gl.weights[i] * len});
            }
        }
    }

    void add_half_line(std::vector<Node>& out, double lo, const Rule& lag) const
    {
        // y = lo + r/c; the e^{-c y} in the weight is undone by e^{r}, so the
        // node weight carries e^{r}/c and the factor applies the full weight.
        for (std::size_t i = 0; i < lag.nodes.size(); ++i) {
            const double r = lag.nodes[i];
            out.push_back({lo + r / c_, lag.weights[i] * std::exp(r) / c_});
        }
    }

    // (lo, inf) for Laguerre; a start close to 0 gets a finite mapped piece
    // first so y^p is not nearly singular at the Gauss-Laguerre origin.
    void add_tail(std::vector<Node>& out, double lo, const Rule& bridge, const Rule& lag) const
    {
        const double cut = 4.0 / c_;
        if (lo < cut) {
            add_finite(out, lo, cut, bridge);
            add_half_line(out, cut, lag);
        } else {
            add_half_line(out, lo, lag);
        }
    }

    std::vector<Node> nodes_for(double lo, int k) const
    {
        const Rule& gl = gl_[k];
        const Rule& lag = lag_[k];
        std::vector<Node> out;
        if (lo < x_) {
            add_finite(out, lo, x_, gl);
            if (flavor_ == Flavor::Jacobi) add_finite(out, x_, 1.0, gl);
            else add_tail(out, x_, bridge_[k], lag);
        } else {
            if (flavor_ == Flavor::Jacobi) add_finite(out, lo, 1.0, gl);
            else add_tail(out, lo, bridge_[k], lag);
        }
        return out;
    }

    Flavor flavor_;
    double beta_;
    int n_;
    double p1_, p2_, x_;
    double c_ = 0.0;
    double peak_ = 0.0, scale_ = 1.0, log_w_peak_ = 0.0;
    std::vector<Rule> gl_, bridge_, lag_;
};

inline double log_weight_mass(Flavor flavor, double beta, double p1, double p2)
{
    if (flavor == Flavor::Laguerre) return std::lgamma(p1 + 1.0) - (p1 + 1.0) * std::log(beta / 2.0);
    return std::lgamma(p1 + 1.0) + std::lgamma(p2 + 1.0) - std::lgamma(p1 + p2 + 2.0);
}

// For even integer beta the integrand is a polynomial of degree beta(N-1) in
// each variable times the one-body weight, so a tensor Gauss rule for that
// weight with m > beta(N-1)/2 nodes is exact over the whole cube.
inline double tensor_log_integral(Flavor flavor, double beta, int n, double p1, double p2, double x, int m)
{
    const int dims = n - 1;
    if (dims == 0) return 0.0;
    const quad::GaussRule rule = flavor == Flavor::Laguerre ? quad::gauss_laguerre(m, p1) : quad::gauss_jacobi01(m, p1, p2);
    std::vector<double> y = rule.nodes;
    if (flavor == Flavor::Laguerre) {
        for (double& v : y) v /= beta / 2.0;
    }
    const double scale = flavor == Flavor::Laguerre ? 1.0 + p1 / (beta / 2.0) : 1.0;
    std::vector<int> idx(dims, 0);
    CompensatedSum total;
    while (true) {
        double f = 1.0;
        for (int i = 0; i < dims && f != 0.0; ++i) {
            const double yi = y[idx[i]];
            f *= rule.weights[idx[i]] * std::pow(std::fabs(x - yi) / scale, beta);
            for (int j = 0; j < i; ++j) f *= std::pow(std::fabs(yi - y[idx[j]]) / scale, beta);
        }
        total.add(f);
        int k = 0;
        while (k < dims && ++idx[k] == m) idx[k++] = 0;
        if (k == dims) break;
    }
    return std::log(total.value()) + dims * log_weight_mass(flavor, beta, p1, p2) +
           beta * n * (n - 1) / 2.0 * std::log(scale);
}

inline bool even_integer(double beta) { return beta == 2.0 * std::round(beta / 2.0); }

inline double brute_force_log_density(Flavor flavor, double beta, int n, double p1, double p2, double x,
                                      std::vector<int> nodes, int threads)
{
    const double log_z = flavor == Flavor::Laguerre ? log_partition_laguerre(beta, n, p1, beta / 2.0)
                                                    : log_partition_jacobi(beta, n, p1, p2);
    const double log_w = flavor == Flavor::Laguerre ? p1 * std::log(x) - beta / 2.0 * x
                                                    : p1 * std::log(x) + p2 * std::log1p(-x);
    const double head = std::log(static_cast<double>(n)) + log_w - log_z;
    if (even_integer(beta)) return head + tensor_log_integral(flavor, beta, n, p1, p2, x, nodes.front());
    ChamberIntegrator ci(flavor, beta, n, p1, p2, x, std::move(nodes));
    return head + std::lgamma(static_cast<double>(n)) + ci.log_integral(threads);
}

inline std::vector<int> node_profile(int n, int inner, int step, int floor)
{
    const int levels = std::max(1, n - 1);
    std::vector<int> m(levels);
    for (int k = 0; k < levels; ++k) m[k] = std::max({2, floor, inner + step * (levels - 1 - k)});
    return m;
}

} // namespace detail

/// rho_{(1),N}(x) by direct quadrature of its defining (N-1)-fold integral, N <= 6.
/// Exponents a (Laguerre) or a1, a2 (Jacobi) use the library convention, i.e. the
/// weight is lambda^{beta(a+1)/2-1} e^{-beta lambda/2} or its Jacobi analogue.
inline BruteForceResult brute_force_density(Flavor flavor, double beta, int n, double a1, double a2, double x,
                                            BruteForceOptions opt = {})
{
    if (n < 1 || n > 6) throw invalid_parameter("brute_force_density: n must lie in [1, 6]");
    detail::require(beta > 0.0, "brute_force_density: beta must be positive");
    detail::require(in_natural_domain(flavor, x), "brute_force_density: x outside the natural domain");
    const double p1 = beta * (a1 + 1.0) / 2.0 - 1.0;
    const double p2 = beta * (a2 + 1.0) / 2.0 - 1.0;
    BruteForceResult r;
    if (detail::even_integer(beta)) {
        // exact at m = beta(N-1)/2 + 1; the check pass adds nodes instead of removing them
        const int m = static_cast<int>(beta * (n - 1) / 2.0) + 2;
        r.tensor = true;
        r.nodes = {m};
        r.value = std::exp(detail::brute_force_log_density(flavor, beta, n, p1, p2, x, {m}, opt.threads));
        r.check = std::exp(detail::brute_force_log_density(flavor, beta, n, p1, p2, x, {m + 4}, opt.threads));
    } else {
        r.nodes = detail::node_profile(n, opt.inner_nodes, opt.step, opt.min_nodes);
        auto coarse = r.nodes;
        for (int& m : coarse) m = std::max(4, m - opt.coarse_drop);
        r.value = std::exp(detail::brute_force_log_density(flavor, beta, n, p1, p2, x, r.nodes, opt.threads));
        r.check = std::exp(detail::brute_force_log_density(flavor, beta, n, p1, p2, x, coarse, opt.threads));
    }
    r.rel_change = std::fabs(r.value - r.check) / std::fabs(r.value);
    return r;
}

inline BruteForceResult brute_force_density(const LaguerreEnsemble& ens, double x, BruteForceOptions opt = {})
{
    return brute_force_density(Flavor::Laguerre, ens.beta(), ens.n(), ens.exponent(), 0.0, x, opt);
}

inline BruteForceResult brute_force_density(const JacobiEnsemble& ens, double x, BruteForceOptions opt = {})
{
    return brute_force_density(Flavor::Jacobi, ens.beta(), ens.n(), ens.exponent1(), ens.exponent2(), x, opt);
}

} // namespace ldev
