#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ldev {

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples rows i and i+1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
};

struct TridiagonalEigen {
    std::vector<double> values;          // ascending
    std::vector<double> first_components; // first row of the eigenvector matrix, same order
};

namespace detail {

// Implicit QL with Wilkinson-type shifts. d, e are overwritten; e[i] couples i and i+1
// on entry. If z is non-empty it must start as e_1 and receives the first components.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z)
{
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 0x1p-53 * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw std::runtime_error("ql_implicit: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        f = (*z)[i + 1];
                        (*z)[i + 1] = s * (*z)[i] + c * f;
                        (*z)[i] = c * (*z)[i] - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

/// All eigenvalues (ascending) of a symmetric tridiagonal matrix.
inline std::vector<double> eigenvalues(SymTridiagonal t)
{
    detail::ql_implicit(t.diag, t.off, nullptr);
    std::sort(t.diag.begin(), t.diag.end());
    return std::move(t.diag);
}

/// Eigenvalues plus the first component of each normalized eigenvector
/// (what Golub-Welsch needs).
inline TridiagonalEigen eigen_with_first_components(SymTridiagonal t)
{
    const std::size_t n = t.size();
    std::vector<double> z(n, 0.0);
    if (n > 0) z[0] = 1.0;
    detail::ql_implicit(t.diag, t.off, &z);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.diag[a] < t.diag[b]; });
    TridiagonalEigen out;
    out.values.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t i : order) {
        out.values.push_back(t.diag[i]);
        out.first_components.push_back(z[i]);
    }
    return out;
}

/// Number of eigenvalues strictly below x (Sturm sequence count).
inline std::size_t count_below(std::span<const double> diag, std::span<const double> off, double x)
{
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

/// k-th smallest eigenvalue (k = 0 is the minimum) by Sturm bisection.
inline double kth_eigenvalue(std::span<const double> diag, std::span<const double> off, std::size_t k)
{
    const std::size_t n = diag.size();
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(std::fabs(lo), std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(diag, off, mid) > k) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace ldev
