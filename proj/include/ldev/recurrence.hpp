#pragma once

#include <cmath>
#include <vector>

#include "ldev/error.hpp"

namespace ldev {

/// Three-term recurrence of the monic orthogonal polynomials of a weight:
///   pi_{k+1}(x) = (x - alpha_k) pi_k(x) - b_k^2 pi_{k-1}(x),
/// stored with b[k] = b_k (b[0] unused, set to 0).  log_mass is log of the
/// total weight, so the probability-orthonormal family is q_k = pi_k / sqrt(b_1^2...b_k^2).
struct Recurrence {
    std::vector<double> alpha;
    std::vector<double> b;
    double log_mass = 0.0;

    int size() const { return static_cast<int>(alpha.size()); }
};

/// Weight s^p e^{-s} on (0, inf).
inline Recurrence laguerre_recurrence(int n, double p)
{
    detail::require(n >= 1, "laguerre_recurrence: n must be >= 1");
    detail::require(p > -1.0, "laguerre_recurrence: exponent must exceed -1");
    Recurrence r;
    r.alpha.resize(n);
    r.b.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        r.alpha[k] = 2.0 * k + p + 1.0;
        if (k > 0) r.b[k] = std::sqrt(k * (k + p));
    }
    r.log_mass = std::lgamma(p + 1.0);
    return r;
}

/// Weight s^p (1-s)^q on (0, 1): the shifted Jacobi family P^{(q,p)}(2s-1).
inline Recurrence jacobi01_recurrence(int n, double p, double q)
{
    detail::require(n >= 1, "jacobi01_recurrence: n must be >= 1");
    detail::require(p > -1.0 && q > -1.0, "jacobi01_recurrence: exponents must exceed -1");
    // On (-1,1) with weight (1-t)^A (1+t)^B, A = q, B = p.
    const double A = q, B = p, AB = A + B;
    Recurrence r;
    r.alpha.resize(n);
    r.b.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + AB;
        const double at = k == 0 ? (B - A) / (AB + 2.0) : (B - A) * (B + A) / (s * (s + 2.0));
        r.alpha[k] = 0.5 * (at + 1.0);
        if (k > 0) {
            double bt2;
            if (k == 1) bt2 = 4.0 * (1.0 + A) * (1.0 + B) / ((2.0 + AB) * (2.0 + AB) * (3.0 + AB));
            else bt2 = 4.0 * k * (k + A) * (k + B) * (k + AB) / (s * s * (s + 1.0) * (s - 1.0));
            r.b[k] = 0.5 * std::sqrt(bt2);
        }
    }
    r.log_mass = std::lgamma(p + 1.0) + std::lgamma(q + 1.0) - std::lgamma(p + q + 2.0);
    return r;
}

} // namespace ldev
