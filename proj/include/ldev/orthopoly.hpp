#pragma once

#include <cmath>
#include <vector>

#include "ldev/error.hpp"
#include "ldev/log_value.hpp"
#include "ldev/recurrence.hpp"
#include "ldev/scaled_float.hpp"

namespace ldev {

/// Generalized Laguerre L_0^a(x), ..., L_n^a(x) by the three-term recurrence
///   (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}.
inline std::vector<ScaledFloat> laguerre_sequence(int n, double a, double x, RenormPolicy policy = {})
{
    detail::require(n >= 0, "laguerre_sequence: n must be >= 0");
    std::vector<ScaledFloat> out;
    out.reserve(n + 1);
    out.emplace_back(1.0, 0, policy);
    if (n == 0) return out;
    out.emplace_back(1.0 + a - x, 0, policy);
    for (int k = 1; k < n; ++k) {
        out.push_back(out[k] * ((2.0 * k + 1.0 + a - x) / (k + 1.0)) - out[k - 1] * ((k + a) / (k + 1.0)));
    }
    return out;
}

struct LaguerreValue {
    ScaledFloat value;
    ScaledFloat derivative;
};

/// L_n^a(x) and its derivative, using d/dx L_n^a = -L_{n-1}^{a+1}.
inline LaguerreValue laguerre_poly(int n, double a, double x, RenormPolicy policy = {})
{
    detail::require(n >= 0, "laguerre_poly: n must be >= 0");
    LaguerreValue r;
    r.value = laguerre_sequence(n, a, x, policy).back();
    r.derivative = n == 0 ? ScaledFloat(0.0, 0, policy) : -laguerre_sequence(n - 1, a + 1.0, x, policy).back();
    return r;
}

/// q_0(x), ..., q_{n-1}(x): polynomials orthonormal for the probability
/// measure weight/mass, so q_0 = 1.  Needs rec.size() >= n.
inline std::vector<ScaledFloat> orthonormal_sequence(const Recurrence& rec, int n, double x, RenormPolicy policy = {})
{
    detail::require(n >= 1 && n <= rec.size(), "orthonormal_sequence: recurrence too short");
    std::vector<ScaledFloat> q;
    q.reserve(n);
    q.emplace_back(1.0, 0, policy);
    if (n == 1) return q;
    q.push_back(q[0] * ((x - rec.alpha[0]) / rec.b[1]));
    for (int k = 1; k + 1 < n; ++k) {
        q.push_back((q[k] * (x - rec.alpha[k]) - q[k - 1] * rec.b[k]) * (1.0 / rec.b[k + 1]));
    }
    return q;
}

/// Plain double evaluation of q_k(x); fine wherever the values fit in a double.
inline double orthonormal_value(const Recurrence& rec, int k, double x)
{
    double q0 = 1.0;
    if (k == 0) return q0;
    double q1 = (x - rec.alpha[0]) / rec.b[1];
    for (int j = 1; j < k; ++j) {
        const double q2 = ((x - rec.alpha[j]) * q1 - rec.b[j] * q0) / rec.b[j + 1];
        q0 = q1;
        q1 = q2;
    }
    return q1;
}

/// log of sum_{k<n} q_k(x)^2 (the Christoffel-Darboux diagonal for the probability measure).
inline double log_kernel_diagonal(const Recurrence& rec, int n, double x, RenormPolicy policy = {})
{
    const auto q = orthonormal_sequence(rec, n, x, policy);
    ScaledFloat s(0.0, 0, policy);
    for (const auto& v : q) s = s + v * v;
    return s.log_abs();
}

} // namespace ldev
