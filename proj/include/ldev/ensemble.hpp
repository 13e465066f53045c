#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "ldev/error.hpp"

namespace ldev {

/// Endpoints of the leading-order eigenvalue support.
struct Edges {
    double lower = 0.0;
    double upper = 0.0;

    double width() const { return upper - lower; }
    double center() const { return 0.5 * (lower + upper); }
    bool strictly_inside(double x) const { return x > lower && x < upper; }
};

enum class Flavor { Laguerre, Jacobi };

enum class Region { LeftTail, Bulk, RightTail, EdgeBand };

inline const char* to_string(Region r)
{
    switch (r) {
    case Region::LeftTail: return "left_tail";
    case Region::Bulk: return "bulk";
    case Region::RightTail: return "right_tail";
    case Region::EdgeBand: return "edge_band";
    }
    return "?";
}

inline const char* to_string(Flavor f) { return f == Flavor::Laguerre ? "laguerre" : "jacobi"; }

/// Scaled Laguerre support ((sqrt(alpha+1)-1)^2, (sqrt(alpha+1)+1)^2).
inline Edges laguerre_support(double alpha)
{
    detail::require(alpha >= 0.0, "laguerre_support: alpha must be >= 0");
    const double r = std::sqrt(alpha + 1.0);
    // (r-1)^2 written as alpha^2/(r+1)^2 avoids cancellation for small alpha.
    const double lower = alpha * alpha / ((r + 1.0) * (r + 1.0));
    return {lower, (r + 1.0) * (r + 1.0)};
}

/// Jacobi support (c1, c2).  With A = sqrt((1+a1)(1+a1+a2)), B = sqrt(1+a2) and
/// s = 2+a1+a2 the edges are ((A -+ B)/s)^2; the lower one is written as
/// (a1/(A+B))^2 so that it keeps full relative accuracy when a1 is small.
inline Edges jacobi_support(double alpha1, double alpha2)
{
    detail::require(alpha1 >= 0.0 && alpha2 >= 0.0, "jacobi_support: rates must be >= 0");
    const double s = 2.0 + alpha1 + alpha2;
    const double a = std::sqrt((1.0 + alpha1) * (1.0 + alpha1 + alpha2));
    const double b = std::sqrt(1.0 + alpha2);
    const double root_upper = std::min(1.0, (a + b) / s);
    const double root_lower = alpha1 / (a + b);
    return {root_lower * root_lower, root_upper * root_upper};
}

/// sqrt((x-lower)(x-upper)) with the sign of (x - center); zero on the edges.
inline double signed_root(double x, const Edges& e)
{
    if (e.strictly_inside(x)) throw invalid_parameter("signed root requested inside the support");
    const double r = std::sqrt((x - e.lower) * (x - e.upper));
    return x >= e.upper ? r : -r;
}

inline double u_laguerre(double x, const Edges& e) { return signed_root(x, e); }
inline double u_jacobi(double x, const Edges& e) { return signed_root(x, e); }

/// Natural domain of the eigenvalues: (0, inf) for Laguerre, (0, 1) for Jacobi.
inline bool in_natural_domain(Flavor f, double x)
{
    return f == Flavor::Laguerre ? x > 0.0 : (x > 0.0 && x < 1.0);
}

inline Region classify_region(double x, const Edges& e, double delta, Flavor flavor)
{
    detail::require(delta > 0.0, "classify_region: delta must be positive");
    detail::require(in_natural_domain(flavor, x), "classify_region: x outside the natural domain");
    if (std::fabs(x - e.lower) <= delta || std::fabs(x - e.upper) <= delta) return Region::EdgeBand;
    if (x < e.lower) return Region::LeftTail;
    if (x > e.upper) return Region::RightTail;
    return Region::Bulk;
}

inline constexpr double kDefaultEdgeBandFraction = 1e-6;

/// Laguerre beta-ensemble with exponent a = alpha * n.
///
/// Weight convention throughout the library:
///   lambda^{beta (a+1)/2 - 1} exp(-beta lambda / 2),
/// which is lambda^a e^{-lambda} at beta = 2 and lambda^{(a-1)/2} e^{-lambda/2}
/// at beta = 1.
class LaguerreEnsemble {
public:
    LaguerreEnsemble(double beta, int n, double alpha) : beta_(beta), n_(n), alpha_(alpha)
    {
        detail::require(beta > 0.0, "LaguerreEnsemble: beta must be positive");
        detail::require(n >= 1, "LaguerreEnsemble: n must be >= 1");
        detail::require(alpha >= 0.0, "LaguerreEnsemble: alpha must be >= 0");
        edges_ = laguerre_support(alpha);
    }

    static constexpr Flavor flavor = Flavor::Laguerre;

    double beta() const { return beta_; }
    int n() const { return n_; }
    double alpha() const { return alpha_; }
    double exponent() const { return alpha_ * n_; }
    const Edges& edges() const { return edges_; }

    double default_delta() const { return kDefaultEdgeBandFraction * edges_.width(); }

    Region region(double x, std::optional<double> delta = std::nullopt) const
    {
        return classify_region(x, edges_, delta.value_or(default_delta()), flavor);
    }

    double u(double x) const { return u_laguerre(x, edges_); }

    LaguerreEnsemble with_n(int n) const { return {beta_, n, alpha_}; }
    LaguerreEnsemble with_beta(double beta) const { return {beta, n_, alpha_}; }

private:
    double beta_;
    int n_;
    double alpha_;
    Edges edges_;
};

/// Jacobi beta-ensemble on (0,1) with exponents a1 = alpha1 n, a2 = alpha2 n.
///
/// Weight: x^{beta (a1+1)/2 - 1} (1-x)^{beta (a2+1)/2 - 1}.
class JacobiEnsemble {
public:
    JacobiEnsemble(double beta, int n, double alpha1, double alpha2)
        : beta_(beta), n_(n), alpha1_(alpha1), alpha2_(alpha2)
    {
        detail::require(beta > 0.0, "JacobiEnsemble: beta must be positive");
        detail::require(n >= 1, "JacobiEnsemble: n must be >= 1");
        detail::require(alpha1 >= 0.0 && alpha2 >= 0.0, "JacobiEnsemble: rates must be >= 0");
        edges_ = jacobi_support(alpha1, alpha2);
    }

    static constexpr Flavor flavor = Flavor::Jacobi;

    double beta() const { return beta_; }
    int n() const { return n_; }
    double alpha1() const { return alpha1_; }
    double alpha2() const { return alpha2_; }
    double exponent1() const { return alpha1_ * n_; }
    double exponent2() const { return alpha2_ * n_; }
    const Edges& edges() const { return edges_; }

    double default_delta() const { return kDefaultEdgeBandFraction * edges_.width(); }

    Region region(double x, std::optional<double> delta = std::nullopt) const
    {
        return classify_region(x, edges_, delta.value_or(default_delta()), flavor);
    }

    double u(double x) const { return u_jacobi(x, edges_); }

    /// The ensemble under x -> 1 - x.
    JacobiEnsemble mirrored() const { return {beta_, n_, alpha2_, alpha1_}; }
    JacobiEnsemble with_n(int n) const { return {beta_, n, alpha1_, alpha2_}; }
    JacobiEnsemble with_beta(double beta) const { return {beta, n_, alpha1_, alpha2_}; }

private:
    double beta_;
    int n_;
    double alpha1_;
    double alpha2_;
    Edges edges_;
};

namespace detail {

template <class Ensemble>
void require_tail(const Ensemble& ens, double x, const char* what)
{
    const Region r = ens.region(x);
    if (r == Region::Bulk || r == Region::EdgeBand) {
        throw invalid_parameter(std::string(what) + ": x=" + std::to_string(x) + " lies in the " +
                                to_string(r) + " region; a tail point is required");
    }
}

} // namespace detail
} // namespace ldev
