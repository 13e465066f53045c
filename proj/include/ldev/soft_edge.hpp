#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/large_deviation.hpp"
#include "ldev/log_value.hpp"

namespace ldev {

enum class EdgeSide { Max, Min };

inline const char* to_string(EdgeSide s) { return s == EdgeSide::Max ? "max" : "min"; }

/// lambda = center + orientation * width * N^{-2/3} * X (lambda in the scaled variable).
struct EdgeMap {
    double center = 0.0;
    double width = 0.0; // coefficient of N^{-2/3}
    int orientation = 1;
    int n = 1;

    double scale() const { return width * std::pow(static_cast<double>(n), -2.0 / 3.0); }
    double point(double X) const { return center + orientation * scale() * X; }
    /// d lambda / dX
    double jacobian() const { return scale(); }
};

/// Width coefficient in the form t^{2/3} / ((t_+ - t_-)/4)^{1/3}.
inline EdgeMap soft_edge_map_laguerre(const LaguerreEnsemble& ens, EdgeSide side)
{
    if (side == EdgeSide::Min && !(ens.alpha() > 0.0)) {
        throw invalid_parameter("soft_edge_map_laguerre: the lower edge is a hard edge at alpha = 0");
    }
    const Edges& e = ens.edges();
    const double t = side == EdgeSide::Max ? e.upper : e.lower;
    const double width = std::pow(t, 2.0 / 3.0) / std::cbrt(e.width() / 4.0);
    return {t, width, side == EdgeSide::Max ? 1 : -1, ens.n()};
}

/// The same width coefficient written as (r +- 1)(1 +- 1/r)^{1/3}, r = sqrt(alpha + 1).
inline double laguerre_edge_width_direct(double alpha, EdgeSide side)
{
    const double r = std::sqrt(alpha + 1.0);
    if (side == EdgeSide::Max) return (r + 1.0) * std::cbrt(1.0 + 1.0 / r);
    detail::require(alpha > 0.0, "laguerre_edge_width_direct: the lower edge is a hard edge at alpha = 0");
    return (r - 1.0) * std::cbrt(1.0 - 1.0 / r);
}

inline EdgeMap soft_edge_map_jacobi(const JacobiEnsemble& ens, EdgeSide side)
{
    if (!(ens.alpha1() > 0.0 && ens.alpha2() > 0.0)) {
        throw invalid_parameter("soft_edge_map_jacobi: both rates must be positive");
    }
    const double s = ens.alpha1() + ens.alpha2() + 2.0;
    const double theta = (ens.alpha1() + 1.0) / s;
    const double tau = 1.0 / s;
    const Edges& e = ens.edges();
    const double t = side == EdgeSide::Max ? e.upper : e.lower;
    const double width =
        std::pow(tau * t * (1.0 - t), 2.0 / 3.0) / std::pow(tau * theta * (1.0 - tau) * (1.0 - theta), 1.0 / 6.0);
    return {t, width, side == EdgeSide::Max ? 1 : -1, ens.n()};
}

/// Large-X form of the soft-edge largest-eigenvalue density:
/// Gamma(1+beta/2) / (pi (4 beta)^{beta/2}) e^{-2 beta X^{3/2}/3} X^{-(3 beta/4 - 1/2)}.
inline LogValue tw_right_tail(double beta, double X)
{
    detail::require(beta > 0.0, "tw_right_tail: beta must be positive");
    if (!(X > 0.0)) throw invalid_parameter("tw_right_tail: X must be positive");
    const double lg = std::lgamma(1.0 + beta / 2.0) - std::log(std::numbers::pi) - beta / 2.0 * std::log(4.0 * beta) -
                      2.0 * beta * std::pow(X, 1.5) / 3.0 - (0.75 * beta - 0.5) * std::log(X);
    return LogValue::from_log(lg);
}

struct ScalingRow {
    double beta = 0.0;
    double X = 0.0;
    int n = 0;
    double mapped = 0.0;   // point in the scaled spectrum variable
    Region region = Region::Bulk;
    bool edge_band = false; // mapped point too close to the edge for the tail formula
    double ratio = 0.0;     // (asym density * d lambda/dX) / tail law
};

namespace detail {

inline AsymptoticDensity asym_density(const LaguerreEnsemble& e, double x) { return asym_density_laguerre(e, x); }
inline AsymptoticDensity asym_density(const JacobiEnsemble& e, double x) { return asym_density_jacobi(e, x); }
inline EdgeMap edge_map(const LaguerreEnsemble& e, EdgeSide s) { return soft_edge_map_laguerre(e, s); }
inline EdgeMap edge_map(const JacobiEnsemble& e, EdgeSide s) { return soft_edge_map_jacobi(e, s); }

} // namespace detail

/// For each (X, N): evaluate the tail density at the mapped point, convert to a
/// density in X with the map's Jacobian and divide by the soft-edge tail law.
/// The Laguerre tail density is already per unit of the scaled variable
/// lambda / N, so the Jacobian is the map scale in either flavor.
template <class Ensemble>
std::vector<ScalingRow> scaling_limit_check(const Ensemble& ens, const std::vector<double>& X_grid,
                                            const std::vector<int>& N_grid, EdgeSide side = EdgeSide::Max)
{
    std::vector<ScalingRow> rows;
    for (double X : X_grid) {
        detail::require(X > 0.0, "scaling_limit_check: X must be positive");
        for (int n : N_grid) {
            const Ensemble e = ens.with_n(n);
            const EdgeMap map = detail::edge_map(e, side);
            ScalingRow row;
            row.beta = e.beta();
            row.X = X;
            row.n = n;
            row.mapped = map.point(X);
            if (!in_natural_domain(Ensemble::flavor, row.mapped)) {
                row.edge_band = true;
                rows.push_back(row);
                continue;
            }
            row.region = e.region(row.mapped);
            row.edge_band = row.region == Region::EdgeBand || row.region == Region::Bulk;
            if (!row.edge_band) {
                const double lg = detail::asym_density(e, row.mapped).log() + std::log(map.jacobian()) -
                                  tw_right_tail(e.beta(), X).log_abs();
                row.ratio = std::exp(lg);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

/// Coefficients of the hard-edge gap asymptote
///   log E ~ linear X + sqrt_coeff sqrt(X) + log_coeff log sqrt(X) + O(1);
/// the constant term is not provided.
struct HardEdgeCoefficients {
    double linear = 0.0;
    double sqrt_coeff = 0.0;
    double log_coeff = 0.0;
};

inline HardEdgeCoefficients hard_edge_coefficients(double beta, double a)
{
    detail::require(beta > 0.0, "hard_edge_coefficients: beta must be positive");
    detail::require(a >= 0.0, "hard_edge_coefficients: a must be >= 0");
    return {-beta / 8.0, beta * a / 2.0, -beta * (a * (a - 1.0) / 4.0 + a / (2.0 * beta))};
}

/// log E_beta^hard(0; (0, X)) up to its unknown additive constant.
inline LogValue hard_edge_tail(double beta, double a, double X)
{
    if (!(X > 0.0)) throw invalid_parameter("hard_edge_tail: X must be positive");
    const auto c = hard_edge_coefficients(beta, a);
    return LogValue::from_log(c.linear * X + c.sqrt_coeff * std::sqrt(X) + c.log_coeff * std::log(std::sqrt(X)));
}

} // namespace ldev
