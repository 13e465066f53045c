#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"

namespace ldev {

/// Marchenko-Pastur density per eigenvalue of the spectrum scaled by N.
inline double mp_density(const LaguerreEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    if (!e.strictly_inside(x)) throw invalid_parameter("mp_density: x outside the open support");
    return std::sqrt((e.upper - x) * (x - e.lower)) / (2.0 * std::numbers::pi * x);
}

/// Leading-order Jacobi density per eigenvalue on (c1, c2).
inline double jacobi_bulk_density(const JacobiEnsemble& ens, double x)
{
    const Edges& e = ens.edges();
    if (!e.strictly_inside(x)) throw invalid_parameter("jacobi_bulk_density: x outside the open support");
    const double s = 2.0 + ens.alpha1() + ens.alpha2();
    return s / (2.0 * std::numbers::pi) * std::sqrt((x - e.lower) * (e.upper - x)) / (x * (1.0 - x));
}

/// N times the leading law plus the O(1) correction
///   (1/beta - 1/2) (delta(t-lo)/2 + delta(t-hi)/2 - 1/(pi sqrt((t-lo)(hi-t)))).
/// The atoms are kept as weights, never smeared into bumps.
struct CorrectedDensity {
    std::function<double(double)> smooth;
    Edges edges;
    double atom_lower = 0.0;
    double atom_upper = 0.0;
    double inv_sqrt_coeff = 0.0;

    /// The O(1) part's continuous term at t (excluding the atoms).
    double inv_sqrt_term(double t) const
    {
        return -inv_sqrt_coeff / (std::numbers::pi * std::sqrt((t - edges.lower) * (edges.upper - t)));
    }
};

namespace detail {

inline CorrectedDensity make_corrected(std::function<double(double)> smooth, const Edges& e, double beta)
{
    const double c = 1.0 / beta - 0.5;
    return {std::move(smooth), e, 0.5 * c, 0.5 * c, c};
}

} // namespace detail

inline CorrectedDensity corrected_density(const LaguerreEnsemble& ens)
{
    const double n = ens.n();
    return detail::make_corrected([ens, n](double t) { return n * mp_density(ens, t); }, ens.edges(), ens.beta());
}

inline CorrectedDensity corrected_density(const JacobiEnsemble& ens)
{
    const double n = ens.n();
    return detail::make_corrected([ens, n](double t) { return n * jacobi_bulk_density(ens, t); }, ens.edges(),
                                  ens.beta());
}

} // namespace ldev
