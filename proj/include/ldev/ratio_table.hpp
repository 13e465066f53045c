#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ldev/ensemble.hpp"
#include "ldev/error.hpp"
#include "ldev/exact_density.hpp"
#include "ldev/large_deviation.hpp"

namespace ldev {

/// Grid of asym/exact ratios. Laguerre cells compare both densities at N x
/// (the asymptotic form is returned per unit of x, hence the 1/N); Jacobi
/// cells compare at x.
struct RatioTableSpec {
    Flavor flavor = Flavor::Laguerre;
    double beta = 2.0;
    double alpha1 = 1.0;
    double alpha2 = 0.0; // Jacobi only
    std::vector<int> ns;
    std::vector<double> xs;
    Beta1Form beta1_form = Beta1Form::exact;
};

struct RatioCell {
    int n = 0;
    double x = 0.0;
    double ratio = 0.0;
    double log_asym = 0.0;
    double log_exact = 0.0;
    std::optional<double> printed;
    std::string annotation;
};

struct RatioTable {
    RatioTableSpec spec;
    std::vector<RatioCell> cells;
};

namespace detail {

struct PrintedTable {
    Flavor flavor;
    double beta;
    double alpha1, alpha2;
    double xs[3];
    double values[5][3]; // rows N = 6, 12, 18, 24, 30
};

inline constexpr int kPrintedNs[5] = {6, 12, 18, 24, 30};

inline constexpr PrintedTable kPrinted[] = {
    {Flavor::Laguerre, 2.0, 1.0, 0.0, {0.1, 6.0, 10.0},
     {{1.670, 4.318, 1.122}, {1.357, 2.978, 1.062}, {1.246, 2.460, 1.041}, {1.189, 1.175, 1.031}, {1.153, 1.991, 1.025}}},
    {Flavor::Laguerre, 1.0, 1.0, 0.0, {0.1, 6.0, 10.0},
     {{1.072, 1.205, 1.083}, {1.049, 1.101, 1.041}, {1.039, 1.065, 1.027}, {1.027, 1.048, 1.020}, {1.023, 1.039, 1.016}}},
    {Flavor::Jacobi, 2.0, 5.0, 5.0, {0.8, 0.85, 0.9},
     {{1.866, 1.224, 1.115}, {1.487, 1.116, 1.058}, {1.345, 1.079, 1.038}, {1.269, 1.059, 1.029}, {1.221, 1.048, 1.023}}},
    {Flavor::Jacobi, 1.0, 5.0, 5.0, {0.8, 0.85, 0.9},
     {{1.045, 1.055, 1.055}, {1.030, 1.040, 1.028}, {1.033, 1.028, 1.018}, {1.035, 1.021, 1.014}, {1.035, 1.017, 1.011}}},
};

} // namespace detail

/// Tabulated three-decimal value for a cell, if the configuration is one of
/// the two reference tables.
inline std::optional<double> printed_ratio(Flavor flavor, double beta, double alpha1, double alpha2, int n, double x)
{
    for (const auto& t : detail::kPrinted) {
        if (t.flavor != flavor || t.beta != beta || t.alpha1 != alpha1) continue;
        if (flavor == Flavor::Jacobi && t.alpha2 != alpha2) continue;
        for (int r = 0; r < 5; ++r) {
            if (detail::kPrintedNs[r] != n) continue;
            for (int c = 0; c < 3; ++c) {
                if (std::fabs(t.xs[c] - x) < 1e-12) return t.values[r][c];
            }
        }
    }
    return std::nullopt;
}

/// The tabulated cell suspected of a dropped leading digit.
inline bool is_suspect_cell(Flavor flavor, double beta, double alpha1, int n, double x)
{
    return flavor == Flavor::Laguerre && beta == 2.0 && alpha1 == 1.0 && n == 24 && std::fabs(x - 6.0) < 1e-12;
}

/// Reference configurations. The Laguerre beta = 1 block was produced with the
/// N-point kernel variant, so that is its default; the Jacobi beta = 1 default
/// is the density that integrates to N.
inline RatioTableSpec default_ratio_table(Flavor flavor, double beta)
{
    detail::require(beta == 1.0 || beta == 2.0, "default_ratio_table: beta must be 1 or 2");
    RatioTableSpec s;
    s.flavor = flavor;
    s.beta = beta;
    s.ns = {6, 12, 18, 24, 30};
    if (flavor == Flavor::Laguerre) {
        s.alpha1 = 1.0;
        s.xs = {0.1, 6.0, 10.0};
        s.beta1_form = beta == 1.0 ? Beta1Form::printed : Beta1Form::exact;
    } else {
        s.alpha1 = s.alpha2 = 5.0;
        s.xs = {0.8, 0.85, 0.9};
    }
    return s;
}

inline RatioCell ratio_cell(const RatioTableSpec& spec, int n, double x)
{
    RatioCell cell;
    cell.n = n;
    cell.x = x;
    if (spec.flavor == Flavor::Laguerre) {
        const LaguerreEnsemble ens(spec.beta, n, spec.alpha1);
        cell.log_asym = asym_density_laguerre(ens, x).log() - std::log(static_cast<double>(n));
        const double y = n * x;
        cell.log_exact = spec.beta == 2.0 ? exact_density_laguerre_beta2(ens, y).log_abs()
                                          : exact_density_laguerre_beta1(ens, y, spec.beta1_form).log_abs();
    } else {
        const JacobiEnsemble ens(spec.beta, n, spec.alpha1, spec.alpha2);
        cell.log_asym = asym_density_jacobi(ens, x).log();
        cell.log_exact = spec.beta == 2.0 ? exact_density_jacobi_beta2(ens, x).log_abs()
                                          : exact_density_jacobi_beta1(ens, x, spec.beta1_form).log_abs();
    }
    cell.ratio = std::exp(cell.log_asym - cell.log_exact);
    cell.printed = printed_ratio(spec.flavor, spec.beta, spec.alpha1, spec.alpha2, n, x);
    if (cell.printed && is_suspect_cell(spec.flavor, spec.beta, spec.alpha1, n, x) &&
        std::fabs(cell.ratio - *cell.printed) > 0.005) {
        cell.annotation = "printed value breaks the monotone column; consistent with a dropped leading digit";
    }
    return cell;
}

inline RatioTable ratio_table(const RatioTableSpec& spec)
{
    detail::require(spec.beta == 1.0 || spec.beta == 2.0, "ratio_table: beta must be 1 or 2");
    detail::require(!spec.ns.empty() && !spec.xs.empty(), "ratio_table: empty N or x list");
    for (int n : spec.ns) {
        detail::require(n >= 1, "ratio_table: N must be >= 1");
        if (spec.beta == 1.0 && n % 2 != 0) throw invalid_parameter("ratio_table: beta = 1 requires even N");
    }
    RatioTable t{spec, {}};
    for (int n : spec.ns)
        for (double x : spec.xs) t.cells.push_back(ratio_cell(spec, n, x));
    return t;
}

} // namespace ldev
