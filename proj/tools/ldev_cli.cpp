// Command-line front end: density, table, check, sample, scaling.
// Exit codes: 0 success, 1 a check failed or a computation did not converge,
// 2 usage or parameter error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldev/ldev.hpp"
#include "table_output.hpp"
#include "tolerance_config.hpp"

namespace {

using ldev::invalid_parameter;
using ldev::cli::Cell;
using ldev::cli::OutputTable;

struct RunConfig {
    std::string flavor = "laguerre";
    double beta = 2.0;
    std::optional<double> alpha, alpha1, alpha2;
    std::vector<int> ns;
    std::vector<std::string> x_tokens;
    std::vector<double> betas;
    std::string regime = "exact";
    std::string beta1_form;
    std::string side = "max";
    std::string kind;
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::uint64_t samples = 10000;
    int threads = 1;
    int bins = 40;
    double a = 0.0;
    std::string format = "csv";
    std::string out;
    std::string tolerances;
    bool beta_given = false;
};

/// "v" or "lo:hi:step" (inclusive of hi up to rounding).
std::vector<double> parse_grid(const std::vector<std::string>& tokens)
{
    std::vector<double> xs;
    for (const auto& tok : tokens) {
        const auto c1 = tok.find(':');
        try {
            if (c1 == std::string::npos) {
                std::size_t used = 0;
                xs.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
                continue;
            }
            const auto c2 = tok.find(':', c1 + 1);
            if (c2 == std::string::npos) throw std::invalid_argument(tok);
            const double lo = std::stod(tok.substr(0, c1));
            const double hi = std::stod(tok.substr(c1 + 1, c2 - c1 - 1));
            const double step = std::stod(tok.substr(c2 + 1));
            if (!(step > 0.0) || hi < lo) throw invalid_parameter("--x range '" + tok + "' needs lo <= hi and step > 0");
            const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            if (count > 1000000) throw invalid_parameter("--x range '" + tok + "' has too many points");
            for (long i = 0; i < count; ++i) xs.push_back(lo + i * step);
        } catch (const invalid_parameter&) {
            throw;
        } catch (const std::exception&) {
            throw invalid_parameter("--x value '" + tok + "' is neither a number nor lo:hi:step");
        }
    }
    return xs;
}

ldev::Flavor parse_flavor(const std::string& s)
{
    if (s == "laguerre") return ldev::Flavor::Laguerre;
    if (s == "jacobi") return ldev::Flavor::Jacobi;
    throw invalid_parameter("--flavor must be laguerre or jacobi");
}

ldev::Beta1Form parse_form(const std::string& s)
{
    if (s == "exact") return ldev::Beta1Form::exact;
    if (s == "printed") return ldev::Beta1Form::printed;
    throw invalid_parameter("--beta1-form must be exact or printed");
}

ldev::LaguerreEnsemble laguerre_of(const RunConfig& c, double beta, int n)
{
    if (c.alpha1 || c.alpha2) throw invalid_parameter("--alpha1/--alpha2 apply to the jacobi flavor; use --alpha");
    return {beta, n, c.alpha.value_or(1.0)};
}

ldev::JacobiEnsemble jacobi_of(const RunConfig& c, double beta, int n)
{
    if (c.alpha) throw invalid_parameter("--alpha applies to the laguerre flavor; use --alpha1/--alpha2");
    return {beta, n, c.alpha1.value_or(5.0), c.alpha2.value_or(5.0)};
}

int single_n(const RunConfig& c, int fallback)
{
    if (c.ns.empty()) return fallback;
    if (c.ns.size() != 1) throw invalid_parameter("--n takes a single value for this command");
    return c.ns.front();
}

void add_ensemble_meta(OutputTable& t, const RunConfig& c, ldev::Flavor f)
{
    t.meta["flavor"] = ldev::to_string(f);
    if (f == ldev::Flavor::Laguerre) {
        t.meta["alpha"] = c.alpha.value_or(1.0);
    } else {
        t.meta["alpha1"] = c.alpha1.value_or(5.0);
        t.meta["alpha2"] = c.alpha2.value_or(5.0);
    }
}

// ---------------------------------------------------------------- density

template <class Ensemble, class Exact, class Asym, class Bulk>
void density_rows(OutputTable& t, const Ensemble& ens, const std::vector<double>& xs, const std::string& regime,
                  Exact exact, Asym asym, Bulk bulk)
{
    for (double x : xs) {
        const auto region = ens.region(x);
        std::string status = "ok";
        std::optional<ldev::LogValue> v;
        if (regime == "exact") {
            v = exact(x);
        } else if (regime == "asym") {
            if (region == ldev::Region::Bulk || region == ldev::Region::EdgeBand) status = "rejected_" + std::string(ldev::to_string(region));
            else v = asym(x);
        } else {
            if (ens.edges().strictly_inside(x)) v = ldev::LogValue::from_double(bulk(x));
            else {
                status = "outside_support";
                v = ldev::LogValue::zero();
            }
        }
        std::vector<Cell> row{x, regime, std::string(ldev::to_string(region)), status};
        if (v) {
            const double d = v->to_double();
            row.insert(row.end(), {v->is_zero() ? Cell{} : Cell{v->log_abs()}, d, ldev::cli::rounded_sig(d, 6)});
        } else {
            row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
        }
        t.add_row(std::move(row));
    }
}

OutputTable cmd_density(const RunConfig& c)
{
    const auto flavor = parse_flavor(c.flavor);
    const int n = single_n(c, 0);
    if (n < 1) throw invalid_parameter("--n (>= 1) is required");
    if (c.regime != "exact" && c.regime != "bulk" && c.regime != "asym")
        throw invalid_parameter("--regime must be exact, bulk or asym");
    const auto xs = parse_grid(c.x_tokens);
    if (xs.empty()) throw invalid_parameter("--x is required");
    const auto form = parse_form(c.beta1_form.empty() ? "exact" : c.beta1_form);
    if (c.regime == "exact") {
        if (c.beta != 1.0 && c.beta != 2.0) throw invalid_parameter("exact densities are available for beta 1 and 2");
        if (c.beta == 1.0 && n % 2 != 0) throw invalid_parameter("exact beta = 1 densities require even N");
    }
    OutputTable t;
    t.columns = {"x", "regime", "region", "status", "log_density", "density", "density_display"};
    t.meta["command"] = "density";
    add_ensemble_meta(t, c, flavor);
    t.meta["beta"] = c.beta;
    t.meta["n"] = n;
    t.meta["regime"] = c.regime;
    if (flavor == ldev::Flavor::Laguerre) {
        // Laguerre: every regime reports rho(N x), N x being the unscaled eigenvalue.
        t.meta["argument"] = "N*x";
        const auto ens = laguerre_of(c, c.beta, n);
        for (double x : xs)
            if (!(x > 0.0)) throw invalid_parameter("--x must be positive for the laguerre flavor");
        density_rows(
            t, ens, xs, c.regime,
            [&](double x) {
                return c.beta == 2.0 ? ldev::exact_density_laguerre_beta2(ens, n * x)
                                     : ldev::exact_density_laguerre_beta1(ens, n * x, form);
            },
            [&](double x) { return ldev::asym_density_laguerre(ens, x).log_density.scaled(-std::log(static_cast<double>(n))); },
            [&](double x) { return ldev::mp_density(ens, x); });
    } else {
        t.meta["argument"] = "x";
        const auto ens = jacobi_of(c, c.beta, n);
        for (double x : xs)
            if (!(x > 0.0 && x < 1.0)) throw invalid_parameter("--x must lie in (0,1) for the jacobi flavor");
        density_rows(
            t, ens, xs, c.regime,
            [&](double x) {
                return c.beta == 2.0 ? ldev::exact_density_jacobi_beta2(ens, x) : ldev::exact_density_jacobi_beta1(ens, x, form);
            },
            [&](double x) { return ldev::asym_density_jacobi(ens, x).log_density; },
            [&](double x) { return n * ldev::jacobi_bulk_density(ens, x); });
    }
    if (c.regime == "exact" && c.beta == 1.0) t.meta["beta1_form"] = ldev::to_string(form);
    return t;
}

// ---------------------------------------------------------------- table

OutputTable cmd_table(const RunConfig& c)
{
    const auto flavor = parse_flavor(c.flavor);
    if (c.beta != 1.0 && c.beta != 2.0) throw invalid_parameter("table: --beta must be 1 or 2");
    auto spec = ldev::default_ratio_table(flavor, c.beta);
    if (flavor == ldev::Flavor::Laguerre) {
        spec.alpha1 = laguerre_of(c, c.beta, 1).alpha();
    } else {
        const auto e = jacobi_of(c, c.beta, 1);
        spec.alpha1 = e.alpha1();
        spec.alpha2 = e.alpha2();
    }
    if (!c.ns.empty()) spec.ns = c.ns;
    if (!c.x_tokens.empty()) spec.xs = parse_grid(c.x_tokens);
    if (!c.beta1_form.empty()) spec.beta1_form = parse_form(c.beta1_form);
    const auto table = ldev::ratio_table(spec);
    OutputTable t;
    t.columns = {"n", "x", "ratio", "ratio_display", "printed", "deviation", "annotation", "log_asym", "log_exact"};
    t.meta["command"] = "table";
    add_ensemble_meta(t, c, flavor);
    t.meta["beta"] = c.beta;
    if (c.beta == 1.0) t.meta["beta1_form"] = ldev::to_string(spec.beta1_form);
    t.meta["argument"] = flavor == ldev::Flavor::Laguerre ? "N*x" : "x";
    for (const auto& cell : table.cells) {
        t.add_row({static_cast<std::int64_t>(cell.n), cell.x, cell.ratio, ldev::cli::rounded(cell.ratio, 3),
                   cell.printed ? Cell{*cell.printed} : Cell{}, cell.printed ? Cell{cell.ratio - *cell.printed} : Cell{},
                   cell.annotation, cell.log_asym, cell.log_exact});
    }
    return t;
}

// ---------------------------------------------------------------- check

std::vector<ldev::CheckReport> run_suite(const std::string& suite, const RunConfig& c, const ldev::Tolerances& tol)
{
    using namespace ldev;
    std::vector<CheckReport> out;
    const bool all = suite == "all";
    bool known = all;
    auto want = [&](const char* name) {
        const bool hit = all || suite == name;
        known = known || hit;
        return hit;
    };
    if (want("rates")) out.push_back(check_rates({0.5, 1.0, 2.0}, 100, c.seed, tol.rates));
    if (want("fluctuation")) out.push_back(check_fluctuation(tol.fluctuation));
    if (want("normalization")) out.push_back(check_normalization(tol.normalization_beta2, tol.normalization_beta1));
    if (want("scaling")) out.push_back(check_scaling(tol.scaling));
    if (want("tables")) {
        out.push_back(check_table(default_ratio_table(Flavor::Laguerre, 2.0), tol.table_beta2));
        out.push_back(check_table(default_ratio_table(Flavor::Laguerre, 1.0), tol.table_laguerre_beta1));
        out.push_back(check_table(default_ratio_table(Flavor::Jacobi, 2.0), tol.table_beta2));
        out.push_back(check_table(default_ratio_table(Flavor::Jacobi, 1.0), tol.table_jacobi_beta1));
    }
    if (want("brute_force")) out.push_back(check_brute_force(default_brute_force_cases(), tol.brute_force, c.threads));
    if (want("bulk")) {
        SamplingOptions opt;
        opt.n_samples = c.samples;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.bins = c.bins;
        const LaguerreEnsemble l(2.0, 200, 1.0);
        out.push_back(check_bulk_histogram(l, [&](double x) { return mp_density(l, x); }, opt, tol.bulk_z));
        const JacobiEnsemble j(2.0, 200, 5.0, 5.0);
        out.push_back(check_bulk_histogram(j, [&](double x) { return jacobi_bulk_density(j, x); }, opt, tol.bulk_z));
    }
    if (want("hard_edge")) out.push_back(check_hard_edge(200000, c.seed, c.threads, tol.hard_edge_slope));
    if (!known)
        throw invalid_parameter("unknown check suite '" + suite +
                                "' (rates, fluctuation, normalization, scaling, tables, brute_force, bulk, hard_edge, all)");
    return out;
}

OutputTable cmd_check(const RunConfig& c, bool& all_pass)
{
    const auto cfg = ldev::cli::load_tolerances(c.tolerances);
    const auto reports = run_suite(c.suite, c, cfg.values);
    OutputTable t;
    t.columns = {"suite", "item", "residual", "tolerance", "pass"};
    t.meta["command"] = "check";
    t.meta["suite"] = c.suite;
    t.meta["tolerance_config"] = cfg.source;
    t.meta["tolerance_version"] = cfg.version;
    all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass();
        for (const auto& i : r.items) t.add_row({r.suite, i.name, i.residual, i.tolerance, i.pass});
    }
    t.meta["pass"] = all_pass;
    return t;
}

// ---------------------------------------------------------------- sample

OutputTable histogram_table(const ldev::EmpiricalSummary& s)
{
    OutputTable t;
    t.columns = {"bin_lo", "bin_hi", "estimate", "standard_error", "count", "estimate_display"};
    for (std::size_t b = 0; b < s.estimates.size(); ++b) {
        t.add_row({s.bin_edges[b], s.bin_edges[b + 1], s.estimates[b], s.standard_errors[b],
                   static_cast<std::int64_t>(s.counts[b]), ldev::cli::rounded_sig(s.estimates[b], 6)});
    }
    return t;
}

OutputTable cmd_sample(const RunConfig& c)
{
    if (c.samples < 1) throw invalid_parameter("--samples must be >= 1");
    if (c.threads < 1) throw invalid_parameter("--threads must be >= 1");
    const int n = single_n(c, 200);
    OutputTable t;
    if (c.kind == "gap") {
        if (parse_flavor(c.flavor) != ldev::Flavor::Laguerre) throw invalid_parameter("sample gap: laguerre flavor only");
        if (c.alpha || c.alpha1 || c.alpha2) throw invalid_parameter("sample gap: the exponent is fixed; use --a");
        auto X = c.x_tokens.empty() ? parse_grid({"5:40:2.5"}) : parse_grid(c.x_tokens);
        std::vector<double> s;
        for (double x : X) {
            if (!(x >= 0.0)) throw invalid_parameter("sample gap: --x values must be >= 0");
            s.push_back(x / (4.0 * n));
        }
        const auto g = ldev::estimate_gap_probability(c.beta, n, c.a, s, c.samples, c.seed, c.threads);
        t.columns = {"X", "s", "estimate", "standard_error", "count", "estimate_display"};
        for (std::size_t i = 0; i < s.size(); ++i) {
            t.add_row({X[i], s[i], g.estimates[i], g.standard_errors[i], static_cast<std::int64_t>(g.counts[i]),
                       ldev::cli::rounded_sig(g.estimates[i], 6)});
        }
        t.meta["flavor"] = "laguerre";
        t.meta["a"] = c.a;
        t.meta["s_of_X"] = "X/(4N)";
    } else if (c.kind == "density" || c.kind == "maxpdf") {
        const auto flavor = parse_flavor(c.flavor);
        ldev::SamplingOptions opt;
        opt.n_samples = c.samples;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.bins = c.bins;
        ldev::EmpiricalSummary s;
        if (flavor == ldev::Flavor::Laguerre) {
            const auto ens = laguerre_of(c, c.beta, n);
            s = c.kind == "density" ? ldev::estimate_density(ens, opt) : ldev::estimate_max_pdf(ens, opt);
        } else {
            const auto ens = jacobi_of(c, c.beta, n);
            s = c.kind == "density" ? ldev::estimate_density(ens, opt) : ldev::estimate_max_pdf(ens, opt);
        }
        t = histogram_table(s);
        add_ensemble_meta(t, c, flavor);
        t.meta["bins"] = c.bins;
        t.meta["variable"] = flavor == ldev::Flavor::Laguerre ? "lambda/N" : "x";
    } else {
        throw invalid_parameter("sample: kind must be density, maxpdf or gap");
    }
    // thread count deliberately absent: output must not depend on it
    t.meta["command"] = "sample";
    t.meta["kind"] = c.kind;
    t.meta["beta"] = c.beta;
    t.meta["n"] = n;
    t.meta["seed"] = c.seed;
    t.meta["samples"] = c.samples;
    return t;
}

// ---------------------------------------------------------------- scaling

OutputTable cmd_scaling(const RunConfig& c)
{
    const auto flavor = parse_flavor(c.flavor);
    const auto side = c.side == "max" ? ldev::EdgeSide::Max : c.side == "min" ? ldev::EdgeSide::Min
                                                                              : throw invalid_parameter("--side must be max or min");
    const auto X = c.x_tokens.empty() ? std::vector<double>{2.0, 4.0, 6.0} : parse_grid(c.x_tokens);
    const auto N = c.ns.empty() ? std::vector<int>{100, 10000} : c.ns;
    auto betas = c.betas.empty() ? std::vector<double>{1.0, 2.0, 4.0} : c.betas;
    if (c.beta_given) betas = {c.beta};
    OutputTable t;
    t.columns = {"beta", "X", "n", "mapped", "region", "edge_band", "ratio", "ratio_display"};
    t.meta["command"] = "scaling";
    add_ensemble_meta(t, c, flavor);
    t.meta["side"] = ldev::to_string(side);
    for (double beta : betas) {
        const auto rows = flavor == ldev::Flavor::Laguerre ? ldev::scaling_limit_check(laguerre_of(c, beta, 1), X, N, side)
                                                           : ldev::scaling_limit_check(jacobi_of(c, beta, 1), X, N, side);
        for (const auto& r : rows) {
            t.add_row({r.beta, r.X, static_cast<std::int64_t>(r.n), r.mapped, std::string(ldev::to_string(r.region)),
                       r.edge_band, r.edge_band ? Cell{} : Cell{r.ratio},
                       r.edge_band ? Cell{} : Cell{ldev::cli::rounded(r.ratio, 4)}});
        }
    }
    return t;
}

// ---------------------------------------------------------------- main

void emit(const OutputTable& t, const RunConfig& c)
{
    if (c.out.empty()) {
        c.format == "json" ? ldev::cli::write_json(std::cout, t) : ldev::cli::write_csv(std::cout, t);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw invalid_parameter("cannot open --out '" + c.out + "'");
    c.format == "json" ? ldev::cli::write_json(f, t) : ldev::cli::write_csv(f, t);
}

void ensemble_flags(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--flavor", c.flavor, "laguerre or jacobi")->check(CLI::IsMember({"laguerre", "jacobi"}));
    sub->add_option("--beta", c.beta, "Dyson index");
    sub->add_option("--alpha", c.alpha, "Laguerre exponent rate (a = alpha N)");
    sub->add_option("--alpha1", c.alpha1, "Jacobi exponent rate at 0");
    sub->add_option("--alpha2", c.alpha2, "Jacobi exponent rate at 1");
}

void output_flags(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default stdout)");
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig c;
    CLI::App app{"Tail densities of Laguerre and Jacobi beta ensembles"};
    app.require_subcommand(1);

    auto* density = app.add_subcommand("density", "evaluate densities on an x grid");
    ensemble_flags(density, c);
    density->add_option("--n", c.ns, "matrix size")->expected(1);
    density->add_option("--x", c.x_tokens, "points: values or lo:hi:step, repeatable");
    density->add_option("--regime", c.regime, "exact, bulk or asym");
    density->add_option("--beta1-form", c.beta1_form, "exact or printed (beta = 1 exact regime)");
    output_flags(density, c);

    auto* table = app.add_subcommand("table", "ratio tables asym/exact");
    ensemble_flags(table, c);
    table->add_option("--n", c.ns, "matrix sizes, repeatable");
    table->add_option("--x", c.x_tokens, "points: values or lo:hi:step, repeatable");
    table->add_option("--beta1-form", c.beta1_form, "exact or printed");
    output_flags(table, c);

    auto* check = app.add_subcommand("check", "run a named verification suite");
    check->add_option("suite", c.suite, "rates, fluctuation, normalization, scaling, tables, brute_force, bulk, hard_edge, all");
    check->add_option("--tolerances", c.tolerances, "tolerance config file (default: embedded)");
    check->add_option("--seed", c.seed, "master seed");
    check->add_option("--samples", c.samples, "samples for the bulk suite");
    check->add_option("--threads", c.threads, "worker threads");
    output_flags(check, c);

    auto* sample = app.add_subcommand("sample", "Monte Carlo estimates from tridiagonal models");
    sample->add_option("kind", c.kind, "density, maxpdf or gap")->required();
    ensemble_flags(sample, c);
    sample->add_option("--n", c.ns, "matrix size")->expected(1);
    sample->add_option("--x", c.x_tokens, "gap: hard-edge X grid, s = X/(4N)");
    sample->add_option("--a", c.a, "gap: fixed exponent a");
    sample->add_option("--seed", c.seed, "master seed");
    sample->add_option("--samples", c.samples, "number of samples");
    sample->add_option("--threads", c.threads, "worker threads (output does not depend on it)");
    sample->add_option("--bins", c.bins, "histogram bins");
    output_flags(sample, c);

    auto* scaling = app.add_subcommand("scaling", "soft-edge scaling ratios");
    ensemble_flags(scaling, c);
    scaling->add_option("--betas", c.betas, "beta values (default 1 2 4; --beta picks one)");
    scaling->add_option("--n", c.ns, "matrix sizes, repeatable");
    scaling->add_option("--x", c.x_tokens, "edge variable X grid");
    scaling->add_option("--side", c.side, "max or min edge");
    output_flags(scaling, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        bool pass = true;
        if (density->parsed()) emit(cmd_density(c), c);
        else if (table->parsed()) emit(cmd_table(c), c);
        else if (check->parsed()) emit(cmd_check(c, pass), c);
        else if (sample->parsed()) emit(cmd_sample(c), c);
        else if (scaling->parsed()) {
            c.beta_given = scaling->count("--beta") > 0;
            emit(cmd_scaling(c), c);
        }
        return pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        // invalid_parameter and the library's precondition failures
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
