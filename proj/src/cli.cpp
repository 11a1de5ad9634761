#include "fracpois/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracpois/errors.hpp"
#include "fracpois/saigo.hpp"
#include "fracpois/simulate.hpp"

namespace fracpois::cli {

namespace {

using nlohmann::json;

constexpr double normalization_threshold = 1e-6;
constexpr double kolmogorov_threshold = 1e-8;
constexpr double identity_threshold = 1e-10;
constexpr double semigroup_threshold = 1e-3;

// Parameter tuple whose two Saigo operator orders disagree.
constexpr SaigoParams semigroup_p1{0.5, -0.2, 0.3};
constexpr SaigoParams semigroup_p2{0.7, -0.4, 0.1};
constexpr double semigroup_rho = 1.0;

template <class T>
void read_key(const json& j, const char* key, T& target) {
    if (j.contains(key)) {
        target = j.at(key).get<T>();
    }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw DomainError("config file " + path + " must hold a JSON object");
    }
    static const std::vector<std::string> known{
        "variant", "lambda", "alpha",    "nu",     "beta", "gamma", "t_start", "t_stop",  "t_count", "n_max",
        "max_k",   "tol_abs", "tol_rel", "term_cap", "format", "u",  "time",    "seed",    "samples", "workers"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw DomainError("config file " + path + ": unknown key '" + item.key() + "'");
        }
    }
    try {
        read_key(j, "variant", cfg.variant);
        read_key(j, "lambda", cfg.lambda);
        read_key(j, "alpha", cfg.alpha);
        read_key(j, "nu", cfg.nu);
        if (j.contains("beta")) {
            cfg.beta = j.at("beta").get<double>();
            cfg.beta_set = true;
        }
        read_key(j, "gamma", cfg.gamma);
        read_key(j, "t_start", cfg.t_start);
        read_key(j, "t_stop", cfg.t_stop);
        read_key(j, "t_count", cfg.t_count);
        read_key(j, "n_max", cfg.n_max);
        read_key(j, "max_k", cfg.control.max_k);
        read_key(j, "tol_abs", cfg.control.tol_abs);
        read_key(j, "tol_rel", cfg.control.tol_rel);
        read_key(j, "term_cap", cfg.control.term_cap);
        read_key(j, "format", cfg.format);
        read_key(j, "u", cfg.u_values);
        read_key(j, "time", cfg.sim_time);
        read_key(j, "seed", cfg.seed);
        read_key(j, "samples", cfg.samples);
        read_key(j, "workers", cfg.workers);
    } catch (const json::exception& e) {
        throw DomainError("config file " + path + ": " + e.what());
    }
}

json params_json(Variant variant, const FractionalParams& p) {
    return {{"variant", std::string(to_string(variant))},
            {"lambda", p.lambda},
            {"alpha", p.alpha},
            {"nu", p.nu},
            {"beta", p.beta},
            {"gamma", p.gamma}};
}

void validate_config(const RunConfig& cfg) {
    cfg.control.validate();
    if (cfg.format != "csv" && cfg.format != "json") {
        throw DomainError("format must be csv or json");
    }
    if (cfg.n_max < 0) {
        throw DomainError("n_max must be non-negative");
    }
    if (cfg.t_count < 1) {
        throw DomainError("t_count must be at least 1");
    }
    if (!(cfg.t_start >= 0.0) || !(cfg.t_stop >= cfg.t_start) || !std::isfinite(cfg.t_stop)) {
        throw DomainError("time grid needs 0 <= t_start <= t_stop");
    }
    if (cfg.t_count == 1 && cfg.t_stop != cfg.t_start) {
        throw DomainError("a single-point grid needs t_start = t_stop");
    }
}

json check_entry(const std::string& name, double residual, double threshold, bool pass) {
    return {{"name", name}, {"residual", residual}, {"threshold", threshold}, {"pass", pass}};
}

int cmd_pmf(const RunConfig& cfg, Variant variant, const FractionalParams& params, std::ostream& out) {
    const std::vector<double> times = time_grid(cfg);
    const PmfTable table = make_pmf_table(variant, params, times, cfg.n_max, cfg.control);
    if (cfg.format == "csv") {
        out << "t,n,p,tail_mass\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (int n = 0; n <= cfg.n_max; ++n) {
                out << format_number(times[i]) << ',' << n << ',' << format_number(table.probs[i][n]) << ','
                    << format_number(table.tail_mass[i]) << '\n';
            }
        }
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (int n = 0; n <= cfg.n_max; ++n) {
                rows.push_back({{"t", times[i]}, {"n", n}, {"p", table.probs[i][n]}, {"tail_mass", table.tail_mass[i]}});
            }
        }
        out << json{{"params", params_json(variant, params)}, {"rows", rows}}.dump(2) << '\n';
    }
    return ok;
}

int cmd_pgf(const RunConfig& cfg, Variant variant, const FractionalParams& params, std::ostream& out) {
    const std::vector<double> times = time_grid(cfg);
    std::vector<std::vector<double>> values;
    for (double t : times) {
        std::vector<double> row;
        for (double u : cfg.u_values) {
            row.push_back(sstfpp_pgf(params, u, t, cfg.control));
        }
        values.push_back(std::move(row));
    }
    if (cfg.format == "csv") {
        out << "t,u,pgf\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (std::size_t j = 0; j < cfg.u_values.size(); ++j) {
                out << format_number(times[i]) << ',' << format_number(cfg.u_values[j]) << ','
                    << format_number(values[i][j]) << '\n';
            }
        }
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (std::size_t j = 0; j < cfg.u_values.size(); ++j) {
                rows.push_back({{"t", times[i]}, {"u", cfg.u_values[j]}, {"pgf", values[i][j]}});
            }
        }
        out << json{{"params", params_json(variant, params)}, {"rows", rows}}.dump(2) << '\n';
    }
    return ok;
}

int cmd_survival(const RunConfig& cfg, Variant variant, const FractionalParams& params, std::ostream& out) {
    const std::vector<double> times = time_grid(cfg);
    std::vector<double> values;
    for (double t : times) {
        values.push_back(waiting_survival(params, t, cfg.control));
    }
    if (cfg.format == "csv") {
        out << "t,survival\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            out << format_number(times[i]) << ',' << format_number(values[i]) << '\n';
        }
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < times.size(); ++i) {
            rows.push_back({{"t", times[i]}, {"survival", values[i]}});
        }
        out << json{{"params", params_json(variant, params)}, {"rows", rows}}.dump(2) << '\n';
    }
    return ok;
}

int cmd_verify(const RunConfig& cfg, Variant variant, const FractionalParams& params, std::ostream& out) {
    const std::vector<double> times = time_grid(cfg);
    json checks = json::array();
    bool all_pass = true;
    auto record = [&](json entry) {
        all_pass = all_pass && entry.at("pass").get<bool>();
        checks.push_back(std::move(entry));
    };

    // Truncated ADM sums per state plus the closed-form exceedance mass.
    {
        const AdmState state = solve_process_adm(variant, params, cfg.n_max, cfg.control, cfg.t_stop);
        double worst = 0.0;
        for (double t : times) {
            KahanSum total;
            for (int n = 0; n <= cfg.n_max; ++n) {
                total.add(state.evaluate(n, t));
            }
            total.add(tail_probability(params, t, cfg.n_max, cfg.control));
            worst = std::max(worst, std::abs(total.value() - 1.0));
        }
        record(check_entry("normalization", worst, normalization_threshold, worst <= normalization_threshold));
    }

    {
        const int n_top = std::min(5, cfg.n_max);
        double worst = 0.0;
        double worst_ratio = 0.0;
        for (double t : times) {
            if (t == 0.0) {
                continue;
            }
            for (int n = 0; n <= n_top; ++n) {
                const KolmogorovResult r = kolmogorov_residual(params, t, n, cfg.control.max_k);
                worst = std::max(worst, r.residual);
                if (r.residual > 0.0) {
                    worst_ratio = std::max(worst_ratio, r.tail_bound > 0.0 ? r.residual / r.tail_bound
                                                                          : std::numeric_limits<double>::infinity());
                }
            }
        }
        record(check_entry("kolmogorov", worst, kolmogorov_threshold, worst <= kolmogorov_threshold));
        record(check_entry("kolmogorov_vs_tail_bound", worst_ratio, 1.0, worst_ratio <= 1.0));
    }

    {
        const double diff =
            adm_closed_form_diff(variant, params, std::min(5, cfg.n_max), std::min(10, cfg.control.max_k));
        record(check_entry("adm_closed_form", diff, identity_threshold, diff <= identity_threshold));
    }

    {
        double worst = 0.0;
        for (double rho : {0.5, 1.0, 1.5, 2.5}) {
            for (double t : {0.5, 1.0, 2.0}) {
                worst = std::max(worst, composition_check(params.saigo(), rho, t));
            }
        }
        record(check_entry("composition", worst, identity_threshold, worst <= identity_threshold));
    }

    {
        const SemigroupComparison cmp = semigroup_counterexample(semigroup_p1, semigroup_p2, semigroup_rho);
        json entry = check_entry("semigroup_counterexample", cmp.relative_gap, semigroup_threshold,
                                 cmp.differ && cmp.relative_gap > semigroup_threshold);
        entry["lhs"] = cmp.lhs;
        entry["rhs"] = cmp.rhs;
        entry["differ"] = cmp.differ;
        record(std::move(entry));
    }

    {
        double worst = 0.0;
        for (double u : {-0.3, 0.3}) {
            worst = std::max(worst, pgf_cauchy_residual(params, u, cfg.control.max_k));
        }
        record(check_entry("pgf_cauchy", worst, identity_threshold, worst <= identity_threshold));
    }

    json params_out = params_json(variant, params);
    params_out["n_max"] = cfg.n_max;
    params_out["max_k"] = cfg.control.max_k;
    params_out["times"] = times;
    out << json{{"checks", checks}, {"params", params_out}}.dump(2) << '\n';
    return all_pass ? ok : verify_failed;
}

int cmd_simulate(const RunConfig& cfg, Variant variant, const FractionalParams& params, std::ostream& out) {
    if (variant == Variant::sstfpp) {
        throw UnsupportedVariantError("simulate: sstfpp has no time-change representation to sample");
    }
    const EmpiricalPmf sample =
        empirical_pmf(variant, params, cfg.sim_time, cfg.samples, cfg.n_max, cfg.seed, cfg.workers);
    std::vector<double> closed;
    for (int n = 0; n <= cfg.n_max; ++n) {
        closed.push_back(pmf(variant, params, cfg.sim_time, n, cfg.control));
    }
    const ChiSquareResult gof = chi_square_gof(sample, closed);
    if (cfg.format == "csv") {
        out << "n,empirical,closed_form,abs_diff\n";
        for (int n = 0; n <= cfg.n_max; ++n) {
            const double f = sample.frequency(n);
            out << n << ',' << format_number(f) << ',' << format_number(closed[n]) << ','
                << format_number(std::abs(f - closed[n])) << '\n';
        }
        out << "# samples=" << sample.sample_count << ",overflow=" << sample.overflow << ",seed=" << cfg.seed
            << ",t=" << format_number(cfg.sim_time) << '\n';
        out << "# chi_square=" << format_number(gof.statistic) << ",dof=" << gof.dof
            << ",p_value=" << format_number(gof.p_value) << '\n';
    } else {
        json rows = json::array();
        for (int n = 0; n <= cfg.n_max; ++n) {
            const double f = sample.frequency(n);
            rows.push_back({{"n", n}, {"empirical", f}, {"closed_form", closed[n]}, {"abs_diff", std::abs(f - closed[n])}});
        }
        json params_out = params_json(variant, params);
        params_out["t"] = cfg.sim_time;
        params_out["samples"] = sample.sample_count;
        params_out["seed"] = cfg.seed;
        out << json{{"params", params_out},
                    {"rows", rows},
                    {"overflow", sample.overflow},
                    {"chi_square", {{"statistic", gof.statistic}, {"dof", gof.dof}, {"p_value", gof.p_value}}}}
                       .dump(2)
            << '\n';
    }
    return ok;
}

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> time_grid(const RunConfig& cfg) {
    std::vector<double> out;
    if (cfg.t_count == 1) {
        out.push_back(cfg.t_start);
        return out;
    }
    const double step = (cfg.t_stop - cfg.t_start) / (cfg.t_count - 1);
    for (int i = 0; i < cfg.t_count; ++i) {
        out.push_back(i + 1 == cfg.t_count ? cfg.t_stop : cfg.t_start + i * step);
    }
    return out;
}

FractionalParams resolve_params(const RunConfig& cfg, Variant& variant) {
    const auto parsed = parse_variant(cfg.variant);
    if (!parsed) {
        throw DomainError("unknown variant '" + cfg.variant + "'");
    }
    variant = *parsed;
    FractionalParams p;
    switch (variant) {
        case Variant::classical:
            p = FractionalParams::classical(cfg.lambda);
            break;
        case Variant::tfpp:
            p = FractionalParams::tfpp(cfg.lambda, cfg.alpha);
            break;
        case Variant::sfpp:
            p = FractionalParams::sfpp(cfg.lambda, cfg.nu);
            break;
        case Variant::stfpp:
            p = FractionalParams::stfpp(cfg.lambda, cfg.alpha, cfg.nu);
            break;
        case Variant::sstfpp:
            p = FractionalParams::sstfpp(cfg.lambda, cfg.alpha, cfg.beta_set ? cfg.beta : -cfg.alpha, cfg.gamma,
                                         cfg.nu);
            break;
    }
    validate(variant, p);
    return p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Fractional Poisson process distributions"};
    app.require_subcommand(1);
    app.fallthrough();

    auto* beta_opt = app.add_option("--beta", cfg.beta, "Saigo beta (< 0); sstfpp only, defaults to -alpha");
    app.add_option("--variant", cfg.variant, "classical | tfpp | sfpp | stfpp | sstfpp");
    app.add_option("--lambda", cfg.lambda, "intensity");
    app.add_option("--alpha", cfg.alpha, "time order in (0, 1]");
    app.add_option("--nu", cfg.nu, "space order in (0, 1]");
    app.add_option("--gamma", cfg.gamma, "Saigo gamma; sstfpp only");
    app.add_option("--t-start", cfg.t_start, "first grid time");
    app.add_option("--t-stop", cfg.t_stop, "last grid time");
    app.add_option("--t-count", cfg.t_count, "number of grid times");
    app.add_option("--n-max", cfg.n_max, "largest state");
    app.add_option("--max-k", cfg.control.max_k, "ADM truncation order");
    app.add_option("--tol-abs", cfg.control.tol_abs, "absolute series tolerance");
    app.add_option("--tol-rel", cfg.control.tol_rel, "relative series tolerance");
    app.add_option("--term-cap", cfg.control.term_cap, "maximum series terms");
    app.add_option("--format", cfg.format, "csv | json");
    app.add_option("--u", cfg.u_values, "pgf arguments, |u| < 1")->delimiter(',');
    app.add_option("--time", cfg.sim_time, "simulation time");
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--samples", cfg.samples, "Monte-Carlo sample count");
    app.add_option("--workers", cfg.workers, "sampling threads, 0 = all cores");

    const std::pair<const char*, const char*> commands[] = {
        {"pmf", "state probabilities and tail mass on the time grid"},
        {"pgf", "probability generating function on the time grid"},
        {"survival", "first-arrival survival P(N(t) = 0)"},
        {"verify", "numerical self-checks, exit 1 if any fails"},
        {"simulate", "Monte-Carlo histogram with chi-square fit"}};
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->callback([&cfg, name] { cfg.command = name; });
    }

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    std::ostringstream buffer;
    try {
        if (const char* path = std::getenv("FRACPOIS_CONFIG"); path != nullptr && *path != '\0') {
            load_config_file(path, cfg);
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return ok;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << '\n';
            return bad_params;
        }
        if (beta_opt->count() > 0) {
            cfg.beta_set = true;
        }
        validate_config(cfg);
        Variant variant = Variant::stfpp;
        const FractionalParams params = resolve_params(cfg, variant);

        int code = ok;
        if (cfg.command == "pmf") {
            code = cmd_pmf(cfg, variant, params, buffer);
        } else if (cfg.command == "pgf") {
            code = cmd_pgf(cfg, variant, params, buffer);
        } else if (cfg.command == "survival") {
            code = cmd_survival(cfg, variant, params, buffer);
        } else if (cfg.command == "verify") {
            code = cmd_verify(cfg, variant, params, buffer);
        } else {
            code = cmd_simulate(cfg, variant, params, buffer);
        }
        out << buffer.str();
        return code;
    } catch (const UnsupportedVariantError& e) {
        err << "error: " << e.what() << '\n';
        return unsupported_variant;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return bad_params;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return convergence_failure;
    } catch (const TruncationError& e) {
        err << "error: " << e.what() << '\n';
        return convergence_failure;
    } catch (const QuadratureError& e) {
        err << "error: " << e.what() << '\n';
        return convergence_failure;
    }
}

}  // namespace fracpois::cli
