#include "fracpois/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracpois/errors.hpp"
#include "fracpois/specfun.hpp"

namespace fracpois {

namespace {

// x^k / Γ(g) for x >= 0 and g > 0 off the poles.
double power_over_gamma(double x, int k, double g) {
    if (k == 0) {
        return rgamma(g);
    }
    if (x == 0.0) {
        return 0.0;
    }
    const double log_power = k * std::log(x);
    if (g < 170.0 && std::abs(log_power) < 700.0) {
        return std::pow(x, k) * rgamma(g);
    }
    return std::exp(log_power - log_gamma(g));
}

// Generalized binomial coefficient y (y-1) ... (y-n+1) / n!.
double binomial_general(double y, int n) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) {
        p *= (y - j) / (j + 1.0);
    }
    return p;
}

// Smooth bound on |binomial_general(y, n)| for y >= -1.
double binomial_envelope(double y, int n) {
    if (n == 0) {
        return 1.0;
    }
    const double a = std::abs(y);
    return std::exp(log_gamma(a + n + 1.0) - log_gamma(a + 1.0) - log_gamma(n + 1.0));
}

double signed_power(int k) {
    return (k % 2 == 0) ? 1.0 : -1.0;
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("time must be finite and non-negative");
    }
}

void check_state(int n) {
    if (n < 0) {
        throw DomainError("state index must be non-negative");
    }
}

void guard_argument(double x, const char* what) {
    if (x > argument_guard) {
        throw ConvergenceError(std::string(what) + ": series argument " + std::to_string(x) +
                               " exceeds the double-precision window of 30");
    }
}

// a_k = weight(k) / Γ(gamma_arg(k)).
struct KernelCoefficient {
    double weight = 1.0;
    double gamma_arg = 1.0;
};

// Space-time coefficients: C_k / Γ(1 - k beta), with C_k = 1 when beta = -alpha.
class SpaceTimeCoefficients {
  public:
    explicit SpaceTimeCoefficients(const FractionalParams& p) : p_(p), log_c_{0.0} {}

    KernelCoefficient operator()(int k) {
        while (static_cast<int>(log_c_.size()) <= k) {
            const int j = static_cast<int>(log_c_.size());
            const double num = 1.0 + p_.gamma - j * p_.beta;
            const double den = num + (p_.alpha + p_.beta);
            if (!(num > 0.0) || !(den > 0.0)) {
                throw DomainError("C_k: non-positive gamma argument at j=" + std::to_string(j));
            }
            log_c_.push_back(log_c_.back() + (log_gamma(num) - log_gamma(den)));
        }
        return {std::exp(log_c_[k]), 1.0 - k * p_.beta};
    }

  private:
    FractionalParams p_;
    std::vector<double> log_c_;
};

// sum_{k >= k_start} a_k (-x)^k binomial_general(k nu + shift, n).
template <class Coefficients>
SeriesSum space_time_kernel(double x, double nu, int n, double shift, int k_start, Coefficients& coeff,
                            const SeriesControl& control, const char* what) {
    control.validate();
    guard_argument(x, what);
    if (x == 0.0) {
        SeriesSum out;
        if (k_start == 0) {
            const KernelCoefficient a0 = coeff(0);
            out.value = a0.weight * rgamma(a0.gamma_arg) * binomial_general(shift, n);
            out.max_term = std::abs(out.value);
            out.terms = 1;
        }
        return out;
    }
    auto term = [&](int i) -> SeriesTerm {
        const int k = i + k_start;
        const KernelCoefficient a = coeff(k);
        const double base = a.weight * power_over_gamma(x, k, a.gamma_arg);
        const double y = k * nu + shift;
        return {signed_power(k) * base * binomial_general(y, n), base * binomial_envelope(y, n)};
    };
    return sum_series(term, control, what);
}

double space_time_argument(const FractionalParams& p, double t) {
    return std::pow(p.lambda, p.nu) * std::pow(t, -p.beta);
}

}  // namespace

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::classical:
            return "classical";
        case Variant::tfpp:
            return "tfpp";
        case Variant::sfpp:
            return "sfpp";
        case Variant::stfpp:
            return "stfpp";
        case Variant::sstfpp:
            return "sstfpp";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : {Variant::classical, Variant::tfpp, Variant::sfpp, Variant::stfpp, Variant::sstfpp}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    return std::nullopt;
}

FractionalParams FractionalParams::classical(double lambda) {
    return {lambda, 1.0, 1.0, -1.0, 0.0};
}

FractionalParams FractionalParams::tfpp(double lambda, double alpha) {
    return {lambda, alpha, 1.0, -alpha, 0.0};
}

FractionalParams FractionalParams::sfpp(double lambda, double nu) {
    return {lambda, 1.0, nu, -1.0, 0.0};
}

FractionalParams FractionalParams::stfpp(double lambda, double alpha, double nu) {
    return {lambda, alpha, nu, -alpha, 0.0};
}

FractionalParams FractionalParams::sstfpp(double lambda, double alpha, double beta, double gamma, double nu) {
    return {lambda, alpha, nu, beta, gamma};
}

void validate(Variant variant, const FractionalParams& p) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw DomainError("lambda must be positive and finite");
    }
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1]");
    }
    if (!(p.nu > 0.0 && p.nu <= 1.0)) {
        throw DomainError("nu must lie in (0, 1]");
    }
    if (!(p.beta < 0.0) || !std::isfinite(p.beta)) {
        throw DomainError("beta must be negative and finite");
    }
    if (!std::isfinite(p.gamma)) {
        throw DomainError("gamma must be finite");
    }
    switch (variant) {
        case Variant::classical:
            if (p.alpha != 1.0 || p.nu != 1.0 || p.beta != -1.0) {
                throw DomainError("classical variant requires alpha = nu = 1 and beta = -1");
            }
            break;
        case Variant::tfpp:
            if (p.nu != 1.0 || p.beta != -p.alpha) {
                throw DomainError("tfpp requires nu = 1 and beta = -alpha");
            }
            break;
        case Variant::sfpp:
            if (p.alpha != 1.0 || p.beta != -1.0) {
                throw DomainError("sfpp requires alpha = 1 and beta = -1");
            }
            break;
        case Variant::stfpp:
            if (p.beta != -p.alpha) {
                throw DomainError("stfpp requires beta = -alpha");
            }
            break;
        case Variant::sstfpp: {
            // C_k arguments grow with j, so j = 1 decides positivity.
            const double num = 1.0 + p.gamma - p.beta;
            const double den = 1.0 + p.gamma + p.alpha;
            if (!(num > 0.0) || !(den > 0.0)) {
                throw DomainError("sstfpp requires 1 + gamma - beta > 0 and 1 + gamma + alpha > 0");
            }
            break;
        }
    }
}

double poisson_pmf(double lambda, double t, int n) {
    if (!(lambda > 0.0)) {
        throw DomainError("poisson_pmf: lambda must be positive");
    }
    check_time(t);
    check_state(n);
    const double mean = lambda * t;
    if (mean == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(n * std::log(mean) - mean - log_gamma(n + 1.0));
}

double tfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control) {
    validate(Variant::tfpp, params);
    check_time(t);
    check_state(n);
    control.validate();
    const double x = params.lambda * std::pow(t, params.alpha);
    guard_argument(x, "tfpp_pmf");
    if (x == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    // (k+n)!/(k! n!) advanced by its recurrence; sum_series asks for k in order.
    double binom = 1.0;
    int last_k = 0;
    auto term = [&](int k) -> SeriesTerm {
        if (k > last_k) {
            binom *= static_cast<double>(k + n) / k;
            last_k = k;
        }
        const double mag = binom * power_over_gamma(x, k + n, (k + n) * params.alpha + 1.0);
        return {signed_power(k) * mag, mag};
    };
    return sum_series(term, control, "tfpp_pmf").value;
}

double sfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control) {
    validate(Variant::sfpp, params);
    check_time(t);
    check_state(n);
    control.validate();
    const double x = std::pow(params.lambda, params.nu) * t;
    guard_argument(x, "sfpp_pmf");
    if (x == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double log_n_factorial = log_gamma(n + 1.0);
    auto term = [&](int k) -> SeriesTerm {
        const double base = power_over_gamma(x, k, k + 1.0);
        const double top = k * params.nu + 1.0;
        const double bottom = top - n;
        // Γ(k nu + 1) / Γ(k nu + 1 - n); vanishes at the poles of the denominator.
        double ratio = 0.0;
        if (!is_gamma_pole(bottom)) {
            if (top < 170.0 && std::abs(bottom) < 170.0) {
                ratio = gamma_fn(top) * rgamma(bottom);
            } else {
                const auto lb = log_gamma_signed(bottom);
                ratio = lb.sign * std::exp(log_gamma(top) - lb.log_abs);
            }
        }
        const double scale = std::exp(-log_n_factorial);
        const double value = signed_power(k) * base * ratio * scale;
        const double envelope = base * binomial_envelope(k * params.nu, n);
        return {value, std::max(envelope, std::abs(value))};
    };
    return signed_power(n) * sum_series(term, control, "sfpp_pmf").value + 0.0;
}

SeriesSum pmf_series(const FractionalParams& params, double t, int n, const SeriesControl& control) {
    check_time(t);
    check_state(n);
    SpaceTimeCoefficients coeff(params);
    SeriesSum s = space_time_kernel(space_time_argument(params, t), params.nu, n, 0.0, 0, coeff, control, "pmf");
    s.value = signed_power(n) * s.value + 0.0;  // + 0.0 clears a negative zero
    return s;
}

double stfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control) {
    validate(Variant::stfpp, params);
    return pmf_series(params, t, n, control).value;
}

double sstfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control) {
    validate(Variant::sstfpp, params);
    return pmf_series(params, t, n, control).value;
}

double pmf(Variant variant, const FractionalParams& params, double t, int n, const SeriesControl& control) {
    switch (variant) {
        case Variant::classical:
            validate(variant, params);
            return poisson_pmf(params.lambda, t, n);
        case Variant::tfpp:
            return tfpp_pmf(params, t, n, control);
        case Variant::sfpp:
            return sfpp_pmf(params, t, n, control);
        case Variant::stfpp:
            return stfpp_pmf(params, t, n, control);
        case Variant::sstfpp:
            return sstfpp_pmf(params, t, n, control);
    }
    throw UnsupportedVariantError("pmf: unknown variant");
}

double tail_probability(const FractionalParams& params, double t, int n_max, const SeriesControl& control) {
    validate(Variant::sstfpp, params);
    check_time(t);
    check_state(n_max);
    SpaceTimeCoefficients coeff(params);
    // The k = 0 term of the cumulative sum is exactly one; the tail is minus the rest.
    const SeriesSum rest =
        space_time_kernel(space_time_argument(params, t), params.nu, n_max, -1.0, 1, coeff, control, "tail");
    return -signed_power(n_max) * rest.value + 0.0;
}

double sstfpp_pgf(const FractionalParams& params, double u, double t, const SeriesControl& control) {
    validate(Variant::sstfpp, params);
    check_time(t);
    if (!(std::abs(u) < 1.0)) {
        throw DomainError("sstfpp_pgf: requires |u| < 1");
    }
    const double x = std::pow(params.lambda, params.nu) * std::pow(1.0 - u, params.nu) * std::pow(t, -params.beta);
    SpaceTimeCoefficients coeff(params);
    return space_time_kernel(x, params.nu, 0, 0.0, 0, coeff, control, "pgf").value;
}

double waiting_survival(const FractionalParams& params, double t, const SeriesControl& control) {
    validate(Variant::sstfpp, params);
    return pmf_series(params, t, 0, control).value;
}

double PmfTable::row_sum(std::size_t i) const {
    KahanSum acc;
    for (double p : probs.at(i)) {
        acc.add(p);
    }
    return acc.value();
}

PmfTable make_pmf_table(Variant variant, const FractionalParams& params, std::span<const double> times, int n_max,
                        const SeriesControl& control) {
    validate(variant, params);
    control.validate();
    check_state(n_max);
    PmfTable table;
    table.variant = variant;
    table.params = params;
    table.times.assign(times.begin(), times.end());
    table.n_max = n_max;
    table.truncation = control;
    for (double t : times) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) {
            row.push_back(pmf(variant, params, t, n, control));
        }
        table.probs.push_back(std::move(row));
        table.tail_mass.push_back(tail_probability(params, t, n_max, control));
    }
    return table;
}

PowerTerm closed_form_iterate(Variant variant, const FractionalParams& params, int n, int k) {
    check_state(n);
    if (k < 0) {
        throw DomainError("closed_form_iterate: order must be non-negative");
    }
    const double rate = std::pow(params.lambda, params.nu);
    const double state_factor = signed_power(n) * binomial_general(k * params.nu, n);
    if (variant == Variant::sstfpp) {
        const double ck = ck_coefficients(params.saigo(), k).back();
        return {state_factor * ck * signed_power(k) * power_over_gamma(rate, k, 1.0 - k * params.beta),
                k * -params.beta};
    }
    return {state_factor * signed_power(k) * power_over_gamma(rate, k, k * params.alpha + 1.0), k * params.alpha};
}

PowerSeries pmf_power_series(const FractionalParams& params, int n, int k_trunc) {
    validate(Variant::sstfpp, params);
    check_state(n);
    std::vector<PowerTerm> terms;
    for (int k = 0; k <= k_trunc; ++k) {
        terms.push_back(closed_form_iterate(Variant::sstfpp, params, n, k));
    }
    return PowerSeries(std::move(terms));
}

PowerSeries pgf_power_series(const FractionalParams& params, double u, int k_trunc) {
    validate(Variant::sstfpp, params);
    if (!(std::abs(u) < 1.0)) {
        throw DomainError("pgf_power_series: requires |u| < 1");
    }
    const double rate = std::pow(params.lambda, params.nu) * std::pow(1.0 - u, params.nu);
    const std::vector<double> ck = ck_coefficients(params.saigo(), k_trunc);
    std::vector<PowerTerm> terms;
    for (int k = 0; k <= k_trunc; ++k) {
        terms.push_back({ck[k] * signed_power(k) * power_over_gamma(rate, k, 1.0 - k * params.beta),
                         k * -params.beta});
    }
    return PowerSeries(std::move(terms));
}

KolmogorovResult kolmogorov_residual(const FractionalParams& params, double t, int n, int k_trunc) {
    validate(Variant::sstfpp, params);
    check_time(t);
    check_state(n);
    if (k_trunc < 1) {
        throw DomainError("kolmogorov_residual: k_trunc must be at least 1");
    }
    const SaigoParams saigo = params.saigo();
    const double rate = std::pow(params.lambda, params.nu);

    const PowerSeries lhs = saigo_caputo_derivative(pmf_power_series(params, n, k_trunc), saigo);
    PowerSeries rhs;
    double top_group = 0.0;
    for (int r = 0; r <= n; ++r) {
        const double w = -rate * signed_power(r) * binomial_general(params.nu, r);
        rhs += pmf_power_series(params, n - r, k_trunc) * w;
        const PowerTerm top = closed_form_iterate(Variant::sstfpp, params, n - r, k_trunc);
        top_group += std::abs(w * top.coeff) * std::pow(t, top.exponent);
    }

    double magnitude = 0.0;
    for (const PowerSeries* s : std::initializer_list<const PowerSeries*>{&lhs, &rhs}) {
        for (const auto& term : s->terms()) {
            magnitude += std::abs(term.coeff) * std::pow(t, term.exponent);
        }
    }
    KolmogorovResult out;
    out.residual = std::abs(evaluate(lhs, t) - evaluate(rhs, t));
    out.tail_bound = top_group + 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    return out;
}

double pgf_cauchy_residual(const FractionalParams& params, double u, int k_trunc) {
    validate(Variant::sstfpp, params);
    if (k_trunc < 1) {
        throw DomainError("pgf_cauchy_residual: k_trunc must be at least 1");
    }
    const PowerSeries g = pgf_power_series(params, u, k_trunc);
    const PowerSeries lhs = saigo_caputo_derivative(g, params.saigo());
    const PowerSeries rhs = g * (-std::pow(params.lambda, params.nu) * std::pow(1.0 - u, params.nu));
    double worst = 0.0;
    for (int k = 0; k < k_trunc; ++k) {
        const double e = k * -params.beta;
        const double a = lhs.coefficient_at(e);
        const double b = rhs.coefficient_at(e);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) {
            worst = std::max(worst, std::abs(a - b) / scale);
        }
    }
    return worst;
}

AdmState solve_process_adm(Variant variant, const FractionalParams& params, int n_max, const SeriesControl& control,
                           double horizon) {
    validate(variant, params);
    IntegralOperator op;
    if (variant == Variant::sstfpp) {
        const SaigoParams saigo = params.saigo();
        op = [saigo](const PowerSeries& s) { return saigo_integral(s, saigo); };
    } else {
        const double alpha = params.alpha;
        op = [alpha](const PowerSeries& s) { return rl_integrate(s, alpha); };
    }
    const double rate = std::pow(params.lambda, params.nu);
    const double nu = params.nu;
    CouplingRule coupling = [rate, nu](int, int r) { return -rate * signed_power(r) * binomial_general(nu, r); };
    std::vector<double> initial(static_cast<std::size_t>(n_max) + 1, 0.0);
    initial[0] = 1.0;
    return adm_solve_linear(op, coupling, initial, n_max, control, horizon);
}

double adm_closed_form_diff(Variant variant, const FractionalParams& params, int n_max, int k_trunc) {
    SeriesControl control;
    control.max_k = k_trunc;
    const AdmState state = solve_process_adm(variant, params, n_max, control);
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= k_trunc; ++k) {
            const PowerTerm expected = closed_form_iterate(variant, params, n, k);
            const PowerSeries& got = state.iterates[n][k];
            double diff = 0.0;
            bool matched = false;
            for (const auto& term : got.terms()) {
                if (std::abs(term.exponent - expected.exponent) <= PowerSeries::exponent_merge_tolerance) {
                    diff += std::abs(term.coeff - expected.coeff);
                    matched = true;
                } else {
                    diff += std::abs(term.coeff);
                }
            }
            if (!matched) {
                diff += std::abs(expected.coeff);
            }
            worst = std::max(worst, diff);
        }
    }
    return worst;
}

}  // namespace fracpois
