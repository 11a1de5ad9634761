#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fracpois/adm.hpp"
#include "fracpois/power_series.hpp"
#include "fracpois/saigo.hpp"
#include "fracpois/series_control.hpp"
#include "fracpois/summation.hpp"

namespace fracpois {

enum class Variant { classical, tfpp, sfpp, stfpp, sstfpp };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Parameters of a fractional Poisson process.
///
/// lambda > 0 is the intensity, alpha in (0, 1] the time order, nu in (0, 1]
/// the space order, beta < 0 and gamma the Saigo parameters. The named
/// constructors fill the implied parameters of each variant.
struct FractionalParams {
    double lambda = 1.0;
    double alpha = 1.0;
    double nu = 1.0;
    double beta = -1.0;
    double gamma = 0.0;

    static FractionalParams classical(double lambda);
    static FractionalParams tfpp(double lambda, double alpha);
    static FractionalParams sfpp(double lambda, double nu);
    static FractionalParams stfpp(double lambda, double alpha, double nu);
    static FractionalParams sstfpp(double lambda, double alpha, double beta, double gamma, double nu);

    [[nodiscard]] SaigoParams saigo() const { return {alpha, beta, gamma}; }
};

/// Throws DomainError unless `params` is a valid instance of `variant`.
void validate(Variant variant, const FractionalParams& params);

/// Largest series argument lambda^nu t^(-beta) accepted; beyond it the
/// alternating sums lose too many digits in double precision.
inline constexpr double argument_guard = 30.0;

/// e^(-lambda t) (lambda t)^n / n!, in log space.
double poisson_pmf(double lambda, double t, int n);

/// Time-fractional pmf, summed in the form
/// (lambda t^a)^n/n! sum_k (k+n)!/k! (-lambda t^a)^k / Γ((k+n) a + 1).
double tfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Space-fractional pmf, summed in the form
/// (-1)^n/n! sum_k (-lambda^nu t)^k/k! Γ(k nu + 1)/Γ(k nu + 1 - n).
double sfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Space-time fractional pmf
/// (-1)^n/n! sum_k (-lambda^nu t^a)^k/Γ(k a + 1) Γ(k nu + 1)/Γ(k nu + 1 - n).
double stfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Saigo space-time fractional pmf
/// (-1)^n/n! sum_k C_k (-lambda^nu t^(-b))^k/Γ(1 - k b) Γ(k nu + 1)/Γ(k nu + 1 - n).
double sstfpp_pmf(const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Dispatches to the closed form of `variant`.
double pmf(Variant variant, const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Space-time kernel sum with its truncation diagnostics (STFPP and SSTFPP).
SeriesSum pmf_series(const FractionalParams& params, double t, int n, const SeriesControl& control = {});

/// Pr{N(t) > n_max}, from the closed-form cumulative sum
/// sum_{n<=N} p(n) = sum_k a_k (-x)^k (-1)^N (k nu - 1)_N / N!,
/// not by summing individual probabilities.
double tail_probability(const FractionalParams& params, double t, int n_max, const SeriesControl& control = {});

/// Probability generating function E[u^N(t)], |u| < 1.
double sstfpp_pgf(const FractionalParams& params, double u, double t, const SeriesControl& control = {});

/// Pr{first arrival > t} = Pr{N(t) = 0}.
double waiting_survival(const FractionalParams& params, double t, const SeriesControl& control = {});

/// Probabilities on a (time x state) grid plus the exceedance mass beyond n_max.
struct PmfTable {
    Variant variant = Variant::classical;
    FractionalParams params;
    std::vector<double> times;
    int n_max = 0;
    /// probs[i][n] = Pr{N(times[i]) = n}.
    std::vector<std::vector<double>> probs;
    /// tail_mass[i] = Pr{N(times[i]) > n_max}, computed independently of probs.
    std::vector<double> tail_mass;
    SeriesControl truncation;

    [[nodiscard]] double row_sum(std::size_t i) const;
};

PmfTable make_pmf_table(Variant variant, const FractionalParams& params, std::span<const double> times, int n_max,
                        const SeriesControl& control = {});

/// Closed-form pmf of state n truncated to orders k = 0..k_trunc, as a power
/// series in t: sum_k (-1)^n/n! (k nu)_n C_k (-lambda^nu)^k/Γ(1 - k beta) t^(-k beta).
PowerSeries pmf_power_series(const FractionalParams& params, int n, int k_trunc);

/// Truncated pgf series sum_{k<=k_trunc} C_k (-lambda^nu (1-u)^nu)^k/Γ(1 - k beta) t^(-k beta).
PowerSeries pgf_power_series(const FractionalParams& params, double u, int k_trunc);

struct KolmogorovResult {
    double residual = 0.0;
    /// Magnitude of the first omitted order plus a rounding allowance.
    double tail_bound = 0.0;
};

/// Residual of the forward equation
///   d^{a,b,g} p(n, t) = -lambda^nu sum_r (-1)^r (nu)_r / r! p(n - r, t)
/// with both sides built from the k_trunc-truncated closed-form series and
/// the left side differentiated term by term.
KolmogorovResult kolmogorov_residual(const FractionalParams& params, double t, int n, int k_trunc);

/// Largest relative coefficient mismatch between d^{a,b,g} G and
/// -lambda^nu (1-u)^nu G over the orders both truncated series share.
double pgf_cauchy_residual(const FractionalParams& params, double u, int k_trunc);

/// Runs the ADM recursion for `variant` (Riemann-Liouville integral, or the
/// Saigo integral for sstfpp) with coupling -lambda^nu (-1)^r (nu)_r / r!.
AdmState solve_process_adm(Variant variant, const FractionalParams& params, int n_max, const SeriesControl& control,
                           double horizon = 1.0);

/// Closed-form coefficient and exponent of iterate p_k(n, t).
PowerTerm closed_form_iterate(Variant variant, const FractionalParams& params, int n, int k);

/// Max absolute coefficient discrepancy between the ADM iterates and the
/// closed-form iterates over n <= n_max, k <= k_trunc.
double adm_closed_form_diff(Variant variant, const FractionalParams& params, int n_max, int k_trunc);

}  // namespace fracpois
