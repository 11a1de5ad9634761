#pragma once

#include <vector>

#include "fracpois/power_series.hpp"

namespace fracpois {

/// Order parameters (alpha, beta, gamma) of the Saigo hypergeometric integral
///
///   I^{a,b,g} f(t) = t^(-a-b)/Γ(a) int_0^t (t-s)^(a-1) 2F1(a+b, -g; a; 1 - s/t) f(s) ds.
///
/// beta = -alpha recovers the Riemann-Liouville integral, beta = 0 the
/// Erdelyi-Kober one.
struct SaigoParams {
    double alpha = 1.0;
    double beta = -1.0;
    double gamma = 0.0;
};

/// Image of t^(rho-1) under I^{alpha,beta,gamma}:
///
///   Γ(rho) Γ(rho-beta+gamma) / (Γ(rho-beta) Γ(rho+alpha+gamma)) * t^(rho-beta-1).
///
/// Requires alpha > 0, rho > 0 and rho > beta - gamma.
PowerTerm saigo_integral_power(const SaigoParams& p, double rho);

/// Term-wise Saigo integral of a power series.
PowerSeries saigo_integral(const PowerSeries& series, const SaigoParams& p);

/// Image of t^rho under the Caputo-type Saigo derivative
///
///   d^{alpha,beta,gamma} f = I^{1-alpha, -beta-1, alpha+gamma} f'   (0 < alpha <= 1).
///
/// Constants map to a zero term. Orders alpha > 1 (m > 1) are rejected. The
/// image exponent rho + beta must stay above -1.
PowerTerm saigo_caputo_derivative_power(const SaigoParams& p, double rho);

/// Term-wise Caputo-type Saigo derivative of a power series.
PowerSeries saigo_caputo_derivative(const PowerSeries& series, const SaigoParams& p);

/// Evaluates I^{alpha,beta,gamma} t^(rho-1) at t by tanh-sinh quadrature of
/// the defining integral. Independent of saigo_integral_power; used as its
/// cross-check. Throws QuadratureError if the 1e-9 target is missed badly.
double saigo_integral_quadrature(const SaigoParams& p, double rho, double t);

struct SemigroupComparison {
    /// Multiplier of I^{p1} I^{p2} t^(rho-1).
    double lhs = 0.0;
    /// Multiplier of I^{p2} I^{p1} t^(rho-1).
    double rhs = 0.0;
    double exponent = 0.0;
    double relative_gap = 0.0;
    bool differ = false;
};

/// Applies the two Saigo integrals to t^(rho-1) in both orders. The
/// exponents always agree; the multipliers generally do not, so the two
/// operators do not commute.
SemigroupComparison semigroup_counterexample(const SaigoParams& p1, const SaigoParams& p2, double rho);

/// |I^{a,b,g} I^{h,d,a+g} t^(rho-1) - I^{a+h,b+d,g} t^(rho-1)| relative to the
/// right side's multiplier. Zero up to rounding: this is the composition law
/// the Caputo-type derivative is built on.
double saigo_semigroup_residual(const SaigoParams& outer, double eta, double delta, double rho);

/// Residual |I^{a,b,g} d^{a,b,g} t^rho - (t^rho - f(0))| at t, maximised over
/// two routes: the direct term chain, and the chain collapsed to a first
/// order Riemann-Liouville integral of f' through the semigroup law.
double composition_check(const SaigoParams& p, double rho, double t);

/// C_0..C_{k_max} with C_k = prod_{j=1}^{k} Γ(1+g-j b) / Γ(1+g+a-(j-1) b),
/// accumulated in log space. Identically one when beta = -alpha.
std::vector<double> ck_coefficients(const SaigoParams& p, int k_max);

/// ln C_0..ln C_{k_max}.
std::vector<double> log_ck_coefficients(const SaigoParams& p, int k_max);

}  // namespace fracpois
