#pragma once

#include "fracpois/series_control.hpp"

namespace fracpois {

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Γ(x) for finite x; +-inf at the poles.
double gamma_fn(double x);

/// 1/Γ(x), a total function: exactly zero at non-positive integers.
///
/// Arguments within 1e-9 of a non-positive integer are treated as poles.
double rgamma(double x);

/// ln|Γ(x)| together with the sign of Γ(x), for x off the poles.
struct SignedLogGamma {
    double log_abs = 0.0;
    int sign = 1;
};
SignedLogGamma log_gamma_signed(double x);

/// Γ(a)/Γ(b) for a, b > 0, overflow-safe.
double gamma_ratio(double a, double b);

/// True if x lies within 1e-9 of a non-positive integer.
bool is_gamma_pole(double x);

/// x (x-1) ... (x-r+1); the empty product for r == 0.
double falling_factorial(double x, int r);

/// One-parameter Mittag-Leffler function E_alpha(x) = sum x^k / Γ(k alpha + 1).
///
/// Summed directly with compensation for 0 < alpha <= 1. Arguments below -30
/// are refused: the alternating series cancels too severely in double
/// precision there.
double mittag_leffler(double alpha, double x, const SeriesControl& control = {});

/// Gauss hypergeometric series 2F1(a, b; c; z) with rising factorials, |z| < 1.
double gauss_2f1(double a, double b, double c, double z, const SeriesControl& control = {});

}  // namespace fracpois
