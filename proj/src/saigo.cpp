#include "fracpois/saigo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracpois/errors.hpp"
#include "fracpois/specfun.hpp"

namespace fracpois {

namespace {

// Same as saigo_integral_power but admits alpha == 0, the limiting identity
// order reached by the inner operator of the derivative when alpha == 1.
PowerTerm power_image(double alpha, double beta, double gamma, double rho) {
    if (!(alpha >= 0.0)) {
        throw DomainError("saigo integral: alpha must be positive");
    }
    if (!(rho > 0.0)) {
        throw DomainError("saigo integral: rho must be positive, got " + std::to_string(rho));
    }
    if (!(rho > beta - gamma)) {
        throw DomainError("saigo integral: requires rho > beta - gamma");
    }
    const double exponent = rho - beta - 1.0;
    const double den1 = rho - beta;
    const double den2 = rho + alpha + gamma;
    if (is_gamma_pole(den1) || is_gamma_pole(den2)) {
        return {0.0, exponent};
    }
    const auto d1 = log_gamma_signed(den1);
    const auto d2 = log_gamma_signed(den2);
    const double log_mult = log_gamma(rho) + log_gamma(rho - beta + gamma) - d1.log_abs - d2.log_abs;
    return {d1.sign * d2.sign * std::exp(log_mult), exponent};
}

void check_derivative_order(double alpha) {
    if (!(alpha > 0.0)) {
        throw DomainError("saigo derivative: alpha must be positive");
    }
    if (alpha > 1.0) {
        throw DomainError("saigo derivative: only 0 < alpha <= 1 (m = 1) is supported");
    }
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// F(u) (1-u)^(rho-1) for 2F1(a, b; c; u) near u = 1, by the 1-u connection
// formula. w = 1 - u is passed exactly.
double kernel_near_one(double a, double b, double c, double w, double rho) {
    const double s = c - a - b;
    const double front = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    const double back = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b);
    double value = 0.0;
    if (front != 0.0) {
        value += front * std::pow(w, rho - 1.0) * gauss_2f1(a, b, 1.0 - s, w);
    }
    if (back != 0.0) {
        value += back * std::pow(w, rho - 1.0 + s) * gauss_2f1(c - a, c - b, 1.0 + s, w);
    }
    return value;
}

}  // namespace

PowerTerm saigo_integral_power(const SaigoParams& p, double rho) {
    if (!(p.alpha > 0.0)) {
        throw DomainError("saigo_integral_power: alpha must be positive");
    }
    return power_image(p.alpha, p.beta, p.gamma, rho);
}

PowerSeries saigo_integral(const PowerSeries& series, const SaigoParams& p) {
    return transform_terms(series, [&p](const PowerTerm& term) {
        const PowerTerm image = saigo_integral_power(p, term.exponent + 1.0);
        return PowerTerm{term.coeff * image.coeff, image.exponent};
    });
}

PowerTerm saigo_caputo_derivative_power(const SaigoParams& p, double rho) {
    check_derivative_order(p.alpha);
    if (rho == 0.0) {
        return {0.0, 0.0};
    }
    if (!(rho > 0.0)) {
        throw DomainError("saigo_caputo_derivative_power: rho must be non-negative");
    }
    if (!(rho + p.beta > -1.0)) {
        throw DomainError("saigo_caputo_derivative_power: image exponent rho + beta must exceed -1");
    }
    // f = t^rho, f' = rho t^(rho-1), then I^{1-alpha, -beta-1, alpha+gamma}.
    const PowerTerm inner = power_image(1.0 - p.alpha, -p.beta - 1.0, p.alpha + p.gamma, rho);
    return {rho * inner.coeff, inner.exponent};
}

PowerSeries saigo_caputo_derivative(const PowerSeries& series, const SaigoParams& p) {
    return transform_terms(series, [&p](const PowerTerm& term) {
        const PowerTerm image = saigo_caputo_derivative_power(p, term.exponent);
        return PowerTerm{term.coeff * image.coeff, image.exponent};
    });
}

double saigo_integral_quadrature(const SaigoParams& p, double rho, double t) {
    if (!(p.alpha > 0.0)) {
        throw DomainError("saigo_integral_quadrature: alpha must be positive");
    }
    if (!(rho > 0.0) || !(rho > p.beta - p.gamma)) {
        throw DomainError("saigo_integral_quadrature: requires rho > max(0, beta - gamma)");
    }
    if (!(t > 0.0)) {
        throw DomainError("saigo_integral_quadrature: t must be positive");
    }
    const double a = p.alpha + p.beta;
    const double b = -p.gamma;
    const double c = p.alpha;
    const double s = c - a - b;
    const bool near_integer_s = std::abs(s - std::round(s)) < 1e-6;
    constexpr double shift = 1e-5;

    auto hyp_times_weight = [&](double u, double w) {
        if (u <= 0.5) {
            return gauss_2f1(a, b, c, u) * std::pow(w, rho - 1.0);
        }
        if (near_integer_s) {
            // The connection coefficients have poles at integer c-a-b; average
            // over a symmetric shift of b instead (error O(shift^2)).
            return 0.5 * (kernel_near_one(a, b + shift, c, w, rho) + kernel_near_one(a, b - shift, c, w, rho));
        }
        return kernel_near_one(a, b, c, w, rho);
    };

    // s = t (1 - u): ds = t du, t - s = t u, 1 - s/t = u.
    auto integrand = [&](double u, double uc) {
        const double w = uc > 0.0 ? uc : 1.0 - u;
        return std::pow(u, p.alpha - 1.0) * hyp_times_weight(u, w);
    };

    // The complement-aware overload is non-const, so each thread keeps its own.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    double integral = 0.0;
    try {
        integral = integrator.integrate(integrand, 0.0, 1.0, 1e-10, &error, &l1);
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("saigo_integral_quadrature: ") + e.what());
    }
    if (!std::isfinite(integral) || error > 1e-8 * std::max(l1, 1.0)) {
        throw QuadratureError("saigo_integral_quadrature: tolerance not reached");
    }
    const double prefactor =
        std::pow(t, -p.alpha - p.beta) * std::pow(t, p.alpha - 1.0) * std::pow(t, rho - 1.0) * t * rgamma(p.alpha);
    return prefactor * integral;
}

SemigroupComparison semigroup_counterexample(const SaigoParams& p1, const SaigoParams& p2, double rho) {
    if (!(p1.alpha > 0.0) || !(p2.alpha > 0.0)) {
        throw DomainError("semigroup_counterexample: both orders must be positive");
    }
    const double bound = std::max({p1.beta - p1.gamma, p2.beta - p2.gamma, p1.beta - p1.gamma + p2.beta,
                                   p2.beta - p2.gamma + p1.beta});
    if (!(rho > bound)) {
        throw DomainError("semigroup_counterexample: rho below the admissible bound");
    }
    SemigroupComparison out;
    const PowerTerm first_p2 = saigo_integral_power(p2, rho);
    const PowerTerm then_p1 = saigo_integral_power(p1, first_p2.exponent + 1.0);
    const PowerTerm first_p1 = saigo_integral_power(p1, rho);
    const PowerTerm then_p2 = saigo_integral_power(p2, first_p1.exponent + 1.0);
    out.lhs = first_p2.coeff * then_p1.coeff;
    out.rhs = first_p1.coeff * then_p2.coeff;
    out.exponent = then_p1.exponent;
    out.relative_gap = relative_gap(out.lhs, out.rhs);
    out.differ = out.relative_gap > 1e-9;
    return out;
}

double saigo_semigroup_residual(const SaigoParams& outer, double eta, double delta, double rho) {
    const PowerTerm inner = power_image(eta, delta, outer.alpha + outer.gamma, rho);
    const PowerTerm chained = power_image(outer.alpha, outer.beta, outer.gamma, inner.exponent + 1.0);
    const PowerTerm merged = power_image(outer.alpha + eta, outer.beta + delta, outer.gamma, rho);
    return relative_gap(inner.coeff * chained.coeff, merged.coeff);
}

double composition_check(const SaigoParams& p, double rho, double t) {
    check_derivative_order(p.alpha);
    if (!(rho > 0.0) || !(t > 0.0)) {
        throw DomainError("composition_check: requires rho > 0 and t > 0");
    }
    const double target = std::pow(t, rho);  // f(t) - f(0) for f = t^rho

    // Route 1: derivative then integral, term by term.
    const PowerTerm derivative = saigo_caputo_derivative_power(p, rho);
    const PowerTerm back = saigo_integral_power(p, derivative.exponent + 1.0);
    const double direct = derivative.coeff * back.coeff * std::pow(t, back.exponent);

    // Route 2: I^{a,b,g} I^{1-a,-b-1,a+g} = I^{1,-1,g}, a first-order
    // Riemann-Liouville integral, applied to f' = rho t^(rho-1).
    const double law_gap = saigo_semigroup_residual(p, 1.0 - p.alpha, -p.beta - 1.0, rho);
    const PowerTerm unit = power_image(1.0, -1.0, p.gamma, rho);
    const PowerSeries rl = rl_integrate(PowerSeries::monomial(rho, rho - 1.0), 1.0);
    const double via_rl = evaluate(rl, t);
    const double unit_gap = std::abs(rho * unit.coeff - rl.terms().front().coeff);

    return std::max({std::abs(direct - target), std::abs(via_rl - target), law_gap * target, unit_gap * target});
}

std::vector<double> log_ck_coefficients(const SaigoParams& p, int k_max) {
    if (k_max < 0) {
        throw DomainError("ck_coefficients: k_max must be non-negative");
    }
    if (!(p.beta < 0.0)) {
        throw DomainError("ck_coefficients: beta must be negative");
    }
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
    const double shift = p.alpha + p.beta;
    for (int j = 1; j <= k_max; ++j) {
        const double num = 1.0 + p.gamma - j * p.beta;
        // 1 + gamma + alpha - (j-1) beta, written so beta = -alpha cancels exactly.
        const double den = num + shift;
        if (!(num > 0.0) || !(den > 0.0)) {
            throw DomainError("ck_coefficients: non-positive gamma argument at j=" + std::to_string(j));
        }
        out[j] = out[j - 1] + (log_gamma(num) - log_gamma(den));
    }
    return out;
}

std::vector<double> ck_coefficients(const SaigoParams& p, int k_max) {
    std::vector<double> out = log_ck_coefficients(p, k_max);
    for (double& v : out) {
        v = std::exp(v);
    }
    return out;
}

}  // namespace fracpois
