#include "fracpois/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracpois/errors.hpp"
#include "fracpois/summation.hpp"

namespace fracpois {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pole_tolerance = 1e-9;

// Lanczos approximation, g = 671/128 with 14 coefficients.
constexpr double lanczos_g = 5.24218750000000000;
constexpr double sqrt_two_pi = 2.5066282746310005;
constexpr std::array<double, 14> lanczos_coef = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

// (n-1)! for n = 1..171; exact through 22!, correctly rounded products beyond.
const std::array<double, 172>& factorial_table() {
    static const std::array<double, 172> table = [] {
        std::array<double, 172> f{};
        f[0] = 1.0;
        for (std::size_t i = 1; i < f.size(); ++i) {
            f[i] = f[i - 1] * static_cast<double>(i);
        }
        return f;
    }();
    return table;
}

bool is_small_positive_integer(double x) {
    return x >= 1.0 && x <= 171.0 && x == std::floor(x);
}

double lanczos_series(double x) {
    double ser = 0.999999999999997092;
    double y = x;
    for (double c : lanczos_coef) {
        y += 1.0;
        ser += c / y;
    }
    return ser;
}

// ln Γ(1+z) = -euler*z + sum_{k>=2} (-1)^k zeta(k)/k z^k, used for |z| < 0.2
// so that relative accuracy survives near the zeros of ln Γ at 1 and 2.
constexpr double euler_gamma = 0.57721566490153286061;
constexpr std::array<double, 29> log_gamma1p_coef = {
    0.82246703342411321824,  -0.40068563438653142847, 0.27058080842778454788,
    -0.20738555102867398527, 0.16955717699740818995,  -0.14404989676884611812,
    0.12550966952474304242,  -0.11133426586956469049, 0.10009945751278180853,
    -0.090954017145829042233, 0.083353840546109004025, -0.076932516411352191473,
    0.071432946295361336059, -0.066668705882420468033, 0.062500955141213040742,
    -0.058823978658684582339, 0.055555767627403611102, -0.052631679379616660734,
    0.05000004769810169364,  -0.047619070330142227991, 0.045454556293204669442,
    -0.043478266053040259361, 0.041666669150341210469, -0.040000001192140140586,
    0.038461539034675185706, -0.037037037312989325549, 0.035714285847333358028,
    -0.034482758684919300811, 0.033333333364377581081};

double log_gamma1p_small(double z) {
    double acc = 0.0;
    for (auto it = log_gamma1p_coef.rbegin(); it != log_gamma1p_coef.rend(); ++it) {
        acc = acc * z + *it;
    }
    return z * (-euler_gamma + z * acc);
}

// sin(pi x) with exact zeros at integers.
double sin_pi(double x) {
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    double sign = 1.0;
    if (r < 0.0) {
        r = -r;
        sign = -1.0;
    }
    if (r > 0.5) {
        r = 1.0 - r;
    }
    return sign * std::sin(pi * r);
}

}  // namespace

bool is_gamma_pole(double x) {
    if (x > pole_tolerance) {
        return false;
    }
    return std::abs(x - std::round(x)) < pole_tolerance;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    if (std::abs(x - 1.0) < 0.2) {
        return log_gamma1p_small(x - 1.0);
    }
    if (std::abs(x - 2.0) < 0.2) {
        const double z = x - 2.0;
        return log_gamma1p_small(z) + std::log1p(z);
    }
    const double tmp = x + lanczos_g;
    return (x + 0.5) * std::log(tmp) - tmp + std::log(sqrt_two_pi * lanczos_series(x) / x);
}

double gamma_fn(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (is_gamma_pole(x)) {
        return std::numeric_limits<double>::infinity();
    }
    if (is_small_positive_integer(x)) {
        return factorial_table()[static_cast<std::size_t>(x) - 1];
    }
    if (x >= 0.5) {
        if (x > 171.7) {
            return std::numeric_limits<double>::infinity();
        }
        const double tmp = x + lanczos_g;
        const double half = std::pow(tmp, 0.5 * (x + 0.5));
        return (half * std::exp(-tmp)) * half * (sqrt_two_pi * lanczos_series(x) / x);
    }
    return pi / (sin_pi(x) * gamma_fn(1.0 - x));
}

double rgamma(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (x == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (is_gamma_pole(x)) {
        return 0.0;
    }
    if (is_small_positive_integer(x)) {
        return 1.0 / factorial_table()[static_cast<std::size_t>(x) - 1];
    }
    if (x >= 0.5) {
        if (x > 170.0) {
            return std::exp(-log_gamma(x));
        }
        return 1.0 / gamma_fn(x);
    }
    // Reflection: 1/Γ(x) = Γ(1-x) sin(pi x) / pi.
    const double s = sin_pi(x);
    const double y = 1.0 - x;
    if (y > 170.0) {
        const double mag = std::exp(log_gamma(y) + std::log(std::abs(s)) - std::log(pi));
        return s < 0.0 ? -mag : mag;
    }
    return gamma_fn(y) * s / pi;
}

SignedLogGamma log_gamma_signed(double x) {
    if (is_gamma_pole(x)) {
        throw DomainError("log_gamma_signed: gamma pole at " + std::to_string(x));
    }
    if (x > 0.0) {
        return {log_gamma(x), 1};
    }
    const double s = sin_pi(x);
    return {std::log(pi) - std::log(std::abs(s)) - log_gamma(1.0 - x), s < 0.0 ? -1 : 1};
}

double gamma_ratio(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("gamma_ratio: arguments must be positive");
    }
    if (a < 170.0 && b < 170.0) {
        return gamma_fn(a) * rgamma(b);
    }
    return std::exp(log_gamma(a) - log_gamma(b));
}

double falling_factorial(double x, int r) {
    if (r < 0) {
        throw DomainError("falling_factorial: order must be non-negative");
    }
    double p = 1.0;
    for (int j = 0; j < r; ++j) {
        p *= x - j;
    }
    return p;
}

double mittag_leffler(double alpha, double x, const SeriesControl& control) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
    }
    if (!std::isfinite(x)) {
        throw DomainError("mittag_leffler: argument must be finite");
    }
    if (x < -30.0) {
        throw ConvergenceError("mittag_leffler: argument below -30, alternating series cancels in double precision");
    }
    if (alpha == 1.0) {
        return std::exp(x);
    }
    if (x == 0.0) {
        return 1.0;
    }
    const double ax = std::abs(x);
    const double log_ax = std::log(ax);
    auto term = [&](int k) -> SeriesTerm {
        if (k == 0) {
            return {1.0, 1.0};
        }
        const double g = k * alpha + 1.0;
        double mag;
        if (g < 170.0 && k * log_ax < 700.0) {
            mag = std::pow(ax, k) * rgamma(g);
        } else {
            mag = std::exp(k * log_ax - log_gamma(g));
        }
        const double value = (x < 0.0 && (k % 2 == 1)) ? -mag : mag;
        return {value, mag};
    };
    return sum_series(term, control, "mittag_leffler").value;
}

double gauss_2f1(double a, double b, double c, double z, const SeriesControl& control) {
    if (is_gamma_pole(c)) {
        throw DomainError("gauss_2f1: c must not be a non-positive integer");
    }
    if (!(std::abs(z) < 1.0)) {
        throw DomainError("gauss_2f1: requires |z| < 1");
    }
    if (z == 0.0) {
        return 1.0;
    }
    const double az = std::abs(z);
    // Beyond this index the term ratios are monotone in k.
    const double settle = std::abs(a) + std::abs(b) + std::abs(c) + 2.0;
    KahanSum acc;
    double term = 1.0;
    acc.add(term);
    for (int k = 0; k < control.term_cap; ++k) {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        if (term == 0.0) {
            // a or b is a non-positive integer: the series is a polynomial.
            return acc.value();
        }
        acc.add(term);
        if (k + 1 > settle) {
            const double r = std::max(std::abs(ratio), az);
            if (r < 1.0) {
                const double tail = std::abs(term) * r / (1.0 - r);
                const double threshold = std::max(control.tol_abs, control.tol_rel * std::abs(acc.value()));
                if (tail <= threshold) {
                    return acc.value();
                }
            }
        }
    }
    throw ConvergenceError("gauss_2f1: |z| too close to 1 for the term cap");
}

void SeriesControl::validate() const {
    if (max_k < 1) {
        throw DomainError("SeriesControl: max_k must be at least 1");
    }
    if (!(tol_abs > 0.0) || !(tol_rel > 0.0)) {
        throw DomainError("SeriesControl: tolerances must be positive");
    }
    if (term_cap < 1) {
        throw DomainError("SeriesControl: term_cap must be positive");
    }
}

}  // namespace fracpois
