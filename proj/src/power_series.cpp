#include "fracpois/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracpois/errors.hpp"
#include "fracpois/specfun.hpp"
#include "fracpois/summation.hpp"

namespace fracpois {

namespace {

constexpr double coeff_floor = std::numeric_limits<double>::min();

bool same_exponent(double a, double b) {
    return std::abs(a - b) <= PowerSeries::exponent_merge_tolerance;
}

}  // namespace

PowerSeries::PowerSeries(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
    normalize();
}

PowerSeries PowerSeries::constant(double c) {
    return PowerSeries({PowerTerm{c, 0.0}});
}

PowerSeries PowerSeries::monomial(double coeff, double exponent) {
    return PowerSeries({PowerTerm{coeff, exponent}});
}

void PowerSeries::normalize() {
    for (const auto& term : terms_) {
        if (!std::isfinite(term.coeff) || !std::isfinite(term.exponent)) {
            throw DomainError("PowerSeries: non-finite term");
        }
        if (!(term.exponent > -1.0)) {
            throw DomainError("PowerSeries: exponent " + std::to_string(term.exponent) +
                              " is not above -1");
        }
    }
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    std::vector<PowerTerm> merged;
    merged.reserve(terms_.size());
    for (const auto& term : terms_) {
        if (!merged.empty() && same_exponent(merged.back().exponent, term.exponent)) {
            merged.back().coeff += term.coeff;
        } else {
            merged.push_back(term);
        }
    }
    std::erase_if(merged, [](const PowerTerm& t) { return std::abs(t.coeff) < coeff_floor; });
    terms_ = std::move(merged);
}

double PowerSeries::coefficient_at(double exponent) const {
    for (const auto& term : terms_) {
        if (same_exponent(term.exponent, exponent)) {
            return term.coeff;
        }
    }
    return 0.0;
}

double PowerSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& term : terms_) {
        m = std::max(m, std::abs(term.coeff));
    }
    return m;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    normalize();
    return *this;
}

PowerSeries& PowerSeries::operator*=(double scale) {
    for (auto& term : terms_) {
        term.coeff *= scale;
    }
    normalize();
    return *this;
}

PowerSeries transform_terms(const PowerSeries& series, const std::function<PowerTerm(const PowerTerm&)>& fn) {
    std::vector<PowerTerm> out;
    out.reserve(series.size());
    for (const auto& term : series.terms()) {
        out.push_back(fn(term));
    }
    return PowerSeries(std::move(out));
}

double evaluate(const PowerSeries& series, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("evaluate: t must be non-negative");
    }
    KahanSum acc;
    for (const auto& term : series.terms()) {
        if (t == 0.0) {
            if (term.exponent < 0.0) {
                throw DomainError("evaluate: negative exponent at t = 0");
            }
            if (term.exponent == 0.0) {
                acc.add(term.coeff);
            }
            continue;
        }
        acc.add(term.coeff * std::pow(t, term.exponent));
    }
    return acc.value();
}

PowerSeries rl_integrate(const PowerSeries& series, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("rl_integrate: order must lie in (0, 1]");
    }
    return transform_terms(series, [alpha](const PowerTerm& term) {
        const double rho = term.exponent + 1.0;
        return PowerTerm{term.coeff * gamma_ratio(rho, rho + alpha), term.exponent + alpha};
    });
}

}  // namespace fracpois
