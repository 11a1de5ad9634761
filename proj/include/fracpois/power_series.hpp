#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracpois {

/// coeff * t^exponent, with exponent > -1 so the term is integrable at 0.
struct PowerTerm {
    double coeff = 0.0;
    double exponent = 0.0;
};

/// Finite sum of power terms in t, kept sorted by strictly increasing exponent.
///
/// Exponents closer than `exponent_merge_tolerance` are merged on
/// normalization; they typically come from repeated addition of a fractional
/// order and differ only by rounding. Terms with |coeff| below the smallest
/// normal double are dropped, so a series of zero terms is empty.
class PowerSeries {
  public:
    static constexpr double exponent_merge_tolerance = 1e-12;

    PowerSeries() = default;
    explicit PowerSeries(std::vector<PowerTerm> terms);

    static PowerSeries constant(double c);
    static PowerSeries monomial(double coeff, double exponent);

    [[nodiscard]] std::span<const PowerTerm> terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    /// Coefficient of t^exponent (merge tolerance applies), zero if absent.
    [[nodiscard]] double coefficient_at(double exponent) const;

    /// Largest |coeff| over all terms, zero for the empty series.
    [[nodiscard]] double max_abs_coeff() const;

    PowerSeries& operator+=(const PowerSeries& other);
    PowerSeries& operator*=(double scale);

    friend PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs) { return lhs += rhs; }
    friend PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs) { return lhs += rhs * -1.0; }
    friend PowerSeries operator*(PowerSeries lhs, double s) { return lhs *= s; }
    friend PowerSeries operator*(double s, PowerSeries rhs) { return rhs *= s; }

  private:
    void normalize();

    std::vector<PowerTerm> terms_;
};

/// Applies `fn` to every term and renormalizes.
PowerSeries transform_terms(const PowerSeries& series, const std::function<PowerTerm(const PowerTerm&)>& fn);

/// sum coeff * t^exponent with compensated summation; t >= 0.
double evaluate(const PowerSeries& series, double t);

/// Riemann-Liouville integral of order alpha in (0, 1], term by term:
/// c t^(rho-1) -> c Γ(rho)/Γ(rho+alpha) t^(rho+alpha-1).
PowerSeries rl_integrate(const PowerSeries& series, double alpha);

}  // namespace fracpois
