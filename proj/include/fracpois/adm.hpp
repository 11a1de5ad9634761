#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracpois/power_series.hpp"
#include "fracpois/series_control.hpp"

namespace fracpois {

/// Linear integral operator applied to every ADM iterate (for example a
/// Riemann-Liouville or Saigo integral).
using IntegralOperator = std::function<PowerSeries(const PowerSeries&)>;

/// Lower-triangular coupling weight w(n, r), 0 <= r <= n: state n at order k
/// draws w(n, r) times state n-r at order k-1.
using CouplingRule = std::function<double(int n, int r)>;

/// Decomposition iterates p_k(n, t) of a linear difference-differential system.
struct AdmState {
    /// iterates[n][k] for n = 0..n_max and k = 0..control.max_k.
    std::vector<std::vector<PowerSeries>> iterates;
    SeriesControl control;
    double horizon = 1.0;
    /// Per state: |first dropped iterate (k = max_k + 1)| evaluated at the horizon.
    std::vector<double> dropped_estimate;
    /// Set when any dropped_estimate exceeds control.tol_abs.
    bool truncation_warning = false;

    [[nodiscard]] int n_max() const { return static_cast<int>(iterates.size()) - 1; }

    /// sum_k iterates[n][k].
    [[nodiscard]] PowerSeries partial_sum(int n) const;

    /// partial_sum(n) evaluated at t.
    [[nodiscard]] double evaluate(int n, double t) const;
};

/// Solves p(n, t) = initial[n] + L( sum_r w(n, r) p(n - r, t) ) by the linear
/// Adomian recursion
///
///   p_0(n) = initial[n],
///   p_k(n) = L( sum_{r=0}^{n} w(n, r) p_{k-1}(n - r) ),   k = 1..max_k.
///
/// For a linear operator every Adomian polynomial equals the previous
/// iterate, so no polynomial expansion is needed. `initial` must hold
/// n_max + 1 entries. Throws TruncationError if a coefficient exceeds 1e300.
AdmState adm_solve_linear(const IntegralOperator& integral_op, const CouplingRule& coupling,
                          std::span<const double> initial, int n_max, const SeriesControl& control,
                          double horizon = 1.0);

/// Adomian polynomial A_n by Rach's rule,
///
///   A_0 = N(u_0),   A_n = sum_{k=1}^{n} C(k, n) N^(k)(u_0),
///
/// where C(k, n) sums prod_j u_j^{k_j} / k_j! over all (k_1..k_n) with
/// sum k_j = k and sum j k_j = n. `derivative(k)` returns N^(k)(u_0) and
/// `u` holds u_0..u_n. Partitions are cached per n; n is capped at 30.
double adomian_polynomial(const std::function<double(int)>& derivative, std::span<const double> u, int n);

}  // namespace fracpois
