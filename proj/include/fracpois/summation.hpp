#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracpois/errors.hpp"
#include "fracpois/series_control.hpp"

namespace fracpois {

/// Neumaier's variant of Kahan compensated summation.
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }

    [[nodiscard]] double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// One term of a series together with a smooth upper bound on its size.
///
/// The envelope must dominate |value| and have eventually non-increasing
/// consecutive ratios; the tail estimate relies on it.
struct SeriesTerm {
    double value = 0.0;
    double envelope = 0.0;
};

struct SeriesSum {
    double value = 0.0;
    /// Bound on the magnitude of the discarded tail.
    double tail_bound = 0.0;
    /// Largest |term| seen; cancellation error is roughly max_term * eps.
    double max_term = 0.0;
    int terms = 0;

    [[nodiscard]] double rounding_bound() const {
        return max_term * std::numeric_limits<double>::epsilon() * (terms + 1);
    }
};

/// Sums `term(0) + term(1) + ...` under the stopping rule of SeriesControl.
///
/// Once the envelope ratio r = e_k / e_{k-1} drops below one the remaining
/// tail is bounded geometrically by e_k * r / (1 - r). The sum stops when
/// both e_k and that bound are under threshold.
template <class TermFn>
SeriesSum sum_series(TermFn&& term, const SeriesControl& control, const char* what) {
    constexpr double overflow_guard = 1e300;
    KahanSum acc;
    SeriesSum out;
    double prev_env = 0.0;
    for (int k = 0; k < control.term_cap; ++k) {
        const SeriesTerm tk = term(k);
        if (!std::isfinite(tk.value) || !std::isfinite(tk.envelope) || tk.envelope > overflow_guard) {
            throw ConvergenceError(std::string(what) + ": term magnitude overflow at k=" + std::to_string(k));
        }
        acc.add(tk.value);
        out.max_term = std::max(out.max_term, std::abs(tk.value));
        out.terms = k + 1;

        const double threshold = std::max(control.tol_abs, control.tol_rel * std::abs(acc.value()));
        if (k > 0 && tk.envelope == 0.0) {
            // Power series in a zero argument: every later term vanishes.
            out.value = acc.value();
            out.tail_bound = 0.0;
            return out;
        }
        if (k > 0 && prev_env > 0.0) {
            const double ratio = tk.envelope / prev_env;
            if (ratio < 1.0) {
                const double tail = tk.envelope * ratio / (1.0 - ratio);
                if (tk.envelope <= threshold && tail <= threshold) {
                    out.value = acc.value();
                    out.tail_bound = tail;
                    return out;
                }
            }
        }
        prev_env = tk.envelope;
    }
    throw ConvergenceError(std::string(what) + ": tolerance not reached within term cap of " +
                           std::to_string(control.term_cap));
}

}  // namespace fracpois
