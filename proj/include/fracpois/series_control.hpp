#pragma once

namespace fracpois {

/// Truncation and tolerance settings shared by every series evaluator.
///
/// `max_k` is the ADM truncation order (number of decomposition iterates
/// kept). `term_cap` bounds the number of terms any closed-form series may
/// sum before giving up with a ConvergenceError. A series stops once both
/// the next envelope term and the estimated tail fall below
/// max(tol_abs, tol_rel * |partial sum|).
struct SeriesControl {
    int max_k = 40;
    double tol_abs = 1e-12;
    double tol_rel = 1e-14;
    int term_cap = 10000;

    /// Throws DomainError when an invariant is violated.
    void validate() const;
};

}  // namespace fracpois
