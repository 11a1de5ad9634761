#include "fracpois/adm.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "fracpois/errors.hpp"
#include "fracpois/summation.hpp"

namespace fracpois {

namespace {

constexpr double coeff_guard = 1e300;
constexpr int max_partition_order = 30;

void guard_coefficients(const PowerSeries& s, int n, int k) {
    if (s.max_abs_coeff() > coeff_guard) {
        throw TruncationError("adm_solve_linear: coefficient overflow at n=" + std::to_string(n) +
                              ", k=" + std::to_string(k));
    }
}

// Multiplicity vectors (k_1..k_n) of the integer partitions of n.
using Partition = std::vector<int>;

void enumerate_partitions(int remaining, int part, Partition& current, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    if (part == 0) {
        return;
    }
    for (int count = remaining / part; count >= 0; --count) {
        current[part - 1] = count;
        enumerate_partitions(remaining - count * part, part - 1, current, out);
    }
    current[part - 1] = 0;
}

const std::vector<Partition>& partitions_of(int n) {
    static std::mutex mutex;
    static std::map<int, std::vector<Partition>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<Partition> parts;
        Partition current(static_cast<std::size_t>(n), 0);
        enumerate_partitions(n, n, current, parts);
        it = cache.emplace(n, std::move(parts)).first;
    }
    // std::map never invalidates references to existing elements.
    return it->second;
}

}  // namespace

PowerSeries AdmState::partial_sum(int n) const {
    PowerSeries total;
    for (const auto& piece : iterates.at(static_cast<std::size_t>(n))) {
        total += piece;
    }
    return total;
}

double AdmState::evaluate(int n, double t) const {
    KahanSum acc;
    for (const auto& piece : iterates.at(static_cast<std::size_t>(n))) {
        acc.add(fracpois::evaluate(piece, t));
    }
    return acc.value();
}

AdmState adm_solve_linear(const IntegralOperator& integral_op, const CouplingRule& coupling,
                          std::span<const double> initial, int n_max, const SeriesControl& control,
                          double horizon) {
    control.validate();
    if (n_max < 0) {
        throw DomainError("adm_solve_linear: n_max must be non-negative");
    }
    if (initial.size() != static_cast<std::size_t>(n_max) + 1) {
        throw DomainError("adm_solve_linear: need one initial value per state");
    }
    if (!(horizon >= 0.0)) {
        throw DomainError("adm_solve_linear: horizon must be non-negative");
    }

    // Precompute the coupling table once; the rule may be costly.
    std::vector<std::vector<double>> weight(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        for (int r = 0; r <= n; ++r) {
            weight[n].push_back(coupling(n, r));
        }
    }

    AdmState state;
    state.control = control;
    state.horizon = horizon;
    state.iterates.assign(static_cast<std::size_t>(n_max) + 1, {});
    for (int n = 0; n <= n_max; ++n) {
        state.iterates[n].push_back(PowerSeries::constant(initial[n]));
    }

    auto next_iterate = [&](int n, int k, const std::vector<std::vector<PowerSeries>>& prev) {
        PowerSeries source;
        for (int r = 0; r <= n; ++r) {
            const double w = weight[n][r];
            const PowerSeries& p = prev[n - r][static_cast<std::size_t>(k - 1)];
            if (w != 0.0 && !p.empty()) {
                source += p * w;
            }
        }
        PowerSeries out = source.empty() ? PowerSeries{} : integral_op(source);
        guard_coefficients(out, n, k);
        return out;
    };

    for (int k = 1; k <= control.max_k; ++k) {
        for (int n = 0; n <= n_max; ++n) {
            state.iterates[n].push_back(next_iterate(n, k, state.iterates));
        }
    }

    // One extra order, used only to estimate what truncation dropped.
    std::vector<std::vector<PowerSeries>> extended = state.iterates;
    state.dropped_estimate.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        PowerSeries dropped = next_iterate(n, control.max_k + 1, extended);
        extended[n].push_back(dropped);
        state.dropped_estimate[n] = std::abs(fracpois::evaluate(dropped, horizon));
        if (state.dropped_estimate[n] > control.tol_abs) {
            state.truncation_warning = true;
        }
    }
    return state;
}

double adomian_polynomial(const std::function<double(int)>& derivative, std::span<const double> u, int n) {
    if (n < 0) {
        throw DomainError("adomian_polynomial: order must be non-negative");
    }
    if (n > max_partition_order) {
        throw DomainError("adomian_polynomial: order above the partition cap of 30");
    }
    if (u.size() < static_cast<std::size_t>(n) + 1) {
        throw DomainError("adomian_polynomial: need iterates u_0..u_n");
    }
    if (n == 0) {
        return derivative(0);
    }

    std::vector<double> factorial(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        factorial[i] = factorial[i - 1] * i;
    }

    // Group partitions by their part count k so each N^(k) is requested once.
    std::vector<KahanSum> c_kn(static_cast<std::size_t>(n) + 1);
    for (const auto& mult : partitions_of(n)) {
        int k = 0;
        double prod = 1.0;
        for (int j = 1; j <= n; ++j) {
            const int kj = mult[j - 1];
            if (kj == 0) {
                continue;
            }
            k += kj;
            prod *= std::pow(u[j], kj) / factorial[kj];
        }
        c_kn[k].add(prod);
    }
    KahanSum total;
    for (int k = 1; k <= n; ++k) {
        const double c = c_kn[k].value();
        if (c != 0.0) {
            total.add(c * derivative(k));
        }
    }
    return total.value();
}

}  // namespace fracpois
