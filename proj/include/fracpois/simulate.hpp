#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fracpois/processes.hpp"

namespace fracpois {

/// Deterministic stream of variates for one seed. Uniforms are built from
/// the raw engine bits so the stream does not depend on the standard
/// library's distribution implementations.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Exp(1).
    double exponential();

  private:
    std::mt19937_64 engine_;
};

/// Seed of block `index` of a master stream (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// One draw of D_nu(t), E[exp(-s D_nu(t))] = exp(-t s^nu), 0 < nu < 1.
double sample_stable(double nu, double t, RandomStream& rng);
double sample_stable(double nu, double t, std::uint64_t seed);

/// One draw of E_alpha(t) = inf{s : D_alpha(s) > t}, as (t / D_alpha(1))^alpha.
double sample_inverse_stable(double alpha, double t, RandomStream& rng);
double sample_inverse_stable(double alpha, double t, std::uint64_t seed);

/// Poisson variate: inversion up to mean 30, rejection above. Means beyond
/// 2^62 saturate, which only ever lands in an overflow bin.
std::int64_t sample_poisson(double mean, RandomStream& rng);

/// One count N(t) of `variant`. TFPP runs a Poisson clock at E_alpha(t),
/// SFPP at D_nu(t), STFPP at D_nu(E_alpha(t)). SSTFPP has no time change
/// and throws UnsupportedVariantError.
std::int64_t sample_process(Variant variant, const FractionalParams& params, double t, RandomStream& rng);
std::int64_t sample_process(Variant variant, const FractionalParams& params, double t, std::uint64_t seed);

struct EmpiricalPmf {
    Variant variant = Variant::classical;
    FractionalParams params;
    double t = 0.0;
    int n_max = 0;
    /// counts[n] for n <= n_max.
    std::vector<std::int64_t> counts;
    /// Draws above n_max; counts plus overflow sum to sample_count.
    std::int64_t overflow = 0;
    std::int64_t sample_count = 0;

    [[nodiscard]] double frequency(int n) const;
};

/// Histogram of n_samples draws. Samples are split into fixed blocks of 4096
/// with seeds derived from `seed`, so the result is the same for every
/// worker count. workers = 0 picks the hardware concurrency.
EmpiricalPmf empirical_pmf(Variant variant, const FractionalParams& params, double t, std::int64_t n_samples,
                           int n_max, std::uint64_t seed, unsigned workers = 0);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    /// Bins after pooling adjacent states with expected count below 5.
    int bins = 0;
};

/// Pearson goodness of fit of the histogram against `expected` (one
/// probability per state n <= n_max; the overflow bin gets the remainder).
ChiSquareResult chi_square_gof(const EmpiricalPmf& sample, std::span<const double> expected);

}  // namespace fracpois
