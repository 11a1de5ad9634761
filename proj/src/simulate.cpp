#include "fracpois/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "fracpois/errors.hpp"
#include "fracpois/specfun.hpp"

namespace fracpois {

namespace {

constexpr std::int64_t block_size = 4096;
constexpr double inversion_limit = 30.0;
constexpr double saturation_mean = 4.0e18;

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("simulation time must be positive and finite");
    }
}

// Mean-30 inversion from the mode downward would be faster; plain
// sequential search keeps the draw a monotone function of the uniform.
std::int64_t poisson_inversion(double mean, RandomStream& rng) {
    const double u = rng.uniform_open();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t n = 0;
    while (u > cdf && n < 1000) {
        ++n;
        p *= mean / static_cast<double>(n);
        cdf += p;
    }
    return n;
}

}  // namespace

double RandomStream::uniform_open() {
    // 53 random bits centred in their cell: never 0, never 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() {
    return -std::log(uniform_open());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_stable(double nu, double t, RandomStream& rng) {
    if (!(nu > 0.0 && nu < 1.0)) {
        throw DomainError("sample_stable: nu must lie in (0, 1); nu = 1 is the identity clock");
    }
    check_time(t);
    // Kanter's representation of the one-sided stable law with Laplace
    // exponent s^nu.
    const double u = std::numbers::pi * rng.uniform_open();
    const double w = rng.exponential();
    const double a = std::pow(std::sin(nu * u), nu / (1.0 - nu)) * std::sin((1.0 - nu) * u) /
                     std::pow(std::sin(u), 1.0 / (1.0 - nu));
    const double unit = std::pow(a / w, (1.0 - nu) / nu);
    return std::pow(t, 1.0 / nu) * unit;
}

double sample_stable(double nu, double t, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample_stable(nu, t, rng);
}

double sample_inverse_stable(double alpha, double t, RandomStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("sample_inverse_stable: alpha must lie in (0, 1); alpha = 1 is the identity clock");
    }
    check_time(t);
    return std::pow(t / sample_stable(alpha, 1.0, rng), alpha);
}

double sample_inverse_stable(double alpha, double t, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample_inverse_stable(alpha, t, rng);
}

std::int64_t sample_poisson(double mean, RandomStream& rng) {
    if (!(mean >= 0.0) || std::isnan(mean)) {
        throw DomainError("sample_poisson: mean must be non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean <= inversion_limit) {
        return poisson_inversion(mean, rng);
    }
    if (mean >= saturation_mean || !std::isfinite(mean)) {
        return std::numeric_limits<std::int64_t>::max();
    }
    // Transformed rejection with squeeze (Hormann's PTRS).
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform_open() - 0.5;
        const double v = rng.uniform_open();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::int64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - log_gamma(k + 1.0)) {
            return static_cast<std::int64_t>(k);
        }
    }
}

std::int64_t sample_process(Variant variant, const FractionalParams& params, double t, RandomStream& rng) {
    validate(variant, params);
    check_time(t);
    double clock = t;
    switch (variant) {
        case Variant::classical:
            break;
        case Variant::tfpp:
            if (params.alpha < 1.0) {
                clock = sample_inverse_stable(params.alpha, t, rng);
            }
            break;
        case Variant::sfpp:
            if (params.nu < 1.0) {
                clock = sample_stable(params.nu, t, rng);
            }
            break;
        case Variant::stfpp:
            if (params.alpha < 1.0) {
                clock = sample_inverse_stable(params.alpha, t, rng);
            }
            if (params.nu < 1.0 && clock > 0.0) {
                clock = sample_stable(params.nu, clock, rng);
            }
            break;
        case Variant::sstfpp:
            throw UnsupportedVariantError("simulation of sstfpp is unsupported: it has no known time-change representation");
    }
    return sample_poisson(params.lambda * clock, rng);
}

std::int64_t sample_process(Variant variant, const FractionalParams& params, double t, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample_process(variant, params, t, rng);
}

double EmpiricalPmf::frequency(int n) const {
    return sample_count == 0 ? 0.0 : static_cast<double>(counts.at(n)) / static_cast<double>(sample_count);
}

EmpiricalPmf empirical_pmf(Variant variant, const FractionalParams& params, double t, std::int64_t n_samples,
                           int n_max, std::uint64_t seed, unsigned workers) {
    if (n_samples < 1) {
        throw DomainError("empirical_pmf: n_samples must be at least 1");
    }
    if (n_max < 0) {
        throw DomainError("empirical_pmf: n_max must be non-negative");
    }
    if (variant == Variant::sstfpp) {
        throw UnsupportedVariantError("simulation of sstfpp is unsupported: it has no known time-change representation");
    }
    validate(variant, params);
    check_time(t);

    const std::int64_t blocks = (n_samples + block_size - 1) / block_size;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));

    // One histogram per block keeps the merge order fixed.
    std::vector<std::vector<std::int64_t>> block_counts(static_cast<std::size_t>(blocks),
                                                        std::vector<std::int64_t>(n_max + 2, 0));
    auto run_block = [&](std::int64_t b) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        const std::int64_t first = b * block_size;
        const std::int64_t last = std::min(n_samples, first + block_size);
        auto& hist = block_counts[b];
        for (std::int64_t i = first; i < last; ++i) {
            const std::int64_t n = sample_process(variant, params, t, rng);
            ++hist[n <= n_max ? n : n_max + 1];
        }
    };

    if (workers <= 1) {
        for (std::int64_t b = 0; b < blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::int64_t b = w; b < blocks; b += workers) {
                        run_block(b);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    EmpiricalPmf out;
    out.variant = variant;
    out.params = params;
    out.t = t;
    out.n_max = n_max;
    out.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
    out.sample_count = n_samples;
    for (const auto& hist : block_counts) {
        for (int n = 0; n <= n_max; ++n) {
            out.counts[n] += hist[n];
        }
        out.overflow += hist[n_max + 1];
    }
    return out;
}

ChiSquareResult chi_square_gof(const EmpiricalPmf& sample, std::span<const double> expected) {
    if (expected.size() != sample.counts.size()) {
        throw DomainError("chi_square_gof: need one expected probability per state");
    }
    const double total = static_cast<double>(sample.sample_count);
    std::vector<double> exp_counts;
    std::vector<double> obs_counts;
    double mass = 0.0;
    for (std::size_t n = 0; n < expected.size(); ++n) {
        exp_counts.push_back(std::max(expected[n], 0.0) * total);
        obs_counts.push_back(static_cast<double>(sample.counts[n]));
        mass += std::max(expected[n], 0.0);
    }
    exp_counts.push_back(std::max(1.0 - mass, 0.0) * total);
    obs_counts.push_back(static_cast<double>(sample.overflow));

    // Pool adjacent bins until each expects at least 5 draws; a short
    // remainder joins the last pooled bin.
    std::vector<double> e_pool;
    std::vector<double> o_pool;
    double e_acc = 0.0;
    double o_acc = 0.0;
    for (std::size_t i = 0; i < exp_counts.size(); ++i) {
        e_acc += exp_counts[i];
        o_acc += obs_counts[i];
        if (e_acc >= 5.0) {
            e_pool.push_back(e_acc);
            o_pool.push_back(o_acc);
            e_acc = o_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (e_pool.empty()) {
            e_pool.push_back(e_acc);
            o_pool.push_back(o_acc);
        } else {
            e_pool.back() += e_acc;
            o_pool.back() += o_acc;
        }
    }

    ChiSquareResult out;
    out.bins = static_cast<int>(e_pool.size());
    out.dof = out.bins - 1;
    for (std::size_t i = 0; i < e_pool.size(); ++i) {
        if (e_pool[i] > 0.0) {
            const double d = o_pool[i] - e_pool[i];
            out.statistic += d * d / e_pool[i];
        } else if (o_pool[i] > 0.0) {
            out.statistic = std::numeric_limits<double>::infinity();
        }
    }
    if (out.dof < 1) {
        out.p_value = 1.0;
    } else if (!std::isfinite(out.statistic)) {
        out.p_value = 0.0;
    } else {
        out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
    }
    return out;
}

}  // namespace fracpois
