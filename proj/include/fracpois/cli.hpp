#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracpois/processes.hpp"
#include "fracpois/series_control.hpp"

namespace fracpois::cli {

enum ExitCode : int {
    ok = 0,
    verify_failed = 1,
    bad_params = 2,
    convergence_failure = 3,
    unsupported_variant = 4,
};

struct RunConfig {
    std::string command;
    std::string variant = "stfpp";
    double lambda = 1.0;
    double alpha = 0.7;
    double nu = 0.6;
    /// Unset beta means beta = -alpha.
    double beta = 0.0;
    bool beta_set = false;
    double gamma = 0.0;
    double t_start = 0.0;
    double t_stop = 2.0;
    int t_count = 5;
    int n_max = 50;
    SeriesControl control;
    std::string format = "csv";
    std::vector<double> u_values{-0.7, -0.3, 0.0, 0.3, 0.7};
    double sim_time = 1.0;
    std::uint64_t seed = 20240601;
    std::int64_t samples = 100000;
    unsigned workers = 0;
};

/// Parameters implied by the variant name; throws DomainError on an unknown name.
FractionalParams resolve_params(const RunConfig& config, Variant& variant);

/// Evenly spaced grid, start and stop included.
std::vector<double> time_grid(const RunConfig& config);

/// Runs one command. `args` includes the program name. Results go to `out`,
/// diagnostics to `err`; a command that throws writes nothing to `out`.
/// Reads FRACPOIS_CONFIG for defaults that flags override.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g: every printed double parses back to the same value.
std::string format_number(double x);

}  // namespace fracpois::cli
