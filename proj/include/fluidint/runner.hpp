#pragma once

#include "fluidint/integrate.hpp"
#include "fluidint/report.hpp"
#include "fluidint/scenario.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace fluidint {

struct RunOptions {
    // overrides every check tolerance when set
    std::optional<double> tolerance;
    // overrides the scenario sample seed when set
    std::optional<std::uint64_t> seed;
    // 0 = hardware concurrency
    unsigned threads = 0;
};

// Runs every check of the scenario. Numeric errors are recorded on the check that raised
// them. The report is identical for any thread count.
ResidualReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Trajectory of the scenario's second-order system from the named initial state.
Trajectory run_trajectory(const Scenario& scenario, const TrajectorySpec& spec);

// header s,x0..x{n-1},xdot0..xdot{n-1},T,tdot
void write_trajectory_csv(std::ostream& out, const MetricField& metric, const Trajectory& trajectory);

// Identity suites on a builtin metric: vorticity gap (analytic and finite-difference),
// metric compatibility and, where the metric has a time direction, Bernoulli-from-Euler.
ResidualReport run_identities(std::string_view metric, int dim, std::size_t trials, std::uint64_t seed = 1,
                              unsigned threads = 0);

// Sample box on which the builtin metric is regular.
std::pair<Vec, Vec> builtin_sample_box(std::string_view metric, int dim);

// Evaluate f(0..count-1) on `threads` workers; results are stored by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace fluidint
