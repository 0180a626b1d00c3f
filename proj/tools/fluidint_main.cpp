#include "fluidint/errors.hpp"
#include "fluidint/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

using namespace fluidint;

namespace {

void print_summary(const ResidualReport& report) {
    for (const auto& c : report.checks) {
        fmt::print(stderr, "{:<6} {:<28} max={:.3e} tol={:.1e}{}\n", to_string(c.status), c.name, c.max_norm,
                   c.tolerance, c.message.empty() ? "" : "  " + c.message);
    }
}

int emit(const ResidualReport& report, const std::string& out, const std::string& format) {
    const std::string text = format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) {
            fmt::print(stderr, "cannot write {}\n", out);
            return 2;
        }
        f << text;
    }
    print_summary(report);
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluidint: intermediate integrals, constrained forces and fluid residual checks"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out;
    std::string format = "json";
    double tol = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    auto* check = app.add_subcommand("check", "run every check of a scenario");
    check->add_option("--scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
    auto* tol_opt = check->add_option("--tol", tol, "override all check tolerances");
    auto* seed_opt = check->add_option("--seed", seed, "override the sample seed");
    check->add_option("--out", out, "report file (stdout when omitted)");
    check->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    check->add_option("--threads", threads, "worker threads, 0 = all cores");

    std::string trajectory;
    double dt = 0.0;
    double t_end = 0.0;
    auto* integ = app.add_subcommand("integrate", "integrate one trajectory of a scenario to CSV");
    integ->add_option("--scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
    integ->add_option("--trajectory", trajectory, "trajectory name")->required();
    auto* dt_opt = integ->add_option("--dt", dt, "step size")->check(CLI::PositiveNumber);
    auto* tend_opt = integ->add_option("--t-end", t_end, "final parameter")->check(CLI::NonNegativeNumber);
    integ->add_option("--out", out, "CSV file")->required();

    std::string metric;
    int dim = 0;
    std::size_t trials = 100;
    auto* ident = app.add_subcommand("identities", "identity suites on a builtin metric");
    ident->add_option("--metric", metric, "builtin metric")->required()->check(CLI::IsMember(builtin_metric_names()));
    ident->add_option("--dim", dim, "dimension")->required()->check(CLI::PositiveNumber);
    ident->add_option("--trials", trials, "random trials per suite")->check(CLI::PositiveNumber);
    ident->add_option("--seed", seed, "seed");
    ident->add_option("--threads", threads, "worker threads, 0 = all cores");
    ident->add_option("--out", out, "report file (stdout when omitted)");
    ident->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            RunOptions opts;
            if (*tol_opt) opts.tolerance = tol;
            if (*seed_opt) opts.seed = seed;
            opts.threads = threads;
            return emit(run_scenario(load_scenario(scenario_path), opts), out, format);
        }
        if (*integ) {
            const Scenario sc = load_scenario(scenario_path);
            TrajectorySpec spec = sc.trajectory(trajectory);
            if (*dt_opt) spec.dt = dt;
            if (*tend_opt) spec.t_end = t_end;
            const Trajectory traj = run_trajectory(sc, spec);
            std::ofstream f(out);
            if (!f) {
                fmt::print(stderr, "cannot write {}\n", out);
                return 2;
            }
            write_trajectory_csv(f, sc.metric, traj);
            if (!traj.complete()) {
                fmt::print(stderr, "integration stopped early: {}\n", *traj.diagnostic);
                return 1;
            }
            return 0;
        }
        if (*ident) {
            return emit(run_identities(metric, dim, trials, seed == 0 ? 1 : seed, threads), out, format);
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 2;
}
