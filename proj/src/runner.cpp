#include "fluidint/runner.hpp"

#include "fluidint/dsl.hpp"
#include "fluidint/errors.hpp"
#include "fluidint/intermediate.hpp"
#include "fluidint/sampling.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace fluidint {

namespace {

using nlohmann::json;

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Per-index values, reduced in index order so the result does not depend on scheduling.
CheckResult reduce(const CheckSpec& spec, double tolerance, const std::vector<Point>& where,
                   const std::vector<double>& values, const std::vector<std::string>& errors) {
    CheckResult r;
    r.name = spec.name;
    r.kind = spec.kind;
    r.tolerance = tolerance;
    r.samples = values.size();
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            r.status = CheckStatus::Error;
            r.message = errors[i];
            r.worst_point = where[i];
            r.max_norm = std::numeric_limits<double>::quiet_NaN();
            r.mean_norm = std::numeric_limits<double>::quiet_NaN();
            return r;
        }
    }
    if (values.empty()) {
        r.status = CheckStatus::Error;
        r.message = "empty sample";
        return r;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[worst] || (std::isnan(values[i]) && !std::isnan(values[worst]))) worst = i;
    }
    r.max_norm = values[worst];
    r.mean_norm = pairwise_sum(values) / static_cast<double>(values.size());
    r.worst_point = where[worst];
    r.status = classify(r.max_norm, tolerance);
    return r;
}

template <class Sample>
CheckResult sweep(const CheckSpec& spec, double tolerance, const std::vector<Sample>& samples,
                  const std::function<Point(const Sample&)>& where_of,
                  const std::function<double(const Sample&)>& f, unsigned threads) {
    std::vector<double> values(samples.size(), 0.0);
    std::vector<std::string> errors(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        try {
            values[i] = f(samples[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::vector<Point> where;
    where.reserve(samples.size());
    for (const auto& s : samples) where.push_back(where_of(s));
    return reduce(spec, tolerance, where, values, errors);
}

CheckResult errored(const CheckSpec& spec, double tolerance, const std::string& message) {
    CheckResult r;
    r.name = spec.name;
    r.kind = spec.kind;
    r.tolerance = tolerance;
    r.status = CheckStatus::Error;
    r.message = message;
    r.max_norm = std::numeric_limits<double>::quiet_NaN();
    r.mean_norm = std::numeric_limits<double>::quiet_NaN();
    return r;
}

const FluidScenario& require_fluid(const Scenario& sc) {
    if (!sc.fluid) throw Error(ErrorKind::ValidationError, "scenario has no fluid block");
    return *sc.fluid;
}

std::string arg_string(const CheckSpec& spec, const char* key) {
    if (!spec.args.contains(key)) {
        throw Error(ErrorKind::ValidationError, fmt::format("check '{}' needs '{}'", spec.name, key));
    }
    return spec.args.at(key).get<std::string>();
}

Vec arg_vec(const CheckSpec& spec, const char* key, const Vec& fallback) {
    if (!spec.args.contains(key)) return fallback;
    const auto v = spec.args.at(key).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != fallback.size()) {
        throw Error(ErrorKind::ValidationError, fmt::format("check '{}': '{}' has wrong length", spec.name, key));
    }
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

using PointCheck = std::function<double(const Point&)>;

PointCheck point_check(const Scenario& sc, const CheckSpec& spec) {
    const std::string& kind = spec.kind;
    const bool fd = spec.args.value("derivatives", "analytic") == "fd";
    if (kind == "intermediate_residual") {
        const VectorField v = sc.field(arg_string(spec, "field"));
        return [&sc, v](const Point& x) {
            return max_abs(intermediate_residual(sc.metric, sc.system_force, v, x).residual);
        };
    }
    if (kind == "prolongation_defect") {
        const VectorField v = sc.field(arg_string(spec, "field"));
        return [&sc, v](const Point& x) { return prolongation_defect(v, sc.system, x); };
    }
    if (kind == "vorticity_gap") {
        VectorField v = sc.field(arg_string(spec, "field"));
        MetricField g = sc.metric;
        if (fd) {
            v = v.without_derivatives();
            g = g.without_derivatives();
        }
        return [g, v](const Point& x) { return max_abs(vorticity_identity_gap(g, v, x)); };
    }
    if (kind == "metric_compatibility") {
        const MetricField g = fd ? sc.metric.without_derivatives() : sc.metric;
        return [g](const Point& x) { return metric_compatibility_defect(g, x); };
    }
    if (kind == "hamilton_jacobi") {
        const ScalarField u = sc.scalar(arg_string(spec, "potential"));
        const ScalarField s = sc.scalar(arg_string(spec, "action"));
        return [&sc, u, s](const Point& x) { return hamilton_jacobi_residual(sc.metric, u, s, x); };
    }
    if (kind == "lagrangian_defect") {
        const ScalarField s = sc.scalar(arg_string(spec, "action"));
        return [&sc, s](const Point& x) { return lagrangian_defect(sc.metric, s, x); };
    }

    const FluidScenario& fluid = require_fluid(sc);
    if (kind == "euler") {
        return [&fluid](const Point& x) {
            fluid.validate(x);
            return max_abs(fluid.euler_residual(x));
        };
    }
    if (kind == "bernoulli") {
        return [&fluid](const Point& x) {
            const auto b = fluid.bernoulli_residual(x);
            if (!b) throw Error(ErrorKind::ValidationError, "regime has no Bernoulli residual");
            return std::abs(*b);
        };
    }
    if (kind == "bernoulli_from_euler") {
        return [&fluid](const Point& x) {
            const auto b = fluid.bernoulli_residual(x);
            const auto e = fluid.euler_dot_velocity(x);
            if (!b || !e) throw Error(ErrorKind::ValidationError, "regime has no Bernoulli residual");
            return std::abs(*b - *e);
        };
    }
    if (kind == "relativistic_orthogonality") {
        return [&fluid](const Point& x) {
            if (fluid.regime != Regime::Relativistic) {
                throw Error(ErrorKind::ValidationError, "orthogonality needs the relativistic regime");
            }
            fluid.validate(x);
            return std::abs(inner(fluid.metric, x, fluid.euler_residual(x), fluid.velocity(x)));
        };
    }
    if (kind == "time_split" ||
        (kind == "euler_vs_intermediate" &&
         (fluid.regime == Regime::UnsteadyStatic || fluid.regime == Regime::Flrw))) {
        return [&fluid](const Point& x) {
            const Vec e = fluid.euler_residual(x);
            const TimeSplit exact = time_constrained_split(fluid, x, Multiplier::Exact);
            const TimeSplit shell = time_constrained_split(fluid, x, Multiplier::OnShell);
            return std::max({std::abs(exact.time), max_abs(exact.spatial - e), max_abs(shell.spatial - e),
                             std::abs(shell.time - predicted_time_component(fluid, x))});
        };
    }
    if (kind == "euler_vs_intermediate") {
        if (fluid.regime == Regime::Steady) {
            ForceForm alpha = ForceForm::integrable(fluid.pressure, fluid.density);
            if (fluid.body_force) alpha = ForceForm::sum(alpha, *fluid.body_force);
            return [&fluid, alpha](const Point& x) {
                const Vec a = fluid.euler_residual(x);
                const Vec b = intermediate_residual(fluid.metric, alpha, fluid.velocity, x).residual;
                return max_abs(a - b);
            };
        }
        // relativistic: Euler = zeta * residual of the corrected system with alpha = dP / zeta
        const ConstrainedSystem corrected =
            relativistic_correction(fluid.metric, ForceForm::integrable(fluid.pressure, fluid.density));
        return [&fluid, corrected](const Point& x) {
            fluid.validate(x);
            const Vec a = fluid.euler_residual(x);
            const Vec b = fluid.density(x) *
                          intermediate_residual(fluid.metric, corrected.modified_force, fluid.velocity, x).residual;
            return max_abs(a - b);
        };
    }
    throw Error(ErrorKind::ValidationError, fmt::format("check kind '{}' is not point-based", kind));
}

CheckResult run_trajectory_check(const Scenario& sc, const CheckSpec& spec, double tolerance) {
    const TrajectorySpec& ts = sc.trajectory(arg_string(spec, "trajectory"));
    CheckResult r;
    r.name = spec.name;
    r.kind = spec.kind;
    r.tolerance = tolerance;

    if (spec.kind == "flow_lift") {
        const VectorField v = sc.field(arg_string(spec, "field"));
        const double d = compare_lift_vs_dynamics(v, sc.system, ts.x0, ts.t_end, ts.dt);
        r.max_norm = r.mean_norm = d;
        r.samples = static_cast<std::size_t>(std::ceil(ts.t_end / ts.dt - 1e-9)) + 1;
        r.worst_point = ts.x0;
        r.metrics = {{"sup_distance", d}};
        r.status = classify(d, tolerance);
        return r;
    }

    const Trajectory traj = run_trajectory(sc, ts);
    if (!traj.complete()) return errored(spec, tolerance, *traj.diagnostic);
    if (spec.kind == "tdot_drift" && !sc.has_time) {
        return errored(spec, tolerance, "tdot_drift needs a chart with time");
    }
    std::vector<double> drift;
    drift.reserve(traj.states.size());
    const double ref = spec.kind == "energy_drift" ? 2.0 * kinetic_energy(sc.metric, traj.states.front())
                                                   : traj.states.front().xdot[0];
    for (const State& s : traj.states) {
        const double q = spec.kind == "energy_drift" ? 2.0 * kinetic_energy(sc.metric, s) : s.xdot[0];
        drift.push_back(std::abs(q - ref));
    }
    const auto worst = static_cast<std::size_t>(std::max_element(drift.begin(), drift.end()) - drift.begin());
    r.max_norm = drift[worst];
    r.mean_norm = pairwise_sum(drift) / static_cast<double>(drift.size());
    r.worst_point = traj.states[worst].x;
    r.samples = drift.size();
    r.metrics = {{spec.kind == "energy_drift" ? "theta_dot_drift" : "tdot_drift", r.max_norm},
                 {"s_end", traj.s.back()}};
    r.status = classify(r.max_norm, tolerance);
    return r;
}

CheckResult run_check(const Scenario& sc, const CheckSpec& spec, double tolerance, std::uint64_t seed,
                      unsigned threads) {
    const Vec lower = arg_vec(spec, "lower", sc.sample.lower);
    const Vec upper = arg_vec(spec, "upper", sc.sample.upper);
    const std::size_t count = spec.args.value("count", sc.sample.count);

    if (spec.kind == "energy_drift" || spec.kind == "tdot_drift" || spec.kind == "flow_lift") {
        return run_trajectory_check(sc, spec, tolerance);
    }
    if (spec.kind == "relativistic_defect") {
        const Vec vlo = arg_vec(spec, "velocity_lower", sc.sample.velocity_lower);
        const Vec vhi = arg_vec(spec, "velocity_upper", sc.sample.velocity_upper);
        const auto states = sample_states(lower, upper, vlo, vhi, count, seed);
        return sweep<State>(
            spec, tolerance, states, [](const State& s) { return s.x; },
            [&sc](const State& s) { return std::abs(alpha_dot(sc.system_force, s)); }, threads);
    }
    const PointCheck f = point_check(sc, spec);
    const auto points = halton_points(lower, upper, count, seed);
    return sweep<Point>(
        spec, tolerance, points, [](const Point& p) { return p; }, f, threads);
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) f(i);
        });
    }
}

ResidualReport run_scenario(const Scenario& scenario, const RunOptions& options) {
    ResidualReport report;
    report.scenario = scenario.name;
    report.scenario_digest = scenario.digest;
    report.seed = options.seed.value_or(scenario.sample.seed);
    for (std::size_t i = 0; i < scenario.checks.size(); ++i) {
        const CheckSpec& spec = scenario.checks[i];
        const double tol = options.tolerance.value_or(spec.tolerance);
        try {
            report.checks.push_back(run_check(scenario, spec, tol, derive_seed(report.seed, i), options.threads));
        } catch (const std::exception& e) {
            report.checks.push_back(errored(spec, tol, e.what()));
        }
    }
    return report;
}

Trajectory run_trajectory(const Scenario& scenario, const TrajectorySpec& spec) {
    return integrate_second_order(scenario.system, State{spec.x0, spec.xdot0}, spec.t_end, spec.dt);
}

void write_trajectory_csv(std::ostream& out, const MetricField& metric, const Trajectory& trajectory) {
    const int n = metric.dim;
    out << "s";
    for (int i = 0; i < n; ++i) out << ",x" << i;
    for (int i = 0; i < n; ++i) out << ",xdot" << i;
    out << ",T,tdot\n";
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const State& s = trajectory.states[k];
        std::string row = fmt::format("{:.17g}", trajectory.s[k]);
        for (int i = 0; i < n; ++i) row += fmt::format(",{:.17g}", s.x[i]);
        for (int i = 0; i < n; ++i) row += fmt::format(",{:.17g}", s.xdot[i]);
        row += fmt::format(",{:.17g},{:.17g}\n", kinetic_energy(metric, s), s.xdot[0]);
        out << row;
    }
}

std::pair<Vec, Vec> builtin_sample_box(std::string_view metric, int dim) {
    constexpr double pi = std::numbers::pi;
    Vec lo = Vec::Constant(dim, -1.0);
    Vec hi = Vec::Constant(dim, 1.0);
    if (metric == "polar") {
        lo << 0.5, -pi;
        hi << 2.0, pi;
    } else if (metric == "spherical") {
        lo << 0.5, 0.3, -pi;
        hi << 2.0, 2.8, pi;
    } else if (metric == "sphere") {
        lo << 0.3, -pi;
        hi << 2.8, pi;
    } else if (metric == "flrw-linear") {
        lo[0] = 0.5;
        hi[0] = 2.0;
    } else if (metric == "flrw-sphere") {
        lo[1] = 0.3;
        hi[1] = 2.8;
        lo[2] = -pi;
        hi[2] = pi;
    }
    return {lo, hi};
}

ResidualReport run_identities(std::string_view metric_name, int dim, std::size_t trials, std::uint64_t seed,
                              unsigned threads) {
    const MetricField metric = builtin_metric(metric_name, dim);
    const auto [lo, hi] = builtin_sample_box(metric_name, dim);
    const auto vars = chart_variables(dim, false);

    ResidualReport report;
    report.scenario = fmt::format("identities:{}:{}", metric_name, dim);
    report.scenario_digest = sha256_hex(fmt::format("{}|{}|{}", metric_name, dim, trials));
    report.seed = seed;

    // one random quadratic field per trial
    std::vector<VectorField> fields;
    {
        std::mt19937_64 rng(derive_seed(seed, 100));
        for (std::size_t k = 0; k < trials; ++k) {
            std::vector<Expr> comps;
            for (int i = 0; i < dim; ++i) comps.push_back(random_polynomial(vars, 2, rng));
            fields.push_back(field_from_exprs(comps, vars));
        }
    }
    std::vector<std::size_t> idx(trials);
    for (std::size_t k = 0; k < trials; ++k) idx[k] = k;

    auto suite = [&](const char* name, const char* kind, double tol, std::uint64_t salt,
                     const std::function<double(std::size_t, const Point&)>& f) {
        CheckSpec spec;
        spec.name = name;
        spec.kind = kind;
        spec.tolerance = tol;
        const auto pts = halton_points(lo, hi, trials, derive_seed(seed, salt));
        try {
            report.checks.push_back(sweep<std::size_t>(
                spec, tol, idx, [&pts](const std::size_t& k) { return pts[k]; },
                [&](const std::size_t& k) { return f(k, pts[k]); }, threads));
        } catch (const std::exception& e) {
            report.checks.push_back(errored(spec, tol, e.what()));
        }
    };

    suite("vorticity_analytic", "vorticity_gap", 1e-10, 0, [&](std::size_t k, const Point& x) {
        return max_abs(vorticity_identity_gap(metric, fields[k], x));
    });
    const MetricField metric_fd = metric.without_derivatives();
    suite("vorticity_fd", "vorticity_gap", 1e-6, 1, [&](std::size_t k, const Point& x) {
        return max_abs(vorticity_identity_gap(metric_fd, fields[k].without_derivatives(), x));
    });
    suite("metric_compatibility", "metric_compatibility", 1e-10, 2,
          [&](std::size_t, const Point& x) { return metric_compatibility_defect(metric, x); });

    // Bernoulli-from-Euler: FLRW builtins use their (h, a); the others act as the static spatial metric
    FluidScenario fluid;
    Vec blo;
    Vec bhi;
    int spatial_dim = 0;
    if (auto parts = builtin_flrw_parts(metric_name, dim)) {
        fluid.regime = Regime::Flrw;
        fluid.metric = parts->h;
        fluid.scale_factor = parts->a;
        spatial_dim = dim - 1;
        blo = lo;
        bhi = hi;
    } else {
        fluid.regime = Regime::UnsteadyStatic;
        fluid.metric = metric;
        spatial_dim = dim;
        blo.resize(dim + 1);
        bhi.resize(dim + 1);
        blo << 0.0, lo;
        bhi << 1.0, hi;
    }
    const auto tvars = chart_variables(spatial_dim + 1, true);
    std::vector<FluidScenario> fluids;
    {
        std::mt19937_64 rng(derive_seed(seed, 101));
        for (std::size_t k = 0; k < trials; ++k) {
            FluidScenario f = fluid;
            std::vector<Expr> comps;
            for (int i = 0; i < spatial_dim; ++i) comps.push_back(random_polynomial(tvars, 2, rng));
            f.velocity = field_from_exprs(comps, tvars);
            f.pressure = scalar_from_expr(random_polynomial(tvars, 2, rng), tvars);
            f.density = scalar_from_expr(Expr::call(Func::Exp, random_polynomial(tvars, 1, rng)), tvars);
            fluids.push_back(std::move(f));
        }
    }
    {
        CheckSpec spec;
        spec.name = "bernoulli_from_euler";
        spec.kind = "bernoulli_from_euler";
        spec.tolerance = 1e-10;
        const auto pts = halton_points(blo, bhi, trials, derive_seed(seed, 3));
        report.checks.push_back(sweep<std::size_t>(
            spec, spec.tolerance, idx, [&pts](const std::size_t& k) { return pts[k]; },
            [&](const std::size_t& k) {
                return std::abs(*fluids[k].bernoulli_residual(pts[k]) - *fluids[k].euler_dot_velocity(pts[k]));
            },
            threads));
    }
    return report;
}

}  // namespace fluidint
