#include "fluidint/integrate.hpp"

#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

std::size_t step_count(double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::ValidationError, fmt::format("dt must be positive, got {}", dt));
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorKind::ValidationError, fmt::format("t_end must be >= 0, got {}", t_end));
    }
    const double ratio = t_end / dt;
    const double rounded = std::round(ratio);
    // tolerate representation error in t_end / dt
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded)) return static_cast<std::size_t>(rounded);
    return static_cast<std::size_t>(std::ceil(ratio));
}

double step_time(std::size_t k, std::size_t steps, double t_end, double dt) {
    return k == steps ? t_end : std::min(t_end, static_cast<double>(k) * dt);
}

}  // namespace

Trajectory integrate_second_order(const SecondOrderField& sof, const State& initial, double t_end,
                                  double dt) {
    const std::size_t steps = step_count(t_end, dt);
    Trajectory out;
    out.s.reserve(steps + 1);
    out.states.reserve(steps + 1);
    out.s.push_back(0.0);
    out.states.push_back(initial);

    State y = initial;
    for (std::size_t k = 0; k < steps; ++k) {
        const double s0 = step_time(k, steps, t_end, dt);
        const double s1 = step_time(k + 1, steps, t_end, dt);
        const double h = s1 - s0;
        try {
            const Vec k1x = y.xdot;
            const Vec k1v = sof(y);
            const State y2{y.x + 0.5 * h * k1x, y.xdot + 0.5 * h * k1v};
            const Vec k2x = y2.xdot;
            const Vec k2v = sof(y2);
            const State y3{y.x + 0.5 * h * k2x, y.xdot + 0.5 * h * k2v};
            const Vec k3x = y3.xdot;
            const Vec k3v = sof(y3);
            const State y4{y.x + h * k3x, y.xdot + h * k3v};
            const Vec k4x = y4.xdot;
            const Vec k4v = sof(y4);
            y.x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            y.xdot += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if (!y.x.allFinite() || !y.xdot.allFinite()) {
                throw Error(ErrorKind::NonFinite, "state is not finite");
            }
        } catch (const Error& e) {
            out.diagnostic = fmt::format("integration stopped at s = {} ({})", s0, e.what());
            return out;
        }
        out.s.push_back(s1);
        out.states.push_back(y);
    }
    return out;
}

Curve integrate_flow(const VectorField& v, const Point& x0, double t_end, double dt) {
    const std::size_t steps = step_count(t_end, dt);
    Curve out;
    out.s.reserve(steps + 1);
    out.points.reserve(steps + 1);
    out.s.push_back(0.0);
    out.points.push_back(x0);

    Point x = x0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double s0 = step_time(k, steps, t_end, dt);
        const double s1 = step_time(k + 1, steps, t_end, dt);
        const double h = s1 - s0;
        try {
            const Vec k1 = v(x);
            const Vec k2 = v(x + 0.5 * h * k1);
            const Vec k3 = v(x + 0.5 * h * k2);
            const Vec k4 = v(x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "point is not finite");
        } catch (const Error& e) {
            out.diagnostic = fmt::format("integration stopped at s = {} ({})", s0, e.what());
            return out;
        }
        out.s.push_back(s1);
        out.points.push_back(x);
    }
    return out;
}

Trajectory lift(const Curve& curve, const VectorField& v) {
    Trajectory out;
    out.s = curve.s;
    out.diagnostic = curve.diagnostic;
    out.states.reserve(curve.points.size());
    for (const Point& p : curve.points) out.states.push_back(State{p, v(p)});
    return out;
}

double compare_lift_vs_dynamics(const VectorField& v, const SecondOrderField& sof, const Point& x0,
                                double t_end, double dt) {
    const Trajectory lifted = lift(integrate_flow(v, x0, t_end, dt), v);
    const Trajectory dyn = integrate_second_order(sof, State{x0, v(x0)}, t_end, dt);
    if (!lifted.complete()) throw Error(ErrorKind::NonFinite, "flow: " + *lifted.diagnostic);
    if (!dyn.complete()) throw Error(ErrorKind::NonFinite, "dynamics: " + *dyn.diagnostic);
    double sup = 0.0;
    for (std::size_t k = 0; k < dyn.states.size(); ++k) {
        sup = std::max(sup, (lifted.states[k].x - dyn.states[k].x).cwiseAbs().maxCoeff());
    }
    return sup;
}

}  // namespace fluidint
