#pragma once

#include "fluidint/dynamics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluidint {

struct Trajectory {
    std::vector<double> s;
    std::vector<State> states;
    // Set when integration stopped early (non-finite state or a numeric error).
    std::optional<std::string> diagnostic;

    bool complete() const { return !diagnostic.has_value(); }
};

struct Curve {
    std::vector<double> s;
    std::vector<Point> points;
    std::optional<std::string> diagnostic;

    bool complete() const { return !diagnostic.has_value(); }
};

// Classic fixed-step RK4 on (x, xdot)' = (xdot, accel(x, xdot)). The last step is
// shortened when t_end is not a multiple of dt.
Trajectory integrate_second_order(const SecondOrderField& sof, const State& initial, double t_end,
                                  double dt);

// RK4 on x' = v(x).
Curve integrate_flow(const VectorField& v, const Point& x0, double t_end, double dt);

// Attach xdot(s) = v(x(s)) to every point of the curve.
Trajectory lift(const Curve& curve, const VectorField& v);

// sup_s || x_flow(s) - x_dyn(s) ||_inf between the integral curve of v from x0 and the
// trajectory of sof from (x0, v(x0)).
double compare_lift_vs_dynamics(const VectorField& v, const SecondOrderField& sof, const Point& x0,
                                double t_end, double dt);

}  // namespace fluidint
