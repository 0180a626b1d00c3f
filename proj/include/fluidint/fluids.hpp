#pragma once

#include "fluidint/dynamics.hpp"

#include <optional>

namespace fluidint {

inline constexpr double kFluidDensityFloor = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-8;

// Steady Euler: v^nabla v + grad P / rho (+ grad(v* f)).
// Evaluated through the lowered equation with Christoffel symbols of the first kind and a
// single index raise at the end, independently of intermediate_residual.
Vec steady_euler_residual(const MetricField& metric, const VectorField& v, const ScalarField& pressure,
                          const ScalarField& density, const Point& x,
                          const std::optional<ForceForm>& body_force = std::nullopt);

// Unsteady Euler on R x M^s with static spatial metric g^s. Fields and scalars are functions
// of (t, x^1..x^n); v returns the n spatial components. Returns
//   dv/dt + v^nabla v + grad^s P / rho.
Vec unsteady_euler_residual_static(const MetricField& spatial, const VectorField& v,
                                   const ScalarField& pressure, const ScalarField& density,
                                   const Point& x);

// v(P)/rho + v(g^s(v,v)/2) + d/dt (g^s(v,v)/2)
double bernoulli_residual_static(const MetricField& spatial, const VectorField& v,
                                 const ScalarField& pressure, const ScalarField& density,
                                 const Point& x);

// Euler for g = dt^2 - a(t)^2 h:
//   dv/dt + v^nabla' v + 2 (a'/a) v - (1/a^2) grad^h P / rho
Vec flrw_euler_residual(const MetricField& h, const ScaleFactor& a, const VectorField& v,
                        const ScalarField& pressure, const ScalarField& density, const Point& x);

// 2 (a'/a) h(v,v) + 1/2 d/dt h(v,v) + 1/2 v(h(v,v)) - v(P) / (a^2 rho)
double flrw_bernoulli_residual(const MetricField& h, const ScaleFactor& a, const VectorField& v,
                               const ScalarField& pressure, const ScalarField& density,
                               const Point& x);

// (mu + P) u^nabla u + grad P - u(P) u, for time-like u (g(u,u) > 0).
Vec relativistic_euler_residual(const MetricField& metric, const VectorField& u,
                                const ScalarField& pressure, const ScalarField& energy_density,
                                const Point& x);

enum class Regime { Steady, UnsteadyStatic, Flrw, Relativistic };

std::string_view to_string(Regime r);

struct FluidScenario {
    Regime regime = Regime::Steady;
    // Full metric (steady, relativistic), spatial metric g^s (unsteady static) or h (FLRW).
    MetricField metric;
    std::optional<ScaleFactor> scale_factor;
    VectorField velocity;
    ScalarField pressure;
    // rho for the classical regimes, zeta = mu + P for the relativistic one.
    ScalarField density;
    std::optional<ForceForm> body_force;

    // Checks the regime invariants at x: nonvanishing density and, for the relativistic
    // regime, a unit time-like velocity.
    void validate(const Point& x) const;
    Vec euler_residual(const Point& x) const;
    // Only the unsteady regimes carry a Bernoulli identity.
    std::optional<double> bernoulli_residual(const Point& x) const;
    // Inner product of the Euler residual with v in the spatial metric (h for FLRW).
    std::optional<double> euler_dot_velocity(const Point& x) const;
};

// v_bar = d/dt + v on R x M^s, from the spatial velocity v(t, x).
VectorField spacetime_velocity(const VectorField& v);

// dt^2 + g^s for the unsteady static regime, dt^2 - a^2 h for FLRW.
MetricField spacetime_metric(const FluidScenario& fluid);

enum class Multiplier {
    Exact,    // lambda = (D tdot) / g^00 evaluated at (x, v_bar(x))
    OnShell,  // lambda = -((dT(v_bar) + v_bar* alpha)(v_bar)) / v_bar(t)
};

struct TimeSplit {
    double time = 0.0;
    Vec spatial;
};

// Intermediate-integral residual of the time-constrained system with alpha = dP/rho at
// v_bar = d/dt + v, split into its dt and spatial parts. With the exact multiplier the
// time part vanishes identically; with the on-shell one it carries the Bernoulli equation
// (see predicted_time_component). The spatial part is the Euler residual in both cases.
TimeSplit time_constrained_split(const FluidScenario& fluid, const Point& x, Multiplier multiplier);

// Time part of the on-shell residual predicted from the Bernoulli residual B:
// -B for the static regime, a^2 B for FLRW.
double predicted_time_component(const FluidScenario& fluid, const Point& x);

}  // namespace fluidint
