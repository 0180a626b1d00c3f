#pragma once

#include "fluidint/dynamics.hpp"

namespace fluidint {

struct IntermediateResidual {
    Point point;
    // v^nabla v + grad(v* alpha)
    Vec residual;
    // sqrt |g(residual, residual)|
    double norm = 0.0;
};

// alpha pulled back by the section v: alpha(x, v(x)).
Vec pullback(const ForceForm& force, const VectorField& field, const Point& x);

// Vanishes on a neighbourhood iff v is an intermediate integral of newton_field(metric, force).
IntermediateResidual intermediate_residual(const MetricField& metric, const ForceForm& force,
                                           const VectorField& field, const Point& x);

// i_v dv^flat + dT(v) - (v^nabla v)^flat, which is identically zero. The first two terms
// are built from exterior derivatives of v^flat and T(v); the last from Christoffel symbols.
// Derivatives are analytic when both metric and field provide them, otherwise the
// composite covector v^flat and the function T(v) are differentiated numerically.
Vec vorticity_identity_gap(const MetricField& metric, const VectorField& field, const Point& x);

// || accel(x, v(x)) - v_* v(x) ||_inf
double prolongation_defect(const VectorField& field, const SecondOrderField& sof, const Point& x);

// || d(H(grad S)) ||_inf with H = T + U.
double hamilton_jacobi_residual(const MetricField& metric, const ScalarField& potential,
                                const ScalarField& action, const Point& x);

// Antisymmetric part of the Hessian of S, i.e. d(dS); zero up to differentiation error.
double lagrangian_defect(const MetricField& metric, const ScalarField& action, const Point& x);

// grad S as a vector field (Jacobian by finite differences).
VectorField gradient_field(const MetricField& metric, const ScalarField& action);

// Residual of the intermediate-integral equation for the time-constrained system with the
// multiplier written in its on-shell form
//   lambda(v) = -((dT(v) + v* alpha)(v)) / v(t),
// which agrees with the exact multiplier wherever v is an intermediate integral:
//   v^nabla v + grad(v* alpha) - [(dT(v) + v* alpha)(v) / v(t)] grad t.
Vec on_shell_time_constrained_residual(const MetricField& metric, const ForceForm& force,
                                       int time_index, const VectorField& field, const Point& x);

}  // namespace fluidint
