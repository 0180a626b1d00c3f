#pragma once

#include "fluidint/dynamics.hpp"

namespace fluidint {

inline constexpr double kTimeDirectionFloor = 1e-12;
inline constexpr double kNullVelocityFloor = 1e-10;

enum class ConstraintKind { Time, Relativistic };

// A force modified along dt (time constraint) or along the Liouville form
// theta = g_ij xdot^j dx^i (relativistic correction).
struct ConstrainedSystem {
    ConstraintKind kind = ConstraintKind::Time;
    MetricField metric;
    ForceForm base_force;
    ForceForm modified_force;
    // lambda for the time constraint, -alpha_dot/theta_dot for the relativistic correction
    std::function<double(const State&)> multiplier;
    int time_index = 0;

    SecondOrderField field() const;

    // Component-wise distance of (modified - base) from the span of dt or theta.
    double structure_defect(const State& s) const;
};

// alpha_bar = alpha + lambda dt with lambda = (D tdot) / g^00, D the Newton field of alpha,
// so that the Newton field of alpha_bar keeps tdot constant.
ConstrainedSystem time_constrain(const MetricField& metric, const ForceForm& force, int time_index);

// alpha_hat = alpha - (alpha_dot / theta_dot) theta; alpha_hat is a contact form.
ConstrainedSystem relativistic_correction(const MetricField& metric, const ForceForm& force);

}  // namespace fluidint
