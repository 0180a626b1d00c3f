#include "fluidint/constraints.hpp"

#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

double theta_dot(const MetricField& metric, const State& s, Vec& theta) {
    theta = flat(metric, s.x, s.xdot);
    const double td = theta.dot(s.xdot);
    if (!(std::abs(td) >= kNullVelocityFloor)) {
        throw Error(ErrorKind::NullVelocity,
                    fmt::format("|theta_dot| = |2T| = {:g} below {:g}", std::abs(td),
                                kNullVelocityFloor));
    }
    return td;
}

}  // namespace

SecondOrderField ConstrainedSystem::field() const {
    SecondOrderField d = newton_field(metric, modified_force);
    d.provenance = Provenance::Constrained;
    d.label = (kind == ConstraintKind::Time ? "time-constrained(" : "relativistic(") +
              base_force.label + ")";
    return d;
}

double ConstrainedSystem::structure_defect(const State& s) const {
    const Vec diff = modified_force(s) - base_force(s);
    if (kind == ConstraintKind::Time) {
        double worst = 0.0;
        for (Eigen::Index k = 0; k < diff.size(); ++k) {
            if (k != time_index) worst = std::max(worst, std::abs(diff[k]));
        }
        return worst;
    }
    Vec theta;
    const double td = theta_dot(metric, s, theta);
    const double c = diff.dot(s.xdot) / td;
    return (diff - c * theta).cwiseAbs().maxCoeff();
}

ConstrainedSystem time_constrain(const MetricField& metric, const ForceForm& force, int time_index) {
    if (time_index < 0 || time_index >= metric.dim) {
        throw Error(ErrorKind::ValidationError, fmt::format("time index {} outside chart", time_index));
    }
    const SecondOrderField base = newton_field(metric, force);

    auto lambda = [metric, base, time_index](const State& s) {
        const double g00 = metric.inverse(s.x)(time_index, time_index);
        if (!(std::abs(g00) >= kTimeDirectionFloor)) {
            throw Error(ErrorKind::DegenerateTimeDirection,
                        fmt::format("|g^00| = {:g} below {:g}", std::abs(g00), kTimeDirectionFloor));
        }
        // tdot = g^{0j} p_j = xdot^0, so D tdot is the time component of the base acceleration.
        return base(s)[time_index] / g00;
    };

    ConstrainedSystem sys;
    sys.kind = ConstraintKind::Time;
    sys.metric = metric;
    sys.base_force = force;
    sys.time_index = time_index;
    sys.multiplier = lambda;
    sys.modified_force.dim = force.dim;
    sys.modified_force.velocity_dependent = true;
    sys.modified_force.label = force.label + " + lambda dt";
    sys.modified_force.components = [force, lambda, time_index](const State& s) {
        Vec a = force(s);
        a[time_index] += lambda(s);
        return a;
    };
    return sys;
}

ConstrainedSystem relativistic_correction(const MetricField& metric, const ForceForm& force) {
    auto multiplier = [metric, force](const State& s) {
        Vec theta;
        const double td = theta_dot(metric, s, theta);
        return -alpha_dot(force, s) / td;
    };

    ConstrainedSystem sys;
    sys.kind = ConstraintKind::Relativistic;
    sys.metric = metric;
    sys.base_force = force;
    sys.multiplier = multiplier;
    sys.modified_force.dim = force.dim;
    sys.modified_force.velocity_dependent = true;
    sys.modified_force.label = "hat(" + force.label + ")";
    sys.modified_force.components = [metric, force](const State& s) {
        Vec theta;
        const double td = theta_dot(metric, s, theta);
        const Vec a = force(s);
        const double ad = a.dot(s.xdot);
        return (a - (ad / td) * theta).eval();
    };
    return sys;
}

}  // namespace fluidint
