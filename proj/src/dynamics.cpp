#include "fluidint/dynamics.hpp"

#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

constexpr double kDensityFloor = 1e-12;

void require_state(const State& s, int dim) {
    require_dim(s.x, dim, "state position");
    require_dim(s.xdot, dim, "state velocity");
    require_finite(s.x, "state position");
    require_finite(s.xdot, "state velocity");
}

}  // namespace

Vec ForceForm::operator()(const State& s) const {
    require_state(s, dim);
    Vec a = components(s);
    require_dim(a, dim, label.empty() ? "force" : "force " + label);
    require_finite(a, label.empty() ? "force" : "force " + label);
    return a;
}

ForceForm ForceForm::zero(int dim) {
    ForceForm f;
    f.dim = dim;
    f.components = [dim](const State&) { return Vec::Zero(dim).eval(); };
    f.label = "0";
    return f;
}

ForceForm ForceForm::exact(const ScalarField& potential) {
    ForceForm f;
    f.dim = potential.dim;
    f.components = [potential](const State& s) { return potential.partials(s.x); };
    f.label = "d(" + potential.label + ")";
    return f;
}

ForceForm ForceForm::integrable(const ScalarField& pressure, const ScalarField& density) {
    ForceForm f;
    f.dim = pressure.dim;
    f.components = [pressure, density](const State& s) {
        const double rho = density(s.x);
        if (std::abs(rho) < kDensityFloor) {
            throw Error(ErrorKind::ZeroDensity, fmt::format("density {} at the evaluated point", rho));
        }
        return (pressure.partials(s.x) / rho).eval();
    };
    f.label = "d(" + pressure.label + ")/(" + density.label + ")";
    return f;
}

ForceForm ForceForm::sum(const ForceForm& a, const ForceForm& b) {
    if (a.dim != b.dim) throw Error(ErrorKind::DimensionMismatch, "forces of different dimension");
    ForceForm f;
    f.dim = a.dim;
    f.components = [a, b](const State& s) { return (a(s) + b(s)).eval(); };
    f.velocity_dependent = a.velocity_dependent || b.velocity_dependent;
    f.label = a.label + " + " + b.label;
    return f;
}

Vec SecondOrderField::operator()(const State& s) const {
    require_state(s, dim);
    Vec a = accel(s);
    require_finite(a, "acceleration");
    return a;
}

double kinetic_energy(const MetricField& metric, const State& s) {
    require_state(s, metric.dim);
    const double t = 0.5 * inner(metric, s.x, s.xdot, s.xdot);
    require_finite(t, "kinetic energy");
    return t;
}

double alpha_dot(const ForceForm& force, const State& s) {
    const double v = force(s).dot(s.xdot);
    require_finite(v, "alpha_dot");
    return v;
}

SecondOrderField newton_field(const MetricField& metric, const ForceForm& force) {
    if (metric.dim != force.dim) {
        throw Error(ErrorKind::DimensionMismatch, "metric and force dimensions differ");
    }
    SecondOrderField d;
    d.dim = metric.dim;
    d.accel = [metric, force](const State& s) {
        const Vec raised = metric.inverse(s.x) * force(s);
        return (-(raised + christoffel(metric, s.x).contract(s.xdot, s.xdot))).eval();
    };
    d.provenance = Provenance::Newton;
    d.label = "newton(" + force.label + ")";
    return d;
}

SecondOrderField geodesic_field(const MetricField& metric) {
    SecondOrderField d;
    d.dim = metric.dim;
    d.accel = [metric](const State& s) {
        return (-christoffel(metric, s.x).contract(s.xdot, s.xdot)).eval();
    };
    d.provenance = Provenance::Geodesic;
    d.label = "geodesic";
    return d;
}

Vec force_from_acceleration(const MetricField& metric, const State& s, const Vec& xddot) {
    require_state(s, metric.dim);
    const Vec a = xddot + christoffel(metric, s.x).contract(s.xdot, s.xdot);
    return -(metric.at(s.x) * a);
}

ForceForm lorentz_force(int dim, std::function<Mat(const State&)> field_strength) {
    ForceForm f;
    f.dim = dim;
    f.components = [field_strength](const State& s) {
        const Mat F = field_strength(s);
        require_finite(F, "field strength");
        const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
        const double defect = (F + F.transpose()).cwiseAbs().maxCoeff();
        if (defect > kAntisymmetryTolerance * scale) {
            throw Error(ErrorKind::NotAntisymmetric,
                        fmt::format("|F + F^T| = {:g} at the evaluated state", defect));
        }
        // alpha_j = xdot^i F_ij
        return (F.transpose() * s.xdot).eval();
    };
    f.velocity_dependent = true;
    f.label = "lorentz";
    return f;
}

ForceForm lorentz_force(int dim, std::function<Mat(const Point&)> field_strength) {
    return lorentz_force(dim, std::function<Mat(const State&)>(
        [field_strength](const State& s) { return field_strength(s.x); }));
}

double relativistic_defect(const MetricField& metric, const ForceForm& force,
                           std::span<const State> states) {
    if (states.empty()) throw Error(ErrorKind::ValidationError, "empty state sample");
    double worst = 0.0;
    for (const State& s : states) {
        require_state(s, metric.dim);
        worst = std::max(worst, std::abs(alpha_dot(force, s)));
    }
    return worst;
}

}  // namespace fluidint
