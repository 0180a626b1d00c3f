#include "fluidint/fluids.hpp"

#include "fluidint/constraints.hpp"
#include "fluidint/errors.hpp"
#include "fluidint/intermediate.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

double checked_density(const ScalarField& density, const Point& x) {
    const double rho = density(x);
    if (!(std::abs(rho) >= kFluidDensityFloor)) {
        throw Error(ErrorKind::ZeroDensity, fmt::format("density {:g} at the evaluated point", rho));
    }
    return rho;
}

double checked_scale(const ScaleFactor& a, double t) {
    const double av = a.value(t);
    require_finite(av, "scale factor");
    if (av == 0.0) throw Error(ErrorKind::ZeroScaleFactor, fmt::format("a({}) = 0", t));
    return av;
}

struct SpatialSplit {
    Point spatial_point;
    Vec v;
    Vec dv_dt;
    Mat spatial_jacobian;
};

// v(t, x) -> (v, dv/dt, d_j v^i over spatial j)
SpatialSplit split(const MetricField& spatial, const VectorField& v, const Point& x) {
    const int m = spatial.dim;
    require_dim(x, m + 1, "space-time point");
    if (v.out_dim != m || v.in_dim != m + 1) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("velocity must map {} coordinates to {} components", m + 1, m));
    }
    const Mat jac = v.derivative(x);
    return SpatialSplit{x.tail(m), v(x), jac.col(0), jac.rightCols(m)};
}

Vec spatial_partials(const ScalarField& f, const Point& x) {
    const Vec d = f.partials(x);
    return d.tail(d.size() - 1);
}

Vec relativistic_residual(const MetricField& metric, const VectorField& u, const ScalarField& pressure,
                          double zeta, const Point& x) {
    const Vec uu = u(x);
    const double norm2 = inner(metric, x, uu, uu);
    if (!(norm2 > 0.0)) {
        throw Error(ErrorKind::NotTimelike, fmt::format("g(u,u) = {:g} is not positive", norm2));
    }
    if (!(std::abs(zeta) >= kFluidDensityFloor)) {
        throw Error(ErrorKind::ZeroEnthalpy, fmt::format("mu + P = {:g}", zeta));
    }
    const Vec dP = pressure.partials(x);
    const Vec r = zeta * covariant_acceleration(metric, u, x) + sharp(metric, x, dP) - dP.dot(uu) * uu;
    require_finite(r, "relativistic Euler residual");
    return r;
}

}  // namespace

Vec steady_euler_residual(const MetricField& metric, const VectorField& v, const ScalarField& pressure,
                          const ScalarField& density, const Point& x,
                          const std::optional<ForceForm>& body_force) {
    const int n = metric.dim;
    const double rho = checked_density(density, x);
    const Vec vv = v(x);
    require_dim(vv, n, "velocity");
    const Mat g = metric.at(x);
    const std::vector<Mat> dg = metric.derivatives(x);
    const Mat jac = v.derivative(x);

    // lowered: g_kl v^j d_j v^l + Gamma_{k,ij} v^i v^j + d_k P / rho + f_k(x, v)
    Vec lowered = g * (jac * vv);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                s += 0.5 * (dg[i](j, k) + dg[j](i, k) - dg[k](i, j)) * vv[i] * vv[j];
            }
        }
        lowered[k] += s;
    }
    lowered += pressure.partials(x) / rho;
    if (body_force) lowered += (*body_force)(State{x, vv});
    const Vec r = metric.inverse(x) * lowered;
    require_finite(r, "steady Euler residual");
    return r;
}

Vec unsteady_euler_residual_static(const MetricField& spatial, const VectorField& v,
                                   const ScalarField& pressure, const ScalarField& density,
                                   const Point& x) {
    const double rho = checked_density(density, x);
    const SpatialSplit s = split(spatial, v, x);
    const Vec r = s.dv_dt + s.spatial_jacobian * s.v +
                  christoffel(spatial, s.spatial_point).contract(s.v, s.v) +
                  spatial.inverse(s.spatial_point) * spatial_partials(pressure, x) / rho;
    require_finite(r, "unsteady Euler residual");
    return r;
}

double bernoulli_residual_static(const MetricField& spatial, const VectorField& v,
                                 const ScalarField& pressure, const ScalarField& density,
                                 const Point& x) {
    const double rho = checked_density(density, x);
    const SpatialSplit s = split(spatial, v, x);
    const Mat g = spatial.at(s.spatial_point);
    const std::vector<Mat> dg = spatial.derivatives(s.spatial_point);
    const Vec gv = g * s.v;

    // v(g(v,v)/2) = v^j (1/2 v . d_j g v + g v . d_j v)
    double transport = 0.0;
    for (int j = 0; j < spatial.dim; ++j) {
        transport += s.v[j] * (0.5 * s.v.dot(dg[static_cast<std::size_t>(j)] * s.v) +
                               gv.dot(s.spatial_jacobian.col(j)));
    }
    const double r = s.v.dot(spatial_partials(pressure, x)) / rho + transport + gv.dot(s.dv_dt);
    require_finite(r, "Bernoulli residual");
    return r;
}

Vec flrw_euler_residual(const MetricField& h, const ScaleFactor& a, const VectorField& v,
                        const ScalarField& pressure, const ScalarField& density, const Point& x) {
    const double rho = checked_density(density, x);
    const SpatialSplit s = split(h, v, x);
    const double av = checked_scale(a, x[0]);
    const double hubble = a.derivative(x[0]) / av;
    const Vec r = s.dv_dt + s.spatial_jacobian * s.v + christoffel(h, s.spatial_point).contract(s.v, s.v) +
                  2.0 * hubble * s.v -
                  h.inverse(s.spatial_point) * spatial_partials(pressure, x) / (av * av * rho);
    require_finite(r, "FLRW Euler residual");
    return r;
}

double flrw_bernoulli_residual(const MetricField& h, const ScaleFactor& a, const VectorField& v,
                               const ScalarField& pressure, const ScalarField& density,
                               const Point& x) {
    const double rho = checked_density(density, x);
    const SpatialSplit s = split(h, v, x);
    const double av = checked_scale(a, x[0]);
    const double hubble = a.derivative(x[0]) / av;
    const Mat hm = h.at(s.spatial_point);
    const std::vector<Mat> dh = h.derivatives(s.spatial_point);
    const Vec hv = hm * s.v;

    // 1/2 v(h(v,v)) = v^j (1/2 v . d_j h v + h v . d_j v)
    double transport = 0.0;
    for (int j = 0; j < h.dim; ++j) {
        transport += s.v[j] * (0.5 * s.v.dot(dh[static_cast<std::size_t>(j)] * s.v) +
                               hv.dot(s.spatial_jacobian.col(j)));
    }
    const double r = 2.0 * hubble * hv.dot(s.v) + hv.dot(s.dv_dt) + transport -
                     s.v.dot(spatial_partials(pressure, x)) / (av * av * rho);
    require_finite(r, "FLRW Bernoulli residual");
    return r;
}

Vec relativistic_euler_residual(const MetricField& metric, const VectorField& u,
                                const ScalarField& pressure, const ScalarField& energy_density,
                                const Point& x) {
    return relativistic_residual(metric, u, pressure, energy_density(x) + pressure(x), x);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Steady: return "steady";
        case Regime::UnsteadyStatic: return "unsteady_static";
        case Regime::Flrw: return "flrw";
        case Regime::Relativistic: return "relativistic";
    }
    return "?";
}

void FluidScenario::validate(const Point& x) const {
    if (regime == Regime::Flrw && !scale_factor) {
        throw Error(ErrorKind::ValidationError, "FLRW regime needs a scale factor");
    }
    checked_density(density, x);
    if (regime == Regime::Flrw) checked_scale(*scale_factor, x[0]);
    if (regime == Regime::Relativistic) {
        const Vec u = velocity(x);
        const double norm2 = inner(metric, x, u, u);
        if (!(norm2 > 0.0)) {
            throw Error(ErrorKind::NotTimelike, fmt::format("g(u,u) = {:g} is not positive", norm2));
        }
        if (std::abs(norm2 - 1.0) > kUnitarityTolerance) {
            throw Error(ErrorKind::ValidationError, fmt::format("g(u,u) = {:.17g} is not 1", norm2));
        }
    }
}

Vec FluidScenario::euler_residual(const Point& x) const {
    switch (regime) {
        case Regime::Steady:
            return steady_euler_residual(metric, velocity, pressure, density, x, body_force);
        case Regime::UnsteadyStatic:
            return unsteady_euler_residual_static(metric, velocity, pressure, density, x);
        case Regime::Flrw:
            if (!scale_factor) throw Error(ErrorKind::ValidationError, "FLRW regime needs a scale factor");
            return flrw_euler_residual(metric, *scale_factor, velocity, pressure, density, x);
        case Regime::Relativistic:
            return relativistic_residual(metric, velocity, pressure, density(x), x);
    }
    return {};
}

std::optional<double> FluidScenario::bernoulli_residual(const Point& x) const {
    switch (regime) {
        case Regime::UnsteadyStatic:
            return bernoulli_residual_static(metric, velocity, pressure, density, x);
        case Regime::Flrw:
            if (!scale_factor) throw Error(ErrorKind::ValidationError, "FLRW regime needs a scale factor");
            return flrw_bernoulli_residual(metric, *scale_factor, velocity, pressure, density, x);
        default: return std::nullopt;
    }
}

std::optional<double> FluidScenario::euler_dot_velocity(const Point& x) const {
    if (regime != Regime::UnsteadyStatic && regime != Regime::Flrw) return std::nullopt;
    const Point xs = x.tail(metric.dim);
    return inner(metric, xs, euler_residual(x), velocity(x));
}

VectorField spacetime_velocity(const VectorField& v) {
    VectorField out;
    out.in_dim = v.in_dim;
    out.out_dim = v.out_dim + 1;
    out.value = [v](const Point& x) {
        Vec w(v.out_dim + 1);
        w << 1.0, v(x);
        return w;
    };
    out.jacobian = [v](const Point& x) {
        Mat j = Mat::Zero(v.out_dim + 1, v.in_dim);
        j.bottomRows(v.out_dim) = v.derivative(x);
        return j;
    };
    out.time_dependent = v.time_dependent;
    out.label = "d/dt + " + v.label;
    return out;
}

MetricField spacetime_metric(const FluidScenario& fluid) {
    switch (fluid.regime) {
        case Regime::UnsteadyStatic: return product_metric(fluid.metric);
        case Regime::Flrw:
            if (!fluid.scale_factor) throw Error(ErrorKind::ValidationError, "FLRW regime needs a scale factor");
            return flrw_metric(fluid.metric, *fluid.scale_factor);
        default:
            throw Error(ErrorKind::ValidationError,
                        fmt::format("regime {} has no time constraint", to_string(fluid.regime)));
    }
}

TimeSplit time_constrained_split(const FluidScenario& fluid, const Point& x, Multiplier multiplier) {
    const MetricField g = spacetime_metric(fluid);
    const VectorField vbar = spacetime_velocity(fluid.velocity);
    const ForceForm alpha = ForceForm::integrable(fluid.pressure, fluid.density);
    Vec r;
    if (multiplier == Multiplier::Exact) {
        r = intermediate_residual(g, time_constrain(g, alpha, 0).modified_force, vbar, x).residual;
    } else {
        r = on_shell_time_constrained_residual(g, alpha, 0, vbar, x);
    }
    return TimeSplit{r[0], r.tail(r.size() - 1)};
}

double predicted_time_component(const FluidScenario& fluid, const Point& x) {
    const auto b = fluid.bernoulli_residual(x);
    if (!b) throw Error(ErrorKind::ValidationError, "regime has no Bernoulli residual");
    if (fluid.regime == Regime::UnsteadyStatic) return -*b;
    const double a = fluid.scale_factor->value(x[0]);
    return a * a * *b;
}

}  // namespace fluidint
