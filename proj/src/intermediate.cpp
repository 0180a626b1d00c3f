#include "fluidint/intermediate.hpp"

#include "fluidint/constraints.hpp"
#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

// d_j T(v) = 1/2 (d_j g_ab) v^a v^b + g_ab v^a d_j v^b
Vec kinetic_energy_differential(const Mat& g, const std::vector<Mat>& dg, const Vec& v,
                                const Mat& jac) {
    const Eigen::Index n = v.size();
    Vec out(n);
    const Vec gv = g * v;
    for (Eigen::Index j = 0; j < n; ++j) {
        out[j] = 0.5 * v.dot(dg[static_cast<std::size_t>(j)] * v) + gv.dot(jac.col(j));
    }
    return out;
}

}  // namespace

Vec pullback(const ForceForm& force, const VectorField& field, const Point& x) {
    return force(State{x, field(x)});
}

IntermediateResidual intermediate_residual(const MetricField& metric, const ForceForm& force,
                                           const VectorField& field, const Point& x) {
    IntermediateResidual r;
    r.point = x;
    r.residual = covariant_acceleration(metric, field, x) + sharp(metric, x, pullback(force, field, x));
    require_finite(r.residual, "intermediate residual");
    r.norm = std::sqrt(std::abs(inner(metric, x, r.residual, r.residual)));
    return r;
}

Vec vorticity_identity_gap(const MetricField& metric, const VectorField& field, const Point& x) {
    const int n = metric.dim;
    const Vec v = field(x);
    require_dim(v, n, "vector field");

    Mat dw;   // (i, j) = d_j w_i with w = v^flat
    Vec dTv;  // d_j T(v)
    if (metric.has_analytic_partials() && field.jacobian) {
        const Mat g = metric.at(x);
        const std::vector<Mat> dg = metric.derivatives(x);
        const Mat jac = field.derivative(x);
        dw.resize(n, n);
        for (int j = 0; j < n; ++j) dw.col(j) = dg[static_cast<std::size_t>(j)] * v + g * jac.col(j);
        dTv = kinetic_energy_differential(g, dg, v, jac);
    } else {
        auto w = [&](const Point& p) { return (metric.components(p) * field.value(p)).eval(); };
        auto tv = [&](const Point& p) {
            const Vec vp = field.value(p);
            return 0.5 * vp.dot(metric.components(p) * vp);
        };
        dw = fd_jacobian(w, x);
        dTv = fd_gradient(tv, x);
    }
    // (dw)_{ij} = d_i w_j - d_j w_i ; (i_v dw)_j = v^i (dw)_{ij}
    const Mat curl = dw.transpose() - dw;
    const Vec iv_dw = curl.transpose() * v;
    const Vec gap = iv_dw + dTv - flat(metric, x, covariant_acceleration(metric, field, x));
    require_finite(gap, "vorticity identity gap");
    return gap;
}

double prolongation_defect(const VectorField& field, const SecondOrderField& sof, const Point& x) {
    const Vec v = field(x);
    const Vec accel = sof(State{x, v});
    const Vec pushed = field.derivative(x) * v;
    const double d = (accel - pushed).cwiseAbs().maxCoeff();
    require_finite(d, "prolongation defect");
    return d;
}

double hamilton_jacobi_residual(const MetricField& metric, const ScalarField& potential,
                                const ScalarField& action, const Point& x) {
    auto hamiltonian = [&](const Point& p) {
        const Vec dS = action.partials(p);
        return 0.5 * dS.dot(metric.inverse(p) * dS) + potential(p);
    };
    const double r = fd_gradient(hamiltonian, x).cwiseAbs().maxCoeff();
    require_finite(r, "Hamilton-Jacobi residual");
    return r;
}

double lagrangian_defect(const MetricField& metric, const ScalarField& action, const Point& x) {
    require_dim(x, metric.dim, "point");
    const Mat hess = fd_jacobian([&](const Point& p) { return action.partials(p); }, x);
    const double r = (hess - hess.transpose()).cwiseAbs().maxCoeff();
    require_finite(r, "Lagrangian defect");
    return r;
}

VectorField gradient_field(const MetricField& metric, const ScalarField& action) {
    VectorField v;
    v.in_dim = metric.dim;
    v.out_dim = metric.dim;
    v.value = [metric, action](const Point& p) { return gradient(metric, action, p); };
    v.label = "grad(" + action.label + ")";
    return v;
}

Vec on_shell_time_constrained_residual(const MetricField& metric, const ForceForm& force,
                                       int time_index, const VectorField& field, const Point& x) {
    const int n = metric.dim;
    const Vec v = field(x);
    require_dim(v, n, "vector field");
    const double vt = v[time_index];
    if (!(std::abs(vt) >= kTimeDirectionFloor)) {
        throw Error(ErrorKind::DegenerateTimeDirection,
                    fmt::format("v(t) = {:g} vanishes at the evaluated point", vt));
    }
    const Mat g = metric.at(x);
    const Mat ginv = metric.inverse(x);
    const Vec alpha = pullback(force, field, x);
    const Vec dTv = kinetic_energy_differential(g, metric.derivatives(x), v, field.derivative(x));
    const double coefficient = (dTv.dot(v) + alpha.dot(v)) / vt;

    Vec r = covariant_acceleration(metric, field, x) + ginv * alpha - coefficient * ginv.col(time_index);
    require_finite(r, "time-constrained residual");
    return r;
}

}  // namespace fluidint
