#include "fluidint/errors.hpp"
#include "fluidint/intermediate.hpp"
#include "fluidint/runner.hpp"
#include "fluidint/sampling.hpp"
#include "unit/support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fluidint;
using fluidint::testing::vec;

namespace {

const auto kVars2 = chart_variables(2, false);

ForceForm pressure_force(const char* p) { return ForceForm::integrable(scalar_from_text(p, kVars2), ScalarField::constant(2, 1.0)); }

// S(x) = (x sqrt(1 - x^2) + asin x) / 2, so S' = sqrt(1 - x^2)
ScalarField oscillator_action() {
    ScalarField s;
    s.dim = 1;
    s.value = [](const Point& x) { return 0.5 * (x[0] * std::sqrt(1 - x[0] * x[0]) + std::asin(x[0])); };
    s.gradient = [](const Point& x) { return vec({std::sqrt(1 - x[0] * x[0])}); };
    return s;
}

}  // namespace

TEST(IntermediateResidual, RigidRotationBalancesPressure) {
    const VectorField v = field_from_text({"-sqrt(2)*x2", "sqrt(2)*x1"}, kVars2);
    for (const Point& x : {vec({0.3, -0.8}), vec({1, 2}), vec({-2, 0.5})}) {
        const IntermediateResidual r = intermediate_residual(euclidean_metric(2), pressure_force("x1^2 + x2^2"), v, x);
        EXPECT_LE(r.residual.cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE(r.norm, 1e-14);
    }
}

TEST(IntermediateResidual, ZeroFieldLeavesPressureGradient) {
    const Point x = vec({0.7, -1.1});
    const auto r = intermediate_residual(euclidean_metric(2), pressure_force("x1^2 + x2^2"),
                                         VectorField::constant(vec({0, 0})), x);
    EXPECT_TRUE(r.residual.isApprox(vec({1.4, -2.2})));
    EXPECT_NEAR(r.norm, std::sqrt(1.4 * 1.4 + 2.2 * 2.2), 1e-14);
}

TEST(IntermediateResidual, ConstantFieldIsGeodesic) {
    const auto r = intermediate_residual(euclidean_metric(3), ForceForm::zero(3), VectorField::constant(vec({1, -2, 3})),
                                         vec({0.1, 0.2, 0.3}));
    EXPECT_EQ(r.residual, vec({0, 0, 0}));
}

TEST(IntermediateResidual, VelocityDependentForceIsPulledBack) {
    Mat f(2, 2);
    f << 0, 2, -2, 0;
    const ForceForm lorentz = lorentz_force(2, std::function<Mat(const Point&)>([f](const Point&) { return f; }));
    const VectorField v = field_from_text({"x2", "x1^2"}, kVars2);
    const Point x = vec({0.5, -0.25});
    EXPECT_EQ(pullback(lorentz, v, x), lorentz(State{x, v(x)}));
    // v^nabla v = (v^2, 2 x1 v^1); alpha = F^T v = (-2 v^2, 2 v^1)
    const Vec vx = v(x);
    const Vec expected = vec({vx[1], 2 * x[0] * vx[0]}) + vec({-2 * vx[1], 2 * vx[0]});
    EXPECT_TRUE(intermediate_residual(euclidean_metric(2), lorentz, v, x).residual.isApprox(expected));
}

TEST(VorticityIdentity, RotationAtOneTwo) {
    const VectorField v = field_from_text({"-x2", "x1"}, kVars2);
    const Vec gap = vorticity_identity_gap(euclidean_metric(2), v, vec({1, 2}));
    EXPECT_LE(gap.cwiseAbs().maxCoeff(), 1e-15);
    // v^nabla v = (-1, -2) at (1, 2)
    EXPECT_TRUE(covariant_acceleration(euclidean_metric(2), v, vec({1, 2})).isApprox(vec({-1, -2})));
}

TEST(VorticityIdentity, GradientAndZeroFields) {
    const VectorField grad = field_from_text({"2*x1*x2 + cos(x1)", "x1^2"}, kVars2);  // d(x1^2 x2 + sin x1)
    EXPECT_LE(vorticity_identity_gap(euclidean_metric(2), grad, vec({0.4, 1.3})).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(vorticity_identity_gap(builtin_metric("warped", 2), VectorField::constant(vec({0, 0})), vec({0.4, 1.3})),
              vec({0, 0}));
}

TEST(ProlongationDefect, Examples) {
    const SecondOrderField free1 = geodesic_field(euclidean_metric(1));
    EXPECT_EQ(prolongation_defect(VectorField::constant(vec({2.5})), free1, vec({0.3})), 0.0);

    // t'' = 0, x'' = 0 with v = x d/dt
    const VectorField v = field_from_text({"x1", "0"}, chart_variables(2, true));
    const SecondOrderField free2 = geodesic_field(euclidean_metric(2));
    for (const Point& x : {vec({0, 1}), vec({2, -3}), vec({-1, 0.5})}) EXPECT_EQ(prolongation_defect(v, free2, x), 0.0);

    const VectorField id = field_from_text({"x1"}, {"x1"});
    for (double x : {-2.0, 0.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(prolongation_defect(id, free1, vec({x})), std::abs(x));
}

TEST(HamiltonJacobi, FreeLinearAction) {
    const ScalarField s = scalar_from_text("3*x1 + 4*x2", kVars2);
    const ScalarField u = ScalarField::constant(2, 0.0);
    const MetricField g = euclidean_metric(2);
    const Vec grad = gradient(g, s, vec({0.2, 0.9}));
    EXPECT_EQ(kinetic_energy(g, State{vec({0.2, 0.9}), grad}), 12.5);
    EXPECT_LE(hamilton_jacobi_residual(g, u, s, vec({0.2, 0.9})), 1e-12);
    EXPECT_LE(lagrangian_defect(g, s, vec({0.2, 0.9})), 1e-12);
}

TEST(HamiltonJacobi, OscillatorAtHalfEnergy) {
    const MetricField g = euclidean_metric(1);
    const ScalarField u = scalar_from_text("x1^2/2", {"x1"});
    const ScalarField s = oscillator_action();
    const VectorField v = gradient_field(g, s);
    EXPECT_DOUBLE_EQ(v(vec({0}))[0], 1.0);
    for (double x = -0.95; x <= 0.95; x += 0.05) {
        EXPECT_LE(hamilton_jacobi_residual(g, u, s, vec({x})), 1e-9) << x;
        // residual of the analytic field sqrt(1 - x^2)
        const VectorField exact = field_from_text({"sqrt(1 - x1^2)"}, {"x1"});
        EXPECT_LE(intermediate_residual(g, ForceForm::exact(u), exact, vec({x})).norm, 1e-14) << x;
    }
}

TEST(HamiltonJacobi, QuadraticActionWithoutPotential) {
    const MetricField g = euclidean_metric(1);
    const ScalarField s = scalar_from_text("x1^2", {"x1"});
    const ScalarField zero = ScalarField::constant(1, 0.0);
    EXPECT_LE(hamilton_jacobi_residual(g, zero, s, vec({0.0})), 1e-9);
    for (double x : {-1.0, 0.5, 2.0}) EXPECT_NEAR(hamilton_jacobi_residual(g, zero, s, vec({x})), 4 * std::abs(x), 1e-6);
}

// ---------------------------------------------------------------------------

TEST(IntermediateProperty, VorticityIdentityOnRandomTriples) {
    std::mt19937_64 rng(101);
    const std::vector<std::pair<std::string, int>> metrics{{"polar", 2},  {"spherical", 3}, {"sphere", 2},
                                                           {"warped", 3}, {"flrw-sin", 3},  {"flrw-sphere", 3},
                                                           {"minkowski", 2}};
    double worst_analytic = 0;
    double worst_fd = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto& [name, dim] = metrics[static_cast<std::size_t>(trial) % metrics.size()];
        const MetricField g = builtin_metric(name, dim);
        const auto [lo, hi] = builtin_sample_box(name, dim);
        const VectorField v = fluidint::testing::random_polynomial_field(rng, chart_variables(dim, false), dim, 2);
        const Point x = fluidint::testing::uniform_point(rng, lo, hi);
        worst_analytic = std::max(worst_analytic, vorticity_identity_gap(g, v, x).cwiseAbs().maxCoeff());
        worst_fd = std::max(worst_fd,
                            vorticity_identity_gap(g.without_derivatives(), v.without_derivatives(), x).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst_analytic, 1e-10);
    EXPECT_LT(worst_fd, 1e-6);
}

TEST(IntermediateProperty, ResidualAndProlongationCriteriaAgree) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 40; ++trial) {
        const std::string name = trial % 2 ? "warped" : "flrw-exp";
        const int dim = 2 + trial % 2;
        const MetricField g = builtin_metric(name, dim);
        const auto vars = chart_variables(dim, false);
        const VectorField v = fluidint::testing::random_polynomial_field(rng, vars, dim, 2);
        ForceForm alpha;
        const bool integral = trial % 4 < 2;
        if (integral) {
            // the force that makes v an intermediate integral: alpha = -(v^nabla v)^flat
            alpha.dim = dim;
            alpha.components = [g, v](const State& s) { return (-flat(g, s.x, covariant_acceleration(g, v, s.x))).eval(); };
        } else {
            alpha = ForceForm::exact(scalar_from_expr(random_polynomial(vars, 2, rng), vars));
        }
        const SecondOrderField d = newton_field(g, alpha);
        const auto [lo, hi] = builtin_sample_box(name, dim);
        double res = 0;
        double pro = 0;
        for (const Point& x : halton_points(lo, hi, 64, static_cast<std::uint64_t>(trial))) {
            res = std::max(res, intermediate_residual(g, alpha, v, x).residual.cwiseAbs().maxCoeff());
            pro = std::max(pro, prolongation_defect(v, d, x));
        }
        EXPECT_EQ(res < 1e-8, pro < 1e-8) << trial << " res=" << res << " pro=" << pro;
        EXPECT_EQ(res < 1e-8, integral);
    }
}

TEST(IntermediateProperty, LagrangianDefectVanishes) {
    std::mt19937_64 rng(107);
    const auto vars = chart_variables(3, false);
    for (int trial = 0; trial < 50; ++trial) {
        const ScalarField s = scalar_from_expr(random_polynomial(vars, 3, rng), vars);
        EXPECT_LT(lagrangian_defect(builtin_metric("warped", 3), s, fluidint::testing::uniform_vec(rng, 3)), 1e-6);
    }
}
