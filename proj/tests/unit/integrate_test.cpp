#include "fluidint/errors.hpp"
#include "fluidint/integrate.hpp"
#include "fluidint/scenario.hpp"
#include "unit/support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fluidint;
using fluidint::testing::vec;

namespace {

const auto kVars2 = chart_variables(2, false);

SecondOrderField free_particle(int n) { return geodesic_field(euclidean_metric(n)); }

// xddot = -x from (1, 0); the exact solution is cos s
double oscillator_error(double dt) {
    const SecondOrderField d = newton_field(euclidean_metric(1), ForceForm::exact(scalar_from_text("x1^2/2", {"x1"})));
    const Trajectory tr = integrate_second_order(d, State{vec({1}), vec({0})}, 2.0, dt);
    return std::abs(tr.states.back().x[0] - std::cos(2.0));
}

}  // namespace

TEST(SecondOrder, FreeParticle) {
    const Trajectory tr = integrate_second_order(free_particle(1), State{vec({0}), vec({1})}, 1.0, 0.01);
    ASSERT_TRUE(tr.complete());
    EXPECT_EQ(tr.states.size(), 101u);
    EXPECT_NEAR(tr.s.back(), 1.0, 1e-15);
    EXPECT_NEAR(tr.states.back().x[0], 1.0, 1e-12);
}

TEST(SecondOrder, ConstantForce) {
    const SecondOrderField d = newton_field(euclidean_metric(1), ForceForm::exact(scalar_from_text("x1", {"x1"})));
    const Trajectory tr = integrate_second_order(d, State{vec({0}), vec({0})}, 1.0, 0.01);
    EXPECT_NEAR(tr.states.back().x[0], -0.5, 1e-10);
    EXPECT_NEAR(tr.states.back().xdot[0], -1.0, 1e-10);
}

TEST(SecondOrder, PolarGeodesicIsStraightLine) {
    // r = 1, theta = 0 moving with unit speed along y: x = 1, y = s
    const Trajectory tr =
        integrate_second_order(geodesic_field(builtin_metric("polar", 2)), State{vec({1, 0}), vec({0, 1})}, 1.0, 1e-3);
    ASSERT_TRUE(tr.complete());
    for (std::size_t k = 0; k < tr.states.size(); k += 50) {
        const Point& p = tr.states[k].x;
        EXPECT_NEAR(p[0] * std::cos(p[1]), 1.0, 1e-6);
        EXPECT_NEAR(p[0] * std::sin(p[1]), tr.s[k], 1e-6);
    }
}

TEST(SecondOrder, LastStepIsShortened) {
    const Trajectory tr = integrate_second_order(free_particle(1), State{vec({0}), vec({2})}, 1.0, 0.3);
    ASSERT_EQ(tr.s.size(), 5u);
    EXPECT_NEAR(tr.s[3], 0.9, 1e-15);
    EXPECT_EQ(tr.s[4], 1.0);
    EXPECT_NEAR(tr.states.back().x[0], 2.0, 1e-14);
}

TEST(SecondOrder, ZeroDurationAndBadStep) {
    const Trajectory tr = integrate_second_order(free_particle(2), State{vec({1, 2}), vec({3, 4})}, 0.0, 0.1);
    EXPECT_EQ(tr.states.size(), 1u);
    EXPECT_THROW(integrate_second_order(free_particle(1), State{vec({0}), vec({1})}, 1.0, 0.0), Error);
    EXPECT_THROW(integrate_second_order(free_particle(1), State{vec({0}), vec({1})}, -1.0, 0.1), Error);
}

TEST(SecondOrder, BlowUpStopsWithDiagnostic) {
    // xddot = 6 x^2 from x = 1, xdot = 2 gives x = 1 / (1 - s)^2
    SecondOrderField d;
    d.dim = 1;
    d.accel = [](const State& s) { return vec({6 * s.x[0] * s.x[0]}); };
    const Trajectory tr = integrate_second_order(d, State{vec({1}), vec({2})}, 3.0, 0.01);
    ASSERT_FALSE(tr.complete());
    EXPECT_NE(tr.diagnostic->find("integration stopped"), std::string::npos);
    EXPECT_LT(tr.s.back(), 3.0);
    EXPECT_EQ(tr.s.size(), tr.states.size());
}

TEST(SecondOrder, SingularMetricStopsWithDiagnostic) {
    // heading straight through the polar origin
    const Trajectory tr =
        integrate_second_order(geodesic_field(builtin_metric("polar", 2)), State{vec({1, 0}), vec({-1, 0})}, 2.0, 0.25);
    ASSERT_FALSE(tr.complete());
    EXPECT_NE(tr.diagnostic->find("SingularMetric"), std::string::npos) << *tr.diagnostic;
}

TEST(SecondOrder, FourthOrderConvergence) {
    const double ratio = oscillator_error(0.02) / oscillator_error(0.01);
    EXPECT_NEAR(ratio, 16.0, 16.0 * 0.2);
}

TEST(Flow, UniformAndRotation) {
    const Curve line = integrate_flow(VectorField::constant(vec({1, 0})), vec({0, 0}), 2.0, 0.1);
    EXPECT_LE((line.points.back() - vec({2, 0})).cwiseAbs().maxCoeff(), 1e-13);

    const VectorField rot = field_from_text({"-x2", "x1"}, kVars2);
    const Curve arc = integrate_flow(rot, vec({1, 0}), std::numbers::pi / 2, 1e-3);
    ASSERT_TRUE(arc.complete());
    EXPECT_LE((arc.points.back() - vec({0, 1})).cwiseAbs().maxCoeff(), 1e-8);

    const Trajectory lifted = lift(arc, rot);
    EXPECT_EQ(lifted.states.front().x, vec({1, 0}));
    EXPECT_EQ(lifted.states.front().xdot, vec({0, 1}));
}

TEST(Flow, BlowUpIsReported) {
    const Curve c = integrate_flow(field_from_text({"x1^2"}, {"x1"}), vec({1}), 2.0, 0.01);
    EXPECT_FALSE(c.complete());
    // the last accepted point is finite but its velocity may overflow
    EXPECT_THROW(lift(c, field_from_text({"x1^2"}, {"x1"})), Error);
}

TEST(CompareLift, Examples) {
    EXPECT_LE(compare_lift_vs_dynamics(VectorField::constant(vec({1, -2})), free_particle(2), vec({0.5, 0.5}), 1.0, 1e-2),
              1e-12);
    const double gap = compare_lift_vs_dynamics(field_from_text({"x1"}, {"x1"}), free_particle(1), vec({1}), 1.0, 1e-3);
    EXPECT_NEAR(gap, std::exp(1.0) - 2.0, 1e-9);
}

TEST(CompareLift, RotationUnderPressure) {
    const VectorField v = field_from_text({"-sqrt(2)*x2", "sqrt(2)*x1"}, kVars2);
    const ForceForm alpha = ForceForm::integrable(scalar_from_text("x1^2 + x2^2", kVars2), ScalarField::constant(2, 1.0));
    const SecondOrderField d = newton_field(euclidean_metric(2), alpha);
    EXPECT_LT(compare_lift_vs_dynamics(v, d, vec({1, 0}), 1.0, 1e-3), 1e-6);
    // the same field without the balancing pressure drifts away
    EXPECT_GT(compare_lift_vs_dynamics(v, free_particle(2), vec({1, 0}), 1.0, 1e-3), 0.1);
}
