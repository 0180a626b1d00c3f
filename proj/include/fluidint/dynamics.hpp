#pragma once

#include "fluidint/geometry.hpp"

#include <functional>
#include <span>
#include <string>

namespace fluidint {

// Horizontal 1-form alpha_i(x, xdot) dx^i on the tangent bundle, stored covariantly.
struct ForceForm {
    int dim = 0;
    std::function<Vec(const State&)> components;
    bool velocity_dependent = false;
    std::string label;

    Vec operator()(const State& s) const;

    static ForceForm zero(int dim);
    // alpha = d Phi
    static ForceForm exact(const ScalarField& potential);
    // alpha = dP / rho
    static ForceForm integrable(const ScalarField& pressure, const ScalarField& density);
    static ForceForm sum(const ForceForm& a, const ForceForm& b);
};

enum class Provenance { Geodesic, Newton, Constrained };

// A second-order equation xddot = accel(x, xdot); its base velocity is xdot itself.
struct SecondOrderField {
    int dim = 0;
    std::function<Vec(const State&)> accel;
    Provenance provenance = Provenance::Newton;
    std::string label;

    Vec operator()(const State& s) const;
};

// T = 1/2 g_ij xdot^i xdot^j
double kinetic_energy(const MetricField& metric, const State& s);

// alpha_i(x, xdot) xdot^i
double alpha_dot(const ForceForm& force, const State& s);

// xddot^k = -(g^kj alpha_j + Gamma^k_ij xdot^i xdot^j)
SecondOrderField newton_field(const MetricField& metric, const ForceForm& force);
SecondOrderField geodesic_field(const MetricField& metric);

// Force recovered from an acceleration: -g_kj (xddot^k + Gamma^k_ij xdot^i xdot^j).
Vec force_from_acceleration(const MetricField& metric, const State& s, const Vec& xddot);

inline constexpr double kAntisymmetryTolerance = 1e-12;

// alpha_j = xdot^i F_ij; F is checked antisymmetric at every evaluation.
ForceForm lorentz_force(int dim, std::function<Mat(const State&)> field_strength);
ForceForm lorentz_force(int dim, std::function<Mat(const Point&)> field_strength);

// max |alpha_dot| over the sample; zero classifies the force as relativistic.
double relativistic_defect(const MetricField& metric, const ForceForm& force,
                           std::span<const State> states);

}  // namespace fluidint
