#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace fluidint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Chart coordinates x^0..x^{n-1}. When a chart carries a time coordinate it is index 0.
using Point = Eigen::VectorXd;

// A point of the tangent bundle: base coordinates plus velocity components.
struct State {
    Point x;
    Vec xdot;

    int dim() const { return static_cast<int>(x.size()); }
};

void require_finite(const Vec& v, const std::string& what);
void require_finite(const Mat& m, const std::string& what);
void require_finite(double v, const std::string& what);
void require_dim(const Vec& v, int n, const std::string& what);

// Central finite differences with step cbrt(eps) * max(1, |x^k|).
double fd_step(double coordinate);
Vec fd_gradient(const std::function<double(const Point&)>& f, const Point& x);
Mat fd_jacobian(const std::function<Vec(const Point&)>& f, const Point& x);

struct ScalarField {
    int dim = 0;
    std::function<double(const Point&)> value;
    // Optional analytic partials d_i f. Finite differences are used when empty.
    std::function<Vec(const Point&)> gradient;
    std::string label;

    double operator()(const Point& x) const;
    Vec partials(const Point& x) const;
    ScalarField without_derivatives() const;

    static ScalarField constant(int dim, double c);
};

struct VectorField {
    int in_dim = 0;
    int out_dim = 0;
    std::function<Vec(const Point&)> value;
    // Optional analytic Jacobian, out_dim x in_dim, entry (i, j) = d_j v^i.
    std::function<Mat(const Point&)> jacobian;
    bool time_dependent = false;
    std::string label;

    Vec operator()(const Point& x) const;
    Mat derivative(const Point& x) const;
    VectorField without_derivatives() const;

    static VectorField constant(const Vec& c);
};

}  // namespace fluidint
