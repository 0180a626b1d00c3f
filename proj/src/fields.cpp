#include "fluidint/fields.hpp"

#include "fluidint/errors.hpp"

#include <cmath>
#include <limits>

namespace fluidint {

void require_finite(const Vec& v, const std::string& what) {
    if (!v.allFinite()) throw Error(ErrorKind::NonFinite, what + " is not finite");
}

void require_finite(const Mat& m, const std::string& what) {
    if (!m.allFinite()) throw Error(ErrorKind::NonFinite, what + " is not finite");
}

void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what + " is not finite");
}

void require_dim(const Vec& v, int n, const std::string& what) {
    if (v.size() != n) {
        throw Error(ErrorKind::DimensionMismatch,
                    what + " has " + std::to_string(v.size()) + " components, expected " +
                        std::to_string(n));
    }
}

double fd_step(double coordinate) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    return base * std::max(1.0, std::abs(coordinate));
}

Vec fd_gradient(const std::function<double(const Point&)>& f, const Point& x) {
    Vec g(x.size());
    Point xp = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = fd_step(x[k]);
        xp[k] = x[k] + h;
        const double fp = f(xp);
        xp[k] = x[k] - h;
        const double fm = f(xp);
        xp[k] = x[k];
        // the actual spacing after rounding
        g[k] = (fp - fm) / ((x[k] + h) - (x[k] - h));
    }
    return g;
}

Mat fd_jacobian(const std::function<Vec(const Point&)>& f, const Point& x) {
    Mat j;
    Point xp = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = fd_step(x[k]);
        xp[k] = x[k] + h;
        const Vec fp = f(xp);
        xp[k] = x[k] - h;
        const Vec fm = f(xp);
        xp[k] = x[k];
        if (k == 0) j.resize(fp.size(), x.size());
        j.col(k) = (fp - fm) / ((x[k] + h) - (x[k] - h));
    }
    return j;
}

double ScalarField::operator()(const Point& x) const {
    require_dim(x, dim, label.empty() ? "scalar field argument" : label + " argument");
    const double f = value(x);
    require_finite(f, label.empty() ? "scalar field" : label);
    return f;
}

Vec ScalarField::partials(const Point& x) const {
    require_dim(x, dim, label.empty() ? "scalar field argument" : label + " argument");
    Vec g = gradient ? gradient(x) : fd_gradient(value, x);
    require_finite(g, label.empty() ? "scalar gradient" : "gradient of " + label);
    return g;
}

ScalarField ScalarField::without_derivatives() const {
    ScalarField copy = *this;
    copy.gradient = nullptr;
    return copy;
}

ScalarField ScalarField::constant(int dim, double c) {
    ScalarField f;
    f.dim = dim;
    f.value = [c](const Point&) { return c; };
    f.gradient = [dim](const Point&) { return Vec::Zero(dim).eval(); };
    f.label = "constant";
    return f;
}

Vec VectorField::operator()(const Point& x) const {
    require_dim(x, in_dim, label.empty() ? "vector field argument" : label + " argument");
    Vec v = value(x);
    require_dim(v, out_dim, label.empty() ? "vector field" : label);
    require_finite(v, label.empty() ? "vector field" : label);
    return v;
}

Mat VectorField::derivative(const Point& x) const {
    require_dim(x, in_dim, label.empty() ? "vector field argument" : label + " argument");
    Mat j = jacobian ? jacobian(x) : fd_jacobian(value, x);
    require_finite(j, label.empty() ? "vector field Jacobian" : "Jacobian of " + label);
    return j;
}

VectorField VectorField::without_derivatives() const {
    VectorField copy = *this;
    copy.jacobian = nullptr;
    return copy;
}

VectorField VectorField::constant(const Vec& c) {
    VectorField f;
    f.in_dim = static_cast<int>(c.size());
    f.out_dim = static_cast<int>(c.size());
    f.value = [c](const Point&) { return c; };
    f.jacobian = [n = c.size()](const Point&) { return Mat::Zero(n, n).eval(); };
    f.label = "constant";
    return f;
}

}  // namespace fluidint
