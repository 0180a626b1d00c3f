#pragma once

// Seeded generators and independent oracles shared by the unit tests.

#include "fluidint/dsl.hpp"
#include "fluidint/geometry.hpp"

#include <random>
#include <vector>

namespace fluidint::testing {

inline Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

inline Point uniform_point(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
    Point p(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    }
    return p;
}

inline Vec uniform_vec(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
    return uniform_point(rng, Vec::Constant(n, lo), Vec::Constant(n, hi));
}

inline Mat random_antisymmetric(std::mt19937_64& rng, int n) {
    Mat a = Mat::Zero(n, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = u(rng);
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

// Levi-Civita symbols from components only: own central differences, own inverse.
inline std::vector<double> christoffel_oracle(const MetricField& g, const Point& x) {
    const int n = g.dim;
    std::vector<Mat> dg;
    for (int k = 0; k < n; ++k) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
        Point xp = x;
        Point xm = x;
        xp[k] += h;
        xm[k] -= h;
        dg.push_back((g.components(xp) - g.components(xm)) / (2.0 * h));
    }
    const Mat ginv = g.components(x).inverse();
    std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                }
                out[static_cast<std::size_t>((k * n + i) * n + j)] = s;
            }
        }
    }
    return out;
}

inline VectorField random_polynomial_field(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                           int components, int degree) {
    std::vector<Expr> c;
    for (int i = 0; i < components; ++i) c.push_back(random_polynomial(vars, degree, rng));
    return field_from_exprs(c, vars);
}

}  // namespace fluidint::testing
