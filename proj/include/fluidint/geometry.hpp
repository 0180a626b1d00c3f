#pragma once

#include "fluidint/expr.hpp"
#include "fluidint/fields.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluidint {

inline constexpr double kDeterminantFloor = 1e-12;

// Pseudo-Riemannian metric g_ij(x) on a single coordinate chart.
struct MetricField {
    int dim = 0;
    std::function<Mat(const Point&)> components;
    // Optional analytic partials: element k is the matrix d_k g_ij.
    std::function<std::vector<Mat>(const Point&)> partials;
    std::vector<int> signature;
    double det_floor = kDeterminantFloor;
    std::string label;

    // g_ij at x; throws NonFinite, or ValidationError when not symmetric.
    Mat at(const Point& x) const;
    // g^ij at x; throws SingularMetric when |det g| is below det_floor.
    Mat inverse(const Point& x) const;
    // d_k g_ij, analytic when available.
    std::vector<Mat> derivatives(const Point& x) const;
    bool has_analytic_partials() const { return static_cast<bool>(partials); }
    MetricField without_derivatives() const;
};

// Scale factor a(t) of a warped product dt^2 - a(t)^2 h.
struct ScaleFactor {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::string label;

    static ScaleFactor from_expr(const Expr& a);
};

// Gamma^k_ij at a point, stored densely and symmetric in (i, j).
class ChristoffelTable {
public:
    explicit ChristoffelTable(int dim);

    int dim() const { return dim_; }
    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
    double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }

    // Gamma^k_ij a^i b^j
    Vec contract(const Vec& a, const Vec& b) const;
    double max_abs_difference(const ChristoffelTable& other) const;

private:
    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * dim_ + i) * dim_ + j;
    }
    int dim_;
    std::vector<double> data_;
};

// Levi-Civita symbols: Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelTable christoffel(const MetricField& metric, const Point& x);

// Closed-form table for g = dt^2 - a(t)^2 h at x = (t, x^1..x^n); the purely spatial
// block is taken from the Christoffel symbols of h.
ChristoffelTable flrw_christoffel(const MetricField& h, const ScaleFactor& a, const Point& x);

Vec flat(const MetricField& metric, const Point& x, const Vec& v);
Vec sharp(const MetricField& metric, const Point& x, const Vec& covector);
double inner(const MetricField& metric, const Point& x, const Vec& a, const Vec& b);

// g^ij d_j f
Vec gradient(const MetricField& metric, const ScalarField& f, const Point& x);

// v^j d_j v^k + Gamma^k_ij v^i v^j
Vec covariant_acceleration(const MetricField& metric, const VectorField& field, const Point& x);

// max_{k,i,j} | d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il |, zero for the Levi-Civita connection.
double metric_compatibility_defect(const MetricField& metric, const Point& x);

// ---------------------------------------------------------------------------
// Builders

MetricField euclidean_metric(int dim);
// Signature (+, -, ..., -).
MetricField minkowski_metric(int dim);
// Metric given by a symmetric matrix of expressions over the named chart variables.
// Partials come from symbolic differentiation.
MetricField expression_metric(const std::vector<std::vector<Expr>>& components,
                              const std::vector<std::string>& variables);
MetricField expression_metric(const std::vector<std::vector<std::string>>& components,
                              const std::vector<std::string>& variables);
// dt^2 + g^s on R x M^s, with g^s independent of t.
MetricField product_metric(const MetricField& spatial);
// dt^2 - a(t)^2 h on R x M^s.
MetricField flrw_metric(const MetricField& h, const ScaleFactor& a);

// Named builtins: euclidean, minkowski, polar, spherical, sphere, warped,
// flrw-linear, flrw-exp, flrw-sin, flrw-sphere.
MetricField builtin_metric(std::string_view name, int dim);
std::vector<std::string> builtin_metric_names();

struct FlrwParts {
    MetricField h;
    ScaleFactor a;
};

// (h, a) of the flrw-* builtins, nullopt for the others.
std::optional<FlrwParts> builtin_flrw_parts(std::string_view name, int dim);

}  // namespace fluidint
