#include "fluidint/geometry.hpp"

#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

Mat MetricField::at(const Point& x) const {
    require_dim(x, dim, "metric argument");
    Mat g = components(x);
    require_finite(g, label.empty() ? "metric" : "metric " + label);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::ValidationError, "metric " + label + " is not symmetric");
    }
    return g;
}

Mat MetricField::inverse(const Point& x) const {
    const Mat g = at(x);
    Eigen::FullPivLU<Mat> lu(g);
    const double det = lu.determinant();
    if (!(std::abs(det) >= det_floor)) {
        throw Error(ErrorKind::SingularMetric,
                    fmt::format("|det g| = {:g} below floor {:g}", std::abs(det), det_floor));
    }
    Mat inv = lu.inverse();
    // symmetrize away round-off
    return (0.5 * (inv + inv.transpose())).eval();
}

std::vector<Mat> MetricField::derivatives(const Point& x) const {
    require_dim(x, dim, "metric argument");
    std::vector<Mat> d;
    if (partials) {
        d = partials(x);
    } else {
        d.reserve(static_cast<std::size_t>(dim));
        Point xp = x;
        for (int k = 0; k < dim; ++k) {
            const double h = fd_step(x[k]);
            xp[k] = x[k] + h;
            const Mat gp = components(xp);
            xp[k] = x[k] - h;
            const Mat gm = components(xp);
            xp[k] = x[k];
            d.push_back((gp - gm) / ((x[k] + h) - (x[k] - h)));
        }
    }
    for (const Mat& m : d) require_finite(m, "metric partials");
    return d;
}

MetricField MetricField::without_derivatives() const {
    MetricField copy = *this;
    copy.partials = nullptr;
    return copy;
}

ScaleFactor ScaleFactor::from_expr(const Expr& a) {
    const std::vector<std::string> vars{"t"};
    CompiledExpr value(a, vars);
    CompiledExpr deriv(differentiate(a, "t"), vars);
    ScaleFactor s;
    s.value = [value](double t) { return value(std::span<const double>(&t, 1)); };
    s.derivative = [deriv](double t) { return deriv(std::span<const double>(&t, 1)); };
    s.label = print(a);
    return s;
}

// ---------------------------------------------------------------------------

ChristoffelTable::ChristoffelTable(int dim)
    : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

Vec ChristoffelTable::contract(const Vec& a, const Vec& b) const {
    Vec out = Vec::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * a[i] * b[j];
        }
        out[k] = s;
    }
    return out;
}

double ChristoffelTable::max_abs_difference(const ChristoffelTable& other) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
}

ChristoffelTable christoffel(const MetricField& metric, const Point& x) {
    const int n = metric.dim;
    const Mat ginv = metric.inverse(x);
    const std::vector<Mat> dg = metric.derivatives(x);

    // first kind: Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    ChristoffelTable table(n);
    std::vector<double> first(static_cast<std::size_t>(n) * n * n);
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double v = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                first[(static_cast<std::size_t>(l) * n + i) * n + j] = v;
                first[(static_cast<std::size_t>(l) * n + j) * n + i] = v;
            }
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += ginv(k, l) * first[(static_cast<std::size_t>(l) * n + i) * n + j];
                table(k, i, j) = s;
                table(k, j, i) = s;
            }
        }
    }
    return table;
}

ChristoffelTable flrw_christoffel(const MetricField& h, const ScaleFactor& a, const Point& x) {
    const int m = h.dim;
    require_dim(x, m + 1, "FLRW point");
    const double t = x[0];
    const double av = a.value(t);
    const double adot = a.derivative(t);
    require_finite(av, "scale factor");
    require_finite(adot, "scale factor derivative");
    if (av == 0.0) throw Error(ErrorKind::ZeroScaleFactor, fmt::format("a({}) = 0", t));

    const Point xs = x.tail(m);
    const Mat hij = h.at(xs);
    const ChristoffelTable spatial = christoffel(h, xs);

    ChristoffelTable table(m + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) table(0, i + 1, j + 1) = av * adot * hij(i, j);
    }
    for (int k = 0; k < m; ++k) {
        table(k + 1, 0, k + 1) = adot / av;
        table(k + 1, k + 1, 0) = adot / av;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) table(k + 1, i + 1, j + 1) = spatial(k, i, j);
        }
    }
    return table;
}

Vec flat(const MetricField& metric, const Point& x, const Vec& v) {
    require_dim(v, metric.dim, "vector");
    return metric.at(x) * v;
}

Vec sharp(const MetricField& metric, const Point& x, const Vec& covector) {
    require_dim(covector, metric.dim, "covector");
    return metric.inverse(x) * covector;
}

double inner(const MetricField& metric, const Point& x, const Vec& a, const Vec& b) {
    return a.dot(metric.at(x) * b);
}

Vec gradient(const MetricField& metric, const ScalarField& f, const Point& x) {
    return sharp(metric, x, f.partials(x));
}

Vec covariant_acceleration(const MetricField& metric, const VectorField& field, const Point& x) {
    const Vec v = field(x);
    require_dim(v, metric.dim, "vector field");
    const Mat jac = field.derivative(x);
    const Vec out = jac * v + christoffel(metric, x).contract(v, v);
    require_finite(out, "covariant acceleration");
    return out;
}

double metric_compatibility_defect(const MetricField& metric, const Point& x) {
    const int n = metric.dim;
    const Mat g = metric.at(x);
    const std::vector<Mat> dg = metric.derivatives(x);
    const ChristoffelTable gamma = christoffel(metric, x);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double r = dg[k](i, j);
                for (int l = 0; l < n; ++l) r -= gamma(l, k, i) * g(l, j) + gamma(l, k, j) * g(i, l);
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Builders

MetricField euclidean_metric(int dim) {
    MetricField g;
    g.dim = dim;
    g.components = [dim](const Point&) { return Mat::Identity(dim, dim).eval(); };
    g.partials = [dim](const Point&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); };
    g.signature.assign(static_cast<std::size_t>(dim), 1);
    g.label = "euclidean";
    return g;
}

MetricField minkowski_metric(int dim) {
    Mat eta = -Mat::Identity(dim, dim);
    eta(0, 0) = 1.0;
    MetricField g;
    g.dim = dim;
    g.components = [eta](const Point&) { return eta; };
    g.partials = [dim](const Point&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); };
    g.signature.assign(static_cast<std::size_t>(dim), -1);
    g.signature[0] = 1;
    g.label = "minkowski";
    return g;
}

MetricField expression_metric(const std::vector<std::vector<Expr>>& components,
                              const std::vector<std::string>& variables) {
    const int n = static_cast<int>(components.size());
    if (static_cast<int>(variables.size()) != n) {
        throw Error(ErrorKind::ValidationError,
                    fmt::format("metric has {} rows but the chart has {} variables", n,
                                variables.size()));
    }
    std::vector<CompiledExpr> g;
    std::vector<std::vector<CompiledExpr>> dg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(components[i].size()) != n) {
            throw Error(ErrorKind::ValidationError, "metric component matrix is not square");
        }
        for (int j = 0; j < n; ++j) {
            if (components[i][j] != components[j][i]) {
                throw Error(ErrorKind::ValidationError,
                            fmt::format("metric components ({0},{1}) and ({1},{0}) differ", i, j));
            }
            g.emplace_back(components[i][j], variables);
            for (int k = 0; k < n; ++k) {
                dg[k].emplace_back(differentiate(components[i][j], variables[k]), variables);
            }
        }
    }
    MetricField m;
    m.dim = n;
    m.components = [g, n](const Point& x) {
        Mat out(n, n);
        const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) out(i, j) = g[static_cast<std::size_t>(i * n + j)](xs);
        }
        return out;
    };
    m.partials = [dg, n](const Point& x) {
        std::vector<Mat> out(static_cast<std::size_t>(n), Mat(n, n));
        const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) out[k](i, j) = dg[k][static_cast<std::size_t>(i * n + j)](xs);
            }
        }
        return out;
    };
    m.label = "expression";
    return m;
}

MetricField expression_metric(const std::vector<std::vector<std::string>>& components,
                              const std::vector<std::string>& variables) {
    std::vector<std::vector<Expr>> parsed;
    for (const auto& row : components) {
        auto& out = parsed.emplace_back();
        for (const auto& c : row) out.push_back(parse_expr(c));
    }
    return expression_metric(parsed, variables);
}

MetricField product_metric(const MetricField& spatial) {
    const int m = spatial.dim;
    MetricField g;
    g.dim = m + 1;
    g.components = [spatial, m](const Point& x) {
        Mat out = Mat::Zero(m + 1, m + 1);
        out(0, 0) = 1.0;
        out.bottomRightCorner(m, m) = spatial.at(x.tail(m));
        return out;
    };
    g.partials = [spatial, m](const Point& x) {
        std::vector<Mat> out(static_cast<std::size_t>(m + 1), Mat::Zero(m + 1, m + 1));
        const std::vector<Mat> ds = spatial.derivatives(x.tail(m));
        for (int k = 0; k < m; ++k) out[k + 1].bottomRightCorner(m, m) = ds[k];
        return out;
    };
    g.signature.push_back(1);
    g.signature.insert(g.signature.end(), spatial.signature.begin(), spatial.signature.end());
    g.label = "dt^2 + " + spatial.label;
    return g;
}

MetricField flrw_metric(const MetricField& h, const ScaleFactor& a) {
    const int m = h.dim;
    MetricField g;
    g.dim = m + 1;
    g.components = [h, a, m](const Point& x) {
        const double av = a.value(x[0]);
        Mat out = Mat::Zero(m + 1, m + 1);
        out(0, 0) = 1.0;
        out.bottomRightCorner(m, m) = -av * av * h.at(x.tail(m));
        return out;
    };
    g.partials = [h, a, m](const Point& x) {
        const double av = a.value(x[0]);
        const double adot = a.derivative(x[0]);
        std::vector<Mat> out(static_cast<std::size_t>(m + 1), Mat::Zero(m + 1, m + 1));
        out[0].bottomRightCorner(m, m) = -2.0 * av * adot * h.at(x.tail(m));
        const std::vector<Mat> dh = h.derivatives(x.tail(m));
        for (int k = 0; k < m; ++k) out[k + 1].bottomRightCorner(m, m) = -av * av * dh[k];
        return out;
    };
    g.signature.push_back(1);
    for (int s : h.signature) g.signature.push_back(-s);
    g.label = "dt^2 - (" + a.label + ")^2 " + h.label;
    return g;
}

namespace {

using TextMatrix = std::vector<std::vector<std::string>>;

void require_builtin_dim(std::string_view name, int dim, int expected) {
    if (dim != expected) {
        throw Error(ErrorKind::ValidationError,
                    fmt::format("builtin metric '{}' has dimension {}, requested {}", name,
                                expected, dim));
    }
}

MetricField sphere_metric() {
    MetricField g = expression_metric(TextMatrix{{"1", "0"}, {"0", "sin(x1)^2"}}, {"x1", "x2"});
    g.signature = {1, 1};
    g.label = "sphere";
    return g;
}

// Diagonally dominant, non-diagonal, position-dependent Riemannian metric.
MetricField warped_metric(int dim) {
    const auto vars = chart_variables(dim, false);
    std::vector<std::vector<std::string>> c(static_cast<std::size_t>(dim),
                                            std::vector<std::string>(static_cast<std::size_t>(dim), "0"));
    for (int i = 0; i < dim; ++i) {
        const auto& xi = vars[i];
        const auto& xn = vars[(i + 1) % dim];
        c[i][i] = fmt::format("3 + sin({} + {})", xi, xn);
        if (i + 1 < dim) {
            const std::string off = fmt::format("0.5*cos({}*{})", xi, xn);
            c[i][i + 1] = off;
            c[i + 1][i] = off;
        }
    }
    MetricField g = expression_metric(c, vars);
    g.signature.assign(static_cast<std::size_t>(dim), 1);
    g.label = "warped";
    return g;
}

}  // namespace

MetricField builtin_metric(std::string_view name, int dim) {
    if (dim < 1) throw Error(ErrorKind::ValidationError, "metric dimension must be >= 1");
    if (name == "euclidean") return euclidean_metric(dim);
    if (name == "minkowski") return minkowski_metric(dim);
    if (name == "polar") {
        require_builtin_dim(name, dim, 2);
        MetricField g = expression_metric(TextMatrix{{"1", "0"}, {"0", "x1^2"}}, {"x1", "x2"});
        g.signature = {1, 1};
        g.label = "polar";
        return g;
    }
    if (name == "spherical") {
        require_builtin_dim(name, dim, 3);
        MetricField g = expression_metric(
            TextMatrix{{"1", "0", "0"}, {"0", "x1^2", "0"}, {"0", "0", "x1^2*sin(x2)^2"}}, {"x1", "x2", "x3"});
        g.signature = {1, 1, 1};
        g.label = "spherical";
        return g;
    }
    if (name == "sphere") {
        require_builtin_dim(name, dim, 2);
        return sphere_metric();
    }
    if (name == "warped") return warped_metric(dim);
    if (auto parts = builtin_flrw_parts(name, dim)) {
        MetricField g = flrw_metric(parts->h, parts->a);
        g.label = std::string(name);
        return g;
    }
    throw Error(ErrorKind::ValidationError, fmt::format("unknown builtin metric '{}'", name));
}

std::optional<FlrwParts> builtin_flrw_parts(std::string_view name, int dim) {
    if (name == "flrw-linear" || name == "flrw-exp" || name == "flrw-sin") {
        if (dim < 2) throw Error(ErrorKind::ValidationError, "FLRW metrics need dimension >= 2");
        const char* a = name == "flrw-linear" ? "t" : name == "flrw-exp" ? "exp(t)" : "2 + sin(t)";
        return FlrwParts{euclidean_metric(dim - 1), ScaleFactor::from_expr(parse_expr(a))};
    }
    if (name == "flrw-sphere") {
        require_builtin_dim(name, dim, 3);
        return FlrwParts{sphere_metric(), ScaleFactor::from_expr(parse_expr("2 + sin(t)"))};
    }
    return std::nullopt;
}

std::vector<std::string> builtin_metric_names() {
    return {"euclidean", "minkowski", "polar",    "spherical", "sphere",
            "warped",    "flrw-linear", "flrw-exp", "flrw-sin",  "flrw-sphere"};
}

}  // namespace fluidint
