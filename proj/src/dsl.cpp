#include "fluidint/dsl.hpp"

#include <algorithm>
#include <cmath>

namespace fluidint {

namespace {

std::span<const double> view(const Point& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace

ScalarField scalar_from_expr(const Expr& e, const std::vector<std::string>& variables) {
    const CompiledExpr value(e, variables);
    std::vector<CompiledExpr> grad;
    for (const auto& v : variables) grad.emplace_back(differentiate(e, v), variables);

    ScalarField f;
    f.dim = static_cast<int>(variables.size());
    f.value = [value](const Point& x) { return value(view(x)); };
    f.gradient = [grad](const Point& x) {
        Vec g(static_cast<Eigen::Index>(grad.size()));
        for (std::size_t k = 0; k < grad.size(); ++k) g[static_cast<Eigen::Index>(k)] = grad[k](view(x));
        return g;
    };
    f.label = print(e);
    return f;
}

ScalarField scalar_from_text(std::string_view text, const std::vector<std::string>& variables) {
    return scalar_from_expr(parse_expr(text), variables);
}

VectorField field_from_exprs(const std::vector<Expr>& components,
                             const std::vector<std::string>& variables) {
    std::vector<CompiledExpr> value;
    std::vector<CompiledExpr> jac;  // row-major out x in
    bool uses_time = false;
    std::string label = "(";
    for (const Expr& c : components) {
        value.emplace_back(c, variables);
        for (const auto& v : variables) jac.emplace_back(differentiate(c, v), variables);
        uses_time = uses_time || c.depends_on("t");
        label += (label.size() > 1 ? ", " : "") + print(c);
    }
    label += ")";

    VectorField f;
    f.in_dim = static_cast<int>(variables.size());
    f.out_dim = static_cast<int>(components.size());
    f.value = [value](const Point& x) {
        Vec out(static_cast<Eigen::Index>(value.size()));
        for (std::size_t i = 0; i < value.size(); ++i) out[static_cast<Eigen::Index>(i)] = value[i](view(x));
        return out;
    };
    f.jacobian = [jac, rows = f.out_dim, cols = f.in_dim](const Point& x) {
        Mat out(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) out(i, j) = jac[static_cast<std::size_t>(i * cols + j)](view(x));
        }
        return out;
    };
    f.time_dependent = uses_time;
    f.label = label;
    return f;
}

VectorField field_from_text(const std::vector<std::string>& components,
                            const std::vector<std::string>& variables) {
    std::vector<Expr> parsed;
    parsed.reserve(components.size());
    for (const auto& c : components) parsed.push_back(parse_expr(c));
    return field_from_exprs(parsed, variables);
}

namespace {

void monomials(std::size_t start, int remaining, std::vector<std::size_t>& current,
               std::vector<std::vector<std::size_t>>& out, std::size_t nvars) {
    out.push_back(current);
    if (remaining == 0) return;
    for (std::size_t i = start; i < nvars; ++i) {
        current.push_back(i);
        monomials(i, remaining - 1, current, out, nvars);
        current.pop_back();
    }
}

}  // namespace

Expr random_polynomial(const std::vector<std::string>& variables, int degree, std::mt19937_64& rng) {
    std::vector<std::vector<std::size_t>> terms;
    std::vector<std::size_t> current;
    monomials(0, degree, current, terms, variables.size());

    Expr sum;
    bool first = true;
    for (const auto& term : terms) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double c = std::round((2.0 * u - 1.0) * 1000.0) / 1000.0;
        if (c == 0.0) continue;
        Expr t = Expr::number(std::abs(c));
        for (std::size_t i : term) t = Expr::binary(ExprOp::Mul, t, Expr::variable(variables[i]));
        if (first) {
            sum = c < 0 ? Expr::negate(t) : t;
            first = false;
        } else {
            sum = Expr::binary(c < 0 ? ExprOp::Sub : ExprOp::Add, sum, t);
        }
    }
    return sum;
}

}  // namespace fluidint
