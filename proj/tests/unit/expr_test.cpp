#include "fluidint/dsl.hpp"
#include "fluidint/errors.hpp"
#include "fluidint/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fluidint;

namespace {

// Random AST over {t, x1, x2}. Numbers are non-negative: a negative literal is written as
// unary minus applied to a number, which is also what the parser produces.
Expr random_ast(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    static const char* vars[] = {"t", "x1", "x2"};
    switch (pick(rng)) {
        case 0: {
            const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
            if (kind == 0) return Expr::number(std::uniform_int_distribution<int>(0, 9)(rng));
            if (kind == 1) return Expr::number(std::uniform_real_distribution<double>(0.0, 10.0)(rng));
            return Expr::number(std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(rng),
                                           std::uniform_int_distribution<int>(-40, 40)(rng)));
        }
        case 1: return Expr::variable(vars[std::uniform_int_distribution<int>(0, 2)(rng)]);
        case 2: return Expr::binary(ExprOp::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 3: return Expr::binary(ExprOp::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 4: return Expr::binary(ExprOp::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 5: return Expr::binary(ExprOp::Div, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 6: return Expr::binary(ExprOp::Pow, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 7: return Expr::negate(random_ast(rng, depth - 1));
        default: {
            const auto f = static_cast<Func>(std::uniform_int_distribution<int>(0, 9)(rng));
            return Expr::call(f, random_ast(rng, depth - 1));
        }
    }
}

// Smooth expressions for derivative checks: no abs, and pow only with small integer exponents.
Expr random_smooth(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    static const char* vars[] = {"t", "x1", "x2"};
    switch (pick(rng)) {
        case 0: return Expr::number(std::round(std::uniform_real_distribution<double>(0.1, 1.5)(rng) * 100) / 100);
        case 1: return Expr::variable(vars[std::uniform_int_distribution<int>(0, 2)(rng)]);
        case 2: return Expr::binary(ExprOp::Add, random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
        case 3: return Expr::binary(ExprOp::Sub, random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
        case 4: return Expr::binary(ExprOp::Mul, random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
        case 5:
            return Expr::binary(ExprOp::Div, random_smooth(rng, depth - 1),
                                Expr::binary(ExprOp::Add, Expr::number(2),
                                             Expr::call(Func::Sin, random_smooth(rng, depth - 1))));
        case 6:
            return Expr::binary(ExprOp::Pow, random_smooth(rng, depth - 1),
                                Expr::number(std::uniform_int_distribution<int>(2, 3)(rng)));
        default: {
            static const Func fs[] = {Func::Sin, Func::Cos, Func::Exp, Func::Sinh, Func::Cosh, Func::Tanh};
            return Expr::call(fs[std::uniform_int_distribution<int>(0, 5)(rng)], random_smooth(rng, depth - 1));
        }
    }
}

}  // namespace

TEST(Expr, DerivativeOfSumOfSquaresIsTwoX1) {
    EXPECT_EQ(differentiate(parse_expr("x1^2 + x2^2"), "x1"), parse_expr("2*x1"));
}

TEST(Expr, EvaluatesTSquared) { EXPECT_EQ(evaluate(parse_expr("t^2"), {{"t", 3.0}}), 9.0); }

TEST(Expr, DerivativeOfLnCoshIsTanh) {
    const Expr d = differentiate(parse_expr("ln(cosh(x1))"), "x1");
    const double value = evaluate(d, {{"x1", 1.0}});
    const Expr f = parse_expr("ln(cosh(x1))");
    const double h = 1e-5;
    const double fd = (evaluate(f, {{"x1", 1.0 + h}}) - evaluate(f, {{"x1", 1.0 - h}})) / (2 * h);
    EXPECT_NEAR(value, fd, 1e-8);
    EXPECT_NEAR(value, 0.761594, 1e-6);
}

TEST(Expr, Precedence) {
    EXPECT_EQ(parse_expr("-x1^2"), Expr::negate(parse_expr("x1^2")));
    EXPECT_EQ(parse_expr("2^-x1"), Expr::binary(ExprOp::Pow, Expr::number(2), Expr::negate(Expr::variable("x1"))));
    EXPECT_EQ(parse_expr("2^3^2"), parse_expr("2^(3^2)"));
    EXPECT_EQ(evaluate(parse_expr("2^3^2"), {}), 512.0);
    EXPECT_EQ(evaluate(parse_expr("1 - 2 - 3"), {}), -4.0);
    EXPECT_EQ(evaluate(parse_expr("8 / 4 / 2"), {}), 1.0);
    EXPECT_EQ(evaluate(parse_expr("2 * 3 + 4"), {}), 10.0);
    EXPECT_EQ(evaluate(parse_expr("-2^2"), {}), -4.0);
    EXPECT_EQ(evaluate(parse_expr(".5e1 + 1.25E-2"), {}), 5.0125);
}

TEST(Expr, ParseErrorCarriesOffsetAndExpectedSet) {
    try {
        parse_expr("x1 + * 2");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_FALSE(e.expected().empty());
    }
    EXPECT_THROW(parse_expr("sin x1"), ParseError);
    EXPECT_THROW(parse_expr("(x1 + 2"), ParseError);
    EXPECT_THROW(parse_expr("foo(x1)"), ParseError);
    EXPECT_THROW(parse_expr("y + 1"), ParseError);
    EXPECT_THROW(parse_expr("x1 2"), ParseError);
    EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(Expr, EvaluationErrors) {
    try {
        evaluate(parse_expr("ln(x1)"), {{"x1", -1.0}});
        FAIL();
    } catch (const DomainError& e) {
        ASSERT_EQ(e.point().size(), 1u);
        EXPECT_EQ(e.point()[0], -1.0);
    }
    EXPECT_THROW(evaluate(parse_expr("sqrt(x1)"), {{"x1", -4.0}}), DomainError);
    EXPECT_THROW(evaluate(parse_expr("1/x1"), {{"x1", 0.0}}), DomainError);
    try {
        evaluate(parse_expr("x3 + 1"), {{"x1", 0.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownVariable);
    }
    EXPECT_THROW(CompiledExpr(parse_expr("x2"), {"x1"}), Error);
}

TEST(Expr, CompiledMatchesTreeEvaluation) {
    const Expr e = parse_expr("sin(t*x1) + x2^2/(1 + exp(x1)) - sqrt(abs(x2))");
    const CompiledExpr c(e, {"t", "x1", "x2"});
    const double v[] = {0.3, -1.2, 0.7};
    EXPECT_DOUBLE_EQ(c(v), evaluate(e, {{"t", 0.3}, {"x1", -1.2}, {"x2", 0.7}}));
}

TEST(ExprProperty, PrintParseRoundTrip) {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 10000; ++i) {
        const Expr e = random_ast(rng, 5);
        const std::string text = print(e);
        ASSERT_EQ(parse_expr(text), e) << text;
    }
}

TEST(ExprProperty, SymbolicDerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const std::vector<std::string> vars = {"t", "x1", "x2"};
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const Expr e = random_smooth(rng, 4);
        const std::string var = vars[static_cast<std::size_t>(i % 3)];
        const Expr d = differentiate(e, var);
        std::map<std::string, double> at{{"t", coord(rng)}, {"x1", coord(rng)}, {"x2", coord(rng)}};
        const double sym = evaluate(d, at);
        if (!std::isfinite(sym) || std::abs(sym) > 1e6) continue;
        // Richardson-extrapolated central difference
        auto central = [&](double h) {
            auto p = at;
            auto m = at;
            p[var] += h;
            m[var] -= h;
            return (evaluate(e, p) - evaluate(e, m)) / (2 * h);
        };
        const double fd = (4 * central(1e-4) - central(2e-4)) / 3;
        EXPECT_LE(std::abs(sym - fd), 1e-6 * std::max(1.0, std::abs(sym))) << print(e) << " d/d" << var;
        ++checked;
    }
    EXPECT_GT(checked, 1500);
}

TEST(Dsl, FieldsCarrySymbolicDerivatives) {
    const auto vars = chart_variables(2, false);
    const ScalarField f = scalar_from_text("x1^2*x2", vars);
    Point x(2);
    x << 2.0, 3.0;
    EXPECT_DOUBLE_EQ(f(x), 12.0);
    EXPECT_DOUBLE_EQ(f.partials(x)[0], 12.0);
    EXPECT_DOUBLE_EQ(f.partials(x)[1], 4.0);

    const VectorField v = field_from_text({"-x2", "x1*x2"}, vars);
    const Mat j = v.derivative(x);
    EXPECT_DOUBLE_EQ(j(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(j(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(j(1, 0), 3.0);
    EXPECT_DOUBLE_EQ(j(1, 1), 2.0);
    EXPECT_FALSE(v.time_dependent);
    EXPECT_TRUE(field_from_text({"t", "x1"}, chart_variables(2, true)).time_dependent);
}

TEST(Dsl, ChartVariables) {
    EXPECT_EQ(chart_variables(3, true), (std::vector<std::string>{"t", "x1", "x2"}));
    EXPECT_EQ(chart_variables(2, false), (std::vector<std::string>{"x1", "x2"}));
}
