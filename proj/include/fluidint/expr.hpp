#pragma once

// Expression DSL used for metric components, fields and scalars in scenario files.
//
// Grammar (whitespace is insignificant):
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]             (right associative)
//   primary := number | variable | func "(" expr ")" | "(" expr ")"
//   number  := digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//            | "." digits [ exponent ]
//   variable:= "t" | "x" digits                   (x1 .. xn)
//   func    := "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt"
//            | "sinh" | "cosh" | "tanh" | "abs"
//
// Precedence: ^ binds tighter than unary minus, which binds tighter than * /,
// which bind tighter than + -. So -x1^2 is -(x1^2) and 2^-x1 is 2^(-x1).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fluidint {

enum class ExprOp : std::uint8_t { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Tanh, Abs };

std::string_view to_string(Func f);
std::optional<Func> func_from_name(std::string_view name);

class Expr {
public:
    Expr();  // the number 0

    static Expr number(double v);
    static Expr variable(std::string name);
    static Expr binary(ExprOp op, Expr lhs, Expr rhs);
    static Expr negate(Expr operand);
    static Expr call(Func f, Expr arg);

    ExprOp op() const;
    double value() const;              // Number
    const std::string& name() const;   // Variable
    Func func() const;                 // Call
    const Expr& lhs() const;           // binary ops; operand of Neg and Call
    const Expr& rhs() const;

    bool depends_on(std::string_view var) const;
    void collect_variables(std::vector<std::string>& out) const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr parse_expr(std::string_view text);
std::string print(const Expr& e);

// Exact symbolic derivative. The result is lightly simplified (identity elements,
// constant folding) so that d/dx1 (x1^2 + x2^2) is 2*x1.
Expr differentiate(const Expr& e, std::string_view var);

// Evaluate with named bindings. Throws UnknownVariable for unbound names and
// DomainError for ln/sqrt of negatives or division by zero.
double evaluate(const Expr& e, const std::map<std::string, double>& bindings);

// Variable names of a chart: {t, x1, .., x_{n-1}} with time, {x1, .., xn} without.
std::vector<std::string> chart_variables(int dim, bool has_time);

// An expression resolved against a fixed variable list and flattened for evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, std::vector<std::string> variables);

    double operator()(std::span<const double> values) const;
    const Expr& expr() const { return expr_; }
    const std::vector<std::string>& variables() const { return variables_; }

private:
    struct Instr {
        ExprOp op;
        Func func;
        int var;
        double value;
    };
    Expr expr_;
    std::vector<std::string> variables_;
    std::vector<Instr> code_;  // postfix
};

}  // namespace fluidint
