#include "fluidint/expr.hpp"

#include "fluidint/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fluidint {

struct Expr::Node {
    ExprOp op = ExprOp::Number;
    double value = 0.0;
    std::string name;
    Func func = Func::Sin;
    Expr lhs{nullptr};
    Expr rhs{nullptr};
};

namespace {

constexpr Func kAllFuncs[] = {Func::Sin,  Func::Cos,  Func::Tan,  Func::Exp,  Func::Ln,
                              Func::Sqrt, Func::Sinh, Func::Cosh, Func::Tanh, Func::Abs};

bool is_variable_name(std::string_view s) {
    if (s == "t") return true;
    if (s.size() < 2 || s[0] != 'x') return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

std::string_view to_string(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
        case Func::Tanh: return "tanh";
        case Func::Abs: return "abs";
    }
    return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
    for (Func f : kAllFuncs) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() {
    static const Expr zero = number(0.0);
    node_ = zero.node_;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Number;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Variable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Neg;
    n->lhs = std::move(operand);
    return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Call;
    n->func = f;
    n->lhs = std::move(arg);
    return Expr(std::move(n));
}

ExprOp Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

bool Expr::depends_on(std::string_view var) const {
    switch (op()) {
        case ExprOp::Number: return false;
        case ExprOp::Variable: return name() == var;
        case ExprOp::Neg:
        case ExprOp::Call: return lhs().depends_on(var);
        default: return lhs().depends_on(var) || rhs().depends_on(var);
    }
}

void Expr::collect_variables(std::vector<std::string>& out) const {
    switch (op()) {
        case ExprOp::Number: return;
        case ExprOp::Variable:
            if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
            return;
        case ExprOp::Neg:
        case ExprOp::Call: lhs().collect_variables(out); return;
        default:
            lhs().collect_variables(out);
            rhs().collect_variables(out);
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case ExprOp::Number: return a.value() == b.value();
        case ExprOp::Variable: return a.name() == b.name();
        case ExprOp::Neg: return a.lhs() == b.lhs();
        case ExprOp::Call: return a.func() == b.func() && a.lhs() == b.lhs();
        default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail({"operator", "end of input"}, "unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail) {
        throw ParseError(pos_, std::move(expected), detail);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(ExprOp::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = Expr::binary(ExprOp::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(ExprOp::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::binary(ExprOp::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail({"number", "variable", "function", "(", "-"}, "unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (accept('(')) {
            Expr inner = parse_expr();
            if (!accept(')')) fail({")"}, "unbalanced parenthesis");
            return inner;
        }
        fail({"number", "variable", "function", "(", "-"}, "unexpected character");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) fail({"digit"}, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail({"digit"}, "malformed exponent");
        }
        const std::string literal(text_.substr(start, pos_ - start));
        const double v = std::strtod(literal.c_str(), nullptr);
        if (!std::isfinite(v)) {
            pos_ = start;
            fail({"finite number"}, "number out of range");
        }
        return Expr::number(v);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view ident = text_.substr(start, pos_ - start);
        if (auto f = func_from_name(ident)) {
            if (!accept('(')) fail({"("}, "function name must be followed by an argument");
            Expr arg = parse_expr();
            if (!accept(')')) fail({")"}, "unbalanced parenthesis");
            return Expr::call(*f, arg);
        }
        if (is_variable_name(ident)) return Expr::variable(std::string(ident));
        pos_ = start;
        std::vector<std::string> expected{"t", "x<k>"};
        for (Func f : kAllFuncs) expected.emplace_back(to_string(f));
        fail(std::move(expected), "unknown identifier '" + std::string(ident) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Printing precedence levels.
int precedence(const Expr& e) {
    switch (e.op()) {
        case ExprOp::Add:
        case ExprOp::Sub: return 1;
        case ExprOp::Mul:
        case ExprOp::Div: return 2;
        case ExprOp::Neg: return 3;
        case ExprOp::Pow: return 4;
        default: return 5;
    }
}

void print_to(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print_to(e, out);
    if (parens) out += ')';
}

void print_to(const Expr& e, std::string& out) {
    switch (e.op()) {
        case ExprOp::Number:
            if (e.value() < 0 || std::signbit(e.value())) {
                // only constructed programmatically; parse yields Neg(Number)
                out += '(';
                out += fmt::format("{}", e.value());
                out += ')';
            } else {
                out += fmt::format("{}", e.value());
            }
            return;
        case ExprOp::Variable: out += e.name(); return;
        case ExprOp::Neg:
            out += '-';
            print_wrapped(e.lhs(), precedence(e.lhs()) < 3, out);
            return;
        case ExprOp::Call:
            out += to_string(e.func());
            out += '(';
            print_to(e.lhs(), out);
            out += ')';
            return;
        case ExprOp::Pow:
            print_wrapped(e.lhs(), precedence(e.lhs()) <= 4, out);
            out += '^';
            print_wrapped(e.rhs(), precedence(e.rhs()) < 3, out);
            return;
        default: {
            const int p = precedence(e);
            print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
            switch (e.op()) {
                case ExprOp::Add: out += " + "; break;
                case ExprOp::Sub: out += " - "; break;
                case ExprOp::Mul: out += '*'; break;
                default: out += '/'; break;
            }
            print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
        }
    }
}

// ---------------------------------------------------------------------------
// Simplifying constructors used by differentiate.

std::optional<double> as_constant(const Expr& e) {
    if (e.op() == ExprOp::Number) return e.value();
    if (e.op() == ExprOp::Neg && e.lhs().op() == ExprOp::Number) return -e.lhs().value();
    return std::nullopt;
}

Expr constant(double v) {
    if (v < 0) return Expr::negate(Expr::number(-v));
    return Expr::number(v == 0.0 ? 0.0 : v);
}

bool is_const(const Expr& e, double v) {
    auto c = as_constant(e);
    return c && *c == v;
}

Expr folded_or(double v, Expr otherwise) {
    if (std::isfinite(v)) return constant(v);
    return otherwise;
}

Expr add(const Expr& a, const Expr& b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    auto ca = as_constant(a), cb = as_constant(b);
    if (ca && cb) return folded_or(*ca + *cb, Expr::binary(ExprOp::Add, a, b));
    return Expr::binary(ExprOp::Add, a, b);
}

Expr neg(const Expr& a) {
    if (auto c = as_constant(a)) return constant(-*c);
    if (a.op() == ExprOp::Neg) return a.lhs();
    return Expr::negate(a);
}

Expr sub(const Expr& a, const Expr& b) {
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return neg(b);
    auto ca = as_constant(a), cb = as_constant(b);
    if (ca && cb) return folded_or(*ca - *cb, Expr::binary(ExprOp::Sub, a, b));
    return Expr::binary(ExprOp::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
    if (is_const(a, 0) || is_const(b, 0)) return constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (is_const(a, -1)) return neg(b);
    if (is_const(b, -1)) return neg(a);
    auto ca = as_constant(a), cb = as_constant(b);
    if (ca && cb) return folded_or(*ca * *cb, Expr::binary(ExprOp::Mul, a, b));
    return Expr::binary(ExprOp::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
    if (is_const(b, 1)) return a;
    if (is_const(a, 0) && !is_const(b, 0)) return constant(0);
    auto ca = as_constant(a), cb = as_constant(b);
    if (ca && cb && *cb != 0) return folded_or(*ca / *cb, Expr::binary(ExprOp::Div, a, b));
    return Expr::binary(ExprOp::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
    if (is_const(b, 0)) return constant(1);
    if (is_const(b, 1)) return a;
    auto ca = as_constant(a), cb = as_constant(b);
    if (ca && cb && *ca > 0) return folded_or(std::pow(*ca, *cb), Expr::binary(ExprOp::Pow, a, b));
    return Expr::binary(ExprOp::Pow, a, b);
}

Expr call(Func f, const Expr& a) { return Expr::call(f, a); }

Expr derivative_of_call(Func f, const Expr& u) {
    switch (f) {
        case Func::Sin: return call(Func::Cos, u);
        case Func::Cos: return neg(call(Func::Sin, u));
        case Func::Tan: return div(constant(1), pow(call(Func::Cos, u), constant(2)));
        case Func::Exp: return call(Func::Exp, u);
        case Func::Ln: return div(constant(1), u);
        case Func::Sqrt: return div(constant(1), mul(constant(2), call(Func::Sqrt, u)));
        case Func::Sinh: return call(Func::Cosh, u);
        case Func::Cosh: return call(Func::Sinh, u);
        case Func::Tanh: return sub(constant(1), pow(call(Func::Tanh, u), constant(2)));
        case Func::Abs: return div(u, call(Func::Abs, u));
    }
    return constant(0);
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string print(const Expr& e) {
    std::string out;
    print_to(e, out);
    return out;
}

Expr differentiate(const Expr& e, std::string_view var) {
    if (!e.depends_on(var)) return constant(0);
    switch (e.op()) {
        case ExprOp::Number: return constant(0);
        case ExprOp::Variable: return constant(e.name() == var ? 1 : 0);
        case ExprOp::Add: return add(differentiate(e.lhs(), var), differentiate(e.rhs(), var));
        case ExprOp::Sub: return sub(differentiate(e.lhs(), var), differentiate(e.rhs(), var));
        case ExprOp::Neg: return neg(differentiate(e.lhs(), var));
        case ExprOp::Mul: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            return add(mul(differentiate(a, var), b), mul(a, differentiate(b, var)));
        }
        case ExprOp::Div: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!b.depends_on(var)) return div(differentiate(a, var), b);
            return div(sub(mul(differentiate(a, var), b), mul(a, differentiate(b, var))),
                       pow(b, constant(2)));
        }
        case ExprOp::Pow: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!b.depends_on(var)) {
                return mul(mul(b, pow(a, sub(b, constant(1)))), differentiate(a, var));
            }
            if (!a.depends_on(var)) {
                return mul(mul(e, call(Func::Ln, a)), differentiate(b, var));
            }
            return mul(e, add(mul(differentiate(b, var), call(Func::Ln, a)),
                              div(mul(b, differentiate(a, var)), a)));
        }
        case ExprOp::Call:
            return mul(derivative_of_call(e.func(), e.lhs()), differentiate(e.lhs(), var));
    }
    return constant(0);
}

std::vector<std::string> chart_variables(int dim, bool has_time) {
    std::vector<std::string> vars;
    vars.reserve(static_cast<std::size_t>(dim));
    if (has_time && dim > 0) vars.emplace_back("t");
    const int spatial = has_time ? dim - 1 : dim;
    for (int i = 1; i <= spatial; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

namespace {

void emit(const Expr& e, const std::vector<std::string>& vars, auto& code) {
    using Instr = std::remove_cvref_t<decltype(code[0])>;
    switch (e.op()) {
        case ExprOp::Number: code.push_back(Instr{ExprOp::Number, Func::Sin, -1, e.value()}); return;
        case ExprOp::Variable: {
            auto it = std::find(vars.begin(), vars.end(), e.name());
            if (it == vars.end()) {
                std::string known;
                for (const auto& v : vars) known += (known.empty() ? "" : ", ") + v;
                throw Error(ErrorKind::UnknownVariable,
                            "'" + e.name() + "' is not a chart variable (have: " + known + ")");
            }
            code.push_back(Instr{ExprOp::Variable, Func::Sin,
                                 static_cast<int>(it - vars.begin()), 0.0});
            return;
        }
        case ExprOp::Neg:
            emit(e.lhs(), vars, code);
            code.push_back(Instr{ExprOp::Neg, Func::Sin, -1, 0.0});
            return;
        case ExprOp::Call:
            emit(e.lhs(), vars, code);
            code.push_back(Instr{ExprOp::Call, e.func(), -1, 0.0});
            return;
        default:
            emit(e.lhs(), vars, code);
            emit(e.rhs(), vars, code);
            code.push_back(Instr{e.op(), Func::Sin, -1, 0.0});
    }
}

double apply(Func f, double u, std::span<const double> point) {
    auto domain = [&](const char* what) -> double {
        throw DomainError(what, std::vector<double>(point.begin(), point.end()));
    };
    switch (f) {
        case Func::Sin: return std::sin(u);
        case Func::Cos: return std::cos(u);
        case Func::Tan: return std::tan(u);
        case Func::Exp: return std::exp(u);
        case Func::Ln:
            if (!(u > 0)) return domain("ln of a non-positive value");
            return std::log(u);
        case Func::Sqrt:
            if (u < 0) return domain("sqrt of a negative value");
            return std::sqrt(u);
        case Func::Sinh: return std::sinh(u);
        case Func::Cosh: return std::cosh(u);
        case Func::Tanh: return std::tanh(u);
        case Func::Abs: return std::abs(u);
    }
    return 0.0;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, std::vector<std::string> variables)
    : expr_(e), variables_(std::move(variables)) {
    emit(expr_, variables_, code_);
}

double CompiledExpr::operator()(std::span<const double> values) const {
    if (values.size() != variables_.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("expression expects {} values, got {}", variables_.size(),
                                values.size()));
    }
    std::vector<double> stack;
    stack.reserve(code_.size());
    for (const Instr& in : code_) {
        switch (in.op) {
            case ExprOp::Number: stack.push_back(in.value); break;
            case ExprOp::Variable: stack.push_back(values[static_cast<std::size_t>(in.var)]); break;
            case ExprOp::Neg: stack.back() = -stack.back(); break;
            case ExprOp::Call: stack.back() = apply(in.func, stack.back(), values); break;
            default: {
                const double b = stack.back();
                stack.pop_back();
                double& a = stack.back();
                switch (in.op) {
                    case ExprOp::Add: a += b; break;
                    case ExprOp::Sub: a -= b; break;
                    case ExprOp::Mul: a *= b; break;
                    case ExprOp::Div:
                        if (b == 0.0) {
                            throw DomainError("division by zero",
                                              std::vector<double>(values.begin(), values.end()));
                        }
                        a /= b;
                        break;
                    case ExprOp::Pow: {
                        const double r = std::pow(a, b);
                        if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) {
                            throw DomainError(fmt::format("{}^{} is undefined", a, b),
                                              std::vector<double>(values.begin(), values.end()));
                        }
                        a = r;
                        break;
                    }
                    default: break;
                }
            }
        }
    }
    const double result = stack.back();
    if (!std::isfinite(result)) {
        throw Error(ErrorKind::NonFinite, "expression '" + print(expr_) + "' evaluated to " +
                                              fmt::format("{}", result));
    }
    return result;
}

double evaluate(const Expr& e, const std::map<std::string, double>& bindings) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [k, v] : bindings) {
        names.push_back(k);
        values.push_back(v);
    }
    return CompiledExpr(e, std::move(names))(values);
}

}  // namespace fluidint
