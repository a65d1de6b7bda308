#pragma once

// A small expression language so target functions can be given as text:
// literals, the free variable (x or z), + - * / ^, unary minus, and a fixed
// set of calls.  Evaluation is complex with principal branches; inputs that
// stay real are evaluated in real arithmetic so real functions produce
// exactly-real values (the engine's real path depends on that).

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aaa/kernels.hpp"

namespace aaa {

struct ParseError : std::runtime_error {
    size_t offset;
    std::string expected;
    ParseError(const std::string& msg, size_t off, std::string exp)
        : std::runtime_error(msg + " at offset " + std::to_string(off) +
                             (exp.empty() ? "" : " (expected " + exp + ")")),
          offset(off),
          expected(std::move(exp)) {}
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace fn {

enum class Call {
    Exp, Log, Sqrt, Sin, Cos, Tan, Tanh, Abs, Re, Im, Conj, Min, Max
};

inline const std::map<std::string, Call>& call_table() {
    static const std::map<std::string, Call> t = {
        {"exp", Call::Exp},   {"log", Call::Log},   {"sqrt", Call::Sqrt},
        {"sin", Call::Sin},   {"cos", Call::Cos},   {"tan", Call::Tan},
        {"tanh", Call::Tanh}, {"abs", Call::Abs},   {"re", Call::Re},
        {"im", Call::Im},     {"conj", Call::Conj}, {"min", Call::Min},
        {"max", Call::Max}};
    return t;
}

inline const char* call_name(Call c) {
    for (const auto& [name, call] : call_table())
        if (call == c) return name.c_str();
    return "?";
}

inline int call_arity(Call c) { return c == Call::Min || c == Call::Max ? 2 : 1; }

} // namespace fn

/// Expression AST.  Trees are immutable after parsing.
struct Expr {
    enum class Kind { Number, ImagUnit, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, CallFn };

    Kind kind = Kind::Number;
    double number = 0.0;
    fn::Call call = fn::Call::Exp;
    std::vector<Expr> args;

    static Expr num(double v) {
        Expr e;
        e.kind = Kind::Number;
        e.number = v;
        return e;
    }
    static Expr node(Kind k, std::vector<Expr> a) {
        Expr e;
        e.kind = k;
        e.args = std::move(a);
        return e;
    }

    bool operator==(const Expr& o) const {
        if (kind != o.kind || args.size() != o.args.size()) return false;
        if (kind == Kind::Number && number != o.number) return false;
        if (kind == Kind::CallFn && call != o.call) return false;
        for (size_t i = 0; i < args.size(); ++i)
            if (!(args[i] == o.args[i])) return false;
        return true;
    }
};

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected input", pos_, "end of input");
        return e;
    }

  private:
    std::string_view text_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr sum() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e = Expr::node(Expr::Kind::Add, {std::move(e), term()});
            else if (eat('-'))
                e = Expr::node(Expr::Kind::Sub, {std::move(e), term()});
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*'))
                e = Expr::node(Expr::Kind::Mul, {std::move(e), unary()});
            else if (eat('/'))
                e = Expr::node(Expr::Kind::Div, {std::move(e), unary()});
            else
                return e;
        }
    }

    Expr unary() {
        if (eat('-')) return Expr::node(Expr::Kind::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }

    // Right-associative, binds tighter than unary minus on its left, and the
    // exponent may itself carry a sign: z^-2 parses as z^(-2).
    Expr power() {
        Expr base = atom();
        if (eat('^')) {
            Expr expo = unary();
            return Expr::node(Expr::Kind::Pow, {std::move(base), std::move(expo)});
        }
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_, "operand");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!eat(')')) throw ParseError("unbalanced parenthesis", pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_, "operand");
    }

    Expr number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        try {
            return Expr::num(std::stod(std::string(text_.substr(start, pos_ - start))));
        } catch (const std::exception&) {
            throw ParseError("malformed number", start, "number");
        }
    }

    Expr identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "x" || name == "z") return Expr::node(Expr::Kind::Var, {});
        if (name == "i") return Expr::node(Expr::Kind::ImagUnit, {});
        if (name == "pi") return Expr::node(Expr::Kind::Pi, {});
        auto it = fn::call_table().find(name);
        if (it == fn::call_table().end())
            throw ParseError("unknown identifier '" + name + "'", start, "");
        if (!eat('(')) throw ParseError("expected argument list for '" + name + "'", pos_, "'('");
        std::vector<Expr> args;
        args.push_back(sum());
        while (eat(',')) args.push_back(sum());
        if (!eat(')')) throw ParseError("unbalanced call to '" + name + "'", pos_, "')'");
        if (static_cast<int>(args.size()) != fn::call_arity(it->second))
            throw ParseError("'" + name + "' takes " + std::to_string(fn::call_arity(it->second)) +
                                 " argument(s)",
                             start, "");
        Expr e;
        e.kind = Expr::Kind::CallFn;
        e.call = it->second;
        e.args = std::move(args);
        return e;
    }
};

// Real-arithmetic evaluation; returns nullopt when the computation leaves the
// reals (sqrt of a negative, log of a negative, fractional power of a
// negative base, or the literal i).
inline std::optional<double> eval_real(const Expr& e, double x) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Number: return e.number;
        case K::ImagUnit: return std::nullopt;
        case K::Pi: return std::numbers::pi;
        case K::Var: return x;
        case K::Neg: {
            auto a = eval_real(e.args[0], x);
            return a ? std::optional<double>(-*a) : std::nullopt;
        }
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div:
        case K::Pow: {
            auto a = eval_real(e.args[0], x);
            if (!a) return std::nullopt;
            auto b = eval_real(e.args[1], x);
            if (!b) return std::nullopt;
            switch (e.kind) {
                case K::Add: return *a + *b;
                case K::Sub: return *a - *b;
                case K::Mul: return *a * *b;
                case K::Div: return *a / *b;
                case K::Pow:
                    if (*a < 0.0 && *b != std::floor(*b)) return std::nullopt;
                    return std::pow(*a, *b);
                default: break;
            }
            return std::nullopt;
        }
        case K::CallFn: {
            auto a = eval_real(e.args[0], x);
            if (!a) return std::nullopt;
            switch (e.call) {
                case fn::Call::Exp: return std::exp(*a);
                case fn::Call::Log:
                    if (*a < 0.0) return std::nullopt;
                    return std::log(*a);
                case fn::Call::Sqrt:
                    if (*a < 0.0) return std::nullopt;
                    return std::sqrt(*a);
                case fn::Call::Sin: return std::sin(*a);
                case fn::Call::Cos: return std::cos(*a);
                case fn::Call::Tan: return std::tan(*a);
                case fn::Call::Tanh: return std::tanh(*a);
                case fn::Call::Abs: return std::abs(*a);
                case fn::Call::Re: return *a;
                case fn::Call::Im: return 0.0;
                case fn::Call::Conj: return *a;
                case fn::Call::Min:
                case fn::Call::Max: {
                    auto b = eval_real(e.args[1], x);
                    if (!b) return std::nullopt;
                    return e.call == fn::Call::Min ? std::min(*a, *b) : std::max(*a, *b);
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

inline Complex eval_complex(const Expr& e, const Complex& z) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Number: return Complex(e.number, 0.0);
        case K::ImagUnit: return Complex(0.0, 1.0);
        case K::Pi: return Complex(std::numbers::pi, 0.0);
        case K::Var: return z;
        case K::Neg: return -eval_complex(e.args[0], z);
        case K::Add: return eval_complex(e.args[0], z) + eval_complex(e.args[1], z);
        case K::Sub: return eval_complex(e.args[0], z) - eval_complex(e.args[1], z);
        case K::Mul: return eval_complex(e.args[0], z) * eval_complex(e.args[1], z);
        case K::Div: return eval_complex(e.args[0], z) / eval_complex(e.args[1], z);
        case K::Pow: {
            Complex a = eval_complex(e.args[0], z);
            Complex b = eval_complex(e.args[1], z);
            // integer powers by repeated multiplication keep real data real
            // and behave at infinities where exp(b log a) does not
            if (b.imag() == 0.0 && b.real() == std::floor(b.real()) &&
                std::abs(b.real()) <= 64.0) {
                long n = static_cast<long>(b.real());
                Complex r(1.0, 0.0);
                Complex base = n < 0 ? Complex(1.0, 0.0) / a : a;
                for (long k = std::labs(n); k > 0; --k) r *= base;
                return r;
            }
            return std::pow(a, b);
        }
        case K::CallFn: {
            Complex a = eval_complex(e.args[0], z);
            switch (e.call) {
                case fn::Call::Exp: return std::exp(a);
                case fn::Call::Log: return std::log(a);
                case fn::Call::Sqrt: return std::sqrt(a);
                case fn::Call::Sin: return std::sin(a);
                case fn::Call::Cos: return std::cos(a);
                case fn::Call::Tan: return std::tan(a);
                case fn::Call::Tanh: return std::tanh(a);
                case fn::Call::Abs: return Complex(std::abs(a), 0.0);
                case fn::Call::Re: return Complex(a.real(), 0.0);
                case fn::Call::Im: return Complex(a.imag(), 0.0);
                case fn::Call::Conj: return std::conj(a);
                case fn::Call::Min:
                case fn::Call::Max: {
                    Complex b = eval_complex(e.args[1], z);
                    if (a.imag() != 0.0 || b.imag() != 0.0)
                        throw DomainError(std::string(fn::call_name(e.call)) +
                                          " requires real arguments");
                    double v = e.call == fn::Call::Min ? std::min(a.real(), b.real())
                                                       : std::max(a.real(), b.real());
                    return Complex(v, 0.0);
                }
            }
            return Complex(0.0);
        }
    }
    return Complex(0.0);
}

inline void print_expr(const Expr& e, std::string& out) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            out += buf;
            return;
        }
        case K::ImagUnit: out += "i"; return;
        case K::Pi: out += "pi"; return;
        case K::Var: out += "x"; return;
        case K::Neg:
            out += "(-";
            print_expr(e.args[0], out);
            out += ")";
            return;
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div:
        case K::Pow: {
            const char* op = e.kind == K::Add   ? "+"
                             : e.kind == K::Sub ? "-"
                             : e.kind == K::Mul ? "*"
                             : e.kind == K::Div ? "/"
                                                : "^";
            out += "(";
            print_expr(e.args[0], out);
            out += op;
            print_expr(e.args[1], out);
            out += ")";
            return;
        }
        case K::CallFn:
            out += fn::call_name(e.call);
            out += "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ",";
                print_expr(e.args[i], out);
            }
            out += ")";
            return;
    }
}

} // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string print(const Expr& e) {
    std::string out;
    detail::print_expr(e, out);
    return out;
}

/// Evaluate with principal branches; exactly-real inputs with real
/// intermediates give exactly-real outputs.
inline Complex eval(const Expr& e, const Complex& v) {
    if (v.imag() == 0.0) {
        if (auto r = detail::eval_real(e, v.real())) return Complex(*r, 0.0);
    }
    return detail::eval_complex(e, v);
}

/// A parsed expression bundled as a callable target function.
class FunctionSpec {
  public:
    FunctionSpec() = default;
    explicit FunctionSpec(std::string text) : text_(std::move(text)), expr_(parse(text_)) {}

    const std::string& text() const { return text_; }
    const Expr& expr() const { return expr_; }
    Complex operator()(const Complex& v) const { return eval(expr_, v); }

    std::function<Complex(const Complex&)> fn() const {
        Expr e = expr_;
        return [e](const Complex& v) { return eval(e, v); };
    }

  private:
    std::string text_;
    Expr expr_;
};

/// Named test functions, mostly singular or near-singular targets.
inline const std::map<std::string, std::string>& builtin_catalog() {
    static const std::map<std::string, std::string> entries = {
        {"runge-exp", "exp(x)"},
        {"abs-x", "abs(x)"},
        {"exp-inv-sq", "exp(-1/x^2)"},
        {"cmv", "exp((x-1)/(x+1))"},
        {"fermi-dirac", "1/(1+exp(1000*(x+0.5)))"},
        {"tanh-100x", "tanh(100*x)"},
        {"tanh-1000x", "tanh(1000*x)"},
        {"sqrt-branch", "sqrt(1-z)"},
        {"circle-branch", "sqrt(1-z^-2/4)"},
        {"tan-z4", "tan(z^4)"},
        {"tan-zm4", "tan(z^-4)"},
        {"exp-4-over-z", "exp(4/z)"},
        {"abs-re-z", "abs(re(z))"},
        {"two-branch-axis", "1/(sqrt(z-(-1+10*i))*sqrt(z-(-1-10*i)))"},
        {"relu", "max(0,x)"},
        {"abs-shift", "abs(x-0.95)"},
    };
    return entries;
}

inline FunctionSpec catalog_function(const std::string& name) {
    auto it = builtin_catalog().find(name);
    if (it == builtin_catalog().end())
        throw std::invalid_argument("unknown catalog entry '" + name + "'");
    return FunctionSpec(it->second);
}

} // namespace aaa
