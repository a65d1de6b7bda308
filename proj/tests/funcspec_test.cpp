#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aaa/funcspec.hpp"
#include "oracles.hpp"

using aaa::Complex;
using aaa::Expr;
using Catch::Approx;

TEST_CASE("parse builds the expected tree shapes") {
    Expr e = aaa::parse("exp(-1/x^2)");
    REQUIRE(e.kind == Expr::Kind::CallFn);
    CHECK(e.call == aaa::fn::Call::Exp);
    REQUIRE(e.args.size() == 1);
    const Expr& neg = e.args[0];
    CHECK(neg.kind == Expr::Kind::Neg);
    const Expr& div = neg.args[0];
    CHECK(div.kind == Expr::Kind::Div);
    CHECK(div.args[0].kind == Expr::Kind::Number);
    CHECK(div.args[1].kind == Expr::Kind::Pow);

    CHECK_NOTHROW(aaa::parse("1/(1+exp(1000*(x+0.5)))"));
}

TEST_CASE("precedence: power binds tighter than unary minus and products") {
    // -x^2 is -(x^2): at x = 2 the value is -4
    CHECK(aaa::eval(aaa::parse("-x^2"), Complex(2.0, 0.0)).real() == Approx(-4.0));
    // right associativity: 2^3^2 = 2^9
    CHECK(aaa::eval(aaa::parse("2^3^2"), Complex(0.0, 0.0)).real() == Approx(512.0));
    // signed exponent: z^-2 at z = 2 is 0.25
    CHECK(aaa::eval(aaa::parse("z^-2"), Complex(2.0, 0.0)).real() == Approx(0.25));
    CHECK(aaa::eval(aaa::parse("2*x^2"), Complex(3.0, 0.0)).real() == Approx(18.0));
}

TEST_CASE("syntax errors carry the byte offset") {
    try {
        aaa::parse("exp(");
        FAIL("expected a parse error");
    } catch (const aaa::ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(aaa::parse("nope(x)"), aaa::ParseError);
    CHECK_THROWS_AS(aaa::parse("min(x)"), aaa::ParseError);    // wrong arity
    CHECK_THROWS_AS(aaa::parse("exp(x,x)"), aaa::ParseError);  // wrong arity
    CHECK_THROWS_AS(aaa::parse("x + "), aaa::ParseError);
    CHECK_THROWS_AS(aaa::parse("(x"), aaa::ParseError);
}

TEST_CASE("print/parse round-trip is the identity on the tree") {
    const char* corpus[] = {
        "1",
        "x",
        "pi",
        "i",
        "-x",
        "x+1",
        "x-1",
        "2*x",
        "x/3",
        "x^2",
        "x^-2",
        "2^3^2",
        "-x^2",
        "exp(x)",
        "abs(x)",
        "exp(-1/x^2)",
        "exp((x-1)/(x+1))",
        "1/(1+exp(1000*(x+0.5)))",
        "tanh(100*x)",
        "tanh(1000*x)",
        "sqrt(1-z)",
        "sqrt(1-z^-2/4)",
        "tan(z^4)",
        "tan(z^-4)",
        "exp(4/z)",
        "abs(re(z))",
        "1/(sqrt(z-(-1+10*i))*sqrt(z-(-1-10*i)))",
        "max(0,x)",
        "min(x,0.5)",
        "abs(x-0.95)",
        "conj(z)*z",
        "im(z)+re(z)",
        "sin(cos(tan(x)))",
        "log(1+x^2)",
        "x*x*x",
        "((x))",
        "0.5*x + .25",
        "1e-3*x",
        "2.5e2",
        "x^2+2*x+1",
        "(x+1)*(x-1)",
        "sqrt(sqrt(x))",
        "tanh(x)/x",
        "exp(x)/exp(-x)",
        "1-1/(4*z^2)",
        "x/2/3",
        "1+2+3+x",
        "-(-x)",
        "min(max(0,x),1)",
        "abs(x)+abs(x-1)",
    };
    for (const char* text : corpus) {
        INFO(text);
        Expr a = aaa::parse(text);
        Expr b = aaa::parse(aaa::print(a));
        CHECK(a == b);
    }
}

TEST_CASE("real inputs with real intermediates give exactly-real outputs") {
    for (const char* text : {"exp(x)", "tanh(100*x)", "x^3", "abs(x-0.95)", "max(0,x)",
                             "1/(1+exp(1000*(x+0.5)))", "exp((x-1)/(x+1))"}) {
        Expr e = aaa::parse(text);
        for (double x : {-0.99, -0.5, 0.0, 0.3, 0.77, 1.0})
            CHECK(aaa::eval(e, Complex(x, 0.0)).imag() == 0.0);
    }
}

TEST_CASE("IEEE limits: exp(-1/x^2) evaluates to 0 at x = 0") {
    Expr e = aaa::parse("exp(-1/x^2)");
    Complex v = aaa::eval(e, Complex(0.0, 0.0));
    CHECK(v.real() == 0.0);
    CHECK(v.imag() == 0.0);
}

TEST_CASE("sqrt branch values") {
    Expr e = aaa::parse("sqrt(1-z)");
    CHECK(std::abs(aaa::eval(e, Complex(1.0, 0.0))) == 0.0);
    // principal branch: just above/below the cut the signs differ
    Expr s = aaa::parse("sqrt(x)");
    Complex above = aaa::eval(s, Complex(-4.0, 1e-300));
    Complex below = aaa::eval(s, Complex(-4.0, -1e-300));
    CHECK(above.imag() == Approx(2.0));
    CHECK(below.imag() == Approx(-2.0));
    CHECK(std::abs(above + below) < 1e-12);
}

TEST_CASE("eq6 entry matches the direct two-factor product") {
    aaa::FunctionSpec f = aaa::catalog_function("two-branch-axis");
    const Complex a(-1.0, 10.0);
    for (double y : {-30.0, -9.7, 0.0, 2.2, 11.0}) {
        Complex z(0.0, y);
        Complex direct = 1.0 / (std::sqrt(z - a) * std::sqrt(z - std::conj(a)));
        CHECK(std::abs(f(z) - direct) <= 1e-14 * std::abs(direct));
    }
}

TEST_CASE("min and max reject non-real arguments") {
    Expr e = aaa::parse("max(0,x)");
    CHECK_THROWS_AS(aaa::eval(e, Complex(0.5, 0.25)), aaa::DomainError);
    CHECK(aaa::eval(e, Complex(0.5, 0.0)).real() == Approx(0.5));
}

TEST_CASE("catalog entries agree with independent reference evaluators") {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);

    const std::map<std::string, int> domain_of = {
        {"runge-exp", 0},    {"abs-x", 0},         {"exp-inv-sq", 0},  {"cmv", 0},
        {"fermi-dirac", 0},  {"tanh-100x", 0},     {"tanh-1000x", 0},  {"relu", 0},
        {"abs-shift", 0},    {"sqrt-branch", 1},   {"circle-branch", 1}, {"tan-z4", 1},
        {"tan-zm4", 1},      {"exp-4-over-z", 1},  {"abs-re-z", 1},    {"two-branch-axis", 2},
    };

    for (const auto& [name, text] : aaa::builtin_catalog()) {
        aaa::FunctionSpec f(text);
        const auto& ref = oracle::reference_catalog().at(name);
        const int dom = domain_of.at(name);
        INFO(name);
        int evaluated = 0;
        for (int k = 0; k < 1000; ++k) {
            Complex z;
            if (dom == 0)
                z = Complex(uni(rng), 0.0);
            else if (dom == 1)
                z = std::polar(1.0, ang(rng));
            else
                z = Complex(0.0, 40.0 * uni(rng));
            // keep clear of genuine singularities
            if (name == "exp-inv-sq" && std::abs(z) < 1e-2) continue;
            if (name == "cmv" && std::abs(z + 1.0) < 1e-2) continue;
            if (name == "sqrt-branch" && std::abs(z - 1.0) < 1e-8) continue;
            if (name == "tan-z4" && std::abs(std::cos(z * z * z * z)) < 1e-3) continue;
            if (name == "tan-zm4" && std::abs(std::cos(1.0 / (z * z * z * z))) < 1e-3) continue;
            const Complex a = f(z);
            const Complex b = ref(z);
            REQUIRE(aaa::detail::finite(a));
            CHECK(std::abs(a - b) <= 1e-14 * std::max({1e-280, std::abs(a), std::abs(b)}));
            ++evaluated;
        }
        CHECK(evaluated > 900);
    }
}
