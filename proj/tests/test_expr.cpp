#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "jetgeo/expr.hpp"

using namespace jetgeo;

namespace {

double at(std::string_view text, std::vector<double> p) {
  return eval(parse_expr(text, static_cast<int>(p.size())), p);
}

const char* kSamples[] = {
    "x1",
    "4/(1+x1^2+x2^2)^2",
    "sin(x1*x2) + cos(x2)^2",
    "exp(-x1^2) * log(2 + x2)",
    "sqrt(1 + x1^2) / (3 - x2)",
    "x1^3 - 2*x1*x2 + 0.25*x2^4",
    "tan(0.3*x1) - -x2",
    "-x1^2",
    "(x1 - x2) - (x1 + x2)",
    "2^-x1",
};

}  // namespace

TEST(Parse, Variable) {
  const Expr e = parse_expr("x1", 2);
  EXPECT_EQ(e.op(), Expr::Op::kVar);
  EXPECT_EQ(e.variable_index(), 0);
}

TEST(Parse, StereographicFactorAtOrigin) { EXPECT_DOUBLE_EQ(at("4/(1+x1^2+x2^2)^2", {0, 0}), 4.0); }

TEST(Parse, UnknownFunction) {
  try {
    parse_expr("foo(x1)", 1);
    FAIL() << "no error";
  } catch (const UnknownIdentifierError& e) {
    EXPECT_EQ(e.name(), "foo");
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Parse, UnknownVariableOutsideDimension) { EXPECT_THROW(parse_expr("x1 + x3", 2), UnknownIdentifierError); }

TEST(Parse, SyntaxErrorOffsets) {
  try {
    parse_expr("x1 + * x2", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(parse_expr("(x1 + x2", 2), ParseError);
  EXPECT_THROW(parse_expr("x1 x2", 2), ParseError);
  EXPECT_THROW(parse_expr("", 2), ParseError);
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(at("-x1^2", {3}), -9.0);
  EXPECT_DOUBLE_EQ(at("2^3^2", {0}), 512.0);
  EXPECT_DOUBLE_EQ(at("8/4/2", {0}), 1.0);
  EXPECT_DOUBLE_EQ(at("1 - 2 - 3", {0}), -4.0);
  EXPECT_DOUBLE_EQ(at("2*x1^2", {3}), 18.0);
}

TEST(Parse, CustomCoordinateNames) {
  const std::vector<std::string> names{"r", "theta"};
  const Expr e = parse_expr("r^2*sin(theta)", names);
  const double p[] = {2.0, std::numbers::pi / 2};
  EXPECT_DOUBLE_EQ(eval(e, p), 4.0);
  EXPECT_EQ(to_string(e, names), "r^2*sin(theta)");
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(at("x1*x2", {2, 3}), 6.0);
  EXPECT_DOUBLE_EQ(at("sin(x1)", {0}), 0.0);
  EXPECT_NEAR(at("4/(1-x1^2-x2^2)^2", {0.5, 0}), 4.0 / (0.75 * 0.75), 1e-14);
}

TEST(Eval, DomainErrors) {
  EXPECT_THROW(at("1/x1", {0}), DomainError);
  EXPECT_THROW(at("log(x1)", {0}), DomainError);
  EXPECT_THROW(at("log(x1)", {-1}), DomainError);
  EXPECT_THROW(at("sqrt(x1)", {-1}), DomainError);
}

TEST(Diff, Examples) {
  const double three[] = {3.0};
  EXPECT_DOUBLE_EQ(eval(diff(parse_expr("x1^2", 1), 0), three), 6.0);
  const double p[] = {1.0, std::numbers::pi};
  EXPECT_NEAR(eval(diff(parse_expr("sin(x1*x2)", 2), 1), p), -1.0, 1e-15);
  const Expr d = diff(parse_expr("x2", 2), 0);
  EXPECT_TRUE(d.is_constant(0.0));
}

TEST(Diff, AgreesWithFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const char* text : kSamples) {
    const Expr e = parse_expr(text, 2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> p{u(rng), u(rng)};
      for (int v = 0; v < 2; ++v) {
        const double h = 1e-5;
        auto q = p;
        q[v] += h;
        const double fp = eval(e, q);
        q[v] -= 2 * h;
        const double fm = eval(e, q);
        EXPECT_NEAR(eval(diff(e, v), p), (fp - fm) / (2 * h), 1e-7 * (1 + std::abs(fp))) << text;
      }
    }
  }
}

TEST(Diff, MemoisedDifferentiatorMatchesPlainDiff) {
  Differentiator d;
  const double p[] = {0.3, -0.4};
  for (const char* text : kSamples) {
    const Expr e = parse_expr(text, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_NEAR(eval(d(d(e, a), b), p), eval(diff(diff(e, a), b), p), 1e-12) << text;
  }
}

TEST(Diff, MixedPartialsCommute) {
  const double p[] = {0.2, 0.7};
  for (const char* text : kSamples) {
    const Expr e = parse_expr(text, 2);
    EXPECT_NEAR(eval(diff(diff(e, 0), 1), p), eval(diff(diff(e, 1), 0), p), 1e-12) << text;
  }
}

TEST(Print, RoundTrip) {
  const double p[] = {0.3, -0.6};
  for (const char* text : kSamples) {
    const Expr e = parse_expr(text, 2);
    const std::string s = to_string(e);
    const Expr back = parse_expr(s, 2);
    EXPECT_EQ(to_string(back), s) << text;
    EXPECT_DOUBLE_EQ(eval(back, p), eval(e, p)) << s;
  }
}

TEST(Print, Minimal) {
  EXPECT_EQ(to_string(parse_expr("(x1+x2)*x1", 2)), "(x1 + x2)*x1");
  EXPECT_EQ(to_string(parse_expr("x1 - (x2 - x1)", 2)), "x1 - (x2 - x1)");
  EXPECT_EQ(to_string(parse_expr("((x1))", 1)), "x1");
}

TEST(Construction, FoldsIdentities) {
  const Expr x = Expr::variable(0);
  EXPECT_EQ((x + 0.0).id(), x.id());
  EXPECT_EQ((1.0 * x).id(), x.id());
  EXPECT_TRUE((0.0 * x).is_constant(0.0));
  EXPECT_EQ(pow(x, 1.0).id(), x.id());
  EXPECT_TRUE((Expr(2.0) * Expr(3.0)).is_constant(6.0));
  EXPECT_EQ((-(-x)).id(), x.id());
}

TEST(Substitute, ComposesWithEval) {
  const Expr e = parse_expr("x1^2 + sin(x2)", 2);
  const Expr vals[] = {parse_expr("x1 + x2", 2), parse_expr("2*x1", 2)};
  const Expr s = substitute(e, vals);
  const double p[] = {0.4, 0.1};
  EXPECT_NEAR(eval(s, p), std::pow(0.5, 2) + std::sin(0.8), 1e-15);
}

TEST(Program, MatchesEval) {
  std::vector<Expr> outs;
  for (const char* text : kSamples) outs.push_back(parse_expr(text, 2));
  for (const char* text : kSamples) outs.push_back(diff(parse_expr(text, 2), 1));
  const Program prog(outs);
  const double p[] = {0.35, 0.45};
  const auto vals = prog.run(p);
  ASSERT_EQ(vals.size(), outs.size());
  for (std::size_t i = 0; i < outs.size(); ++i) EXPECT_DOUBLE_EQ(vals[i], eval(outs[i], p));
}

TEST(Program, DomainErrorPropagates) {
  const Expr outs[] = {parse_expr("log(x1)", 1)};
  const Program prog(outs);
  const double p[] = {-1.0};
  EXPECT_THROW(prog.run(p), DomainError);
}
