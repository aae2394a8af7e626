// Jets, expressions and pointwise calculus.

#include <cmath>
#include <numbers>
#include <random>

#include "random_expr.hpp"
#include "support.hpp"

using namespace jdtest;

namespace {

const Chart R2({"x", "y"}, {{-1, 1}, {-1, 1}});
const Chart R3({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});

}  // namespace

TEST(Jet, ChainRuleMatchesHandDerivatives) {
  const JetVec x = seed(Point{0.3, -0.7});
  const Jet f = sin(x[0] * x[1]) + exp(x[0]) / x[1];
  const double a = 0.3, b = -0.7;
  EXPECT_NEAR(f.grad(0), b * std::cos(a * b) + std::exp(a) / b, 1e-14);
  EXPECT_NEAR(f.grad(1), a * std::cos(a * b) - std::exp(a) / (b * b), 1e-14);
  EXPECT_NEAR(f.hess(0, 1), std::cos(a * b) - a * b * std::sin(a * b) - std::exp(a) / (b * b), 1e-13);
  EXPECT_DOUBLE_EQ(f.hess(0, 1), f.hess(1, 0));
}

TEST(Jet, PartialLowersOrder) {
  const JetVec x = seed(Point{1.5});
  const Jet f = pow(x[0], 3);
  const Jet df = partial(f, 0);
  EXPECT_DOUBLE_EQ(df.value(), 3 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(df.grad(0), 6 * 1.5);
  EXPECT_EQ(df.order(), f.order() - 1);
  EXPECT_THROW((void)partial(partial(partial(f, 0), 0), 0), OrderError);
}

TEST(Expr, ConstantParses) {
  const Expr e = parse("0", R2);
  EXPECT_EQ(e.root()->op, Op::Literal);
  EXPECT_EQ(eval_jet(e, {0.4, 0.1}).value(), 0.0);
}

TEST(Expr, XSinYJet) {
  const Jet j = eval_jet(parse("x*sin(y)", R2), {2.0, std::numbers::pi / 2});
  EXPECT_NEAR(j.value(), 2.0, 1e-15);
  EXPECT_NEAR(j.grad(0), 1.0, 1e-15);
  EXPECT_NEAR(j.grad(1), 0.0, 1e-15);
}

TEST(Expr, UnbalancedParenthesisReportsEndOfInput) {
  try {
    (void)parse("x + (1", R2);
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);  // zero-based; column 7
    EXPECT_EQ(e.expected(), "')'");
  }
}

TEST(Expr, UnknownIdentifierLocated) {
  try {
    (void)parse("x + zeta", R2);
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Expr, ExpZeroHasNoDerivatives) {
  const Jet j = eval_jet(parse("exp(0)", R2), {0.3, 0.2});
  EXPECT_EQ(j.value(), 1.0);
  EXPECT_EQ(j.grad(0), 0.0);
  EXPECT_EQ(j.hess(0, 0), 0.0);
}

TEST(Expr, SquareDerivatives) {
  const Jet j = eval_jet(parse("x^2", std::vector<std::string>{"x"}), {3.0});
  EXPECT_EQ(j.value(), 9.0);
  EXPECT_EQ(j.grad(0), 6.0);
  EXPECT_EQ(j.hess(0, 0), 2.0);
}

TEST(Expr, DivisionByZeroIsADomainError) {
  const Expr e = parse("1/x", std::vector<std::string>{"x"});
  EXPECT_THROW((void)eval_jet(e, {0.0}), EvalError);
  EXPECT_THROW((void)eval_jet(parse("log(x)", std::vector<std::string>{"x"}), {-1.0}), EvalError);
}

TEST(Expr, ParametersBind) {
  const ScalarField f = field_from("k*x", R2, {{"k", 2.5}});
  EXPECT_DOUBLE_EQ(f({2.0, 0.0}).value(), 5.0);
}

TEST(ExprProperty, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> xyz{"x", "y", "z"};
  const auto pts = sample_points(R3, 5, 3);
  for (int k = 0; k < 300; ++k) {
    const Expr e = parse(random_expr(rng, 4), xyz);
    const std::string printed = to_string(e);
    const Expr again = parse(printed, xyz);
    EXPECT_EQ(to_string(again), printed);
    for (const auto& p : pts) EXPECT_NEAR(eval_jet(again, p).value(), eval_jet(e, p).value(), 1e-12) << printed;
  }
}

TEST(ExprProperty, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(12);
  const std::vector<std::string> xyz{"x", "y", "z"};
  const auto pts = sample_points(R3, 1000, 4);
  const double h = 1e-5;
  for (int k = 0; k < 1000; ++k) {
    const Expr e = parse(random_expr(rng, 4), xyz);
    const Point& p = pts[static_cast<std::size_t>(k)];
    const Jet j = eval_jet(e, p);
    for (int i = 0; i < 3; ++i) {
      Point a = p, b = p;
      a[static_cast<std::size_t>(i)] += h;
      b[static_cast<std::size_t>(i)] -= h;
      const double fd = (eval_jet(e, a).value() - eval_jet(e, b).value()) / (2 * h);
      EXPECT_LE(std::abs(fd - j.grad(i)), 1e-6 * std::max(1.0, std::abs(j.grad(i)))) << to_string(e);
    }
  }
}

TEST(Calculus, DOfConstantVanishes) {
  const Form w = d(scalar_form(constant_field(3.0, 2)({0.1, 0.2}), 2));
  EXPECT_EQ(max_abs(w), 0.0);
}

TEST(Calculus, DDOfXSinY) {
  const ScalarField f = F("x*sin(y)", R2);
  for (const auto& p : sample_points(R2, 10, 1)) EXPECT_LT(max_abs(d(d(scalar_form(f(p), 2)))), 1e-12);
}

TEST(Calculus, DOfXDy) {
  const FormField a = make_one_form({F("0", R2), F("x", R2)});
  for (const auto& p : sample_points(R2, 10, 2)) EXPECT_NEAR(d(a(p)).get({0, 1}).value(), 1.0, 1e-15);
}

TEST(Calculus, LieBracketExamples) {
  const VectorField dx = coordinate_vector(0, 2), dy = coordinate_vector(1, 2);
  const VectorField xdy = make_vector({F("0", R2), F("x", R2)});
  for (const auto& p : sample_points(R2, 10, 3)) {
    EXPECT_EQ(max_abs(lie_bracket(dx(p), dx(p))), 0.0);
    EXPECT_EQ(max_abs(lie_bracket(dx(p), dy(p))), 0.0);
    const Vec b = lie_bracket(xdy(p), dx(p));
    EXPECT_NEAR(b[0].value(), 0.0, 1e-15);
    EXPECT_NEAR(b[1].value(), -1.0, 1e-15);
  }
}

TEST(Calculus, LieDerivativeExamples) {
  const VectorField dx = coordinate_vector(0, 2);
  const FormField xdy = make_one_form({F("0", R2), F("x", R2)});
  const Point p{0.3, -0.4};
  const Form l = lie_derivative(dx(p), xdy(p));
  EXPECT_NEAR(l.get({0}).value(), 0.0, 1e-15);
  EXPECT_NEAR(l.get({1}).value(), 1.0, 1e-15);
  EXPECT_EQ(max_abs(lie_derivative(dx(p), coordinate_differential(1, 2)(p))), 0.0);
  EXPECT_EQ(max_abs(lie_derivative(dx(p), zero_form(2, 1)(p))), 0.0);
}

TEST(Calculus, InteriorAndWedge) {
  const Point p{0.2, 0.5};
  const Form dxdy = make_form(2, 2, {{{0, 1}, F("1", R2)}})(p);
  const Form i = interior(coordinate_vector(0, 2)(p), dxdy);
  EXPECT_EQ(i.get({0}).value(), 0.0);
  EXPECT_EQ(i.get({1}).value(), 1.0);
  const Form dx = coordinate_differential(0, 2)(p);
  EXPECT_EQ(max_abs(wedge(dx, dx)), 0.0);
  try {
    (void)interior(coordinate_vector(0, 2)(p), scalar_form(Jet(1.0), 2));
    FAIL() << "no DegreeError";
  } catch (const DegreeError& e) {
    EXPECT_STREQ(e.what(), "degree underflow");
  }
}

TEST(Calculus, SchoutenExamples) {
  const Point p{0.3, 0.6};
  const Multi c = make_multi(2, 2, {{{0, 1}, F("1", R2)}})(p);
  EXPECT_EQ(max_abs(schouten(c, c)), 0.0);

  const Chart tx({"theta", "x"}, {{0, 1}, {-1, 1}});
  const MultiField lam = make_multi(2, 2, {{{0, 1}, F("x", tx)}});  // ∂θ∧x∂x
  const VectorField e = coordinate_vector(0, 2);
  for (const auto& q : sample_points(tx, 10, 5)) {
    EXPECT_LT(max_abs(schouten_ve(e, lam)(q)), 1e-14);
    EXPECT_LT(jacobi_residual(lam, e, q), 1e-14);
  }

  // contact ℝ³: E = ∂z, Λ = (∂x + y∂z)∧∂y
  const MultiField L3 = make_multi(3, 2, {{{0, 1}, F("1", R3)}, {{1, 2}, F("-y", R3)}});
  const VectorField E3 = coordinate_vector(2, 3);
  for (const auto& q : sample_points(R3, 10, 6)) {
    const Multi l = L3(q);
    const Multi rhs = Jet(2.0) * wedge(as_multi(E3(q)), l);
    EXPECT_LT(max_abs(schouten(l, l) - rhs), 1e-14);
    EXPECT_LT(max_abs(schouten_ve(E3, L3)(q)), 1e-14);
  }
}

// Invariants on random fields at 100 points.
class CalculusProperty : public ::testing::Test {
 protected:
  std::mt19937_64 rng{21};
  std::vector<Point> pts = sample_points(R3, 100, 7);
  ScalarField rf() { return F(random_expr(rng, 3), R3); }
  VectorField rv() { return make_vector({rf(), rf(), rf()}); }
};

TEST_F(CalculusProperty, DDVanishes) {
  for (int k = 0; k < 10; ++k) {
    const ScalarField f = rf();
    const FormField a = make_one_form({rf(), rf(), rf()});
    for (const auto& p : pts) {
      EXPECT_LT(max_abs(d(d(scalar_form(f(p), 3)))), 1e-9);
      EXPECT_LT(max_abs(d(d(a(p)))), 1e-9);
    }
  }
}

TEST_F(CalculusProperty, JacobiIdentityOfLieBracket) {
  // three nested brackets need third derivatives, so the outer bracket is
  // taken between fields and an inner bracket field
  for (int k = 0; k < 5; ++k) {
    const VectorField X = rv(), Y = rv(), Z = rv();
    const VectorField xy = lie_bracket(X, Y), yz = lie_bracket(Y, Z), zx = lie_bracket(Z, X);
    for (const auto& p : pts) {
      const Vec s = lie_bracket(X(p), yz(p)) + lie_bracket(Y(p), zx(p)) + lie_bracket(Z(p), xy(p));
      // jets of the inner brackets lost one order, values are exact
      double w = 0.0;
      for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(s[i].value()));
      EXPECT_LT(w, 1e-9);
    }
  }
}

TEST_F(CalculusProperty, CartanFormula) {
  for (int k = 0; k < 5; ++k) {
    const VectorField X = rv();
    const FormField a = make_one_form({rf(), rf(), rf()});
    for (const auto& p : pts) {
      const Vec x = X(p);
      const Form w = a(p);
      EXPECT_LT(max_abs(lie_derivative(x, w) - interior(x, d(w)) - d(interior(x, w))), 1e-9);
    }
  }
}

TEST_F(CalculusProperty, LieDerivativeMatchesEulerFlow) {
  // (φ_h* a − φ_{−h}* a)/2h at a point, φ_h(p) = p + h X(p), against L_X a;
  // the symmetric quotient keeps the Euler step error at O(h²)
  const double h = 1e-4;
  for (int k = 0; k < 5; ++k) {
    const VectorField X = rv();
    const FormField a = make_one_form({rf(), rf(), rf()});
    for (std::size_t n = 0; n < 20; ++n) {
      const Point& p = pts[n];
      const Vec x = X(p);
      const auto pulled = [&](double step, int j) {
        // (φ* a)_j = Σ_i a_i(φ(p)) (δ_ij + step ∂_j X^i)
        Point q = p;
        for (int i = 0; i < 3; ++i) q[static_cast<std::size_t>(i)] += step * x[i].value();
        const Form aq = a(q);
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += aq.get({i}).value() * ((i == j ? 1.0 : 0.0) + step * x[i].grad(j));
        return s;
      };
      const Form l = lie_derivative(x, a(p));
      for (int j = 0; j < 3; ++j) {
        const double fd = (pulled(h, j) - pulled(-h, j)) / (2 * h);
        EXPECT_NEAR(fd, l.get({j}).value(), 1e-5 * std::max(1.0, std::abs(l.get({j}).value())));
      }
    }
  }
}

TEST(CalculusPoisson, InducedBracketSatisfiesJacobi) {
  // linear Poisson structure of so(3)*: Λ^{xy} = z, Λ^{yz} = x, Λ^{zx} = y
  const MultiField lam = make_multi(3, 2, {{{0, 1}, F("z", R3)}, {{1, 2}, F("x", R3)}, {{0, 2}, F("-y", R3)}});
  const std::vector<ScalarField> fs{F("x*y + sin(z)", R3), F("exp(x)*z", R3), F("y^2 - x*z", R3)};
  // {f,g} = Λ(df,dg) as a field, then bracketed again
  const auto bracket = [&](const ScalarField& f, const ScalarField& g) -> ScalarField {
    return [lam, f, g](const Point& p) {
      return contract(lam(p), d(scalar_form(f(p), 3)), d(scalar_form(g(p), 3)));
    };
  };
  for (const auto& p : sample_points(R3, 100, 8)) {
    EXPECT_LT(max_abs(schouten(lam(p), lam(p))), 1e-12);
    const double j = bracket(fs[0], bracket(fs[1], fs[2]))(p).value() + bracket(fs[1], bracket(fs[2], fs[0]))(p).value() +
                     bracket(fs[2], bracket(fs[0], fs[1]))(p).value();
    EXPECT_LT(std::abs(j), 1e-9);
  }
}
