// A-paths: base integration, development into the groupoid, lifts and
// homotopies, period integrals.

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace jdtest;

namespace {

constexpr double kPi = std::numbers::pi;

// c0 + c1 sin 2πt + c2 cos 2πt per coefficient
CoefficientPath random_path(int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Mat c(rank, 3);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = u(rng);
  return [c](double t) {
    return VecX(c.col(0) + c.col(1) * std::sin(2 * kPi * t) + c.col(2) * std::cos(2 * kPi * t));
  };
}

// f-block of a Jacobi-Dirac element on a 1-dimensional base set to a3(t)
APath synthetic_path(const std::function<double(double)>& a3, int n) {
  APath p;
  p.kind = StructureKind::JacobiDirac;
  p.dim = 1;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    p.t.push_back(t);
    VecX e = VecX::Zero(4);
    e(1) = a3(t);
    p.element.push_back(e);
    p.gamma.push_back({0.0});
    p.a.push_back(VecX::Zero(1));
  }
  return p;
}

class OneDimPaths : public ::testing::Test {
 protected:
  GroupoidChart g = example_1dim();
  AlgebroidModel model{lbar_1dim(g.base)};
  std::vector<Point> starts = sample_points(Chart({"x", "theta"}, {{-1, 1}, {0, 1}}), 20, 40);
};

}  // namespace

TEST(Simpson, ExactOnCubics) {
  const int n = 10;
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    v.push_back(t * t * t - 2 * t + 1);
  }
  EXPECT_NEAR(simpson(v, 1.0 / n), 0.25 - 1.0 + 1.0, 1e-14);
}

TEST(FTilde, ClosedForms) {
  for (double c : {-1.0, 0.0, 0.3, 2.0}) EXPECT_NEAR(f_tilde(synthetic_path([c](double) { return c; }, 100)), std::exp(-c), 1e-14);
  EXPECT_NEAR(f_tilde(synthetic_path([](double t) { return t; }, 100)), std::exp(-0.5), 1e-14);
}

TEST(StructureFunctions, FitTheFrame) {
  const AlgebroidModel m{lbar_1dim(Chart({"x", "theta"}, {{-2, 2}, {0, 1}}, {0, 1}))};
  for (const auto& p : sample_points(m.frame.chart, 30, 41)) EXPECT_LT(structure_functions(m, p).residual, 1e-10);
}

TEST_F(OneDimPaths, ZeroPathDevelopsToUnit) {
  const CoefficientPath zero = [this](double) { return VecX(VecX::Zero(model.rank())); };
  const Point q0{0.3, 0.2};
  const APath path = integrate_base(model, zero, q0, 100);
  EXPECT_LT(max_diff(path.gamma.back(), q0), 1e-15);
  EXPECT_DOUBLE_EQ(f_tilde(path), 1.0);
  EXPECT_LT(max_diff(develop(g, model, zero, q0, 100), values(g.unit(seed(q0)))), 1e-14);
}

TEST_F(OneDimPaths, BasePathFollowsTheAnchor) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 5; ++k) {
    // the chord-midpoint defect is second order in the step
    const CoefficientPath a = random_path(model.rank(), rng);
    const double e1 = apath_defect(model, integrate_base(model, a, starts[k], 500));
    const double e2 = apath_defect(model, integrate_base(model, a, starts[k], 1000));
    EXPECT_LT(e2, 1e-5);
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.2);
  }
}

TEST_F(OneDimPaths, FTildeMatchesDevelopment) {
  std::mt19937_64 rng(43);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const CoefficientPath a = random_path(model.rank(), rng);
    const APath path = integrate_base(model, a, starts[k], 1000);
    const Point end = develop(g, model, a, starts[k], 1000);
    worst = std::max(worst, std::abs(g.f(end).value() - f_tilde(path)));
    // the developed arrow starts at γ(0) and ends over γ(1)
    EXPECT_LT(max_diff(values(g.target(seed(end))), path.gamma.front()), 1e-6);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST_F(OneDimPaths, RungeKuttaOrderIsFour) {
  // periodic coefficients superconverge, so use c0 + c1 t + c2 e^{2t}
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Mat c(model.rank(), 3);
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = u(rng);
  const CoefficientPath a = [c](double t) { return VecX(c.col(0) + c.col(1) * t + c.col(2) * std::exp(2 * t)); };
  const Point ref = develop(g, model, a, starts[0], 2048);
  std::vector<double> err;
  for (int steps : {16, 32, 64}) err.push_back(max_diff(develop(g, model, a, starts[0], steps), ref));
  EXPECT_NEAR(std::log2(err[0] / err[1]), 4.0, 0.5);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 4.0, 0.5);
}

TEST_F(OneDimPaths, ZeroMomentPathsLandOnTheZeroLevel) {
  std::mt19937_64 rng(45);
  const VectorField e = coordinate_vector(1, 2);
  for (int k = 0; k < 5; ++k) {
    const CoefficientPath base = random_path(model.rank(), rng);
    const CoefficientPath a = [base](double t) {
      VecX v = base(t);
      v(1) -= 0.5 * (base(0.0)(1) + base(0.5)(1));
      return v;
    };
    const APath path = integrate_base(model, a, starts[k], 1000);
    EXPECT_LT(std::abs(moment_integral(path, e)), 1e-6);
    EXPECT_NEAR(g.f(develop(g, model, a, starts[k], 1000)).value(), 1.0, 1e-6);
  }
}

TEST_F(OneDimPaths, ConcatenationMultiplies) {
  std::mt19937_64 rng(46);
  const CoefficientPath a = random_path(model.rank(), rng), b = random_path(model.rank(), rng);
  const Point q0 = starts[0];
  const Point ga = develop(g, model, a, q0, 1000);
  const Point gb = develop(g, model, b, values(g.source(seed(ga))), 1000);
  const Point gab = develop(g, model, concatenate(a, b), q0, 1000);
  EXPECT_LT(max_diff(values(g.multiply(seed(ga), seed(gb))), gab), 1e-5);

  const APath pa = integrate_base(model, a, q0, 1000);
  const APath pb = integrate_base(model, b, pa.gamma.back(), 1000);
  const APath pab = integrate_base(model, concatenate(a, b), q0, 1000);
  EXPECT_NEAR(f_tilde(pab), f_tilde(pa) * f_tilde(pb), 1e-8);
}

TEST_F(OneDimPaths, ReparametrizationIsAHomotopy) {
  std::mt19937_64 rng(47);
  const CoefficientPath a = random_path(model.rank(), rng);
  const HomotopyGrid coarse = reparametrization_homotopy(model, a, starts[0], 40, 10);
  const HomotopyGrid fine = reparametrization_homotopy(model, a, starts[0], 80, 20);
  const Report rc = homotopy_residual(model, coarse, 1.0), rf = homotopy_residual(model, fine, 1.0);
  const double e1 = rc.find("homotopy-equation")->max_residual, e2 = rf.find("homotopy-equation")->max_residual;
  // central differences: the residual shrinks like h²
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.5);
  for (const auto& rec : rf.records)
    if (rec.id != "homotopy-equation") EXPECT_LT(rec.max_residual, 1e-12) << rec.id;

  HomotopyGrid bent = coarse;
  for (std::size_t i = 0; i < bent.t.size(); ++i)
    for (std::size_t j = 0; j < bent.s.size(); ++j) bent.a[i][j](0) += bent.s[j] * bent.t[i] * (1.0 - bent.t[i]);
  const Report ctl = homotopy_residual(model, bent, 10.0 * e1, nullptr, true);
  EXPECT_GT(ctl.find("homotopy-equation")->max_residual, 10.0 * e1);
  EXPECT_TRUE(ctl.find("homotopy-equation")->pass);
}

TEST(Lift, ProjectsAndCommutesWithRotation) {
  const PreqInput in = preq_1dim();
  const AlgebroidModel lc{diracization(in.L)};
  const CoefficientPath a = [](double t) {
    VecX v(2);
    v << 0.4 * std::cos(2 * kPi * t), 0.25;
    return v;
  };
  const APath path = integrate_base(lc, a, {0.2}, 1000);
  const Report r = lift_checks(in, path, {0.2, 0.1}, 0.37, 1e-7, 1e-8);
  EXPECT_TRUE(passes(r));
  EXPECT_GE(r.records.size(), 2u);
}

TEST(Lift, PlaneModel) {
  const PreqInput in = preq_plane();
  const AlgebroidModel lc{diracization(in.L)};
  std::mt19937_64 rng(48);
  const APath path = integrate_base(lc, random_path(lc.rank(), rng), {0.1, -0.2}, 1000);
  EXPECT_TRUE(passes(lift_checks(in, path, {0.1, -0.2, 0.6}, 0.21, 1e-7, 1e-8)));
}

TEST(Sphere, NormalizedAreaHasPeriodOne) {
  const PeriodIntegral pi = period_integral(normalized_area_form(), unit_sphere());
  EXPECT_NEAR(pi.value, 1.0, 1e-6);
  EXPECT_LT(pi.seam, 1e-12);
  EXPECT_TRUE(prequantizability("s2", pi.value, 1e-6).pass);
}

TEST(Sphere, ScaledFormIsNotIntegral) {
  const PeriodIntegral pi = period_integral(normalized_area_form(1.5), unit_sphere());
  EXPECT_NEAR(pi.value, 1.5, 1e-6);
  const CheckRecord strict = prequantizability("s2-scaled", pi.value, 1e-6);
  EXPECT_FALSE(strict.pass);
  EXPECT_TRUE(prequantizability("s2-scaled", pi.value, 1e-6, true).pass);
}

TEST(Sphere, OpenSurfaceIsRejected) {
  const MapField cap = [](const Point& uv) {
    const JetVec x = seed(uv);
    return JetVec{x[0], x[1], x[0] * x[1]};
  };
  EXPECT_THROW(period_integral(normalized_area_form(), cap, 20, 20), StructureError);
}
