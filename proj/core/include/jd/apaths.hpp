#pragma once

#include <functional>
#include <vector>

#include "jd/groupoids.hpp"
#include "jd/prequantize.hpp"

namespace jd {

// A frame read as a Lie algebroid: anchor = X block, brackets by the frame
// bracket of the structure kind.
struct AlgebroidModel {
  StructureFrame frame;

  int rank() const { return frame.rank(); }
  Mat anchor(const Point& p) const;                        // dim × rank
  VecX value(const Point& p, const VecX& coeffs) const;    // flattened element
};

// [s_i, s_j] = Σ_k c[k](i, j) s_k, fitted by least squares at a point.
struct StructureFunctions {
  std::vector<Mat> c;
  double residual = 0.0;  // worst normalized fit residual over all pairs
};
StructureFunctions structure_functions(const AlgebroidModel& model, const Point& p);

using CoefficientPath = std::function<VecX(double)>;

struct APath {
  std::vector<double> t;
  std::vector<VecX> a;         // frame coefficients per node
  std::vector<Point> gamma;    // base path
  std::vector<VecX> element;   // flattened algebroid element per node
  StructureKind kind = StructureKind::Dirac;
  int dim = 0;                 // base dimension
  CoefficientPath coeffs;

  int nodes() const { return static_cast<int>(t.size()) - 1; }
  // Blocks of the element at node i; for Jacobi-Dirac frames X = a₄, f = a₃,
  // ξ = a₁, g = a₀.
  E1Blocks blocks(int i) const { return split(element[static_cast<std::size_t>(i)], dim, kind); }
};

// RK4 solve of dγ/dt = ρ(a(t)) on [0, 1] with n steps. Throws StructureError
// when the path leaves the chart box by more than its width.
APath integrate_base(const AlgebroidModel& model, const CoefficientPath& a, const Point& gamma0, int n = 1000);

// Max over nodes of |(γᵢ₊₁ − γᵢ)/Δt − ρ(a(tᵢ₊½))| at the midpoint of the chord.
double apath_defect(const AlgebroidModel& model, const APath& path);

// Composite Simpson on the nodes; n must be even.
double simpson(const std::vector<double>& values, double h);

// e^{−∫a₃} for a Jacobi-Dirac path.
double f_tilde(const APath& path);
// ∫⟨a₁, E⟩ dt.
double moment_integral(const APath& path, const VectorField& e);

// a ⋆ b, each run at double speed.
CoefficientPath concatenate(const CoefficientPath& a, const CoefficientPath& b);

// Solves dg/dt = left-invariant extension of a(t) through g, g(0) = unit(γ₀),
// with the extension built from ker t_* at unit(s(g)) via iso_seventeen.
// Throws StructureError if the groupoid's algebroid does not span the frame
// at γ₀.
Point develop(const GroupoidChart& g, const AlgebroidModel& model, const CoefficientPath& a, const Point& gamma0,
              int n = 1000);

// Path in L ⊕ ℝ on P: coefficients on the frame of L, then the ℝ component.
struct LiftedPath {
  std::vector<Point> q;          // lift on Q
  std::vector<VecX> element;     // I(a(tᵢ)) flattened, on Q
};

// dq/dt = h_Q(a(t), q) by RK4.
LiftedPath lift_apath(const PreqInput& in, const APath& path, const Point& q0);

// π(lift) against the base path, the coefficients recovered from I(a) against
// a, and rotating the start point by c against rotating the lift.
Report lift_checks(const PreqInput& in, const APath& path, const Point& q0, double rotation, double tol_projection = 1e-7,
                   double tol_equivariance = 1e-8);

// Frame coefficient grids over a common base grid; index [i][j] is (tᵢ, sⱼ).
struct HomotopyGrid {
  std::vector<double> t, s;
  std::vector<std::vector<VecX>> a, b;
  std::vector<std::vector<Point>> base;
};

// ∇_V s_i = Σ_k M(k, i) s_k with M = conn(p, V); default flat in the frame.
using FrameConnection = std::function<Mat(const Point&, const VecX&)>;

// ∂_t b − ∂_s a − T_∇(a, b) at interior nodes by central differences, the
// start condition b(0, s) = 0 and the endpoint condition b(1, s) = 0.
Report homotopy_residual(const AlgebroidModel& model, const HomotopyGrid& grid, double tol,
                         const FrameConnection& conn = nullptr, bool expect_failure = false);

// a(s,t) = τ′_s(t) a₀(τ_s(t)), b = ∂_sτ_s(t) a₀(τ_s(t)) with τ_s(t) = t + s·t(1−t)/2,
// base from integrating a(s,·) from γ₀.
HomotopyGrid reparametrization_homotopy(const AlgebroidModel& model, const CoefficientPath& a0, const Point& gamma0,
                                        int nt, int ns);

// Tensor midpoint rule of Σ*ω over [0,1]². Throws StructureError unless both
// edge pairs of the parameter square either match or collapse to points.
struct PeriodIntegral {
  double value = 0.0;
  double seam = 0.0;  // worst edge mismatch
};
PeriodIntegral period_integral(const TwoForm& omega, const MapField& surface, int nu = 400, int nv = 400);

// Distance of the value to the nearest integer against tol.
CheckRecord prequantizability(const std::string& id, double value, double tol, bool expect_failure = false);

// Unit sphere in ℝ³ with polar angle π(u − sin(2πu)/2π), azimuth 2πv.
MapField unit_sphere();
// (1/4π)(x dy∧dz + y dz∧dx + z dx∧dy), times scale.
TwoForm normalized_area_form(double scale = 1.0);

}  // namespace jd
