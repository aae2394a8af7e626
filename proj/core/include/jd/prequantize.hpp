#pragma once

#include <string>
#include <vector>

#include "jd/courant.hpp"

namespace jd {

// Prequantization data on a trivialized circle bundle Q = P × S¹. The angle is
// the last coordinate of Q with period 1, E = ∂θ, and σ = dθ + π*a.
struct PreqInput {
  Chart P;
  Chart Q;
  StructureFrame L;  // Dirac frame on P
  TwoForm Omega;     // on P
  VectorField A;     // on P
  OneForm alpha;     // on P
  OneForm sigma;     // on Q
};

Chart circle_bundle(const Chart& P, const std::string& angle = "theta");

// β(s) = 2<A⊕α, s>_+ = α(X) + ξ(A), as a field on P.
ScalarField beta_of(const PreqInput& in, const E1Section& s);

// The connection potential a with σ = dθ + π*a, read on the slice θ = 0.
OneForm potential(const PreqInput& in);

// Values of P-side data lifted into Q jets.
E1Value lift_to_Q(const E1Value& v, int dim_q);

// Ω(ρs_i,ρs_j) − Υ(s_i,s_j) − d_Lβ(s_i,s_j) over frame pairs, plus dΩ = 0,
// dσ = π*Ω, σ(E) = 1 and invariance of σ under E.
Report check_preq_condition(const PreqInput& in, const std::vector<Point>& p_points,
                            const std::vector<Point>& q_points, double tol = 1e-9);

// Horizontal lift plus vertical correction: h_Q = X^H + (<X⊕ξ,β> − g)E.
VecX anchor_hQ(const PreqInput& in, const VecX& X, const VecX& xi, double g, const Point& q);

// I(X,ξ,g) = (h_Q(X,ξ,g), 0) ⊕ (π*ξ, g); s carries (X, ξ) and g on P.
E1Section lift_I(const PreqInput& in, E1Section s);
VecX lift_I_value(const PreqInput& in, const VecX& X, const VecX& xi, double g, const Point& q);

StructureFrame build_Lbar(const PreqInput& in);
StructureFrame build_Lbar0(const PreqInput& in);

// L̄ at q for pointwise values of A and α (no derivatives are needed).
Mat Lbar_matrix(const PreqInput& in, const Point& q, const VecX& A, const VecX& alpha);

struct AAlphaSolution {
  VecX A;
  VecX alpha;
  double equation_residual = 0.0;  // max_i |2<v,s_i>_+ − β(s_i)|
  double isotropy = 0.0;           // |<v,v>_+|
};

// Least-norm solution of 2<v,s_i>_+ = β_i followed by the isotropy
// correction inside L. shift (coefficients on the frame, orthogonal to β) is
// added afterwards to produce a second solution.
AAlphaSolution solve_A_alpha(const StructureFrame& L, const std::vector<double>& beta, const Point& p,
                             const VecX& shift = VecX());

Report morphism_check_I(const PreqInput& in, const std::vector<Point>& q_points, double tol = 1e-9);

struct Extensions {
  Mat first;
  Mat second;
  int isotropic_lines = 0;
  int with_unit = -1;      // 0 or 1: which extension contains (0,0)⊕(0,1)
  double unit_residual = 0.0;
};

Extensions two_extensions(const StructureFrame& lbar0, const Point& q);

// A section of the trivial line bundle K, as a complex function on P.
struct LineSection {
  ScalarField re;
  ScalarField im;
};

// F_S(p,θ) = Re(e^{2πiθ} conj(s(p))) as a field on Q.
ScalarField F_of(const PreqInput& in, const LineSection& s);

Report function_bracket_laws(const PreqInput& in, const LineSection& s, const std::vector<ScalarField>& fs,
                             const std::vector<Point>& q_points, double tol = 1e-8);

Report flat_connection_check(const PreqInput& in, const LineSection& s, const std::vector<Point>& p_points,
                             double tol = 1e-8);

// Pushes L̄ through Φ(p,θ) = (p, θ+φ(p)) and compares with L̄ built from
// σ − π*dφ. With against_unshifted the comparison target is L̄ itself.
Report gauge_transform(const PreqInput& in, const ScalarField& phi, const std::vector<Point>& q_points,
                       double tol = 1e-8, bool against_unshifted = false);

// pushforward(L̄, π) = L^c at π(q).
Report pushforward_check(const PreqInput& in, const std::vector<Point>& q_points, double tol = 1e-9);

MapField bundle_projection(const PreqInput& in);

}  // namespace jd
