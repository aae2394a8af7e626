#pragma once

#include <vector>

#include "jd/courant.hpp"

namespace jd {

// A free action on M by generator fields, with a slice chart for the quotient
// given by a submersion p: M -> M/G.
struct CotangentAction {
  Chart M;
  std::vector<VectorField> generators;
  MapField quotient;
  int reduced_dim = 0;
};

// <J(ξ,t), v> = ξ(v_M)
double cotangent_moment(const VecX& xi, double t, const VecX& v_m);

// Checks on T*M×ℝ at level zero: the zero level consists of basic covectors,
// the parametrization (x, μ, t) ↦ (x, p*μ, t) stays inside it, and the
// canonical 1-form θ_c + dt restricts to the pullback of the reduced one.
Report cotangent_reduce(const CotangentAction& act, const std::vector<Point>& points, std::uint64_t seed,
                        double tol = 1e-9);

// <J((X,f)⊕(ξ,g)), v> = ξ(v_Q)
double jd_moment(const E1Value& value, const Vec& v_q);
double jd_moment(const VecX& flat, const VecX& v_q, int dim_q);

struct ZeroLevelRank {
  std::vector<int> ranks;  // dim(L̄ ∩ (v_Q,0)⊕(0,0)) per sample
  bool constant = true;
  Report report;
};

// Only a necessary check: a rank jump between samples proves the intersection
// is not of constant rank, agreement on samples does not prove the converse.
ZeroLevelRank zero_level_rank(const StructureFrame& lbar, const VectorField& v_q, const std::vector<Point>& points);

// J⁻¹(0) fiber at q: frame elements with ξ(v_Q) = 0, as columns.
Mat zero_level(const StructureFrame& lbar, const VectorField& v_q, const Point& q);

struct ReductionTarget {
  MapField pi;                 // Q -> P
  StructureFrame expected;     // structure on P expected as the image
  const StructureFrame* zero_level_expected = nullptr;  // e.g. L̄₀, also enables the codimension check
};

// Image of J⁻¹(0) under (X,f)⊕(ξ,g) ↦ (π_*X, f)⊕(μ, g), π*μ = ξ, compared
// with the expected structure on P; optionally J⁻¹(0) against a frame on Q.
Report reduce_Lbar(const StructureFrame& lbar, const VectorField& v_q, const ReductionTarget& target,
                   const std::vector<Point>& points, double tol = 1e-9);

// θ_L̄ = pr*(θ_c + dt) on the total space of the frame, restricted to tangent
// vectors of J⁻¹(0), against the reduced form composed with the reduction.
Report theta_match(const StructureFrame& lbar, const VectorField& v_q, const MapField& pi,
                   const std::vector<Point>& points, std::uint64_t seed, double tol = 1e-9);

}  // namespace jd
