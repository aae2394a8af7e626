#pragma once

#include "jd/courant.hpp"

namespace jd {

// Symplectic chart (P, ω) with a connection potential a, da = ω, on the
// trivial line bundle. The total chart is P × (t, u, v) with q = u + iv.
struct VorobjevData {
  Chart P;
  TwoForm omega;
  OneForm potential;
  Chart total;
};

// Total chart with t in t_range and (u, v) in the fiber box. Samples of the
// leaf check must stay away from u = v = 0.
VorobjevData vorobjev_data(const Chart& P, TwoForm omega, OneForm potential, Interval t_range = {-0.5, 0.5},
                           Interval fiber = {0.3, 1.5});

// P = ℝ², ω = dx∧dy, a = ½(x dy − y dx).
VorobjevData vorobjev_plane();

// Π = 2π(u∂v − v∂u)∧∂t + (1−t)⁻¹ Σ_{i<j} Λ^{ij} Xᵢᴴ∧Xⱼᴴ with Λ = −ω⁻¹ and
// Xᴴ = X − 2π a(X)(u∂v − v∂u). Throws StructureError where t ≥ 1 or ω is
// degenerate.
BivectorField build_vorobjev(const VorobjevData& data);

// Leaf form Ω = d((1−t)θ), θ = dφ + a, dφ = (u dv − v du)/(2π(u² + v²)).
FormField vorobjev_leaf_form(const VorobjevData& data);

// [Π, Π] = 0.
Report check_poisson(const BivectorField& pi, const std::vector<Point>& points, double tol = 1e-8);

// Π♯(i_w Ω) = w on leaf tangents w ∈ ker d(u²+v²), d(u²+v²) is a Casimir,
// the vertical part, dθ = π*ω, and the P block at t = 0 inverting ω.
Report leaf_form_check(const VorobjevData& data, const std::vector<Point>& points, double tol = 1e-7);

}  // namespace jd
