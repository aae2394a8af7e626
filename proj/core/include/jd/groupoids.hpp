#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "jd/courant.hpp"

namespace jd {

// Building blocks of a product groupoid. Index lists refer to coordinates of
// the groupoid chart; base indices to coordinates of the base chart.
//   Pair:   gamma = {target copy, source copy}
//   Group:  gamma = {coordinate}; additive group ℝ, no base coordinate
//   Action: gamma = {time, point}; flow of rate·x∂x, s = x, t = e^{rate·time} x
//   Unit:   gamma = {coordinate}; trivial groupoid, s = t = x
enum class FactorKind { Pair, Group, Action, Unit };

struct Factor {
  FactorKind kind = FactorKind::Pair;
  std::vector<int> gamma;
  int base = -1;
  double rate = 0.0;
};

std::string to_string(FactorKind k);

// A groupoid chart with a precontact payload (θ_Γ, f_Γ) or a presymplectic
// payload Ω_Γ. Composable pairs and triples are parametrized explicitly.
struct GroupoidChart {
  std::string name;
  Chart gamma;
  Chart base;
  std::vector<Factor> factors;

  OneForm theta;
  ScalarField f;
  TwoForm omega;
  VectorField v;                    // optional circle action generator
  std::vector<VecX> deck;           // translations the structure must be invariant under
  std::vector<Point> extra_points;  // slices that must be sampled, e.g. {x = 0}

  bool precontact() const { return static_cast<bool>(theta); }

  JetVec source(const JetVec& g) const;
  JetVec target(const JetVec& g) const;
  JetVec unit(const JetVec& q) const;
  JetVec inverse(const JetVec& g) const;
  JetVec multiply(const JetVec& g, const JetVec& h) const;

  Chart pair_chart() const;
  std::pair<JetVec, JetVec> pair_at(const JetVec& c) const;
  // Triples can exceed the chart capacity, so they get a bare box.
  std::vector<Interval> triple_box() const;
  std::array<JetVec, 3> triple_at(const JetVec& c) const;

  MapField source_map() const;
  MapField target_map() const;

  void validate() const;  // throws std::invalid_argument
};

// Unit, composability, source/target of products, associativity, inverses.
Report check_structure(const GroupoidChart& g, int samples, std::uint64_t seed, double tol = 1e-9);

// m*θ = pr₁*θ·pr₂*f + pr₂*θ and f(gh) = f(g)f(h), or m*Ω = pr₁*Ω + pr₂*Ω.
Report check_multiplicativity(const GroupoidChart& g, const std::vector<Point>& pair_points, double tol = 1e-9);

// ker t_* ∩ ker s_* ∩ ker θ ∩ ker dθ = 0 (all four on TΓ), or ker t_* ∩ ker s_* ∩ ker Ω = 0.
Report check_nondegeneracy(const GroupoidChart& g, const std::vector<Point>& points);
int nondegeneracy_defect(const GroupoidChart& g, const Point& p);

// J_Γ = θ_Γ(v_Γ) against 1 − f_Γ, and L_v θ_Γ = 0.
Report groupoid_moment(const GroupoidChart& g, const std::vector<Point>& points, double tol = 1e-9);

Report deck_invariance(const GroupoidChart& g, const std::vector<Point>& points, double tol = 1e-9);

// The source is a forward map from graph(θ_Γ) (or graph(Ω_Γ)) onto the base
// structure.
Report source_forward(const GroupoidChart& g, const StructureFrame& base_structure, const std::vector<Point>& points,
                      double tol = 1e-9);

Mat source_jacobian(const GroupoidChart& g, const Point& p);
Mat target_jacobian(const GroupoidChart& g, const Point& p);
Mat ker_source_at_unit(const GroupoidChart& g, const Point& q);
Mat ker_target_at_unit(const GroupoidChart& g, const Point& q);

// (t_*Y, −r_*Y) ⊕ (−dθ(Y)|_TQ, θ(Y)) with e^{−r} = f, for Y ∈ ker s_* at unit(q).
VecX iso_sixteen(const GroupoidChart& g, const Point& q, const VecX& Y);
// (s_*Y, r_*Y) ⊕ (dθ(Y)|_TQ, −θ(Y)) for Y ∈ ker t_* at unit(q).
VecX iso_seventeen(const GroupoidChart& g, const Point& q, const VecX& Y);

// The two maps as matrices on all of T_{unit(q)}Γ.
Mat iso_sixteen_matrix(const GroupoidChart& g, const Point& q);
Mat iso_seventeen_matrix(const GroupoidChart& g, const Point& q);

// Images of ker s_* and ker t_* against the base structure, and
// iso_seventeen = iso_sixteen ∘ i_*.
Report iso_check(const GroupoidChart& g, const StructureFrame& base_structure, const std::vector<Point>& q_points,
                 double tol = 1e-8);

struct CorSolution {
  VecX Y;
  double residual = 0.0;   // normalized residual of the linear system
  int kernel_dim = 0;      // 0 when the solution is unique
  double r_residual = 0.0; // |r_*Y − f|
};

// Y tangent to the t-fiber at g with θ(Y) = −g, i_Y dθ = s*ξ − fθ, s_*Y = X
// for λ = (X,f)⊕(ξ,g) at s(g), flattened.
CorSolution cor_computation_solve(const GroupoidChart& g, const Point& at, const VecX& lambda);

// d(m(g,·)) Y for Y ∈ ker t_* at unit(s(g)).
VecX left_translate(const GroupoidChart& g, const Point& at, const VecX& Y);

// Built-in examples.
GroupoidChart example_1dim();
GroupoidChart example_sympl();            // Q = ℝ²×S¹, σ = dφ + ½(x dy − y dx)
GroupoidChart example_lcs_Qplus();
GroupoidChart example_pair_presymplectic();  // P = ℝ², ω = dx∧dy
GroupoidChart example_1dim_reduced();     // (x, θ, ε) with dθ + x dε, f = 1

std::vector<std::string> builtin_groupoids();
GroupoidChart builtin_groupoid(const std::string& name);

// Composable samples plus the Γ points used by pointwise checks.
std::vector<Point> gamma_samples(const GroupoidChart& g, int count, std::uint64_t seed);

// S¹ reduction of Example 1dim at J = 0 onto the reduced groupoid.
Report reduce_groupoid_1dim(int samples, std::uint64_t seed, double tol = 1e-9);

}  // namespace jd
