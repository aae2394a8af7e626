#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jd/chart.hpp"
#include "jd/fields.hpp"
#include "jd/linalg.hpp"
#include "jd/report.hpp"

namespace jd {

// X ⊕ ξ in TP ⊕ T*P at a point.
struct DiracValue {
  Vec X;
  Form xi;
};

// (X, f) ⊕ (ξ, g) in (TQ×ℝ) ⊕ (T*Q×ℝ) at a point.
struct E1Value {
  Vec X;
  Jet f;
  Form xi;
  Jet g;
};

using DiracSection = Field<DiracValue>;
using E1Section = Field<E1Value>;

E1Value to_e1(const DiracValue& v);
DiracValue to_dirac(const E1Value& v);

E1Value operator+(const E1Value& a, const E1Value& b);
E1Value operator-(const E1Value& a, const E1Value& b);
E1Value operator*(const Jet& s, const E1Value& a);

Jet pair_plus(const DiracValue& a, const DiracValue& b);
Jet pair_plus(const E1Value& a, const E1Value& b);
Jet pair_minus(const DiracValue& a, const DiracValue& b);
Jet pair_minus(const E1Value& a, const E1Value& b);

DiracValue courant_bracket(const DiracValue& a, const DiracValue& b);
E1Value extended_courant_bracket(const E1Value& a, const E1Value& b);

DiracSection courant_bracket(DiracSection a, DiracSection b);
E1Section extended_courant_bracket(E1Section a, E1Section b);

// Section builders.
E1Section e1_section(VectorField X, ScalarField f, FormField xi, ScalarField g);
E1Section dirac_section(VectorField X, FormField xi);
E1Section scale(ScalarField c, E1Section s);

enum class StructureKind { Dirac, JacobiDirac };

std::string to_string(StructureKind k);

class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A candidate structure given by spanning sections. Dirac sections are stored
// with f = g = 0 and compared on the (X, ξ) block only.
struct StructureFrame {
  StructureKind kind = StructureKind::Dirac;
  Chart chart;
  std::vector<E1Section> sections;

  int dim() const { return chart.dim(); }
  int rank() const { return static_cast<int>(sections.size()); }
  int expected_rank() const { return kind == StructureKind::Dirac ? dim() : dim() + 1; }
  int ambient() const { return kind == StructureKind::Dirac ? 2 * dim() : 2 * dim() + 2; }

  std::vector<E1Value> values(const Point& p) const;
  Mat matrix(const Point& p) const;  // columns are flattened sections
};

// Layout of a flattened value: Dirac [X, ξ]; Jacobi-Dirac [X, f, ξ, g].
VecX flatten(const E1Value& v, StructureKind kind);
VecX flatten(const Vec& X, double f, const VecX& xi, double g);

// Raw blocks of a flattened Jacobi-Dirac vector.
struct E1Blocks {
  VecX X;
  double f = 0.0;
  VecX xi;
  double g = 0.0;
};
E1Blocks split(const VecX& v, int n, StructureKind kind);
VecX join(const E1Blocks& b, StructureKind kind);

// Courant bracket for Dirac frames, extended bracket otherwise.
E1Value frame_bracket(const E1Value& a, const E1Value& b, StructureKind kind);
Jet pairing(const E1Value& a, const E1Value& b, StructureKind kind);
double pairing(const VecX& a, const VecX& b, int n, StructureKind kind);

// Graph constructors. Bivector and Jacobi-pair variants verify their Schouten
// conditions at sample points and throw StructureError otherwise.
StructureFrame graph_of_2form(const TwoForm& omega, const Chart& chart);
StructureFrame graph_of_bivector(const BivectorField& lambda, const Chart& chart, double tol = 1e-8);
StructureFrame graph_of_1form(const OneForm& sigma, const Chart& chart);
StructureFrame graph_of_jacobi_pair(const BivectorField& lambda, const VectorField& e, const Chart& chart,
                                    double tol = 1e-8);
StructureFrame diracization(const StructureFrame& l);

double poisson_residual(const BivectorField& lambda, const Point& p);
double jacobi_residual(const BivectorField& lambda, const VectorField& e, const Point& p);

void require_full_rank(const StructureFrame& frame, const std::vector<Point>& points);

Report is_isotropic(const StructureFrame& frame, const std::vector<Point>& points, double tol = 1e-9);
Report is_closed_under_bracket(const StructureFrame& frame, const std::vector<Point>& points, double tol = 1e-8);

// Largest normalized distance of a bracket [s_i, s_j] from the frame span.
double closure_residual(const StructureFrame& frame, const Point& p);
double isotropy_residual(const StructureFrame& frame, const Point& p);

// Linear images at a point. pi is a submersion Q -> P given as a map; the
// frame lives on Q for pushforward and on P for pullback.
Mat pushforward(const StructureFrame& frame, const MapField& pi, const Point& q);
Mat pullback(const StructureFrame& frame, const MapField& pi, const Point& q);

struct Hamiltonian {
  VecX X;
  double phi = 0.0;
  double residual = 0.0;   // normalized membership residual
  bool admissible = false;
  Mat kernel_part;         // (X, φ) blocks of frame elements with zero (ξ, g) part
};

// Solves (X_f, φ_f) ⊕ (df, f) ∈ L at p (φ_f absent for Dirac frames).
Hamiltonian find_hamiltonian(const ScalarField& f, const StructureFrame& frame, const Point& p, double tol = 1e-8);

struct BracketValue {
  double value = 0.0;
  double ambiguity = 0.0;  // spread of the value over the solution set
  bool admissible = false;
};

// {f,g} = X_g·f + f φ_g, and X_g·f for Dirac frames.
BracketValue admissible_bracket(const ScalarField& f, const ScalarField& g, const StructureFrame& frame,
                                const Point& p, double tol = 1e-8);

}  // namespace jd
