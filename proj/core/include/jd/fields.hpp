#pragma once

#include <functional>
#include <map>
#include <vector>

#include "jd/chart.hpp"
#include "jd/tensor.hpp"

namespace jd {

// Fields are evaluated at a point and return jets seeded at the identity of
// their chart, so every value carries exact first and second derivatives.
template <class T>
using Field = std::function<T(const Point&)>;

using ScalarField = Field<Jet>;
using VectorField = Field<Vec>;
using FormField = Field<Form>;
using MultiField = Field<Multi>;
using OneForm = FormField;
using TwoForm = FormField;
using ThreeForm = FormField;
using BivectorField = MultiField;
using ThreeVectorField = MultiField;

// A map between charts as a list of component jets.
using MapField = Field<JetVec>;

ScalarField constant_field(double c, int n);
ScalarField coordinate_field(int i, int n);
VectorField coordinate_vector(int i, int n);
VectorField zero_vector(int n);
FormField zero_form(int n, int deg);
FormField coordinate_differential(int i, int n);

VectorField make_vector(std::vector<ScalarField> comps);
FormField make_one_form(std::vector<ScalarField> comps);
// Components keyed by increasing index tuples; missing entries are zero.
FormField make_form(int n, int deg, std::map<std::vector<int>, ScalarField> comps);
MultiField make_multi(int n, int deg, std::map<std::vector<int>, ScalarField> comps);

ScalarField operator+(ScalarField a, ScalarField b);
ScalarField operator-(ScalarField a, ScalarField b);
ScalarField operator*(ScalarField a, ScalarField b);

FormField exterior_derivative(FormField a);
VectorField lie_bracket(VectorField x, VectorField y);
FormField lie_derivative(VectorField x, FormField a);
FormField interior_product(VectorField x, FormField a);
FormField wedge(FormField a, FormField b);
MultiField wedge(MultiField a, MultiField b);
MultiField wedge(VectorField a, VectorField b);
MultiField schouten(MultiField a, MultiField b);
MultiField schouten_ve(VectorField e, MultiField lambda);  // L_E Lambda

// Derivative of a scalar along a vector field: X.f
ScalarField directional(VectorField x, ScalarField f);

// Fields on P lifted to Q = P x (extra coordinates); P occupies the first
// dim P coordinates of Q.
ScalarField lift_scalar(ScalarField f, int dim_p, int dim_q);
VectorField lift_vector(VectorField x, int dim_p, int dim_q);
FormField lift_form(FormField a, int dim_p, int dim_q);

// Jacobian of a map at a point (rows: components, cols: coordinates).
std::vector<std::vector<double>> jacobian(const MapField& f, const Point& p);

}  // namespace jd
