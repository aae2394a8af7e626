#include "jd/fields.hpp"

#include <numeric>
#include <stdexcept>

namespace jd {

ScalarField constant_field(double c, int n) {
  return [c, n](const Point&) { return Jet::constant(c, n); };
}

ScalarField coordinate_field(int i, int n) {
  return [i, n](const Point& p) { return Jet::variable(p[static_cast<std::size_t>(i)], i, n); };
}

VectorField coordinate_vector(int i, int n) {
  return [i, n](const Point&) {
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = Jet::constant(k == i ? 1.0 : 0.0, n);
    return v;
  };
}

VectorField zero_vector(int n) {
  return [n](const Point&) {
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = Jet::constant(0.0, n);
    return v;
  };
}

FormField zero_form(int n, int deg) {
  return [n, deg](const Point&) { return Form(n, deg); };
}

FormField coordinate_differential(int i, int n) {
  return [i, n](const Point&) {
    Form a(n, 1);
    a.c[static_cast<std::size_t>(i)] = Jet::constant(1.0, n);
    return a;
  };
}

VectorField make_vector(std::vector<ScalarField> comps) {
  return [comps = std::move(comps)](const Point& p) {
    Vec v(static_cast<int>(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i) v.c[i] = comps[i](p);
    return v;
  };
}

FormField make_one_form(std::vector<ScalarField> comps) {
  return [comps = std::move(comps)](const Point& p) {
    Form a(static_cast<int>(comps.size()), 1);
    for (std::size_t i = 0; i < comps.size(); ++i) a.c[i] = comps[i](p);
    return a;
  };
}

namespace {

template <class A>
Field<A> make_alt(int n, int deg, std::map<std::vector<int>, ScalarField> comps) {
  const AltIndex& t = alt_index(n, deg);
  std::vector<std::pair<int, ScalarField>> slots;
  for (auto& [idx, f] : comps) {
    if (static_cast<int>(idx.size()) != deg) throw std::invalid_argument("component index has wrong degree");
    for (std::size_t a = 1; a < idx.size(); ++a)
      if (idx[a - 1] >= idx[a]) throw std::invalid_argument("component indices must be increasing");
    const int f_at = t.flat(idx.data());
    slots.emplace_back(t.pos[static_cast<std::size_t>(f_at)], f);
  }
  return [n, deg, slots = std::move(slots)](const Point& p) {
    A a(n, deg);
    for (const auto& [pos, f] : slots) a.c[static_cast<std::size_t>(pos)] = f(p);
    return a;
  };
}

std::vector<int> prefix_map(int dim_p) {
  std::vector<int> m(static_cast<std::size_t>(dim_p));
  std::iota(m.begin(), m.end(), 0);
  return m;
}

Point head(const Point& q, int dim_p) { return Point(q.begin(), q.begin() + dim_p); }

}  // namespace

FormField make_form(int n, int deg, std::map<std::vector<int>, ScalarField> comps) {
  return make_alt<Form>(n, deg, std::move(comps));
}

MultiField make_multi(int n, int deg, std::map<std::vector<int>, ScalarField> comps) {
  return make_alt<Multi>(n, deg, std::move(comps));
}

ScalarField operator+(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return a(p) + b(p); };
}
ScalarField operator-(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return a(p) - b(p); };
}
ScalarField operator*(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return a(p) * b(p); };
}

FormField exterior_derivative(FormField a) {
  return [a = std::move(a)](const Point& p) { return d(a(p)); };
}

VectorField lie_bracket(VectorField x, VectorField y) {
  return [x = std::move(x), y = std::move(y)](const Point& p) { return lie_bracket(x(p), y(p)); };
}

FormField lie_derivative(VectorField x, FormField a) {
  return [x = std::move(x), a = std::move(a)](const Point& p) { return lie_derivative(x(p), a(p)); };
}

FormField interior_product(VectorField x, FormField a) {
  return [x = std::move(x), a = std::move(a)](const Point& p) { return interior(x(p), a(p)); };
}

FormField wedge(FormField a, FormField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return wedge(a(p), b(p)); };
}

MultiField wedge(MultiField a, MultiField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return wedge(a(p), b(p)); };
}

MultiField wedge(VectorField a, VectorField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return wedge(as_multi(a(p)), as_multi(b(p))); };
}

MultiField schouten(MultiField a, MultiField b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return schouten(a(p), b(p)); };
}

MultiField schouten_ve(VectorField e, MultiField lambda) {
  return [e = std::move(e), lambda = std::move(lambda)](const Point& p) { return lie_derivative(e(p), lambda(p)); };
}

ScalarField directional(VectorField x, ScalarField f) {
  return [x = std::move(x), f = std::move(f)](const Point& p) { return directional(x(p), f(p)); };
}

ScalarField lift_scalar(ScalarField f, int dim_p, int dim_q) {
  return [f = std::move(f), dim_p, dim_q, m = prefix_map(dim_p)](const Point& q) {
    return embed(f(head(q, dim_p)), dim_q, m);
  };
}

VectorField lift_vector(VectorField x, int dim_p, int dim_q) {
  return [x = std::move(x), dim_p, dim_q, m = prefix_map(dim_p)](const Point& q) {
    const Vec v = x(head(q, dim_p));
    Vec r(dim_q);
    for (int i = 0; i < dim_q; ++i) r[i] = i < dim_p ? embed(v[i], dim_q, m) : Jet::constant(0.0, dim_q);
    return r;
  };
}

FormField lift_form(FormField a, int dim_p, int dim_q) {
  return [a = std::move(a), dim_p, dim_q, m = prefix_map(dim_p)](const Point& q) {
    const Form v = a(head(q, dim_p));
    Form r(dim_q, v.deg);
    const AltIndex& tp = alt_index(dim_p, v.deg);
    const AltIndex& tq = alt_index(dim_q, v.deg);
    for (int ci = 0; ci < tp.size(); ++ci) {
      const auto& I = tp.combos[static_cast<std::size_t>(ci)];
      const int f = tq.flat(I.data());
      r.c[static_cast<std::size_t>(tq.pos[static_cast<std::size_t>(f)])] = embed(v.c[static_cast<std::size_t>(ci)], dim_q, m);
    }
    for (Jet& j : r.c)
      if (j.dim() == 0) j = Jet::constant(j.value(), dim_q);
    return r;
  };
}

std::vector<std::vector<double>> jacobian(const MapField& f, const Point& p) {
  const JetVec v = f(p);
  std::vector<std::vector<double>> J(v.size(), std::vector<double>(p.size(), 0.0));
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t i = 0; i < p.size(); ++i) J[a][i] = v[a].grad(static_cast<int>(i));
  return J;
}

}  // namespace jd
