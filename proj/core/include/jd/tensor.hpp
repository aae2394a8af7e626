#pragma once

#include <array>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "jd/jet.hpp"

namespace jd {

inline constexpr int kMaxDegree = 3;

class DegreeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sorted index tuples of length k from {0..n-1} in lexicographic order, with
// a lookup from arbitrary tuples to (position, permutation sign).
struct AltIndex {
  int n = 0;
  int k = 0;
  std::vector<std::array<int, kMaxDegree>> combos;
  std::vector<int> pos;          // size n^k
  std::vector<signed char> sgn;  // 0 if an index repeats

  int size() const { return static_cast<int>(combos.size()); }
  int flat(const int* idx) const;
};

const AltIndex& alt_index(int n, int k);

// Value of a vector field at a point, components as jets.
struct Vec {
  JetVec c;
  Vec() = default;
  explicit Vec(int n) : c(static_cast<std::size_t>(n)) {}
  explicit Vec(JetVec comps) : c(std::move(comps)) {}
  int dim() const { return static_cast<int>(c.size()); }
  Jet& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Jet& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

struct FormTag {};
struct MultiTag {};

// Alternating tensor of degree k <= 3; only increasing index tuples stored.
template <class Tag>
struct Alt {
  int n = 0;
  int deg = 0;
  JetVec c;

  Alt() = default;
  Alt(int dim, int degree) : n(dim), deg(degree) {
    if (degree < 0) throw DegreeError("degree underflow");
    if (degree > kMaxDegree) throw DegreeError("degree overflow");
    c.resize(static_cast<std::size_t>(alt_index(dim, degree).size()));
  }

  int size() const { return static_cast<int>(c.size()); }

  // Signed component for an arbitrary index tuple.
  Jet get(std::initializer_list<int> idx) const { return get(idx.begin()); }
  Jet get(const int* idx) const {
    if (deg == 0) return c[0];
    const AltIndex& t = alt_index(n, deg);
    const int f = t.flat(idx);
    const int s = t.sgn[static_cast<std::size_t>(f)];
    if (s == 0) return Jet(0.0);
    const Jet& v = c[static_cast<std::size_t>(t.pos[static_cast<std::size_t>(f)])];
    return s > 0 ? v : -v;
  }
  // Component for an increasing index tuple.
  Jet& at(std::initializer_list<int> idx) {
    const AltIndex& t = alt_index(n, deg);
    const int f = t.flat(idx.begin());
    if (t.sgn[static_cast<std::size_t>(f)] != 1) throw std::invalid_argument("indices must be increasing");
    return c[static_cast<std::size_t>(t.pos[static_cast<std::size_t>(f)])];
  }
};

using Form = Alt<FormTag>;
using Multi = Alt<MultiTag>;

Form scalar_form(const Jet& f, int n);
Form one_form(JetVec comps);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Jet& s, const Vec& a);
Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(const Jet& s, const Form& a);
Multi operator+(const Multi& a, const Multi& b);
Multi operator-(const Multi& a, const Multi& b);
Multi operator*(const Jet& s, const Multi& a);

// Pointwise calculus. Arguments carrying derivatives must be jets seeded at
// the identity of one chart.
Jet directional(const Vec& x, const Jet& f);  // X.f
Form d(const Form& a);
Form interior(const Vec& x, const Form& a);
Form wedge(const Form& a, const Form& b);
Multi wedge(const Multi& a, const Multi& b);
Multi as_multi(const Vec& x);
Vec as_vec(const Multi& a);
Jet pair(const Form& xi, const Vec& x);  // xi(X) for a 1-form
Jet eval(const Form& w, const Vec& x, const Vec& y);  // w(X,Y) for a 2-form
Vec lie_bracket(const Vec& x, const Vec& y);
Form lie_derivative(const Vec& x, const Form& a);
Multi lie_derivative(const Vec& x, const Multi& a);  // bivectors

// Lambda(., xi): component i is sum_j Lambda^{ij} xi_j.
Vec sharp(const Multi& lambda, const Form& xi);
Jet contract(const Multi& lambda, const Form& a, const Form& b);  // Lambda(a,b)

// Schouten bracket of bivectors with [L,L]^{ijk} = -2 sum_cyc L^{il} d_l L^{jk}.
Multi schouten(const Multi& a, const Multi& b);

// Largest absolute component value.
double max_abs(const Vec& v);
double max_abs(const Form& a);
double max_abs(const Multi& a);

}  // namespace jd
