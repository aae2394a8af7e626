#include "jd/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace jd {

namespace {

AltIndex build(int n, int k) {
  AltIndex t;
  t.n = n;
  t.k = k;
  std::array<int, kMaxDegree> c{};
  if (k == 0) {
    t.combos.push_back(c);
    t.pos.assign(1, 0);
    t.sgn.assign(1, 1);
    return t;
  }
  // lexicographic enumeration of increasing tuples
  auto rec = [&](auto&& self, int depth, int start) -> void {
    if (depth == k) {
      t.combos.push_back(c);
      return;
    }
    for (int i = start; i < n; ++i) {
      c[static_cast<std::size_t>(depth)] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  int total = 1;
  for (int i = 0; i < k; ++i) total *= n;
  t.pos.assign(static_cast<std::size_t>(total), 0);
  t.sgn.assign(static_cast<std::size_t>(total), 0);
  for (int p = 0; p < static_cast<int>(t.combos.size()); ++p) {
    std::array<int, kMaxDegree> perm = t.combos[static_cast<std::size_t>(p)];
    std::array<int, kMaxDegree> order{0, 1, 2};
    // visit every permutation of the sorted tuple, tracking parity
    std::sort(order.begin(), order.begin() + k);
    do {
      int inv = 0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          if (order[static_cast<std::size_t>(a)] > order[static_cast<std::size_t>(b)]) ++inv;
      std::array<int, kMaxDegree> idx{};
      for (int a = 0; a < k; ++a) idx[static_cast<std::size_t>(a)] = perm[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])];
      const int f = t.flat(idx.data());
      t.pos[static_cast<std::size_t>(f)] = p;
      t.sgn[static_cast<std::size_t>(f)] = static_cast<signed char>(inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(order.begin(), order.begin() + k));
  }
  return t;
}

template <class A>
A add(const A& a, const A& b, double s) {
  if (a.n != b.n || a.deg != b.deg) throw std::invalid_argument("tensor shape mismatch");
  A r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = s > 0 ? a.c[i] + b.c[i] : a.c[i] - b.c[i];
  return r;
}

template <class A>
A scale(const Jet& s, const A& a) {
  A r = a;
  for (Jet& v : r.c) v = s * v;
  return r;
}

int parity(const int* v, int len) {
  int inv = 0;
  for (int a = 0; a < len; ++a)
    for (int b = a + 1; b < len; ++b)
      if (v[a] > v[b]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

template <class A>
A wedge_impl(const A& a, const A& b) {
  if (a.n != b.n) throw std::invalid_argument("tensor shape mismatch");
  const int p = a.deg, q = b.deg;
  if (p + q > kMaxDegree) throw DegreeError("degree overflow");
  A r(a.n, p + q);
  const AltIndex& t = alt_index(a.n, p + q);
  const int m = p + q;
  for (int ci = 0; ci < t.size(); ++ci) {
    const auto& I = t.combos[static_cast<std::size_t>(ci)];
    Jet acc(0.0);
    // subsets of positions of size p, as bitmasks
    for (int mask = 0; mask < (1 << m); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != p) continue;
      int positions[kMaxDegree];
      int sa[kMaxDegree], sb[kMaxDegree];
      int na = 0, nb = 0, np = 0;
      for (int bit = 0; bit < m; ++bit)
        if (mask & (1 << bit)) { positions[np++] = bit; sa[na++] = I[static_cast<std::size_t>(bit)]; }
      for (int bit = 0; bit < m; ++bit)
        if (!(mask & (1 << bit))) { positions[np++] = bit; sb[nb++] = I[static_cast<std::size_t>(bit)]; }
      const int s = parity(positions, m);
      const Jet term = a.get(sa) * b.get(sb);
      acc = s > 0 ? acc + term : acc - term;
    }
    r.c[static_cast<std::size_t>(ci)] = acc;
  }
  return r;
}

template <class A>
double max_abs_impl(const A& a) {
  double m = 0.0;
  for (const Jet& v : a.c) m = std::max(m, std::abs(v.value()));
  return m;
}

}  // namespace

int AltIndex::flat(const int* idx) const {
  int f = 0;
  for (int a = 0; a < k; ++a) {
    if (idx[a] < 0 || idx[a] >= n) throw std::out_of_range("tensor index");
    f = f * n + idx[a];
  }
  return f;
}

const AltIndex& alt_index(int n, int k) {
  static std::vector<AltIndex> table;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int nn = 0; nn <= kMaxDim; ++nn)
      for (int kk = 0; kk <= kMaxDegree; ++kk) table.push_back(build(nn, kk));
  });
  if (n < 0 || n > kMaxDim || k < 0 || k > kMaxDegree) throw DegreeError("tensor shape out of range");
  return table[static_cast<std::size_t>(n * (kMaxDegree + 1) + k)];
}

Form scalar_form(const Jet& f, int n) {
  Form r(n, 0);
  r.c[0] = f;
  return r;
}

Form one_form(JetVec comps) {
  Form r(static_cast<int>(comps.size()), 1);
  r.c = std::move(comps);
  return r;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector dimension mismatch");
  Vec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector dimension mismatch");
  Vec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(const Jet& s, const Vec& a) {
  Vec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

Form operator+(const Form& a, const Form& b) { return add(a, b, 1.0); }
Form operator-(const Form& a, const Form& b) { return add(a, b, -1.0); }
Form operator*(const Jet& s, const Form& a) { return scale(s, a); }
Multi operator+(const Multi& a, const Multi& b) { return add(a, b, 1.0); }
Multi operator-(const Multi& a, const Multi& b) { return add(a, b, -1.0); }
Multi operator*(const Jet& s, const Multi& a) { return scale(s, a); }

Jet directional(const Vec& x, const Jet& f) {
  Jet acc(0.0);
  for (int i = 0; i < x.dim(); ++i) acc += x[i] * partial(f, i);
  return acc;
}

Form d(const Form& a) {
  const int k = a.deg;
  if (k + 1 > kMaxDegree) throw DegreeError("degree overflow");
  Form r(a.n, k + 1);
  const AltIndex& t = alt_index(a.n, k + 1);
  for (int ci = 0; ci < t.size(); ++ci) {
    const auto& I = t.combos[static_cast<std::size_t>(ci)];
    Jet acc(0.0);
    for (int p = 0; p <= k; ++p) {
      int rest[kMaxDegree];
      int nr = 0;
      for (int q = 0; q <= k; ++q)
        if (q != p) rest[nr++] = I[static_cast<std::size_t>(q)];
      const Jet term = partial(a.get(rest), I[static_cast<std::size_t>(p)]);
      acc = (p % 2 == 0) ? acc + term : acc - term;
    }
    r.c[static_cast<std::size_t>(ci)] = acc;
  }
  return r;
}

Form interior(const Vec& x, const Form& a) {
  if (a.deg == 0) throw DegreeError("degree underflow");
  if (x.dim() != a.n) throw std::invalid_argument("vector/form dimension mismatch");
  Form r(a.n, a.deg - 1);
  const AltIndex& t = alt_index(a.n, a.deg - 1);
  for (int ci = 0; ci < t.size(); ++ci) {
    const auto& J = t.combos[static_cast<std::size_t>(ci)];
    Jet acc(0.0);
    for (int j = 0; j < a.n; ++j) {
      int idx[kMaxDegree] = {j, J[0], J[1]};
      acc += x[j] * a.get(idx);
    }
    r.c[static_cast<std::size_t>(ci)] = acc;
  }
  return r;
}

Form wedge(const Form& a, const Form& b) { return wedge_impl(a, b); }
Multi wedge(const Multi& a, const Multi& b) { return wedge_impl(a, b); }

Multi as_multi(const Vec& x) {
  Multi r(x.dim(), 1);
  r.c = x.c;
  return r;
}

Vec as_vec(const Multi& a) {
  if (a.deg != 1) throw DegreeError("expected a vector");
  return Vec(a.c);
}

Jet pair(const Form& xi, const Vec& x) {
  if (xi.deg != 1) throw DegreeError("expected a 1-form");
  if (x.dim() != xi.n) throw std::invalid_argument("vector/form dimension mismatch");
  Jet acc(0.0);
  for (int i = 0; i < x.dim(); ++i) acc += xi.c[static_cast<std::size_t>(i)] * x[i];
  return acc;
}

Jet eval(const Form& w, const Vec& x, const Vec& y) { return pair(interior(x, w), y); }

Vec lie_bracket(const Vec& x, const Vec& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("vector dimension mismatch");
  Vec r(x.dim());
  for (int i = 0; i < x.dim(); ++i) r[i] = directional(x, y[i]) - directional(y, x[i]);
  return r;
}

Form lie_derivative(const Vec& x, const Form& a) {
  if (a.deg == 0) return scalar_form(directional(x, a.c[0]), a.n);
  return interior(x, d(a)) + d(interior(x, a));
}

Multi lie_derivative(const Vec& x, const Multi& a) {
  if (a.deg != 2) throw DegreeError("Lie derivative of multivectors implemented for bivectors");
  Multi r(a.n, 2);
  const AltIndex& t = alt_index(a.n, 2);
  for (int ci = 0; ci < t.size(); ++ci) {
    const int i = t.combos[static_cast<std::size_t>(ci)][0];
    const int j = t.combos[static_cast<std::size_t>(ci)][1];
    Jet acc = directional(x, a.get({i, j}));
    for (int l = 0; l < a.n; ++l) {
      acc -= a.get({l, j}) * partial(x[i], l);
      acc -= a.get({i, l}) * partial(x[j], l);
    }
    r.c[static_cast<std::size_t>(ci)] = acc;
  }
  return r;
}

Vec sharp(const Multi& lambda, const Form& xi) {
  if (lambda.deg != 2 || xi.deg != 1) throw DegreeError("sharp needs a bivector and a 1-form");
  Vec r(lambda.n);
  for (int i = 0; i < lambda.n; ++i) {
    Jet acc(0.0);
    for (int j = 0; j < lambda.n; ++j) acc += lambda.get({i, j}) * xi.c[static_cast<std::size_t>(j)];
    r[i] = acc;
  }
  return r;
}

Jet contract(const Multi& lambda, const Form& a, const Form& b) { return pair(a, sharp(lambda, b)); }

Multi schouten(const Multi& a, const Multi& b) {
  if (a.deg != 2 || b.deg != 2 || a.n != b.n) throw DegreeError("schouten expects two bivectors");
  const int n = a.n;
  Multi r(n, 3);
  const AltIndex& t = alt_index(n, 3);
  for (int ci = 0; ci < t.size(); ++ci) {
    const auto& I = t.combos[static_cast<std::size_t>(ci)];
    Jet acc(0.0);
    for (int c = 0; c < 3; ++c) {
      const int i = I[static_cast<std::size_t>(c)];
      const int j = I[static_cast<std::size_t>((c + 1) % 3)];
      const int k = I[static_cast<std::size_t>((c + 2) % 3)];
      for (int l = 0; l < n; ++l) {
        acc += a.get({i, l}) * partial(b.get({j, k}), l);
        acc += b.get({i, l}) * partial(a.get({j, k}), l);
      }
    }
    r.c[static_cast<std::size_t>(ci)] = -acc;
  }
  return r;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (const Jet& x : v.c) m = std::max(m, std::abs(x.value()));
  return m;
}
double max_abs(const Form& a) { return max_abs_impl(a); }
double max_abs(const Multi& a) { return max_abs_impl(a); }

}  // namespace jd
