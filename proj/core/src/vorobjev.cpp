#include "jd/vorobjev.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace jd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

using JetMat = std::vector<JetVec>;

// Gauss-Jordan with partial pivoting on values.
JetMat invert(JetMat a) {
  const int n = static_cast<int>(a.size());
  JetMat inv(at(n), JetVec(at(n), Jet(0.0)));
  for (int i = 0; i < n; ++i) inv[at(i)][at(i)] = Jet(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[at(r)][at(c)].value()) > std::abs(a[at(piv)][at(c)].value())) piv = r;
    if (std::abs(a[at(piv)][at(c)].value()) < 1e-12) throw StructureError("symplectic form is degenerate");
    std::swap(a[at(c)], a[at(piv)]);
    std::swap(inv[at(c)], inv[at(piv)]);
    const Jet d = a[at(c)][at(c)];
    for (int k = 0; k < n; ++k) {
      a[at(c)][at(k)] /= d;
      inv[at(c)][at(k)] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet m = a[at(r)][at(c)];
      for (int k = 0; k < n; ++k) {
        a[at(r)][at(k)] -= m * a[at(c)][at(k)];
        inv[at(r)][at(k)] -= m * inv[at(c)][at(k)];
      }
    }
  }
  return inv;
}

Vec rotation_field(const JetVec& x, int n) {
  Vec w(n + 3);
  for (int i = 0; i < n + 3; ++i) w[i] = Jet::constant(0.0, n + 3);
  w[n + 1] = -x[at(n + 2)];
  w[n + 2] = x[at(n + 1)];
  return w;
}

}  // namespace

VorobjevData vorobjev_data(const Chart& P, TwoForm omega, OneForm potential, Interval t_range, Interval fiber) {
  if (t_range.hi >= 1.0) throw StructureError("the region must stay below t = 1");
  VorobjevData d;
  d.P = P;
  d.omega = std::move(omega);
  d.potential = std::move(potential);
  std::vector<std::string> names = P.names;
  std::vector<Interval> box = P.box;
  for (const char* s : {"t", "u", "v"}) names.emplace_back(s);
  box.push_back(t_range);
  box.push_back(fiber);
  box.push_back(fiber);
  d.total = Chart(names, box);
  return d;
}

VorobjevData vorobjev_plane() {
  const Chart P({"x", "y"}, {{-1, 1}, {-1, 1}});
  return vorobjev_data(P, make_form(2, 2, {{{0, 1}, constant_field(1.0, 2)}}),
                       make_one_form({constant_field(-0.5, 2) * coordinate_field(1, 2),
                                      constant_field(0.5, 2) * coordinate_field(0, 2)}));
}

BivectorField build_vorobjev(const VorobjevData& data) {
  const int n = data.P.dim();
  const int m = n + 3;
  const FormField omega = lift_form(data.omega, n, m);
  const FormField a = lift_form(data.potential, n, m);
  return [n, m, omega, a](const Point& p) {
    const JetVec x = seed(p);
    const Jet t = x[at(n)];
    if (t.value() >= 1.0) throw StructureError("t >= 1: (1-t) omega is degenerate");
    const Form w = omega(p);
    const Form ap = a(p);
    JetMat W(at(n), JetVec(at(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W[at(i)][at(j)] = i == j ? Jet::constant(0.0, m) : w.get({i, j});
    const JetMat Winv = invert(W);
    const Vec rot = rotation_field(x, n);
    std::vector<Vec> hor;
    for (int i = 0; i < n; ++i) {
      Vec e(m);
      for (int k = 0; k < m; ++k) e[k] = Jet::constant(k == i ? 1.0 : 0.0, m);
      hor.push_back(e - (Jet(kTwoPi) * ap.c[at(i)]) * rot);
    }
    Multi pi(m, 2);
    for (auto& c : pi.c) c = Jet::constant(0.0, m);
    const Jet scale = Jet(1.0) / (Jet(1.0) - t);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pi = pi + (-(scale * Winv[at(i)][at(j)])) * wedge(as_multi(hor[at(i)]), as_multi(hor[at(j)]));
    Vec dt(m);
    for (int k = 0; k < m; ++k) dt[k] = Jet::constant(k == n ? 1.0 : 0.0, m);
    pi = pi + Jet(kTwoPi) * wedge(as_multi(rot), as_multi(dt));
    return pi;
  };
}

FormField vorobjev_leaf_form(const VorobjevData& data) {
  const int n = data.P.dim();
  const int m = n + 3;
  const FormField a = lift_form(data.potential, n, m);
  return [n, m, a](const Point& p) {
    const JetVec x = seed(p);
    const Jet& u = x[at(n + 1)];
    const Jet& v = x[at(n + 2)];
    const Jet r2 = u * u + v * v;
    Form theta = a(p);
    theta.c[at(n + 1)] = -v / (Jet(kTwoPi) * r2);
    theta.c[at(n + 2)] = u / (Jet(kTwoPi) * r2);
    theta.c[at(n)] = Jet::constant(0.0, m);
    return d((Jet(1.0) - x[at(n)]) * theta);
  };
}

Report check_poisson(const BivectorField& pi, const std::vector<Point>& points, double tol) {
  Report r;
  r.add(measure("vorobjev-poisson", "[Pi, Pi] = 0", tol, points, [&](const Point& p) {
    const Multi P = pi(p);
    return max_abs(schouten(P, P));
  }));
  return r;
}

Report leaf_form_check(const VorobjevData& data, const std::vector<Point>& points, double tol) {
  const int n = data.P.dim();
  const int m = n + 3;
  const BivectorField pi = build_vorobjev(data);
  const FormField leaf = vorobjev_leaf_form(data);
  const auto value_vec = [m](const Vec& v) {
    VecX r(m);
    for (int i = 0; i < m; ++i) r(i) = v[i].value();
    return r;
  };
  const auto casimir = [n, m](const Point& p) {
    JetVec c(at(m), Jet::constant(0.0, m));
    c[at(n + 1)] = Jet::constant(2.0 * p[at(n + 1)], m);
    c[at(n + 2)] = Jet::constant(2.0 * p[at(n + 2)], m);
    return one_form(c);
  };
  Report r;
  r.add(measure("vorobjev-leaf-inverse", "Pi#(i_w d((1-t)theta)) = w on leaf tangents", tol, points, [&](const Point& p) {
    const Multi P = pi(p);
    const Form W = leaf(p);
    Mat dc(1, m);
    const Form c = casimir(p);
    for (int i = 0; i < m; ++i) dc(0, i) = c.c[at(i)].value();
    const Mat T = kernel_basis(dc);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < T.cols(); ++k) {
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = Jet(T(i, k));
      worst = std::max(worst, (value_vec(sharp(P, interior(w, W))) - T.col(k)).cwiseAbs().maxCoeff());
    }
    return worst;
  }));
  r.add(measure("vorobjev-casimir", "Pi#(d(u^2+v^2)) = 0", tol, points,
                [&](const Point& p) { return max_abs(sharp(pi(p), casimir(p))); }));
  r.add(measure("vorobjev-vertical", "vertical part = 2 pi (u d_v - v d_u) ^ d_t", tol, points, [&](const Point& p) {
    const Multi P = pi(p);
    const double u = p[at(n + 1)], v = p[at(n + 2)];
    return std::max({std::abs(P.get({n, n + 1}).value() - kTwoPi * v), std::abs(P.get({n, n + 2}).value() + kTwoPi * u),
                     std::abs(P.get({n + 1, n + 2}).value())});
  }));
  r.add(measure("vorobjev-curvature", "d theta = pi^* omega", tol, points, [&](const Point& p) {
    const FormField a = lift_form(data.potential, n, m);
    const FormField w = lift_form(data.omega, n, m);
    const Form dtheta = d(a(p));  // d(dφ) = 0 on the chart
    return max_abs(dtheta - w(p));
  }));
  r.add(measure("vorobjev-t0-inverse", "at t = 0 the P block of Pi inverts omega", tol, points, [&](const Point& p0) {
    Point p = p0;
    p[at(n)] = 0.0;
    const Multi P = pi(p);
    const Form w = data.omega(Point(p.begin(), p.begin() + n));
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += P.get({i, j}).value() * w.get({j, k}).value();
        worst = std::max(worst, std::abs(s + (i == k ? 1.0 : 0.0)));
      }
    return worst;
  }));
  return r;
}

}  // namespace jd
