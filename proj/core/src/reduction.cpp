#include "jd/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace jd {

namespace {

Mat jac(const JetVec& image, int n) {
  Mat J(static_cast<int>(image.size()), n);
  for (int a = 0; a < J.rows(); ++a)
    for (int i = 0; i < n; ++i) J(a, i) = image[static_cast<std::size_t>(a)].grad(i);
  return J;
}

VecX vals(const Vec& v) {
  VecX r(v.dim());
  for (int i = 0; i < v.dim(); ++i) r(i) = v[i].value();
  return r;
}

Jet lifted(const Jet& a, int n, int offset = 0) {
  if (a.dim() == 0) return Jet::constant(a.value(), n);
  std::vector<int> m(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) m[static_cast<std::size_t>(i)] = offset + i;
  return embed(a, n, m);
}

}  // namespace

double cotangent_moment(const VecX& xi, double /*t*/, const VecX& v_m) { return xi.dot(v_m); }

Report cotangent_reduce(const CotangentAction& act, const std::vector<Point>& points, std::uint64_t seed,
                        double tol) {
  const int m = act.M.dim();
  const int r = act.reduced_dim;
  const int nv = m + r + 1;
  if (nv > kMaxDim) throw std::invalid_argument("cotangent chart too wide for the jet capacity");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<VecX> mus;
  for (std::size_t s = 0; s < points.size(); ++s) {
    VecX mu(r + 1);
    for (int a = 0; a <= r; ++a) mu(a) = u(rng);
    mus.push_back(mu);
  }
  const auto index_of = [&](const Point& x) {
    return static_cast<std::size_t>(&x - points.data());
  };

  Report rep;
  rep.add(measure("cotangent-moment", "<J(p^* mu, t), v> = (p^* mu)(v_M) = 0", tol, points, [&](const Point& x) {
    const VecX mu = mus[index_of(x)].head(r);
    const Mat J = jac(act.quotient(x), m);
    if (rank_of(J) < r) throw StructureError("map is not submersive at the point");
    const VecX xi = J.transpose() * mu;
    double worst = 0.0;
    for (const auto& g : act.generators) worst = std::max(worst, std::abs(cotangent_moment(xi, 0.0, vals(g(x)))));
    return worst;
  }));
  rep.add(measure("cotangent-zero-level", "J^{-1}(0) fiber = annihilator of g_M = image of p^*", tol, points,
                  [&](const Point& x) {
                    const Mat J = jac(act.quotient(x), m);
                    Mat V(m, static_cast<int>(act.generators.size()));
                    for (std::size_t k = 0; k < act.generators.size(); ++k) V.col(static_cast<int>(k)) = vals(act.generators[k](x));
                    const SubspaceComparison c = compare_spans(kernel_basis(V.transpose()), J.transpose());
                    return c.same_rank() ? c.residual : 1.0;
                  }));
  // Ψ(x, μ, t) = (x, p*μ, t) in variables [x, μ, t]
  const auto psi = [&](const Point& x, const VecX& mu) {
    const JetVec img = act.quotient(x);
    JetVec xi(static_cast<std::size_t>(m), Jet::constant(0.0, nv));
    for (int a = 0; a < r; ++a) {
      const Jet ma = Jet::variable(mu(a), m + a, nv);
      for (int i = 0; i < m; ++i)
        xi[static_cast<std::size_t>(i)] += ma * lifted(partial(img[static_cast<std::size_t>(a)], i), nv);
    }
    return xi;
  };
  rep.add(measure("cotangent-tangent", "d<J, v> = 0 along (x, p^* mu, t)", tol, points, [&](const Point& x) {
    const VecX mu = mus[index_of(x)];
    const JetVec xi = psi(x, mu);
    double worst = 0.0;
    for (const auto& g : act.generators) {
      const Vec v = g(x);
      Jet jv = Jet::constant(0.0, nv);
      for (int i = 0; i < m; ++i) jv += xi[static_cast<std::size_t>(i)] * lifted(v[i], nv);
      for (int k = 0; k < nv; ++k) worst = std::max(worst, std::abs(jv.grad(k)));
    }
    return worst;
  }));
  rep.add(measure("cotangent-canonical", "(theta_c + dt)(dPsi V) = mu(p_* dx) + dt", tol, points, [&](const Point& x) {
    const VecX mu = mus[index_of(x)];
    const JetVec xi = psi(x, mu);
    const Mat J = jac(act.quotient(x), m);
    double worst = 0.0;
    for (int k = 0; k < nv; ++k) {
      VecX dx = VecX::Zero(m);
      if (k < m) dx(k) = 1.0;
      const double dt = k == nv - 1 ? 1.0 : 0.0;
      double lhs = dt;
      for (int i = 0; i < m; ++i) lhs += xi[static_cast<std::size_t>(i)].value() * dx(i);
      const double rhs = mu.head(r).dot(J * dx) + dt;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
  }));
  return rep;
}

double jd_moment(const E1Value& value, const Vec& v_q) { return pair(value.xi, v_q).value(); }

double jd_moment(const VecX& flat, const VecX& v_q, int dim_q) {
  return split(flat, dim_q, StructureKind::JacobiDirac).xi.dot(v_q);
}

Mat zero_level(const StructureFrame& lbar, const VectorField& v_q, const Point& q) {
  const int n = lbar.dim();
  const Mat F = lbar.matrix(q);
  const VecX v = vals(v_q(q));
  Mat row(1, F.cols());
  for (Eigen::Index c = 0; c < F.cols(); ++c) row(0, c) = jd_moment(VecX(F.col(c)), v, n);
  return F * kernel_basis(row);
}

ZeroLevelRank zero_level_rank(const StructureFrame& lbar, const VectorField& v_q, const std::vector<Point>& points) {
  ZeroLevelRank z;
  const int n = lbar.dim();
  for (const Point& q : points) {
    const VecX v = vals(v_q(q));
    VecX e = VecX::Zero(lbar.ambient());
    e.head(n) = v;
    z.ranks.push_back(intersection_dim(lbar.matrix(q), e));
  }
  for (int r : z.ranks)
    if (r != z.ranks.front()) z.constant = false;
  CheckRecord rec;
  rec.id = "zero-level-rank";
  rec.anchor = "L ∩ (g_Q,0)⊕(0,0) has constant rank (checked on samples only)";
  rec.samples = static_cast<int>(points.size());
  rec.threshold = 0.5;
  int lo = 0, hi = 0;
  if (!z.ranks.empty()) {
    lo = *std::min_element(z.ranks.begin(), z.ranks.end());
    hi = *std::max_element(z.ranks.begin(), z.ranks.end());
  }
  rec.max_residual = hi - lo;
  rec.note = "ranks " + std::to_string(lo) + ".." + std::to_string(hi);
  rec.decide();
  z.report.add(rec);
  return z;
}

Report reduce_Lbar(const StructureFrame& lbar, const VectorField& v_q, const ReductionTarget& target,
                   const std::vector<Point>& points, double tol) {
  Report r;
  r.add(measure("reduced-image", "(X,f)+(xi,g) -> (pi_*X, f)+(mu, g) maps J^{-1}(0) onto L^c", tol, points,
                [&](const Point& q) {
                  const JetVec img = target.pi(q);
                  const Point p = values(img);
                  const SubspaceComparison c = compare_spans(pushforward(lbar, target.pi, q), target.expected.matrix(p));
                  return c.same_rank() ? c.residual : 1.0;
                }));
  if (target.zero_level_expected != nullptr) {
    r.add(measure("zero-level-codim", "J^{-1}(0) has codimension 1 in L", 0.5, points, [&](const Point& q) {
      const Mat z = zero_level(lbar, v_q, q);
      return std::abs(static_cast<double>(rank_of(z) - (lbar.rank() - 1)));
    }));
    r.add(measure("zero-level-L0", "J^{-1}(0) = Lbar_0 fiberwise", tol, points, [&](const Point& q) {
      const SubspaceComparison c = compare_spans(zero_level(lbar, v_q, q), target.zero_level_expected->matrix(q));
      return c.same_rank() ? c.residual : 1.0;
    }));
  }
  return r;
}

Report theta_match(const StructureFrame& lbar, const VectorField& v_q, const MapField& pi,
                   const std::vector<Point>& points, std::uint64_t seed, double tol) {
  const int n = lbar.dim();
  const int k = lbar.rank();
  const int nv = n + k;
  if (nv > kMaxDim) throw std::invalid_argument("frame total space too wide for the jet capacity");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Report r;
  r.add(measure("theta-match", "pi^*(theta_red) = theta_Lbar on tangent vectors of J^{-1}(0)", tol, points,
                [&](const Point& q) {
                  // a point of J⁻¹(0) in frame coefficients
                  const Mat F = lbar.matrix(q);
                  const VecX v = vals(v_q(q));
                  Mat row(1, k);
                  for (int c = 0; c < k; ++c) row(0, c) = jd_moment(VecX(F.col(c)), v, n);
                  const Mat N = kernel_basis(row);
                  VecX w(N.cols());
                  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = nd(rng);
                  const VecX c = N * w;
                  // J, ξ and g as jets on the total space [q, c]
                  const auto vals_q = lbar.values(q);
                  const Vec vq = v_q(q);
                  Jet J = Jet::constant(0.0, nv), g = Jet::constant(0.0, nv);
                  std::vector<Jet> xi(static_cast<std::size_t>(n), Jet::constant(0.0, nv));
                  for (int s = 0; s < k; ++s) {
                    const Jet cs = Jet::variable(c(s), n + s, nv);
                    const E1Value& e = vals_q[static_cast<std::size_t>(s)];
                    J += cs * lifted(pair(e.xi, vq), nv);
                    g += cs * lifted(e.g, nv);
                    for (int i = 0; i < n; ++i)
                      xi[static_cast<std::size_t>(i)] += cs * lifted(e.xi.c[static_cast<std::size_t>(i)], nv);
                  }
                  Mat dJ(1, nv);
                  for (int i = 0; i < nv; ++i) dJ(0, i) = J.grad(i);
                  const Mat T = kernel_basis(dJ);
                  const Mat Jp = jac(pi(q), n);
                  VecX xiv(n);
                  for (int i = 0; i < n; ++i) xiv(i) = xi[static_cast<std::size_t>(i)].value();
                  const VecX mu = least_squares(Jp.transpose(), xiv).x;
                  double worst = 0.0;
                  for (Eigen::Index t = 0; t < T.cols(); ++t) {
                    const VecX V = T.col(t);
                    double dg = 0.0;
                    for (int i = 0; i < nv; ++i) dg += g.grad(i) * V(i);
                    const double lhs = xiv.dot(V.head(n)) + dg;
                    const double rhs = mu.dot(Jp * V.head(n)) + dg;
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
                  return worst;
                }));
  return r;
}

}  // namespace jd
