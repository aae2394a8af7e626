#include "jd/groupoids.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "jd/expr.hpp"

namespace jd {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

JetVec zeros(int n) { return JetVec(at(n), Jet(0.0)); }

Mat jacobian_of(const JetVec& image, int n) {
  Mat J(static_cast<int>(image.size()), n);
  for (int a = 0; a < J.rows(); ++a)
    for (int i = 0; i < n; ++i) J(a, i) = image[at(a)].grad(i);
  return J;
}

JetVec constants(const Point& p) {
  JetVec r;
  r.reserve(p.size());
  for (double v : p) r.emplace_back(v);
  return r;
}

VecX form_values(const Form& w) {
  VecX r(w.size());
  for (int i = 0; i < w.size(); ++i) r(i) = w.c[at(i)].value();
  return r;
}

Mat two_form_matrix(const Form& w) {
  Mat W = Mat::Zero(w.n, w.n);
  for (int i = 0; i < w.n; ++i)
    for (int j = 0; j < w.n; ++j)
      if (i != j) W(i, j) = w.get({i, j}).value();
  return W;
}

VecX vec_values(const Vec& v) {
  VecX r(v.dim());
  for (int i = 0; i < v.dim(); ++i) r(i) = v[i].value();
  return r;
}

double max_diff(const JetVec& a, const JetVec& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i].value() - b[i].value()));
  return w;
}

struct ParamCursor {
  int k = 0;
  int next() { return k++; }
};

}  // namespace

std::string to_string(FactorKind k) {
  switch (k) {
    case FactorKind::Pair: return "pair";
    case FactorKind::Group: return "group";
    case FactorKind::Action: return "action";
    case FactorKind::Unit: return "unit";
  }
  return "?";
}

void GroupoidChart::validate() const {
  std::vector<int> g_used(at(gamma.dim()), 0), b_used(at(base.dim()), 0);
  const auto use = [](std::vector<int>& v, int i, const char* what) {
    if (i < 0 || i >= static_cast<int>(v.size())) throw std::invalid_argument(std::string(what) + " index out of range");
    ++v[at(i)];
  };
  for (const Factor& f : factors) {
    const std::size_t need = (f.kind == FactorKind::Pair || f.kind == FactorKind::Action) ? 2 : 1;
    if (f.gamma.size() != need) throw std::invalid_argument(to_string(f.kind) + " factor needs " + std::to_string(need) + " groupoid coordinates");
    for (int i : f.gamma) use(g_used, i, "groupoid coordinate");
    if (f.kind != FactorKind::Group) use(b_used, f.base, "base coordinate");
  }
  for (int c : g_used)
    if (c != 1) throw std::invalid_argument("every groupoid coordinate must belong to exactly one factor");
  for (int c : b_used)
    if (c != 1) throw std::invalid_argument("every base coordinate must belong to exactly one factor");
  if (!theta && !omega) throw std::invalid_argument("groupoid needs a 1-form theta or a 2-form omega");
  if (theta && !f) throw std::invalid_argument("precontact groupoid needs the multiplicative function f");
}

JetVec GroupoidChart::source(const JetVec& g) const {
  JetVec q = zeros(base.dim());
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: q[at(f.base)] = g[at(f.gamma[1])]; break;
      case FactorKind::Action: q[at(f.base)] = g[at(f.gamma[1])]; break;
      case FactorKind::Unit: q[at(f.base)] = g[at(f.gamma[0])]; break;
      case FactorKind::Group: break;
    }
  }
  return q;
}

JetVec GroupoidChart::target(const JetVec& g) const {
  JetVec q = zeros(base.dim());
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: q[at(f.base)] = g[at(f.gamma[0])]; break;
      case FactorKind::Action: q[at(f.base)] = exp(Jet(f.rate) * g[at(f.gamma[0])]) * g[at(f.gamma[1])]; break;
      case FactorKind::Unit: q[at(f.base)] = g[at(f.gamma[0])]; break;
      case FactorKind::Group: break;
    }
  }
  return q;
}

JetVec GroupoidChart::unit(const JetVec& q) const {
  JetVec g = zeros(gamma.dim());
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair:
        g[at(f.gamma[0])] = q[at(f.base)];
        g[at(f.gamma[1])] = q[at(f.base)];
        break;
      case FactorKind::Action: g[at(f.gamma[1])] = q[at(f.base)]; break;
      case FactorKind::Unit: g[at(f.gamma[0])] = q[at(f.base)]; break;
      case FactorKind::Group: break;
    }
  }
  return g;
}

JetVec GroupoidChart::inverse(const JetVec& g) const {
  JetVec r = g;
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: std::swap(r[at(f.gamma[0])], r[at(f.gamma[1])]); break;
      case FactorKind::Group: r[at(f.gamma[0])] = -g[at(f.gamma[0])]; break;
      case FactorKind::Action:
        r[at(f.gamma[0])] = -g[at(f.gamma[0])];
        r[at(f.gamma[1])] = exp(Jet(f.rate) * g[at(f.gamma[0])]) * g[at(f.gamma[1])];
        break;
      case FactorKind::Unit: break;
    }
  }
  return r;
}

JetVec GroupoidChart::multiply(const JetVec& g, const JetVec& h) const {
  JetVec r = zeros(gamma.dim());
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair:
        r[at(f.gamma[0])] = g[at(f.gamma[0])];
        r[at(f.gamma[1])] = h[at(f.gamma[1])];
        break;
      case FactorKind::Group: r[at(f.gamma[0])] = g[at(f.gamma[0])] + h[at(f.gamma[0])]; break;
      case FactorKind::Action:
        r[at(f.gamma[0])] = g[at(f.gamma[0])] + h[at(f.gamma[0])];
        r[at(f.gamma[1])] = h[at(f.gamma[1])];
        break;
      case FactorKind::Unit: r[at(f.gamma[0])] = g[at(f.gamma[0])]; break;
    }
  }
  return r;
}

Chart GroupoidChart::pair_chart() const {
  std::vector<std::string> names;
  std::vector<Interval> box;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Factor& f = factors[k];
    const std::string tag = std::to_string(k);
    switch (f.kind) {
      case FactorKind::Pair:
        for (const char* s : {"a", "b", "c"}) {
          names.push_back(std::string(s) + tag);
          box.push_back(base.box[at(f.base)]);
        }
        break;
      case FactorKind::Group:
        for (const char* s : {"u", "w"}) {
          names.push_back(std::string(s) + tag);
          box.push_back(gamma.box[at(f.gamma[0])]);
        }
        break;
      case FactorKind::Action:
        names.push_back("t1_" + tag);
        box.push_back(gamma.box[at(f.gamma[0])]);
        names.push_back("t2_" + tag);
        box.push_back(gamma.box[at(f.gamma[0])]);
        names.push_back("x" + tag);
        box.push_back(base.box[at(f.base)]);
        break;
      case FactorKind::Unit:
        names.push_back("x" + tag);
        box.push_back(base.box[at(f.base)]);
        break;
    }
  }
  return Chart(names, box);
}

std::pair<JetVec, JetVec> GroupoidChart::pair_at(const JetVec& c) const {
  JetVec g = zeros(gamma.dim()), h = zeros(gamma.dim());
  ParamCursor p;
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: {
        const Jet a = c[at(p.next())], b = c[at(p.next())], d = c[at(p.next())];
        g[at(f.gamma[0])] = a;
        g[at(f.gamma[1])] = b;
        h[at(f.gamma[0])] = b;
        h[at(f.gamma[1])] = d;
        break;
      }
      case FactorKind::Group:
        g[at(f.gamma[0])] = c[at(p.next())];
        h[at(f.gamma[0])] = c[at(p.next())];
        break;
      case FactorKind::Action: {
        const Jet t1 = c[at(p.next())], t2 = c[at(p.next())], x = c[at(p.next())];
        h[at(f.gamma[0])] = t2;
        h[at(f.gamma[1])] = x;
        g[at(f.gamma[0])] = t1;
        g[at(f.gamma[1])] = exp(Jet(f.rate) * t2) * x;
        break;
      }
      case FactorKind::Unit: {
        const Jet x = c[at(p.next())];
        g[at(f.gamma[0])] = x;
        h[at(f.gamma[0])] = x;
        break;
      }
    }
  }
  return {g, h};
}

std::vector<Interval> GroupoidChart::triple_box() const {
  std::vector<Interval> box;
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: box.insert(box.end(), 4, base.box[at(f.base)]); break;
      case FactorKind::Group: box.insert(box.end(), 3, gamma.box[at(f.gamma[0])]); break;
      case FactorKind::Action:
        box.insert(box.end(), 3, gamma.box[at(f.gamma[0])]);
        box.push_back(base.box[at(f.base)]);
        break;
      case FactorKind::Unit: box.push_back(base.box[at(f.base)]); break;
    }
  }
  return box;
}

std::array<JetVec, 3> GroupoidChart::triple_at(const JetVec& c) const {
  std::array<JetVec, 3> r{zeros(gamma.dim()), zeros(gamma.dim()), zeros(gamma.dim())};
  ParamCursor p;
  for (const Factor& f : factors) {
    switch (f.kind) {
      case FactorKind::Pair: {
        Jet v[4];
        for (auto& x : v) x = c[at(p.next())];
        for (int e = 0; e < 3; ++e) {
          r[at(e)][at(f.gamma[0])] = v[e];
          r[at(e)][at(f.gamma[1])] = v[e + 1];
        }
        break;
      }
      case FactorKind::Group:
        for (int e = 0; e < 3; ++e) r[at(e)][at(f.gamma[0])] = c[at(p.next())];
        break;
      case FactorKind::Action: {
        const Jet t1 = c[at(p.next())], t2 = c[at(p.next())], t3 = c[at(p.next())], x = c[at(p.next())];
        r[2][at(f.gamma[0])] = t3;
        r[2][at(f.gamma[1])] = x;
        r[1][at(f.gamma[0])] = t2;
        r[1][at(f.gamma[1])] = exp(Jet(f.rate) * t3) * x;
        r[0][at(f.gamma[0])] = t1;
        r[0][at(f.gamma[1])] = exp(Jet(f.rate) * (t2 + t3)) * x;
        break;
      }
      case FactorKind::Unit: {
        const Jet x = c[at(p.next())];
        for (int e = 0; e < 3; ++e) r[at(e)][at(f.gamma[0])] = x;
        break;
      }
    }
  }
  return r;
}

MapField GroupoidChart::source_map() const {
  return [g = *this](const Point& p) { return g.source(seed(p)); };
}

MapField GroupoidChart::target_map() const {
  return [g = *this](const Point& p) { return g.target(seed(p)); };
}

std::vector<Point> gamma_samples(const GroupoidChart& g, int count, std::uint64_t seed) {
  std::vector<Point> pts = sample_points(g.gamma, count, seed);
  pts.insert(pts.end(), g.extra_points.begin(), g.extra_points.end());
  return pts;
}

Report check_structure(const GroupoidChart& g, int samples, std::uint64_t seed, double tol) {
  g.validate();
  Report r;
  const auto qs = sample_points(g.base, samples, seed);
  const auto gs = gamma_samples(g, samples, seed + 1);
  const auto ps = sample_points(g.pair_chart(), samples, seed + 2);
  std::vector<Point> ts;
  {
    std::mt19937_64 rng(seed + 3);
    const auto box = g.triple_box();
    for (int i = 0; i < samples; ++i) {
      Point c;
      for (const auto& iv : box) c.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng));
      ts.push_back(c);
    }
  }
  r.add(measure("unit-source-target", "s(1_q) = q = t(1_q)", tol, qs, [&](const Point& q) {
    const JetVec u = g.unit(constants(q));
    return std::max(max_diff(g.source(u), constants(q)), max_diff(g.target(u), constants(q)));
  }));
  r.add(measure("composable", "s(g) = t(h) on the composable chart", tol, ps, [&](const Point& c) {
    const auto [a, b] = g.pair_at(constants(c));
    return max_diff(g.source(a), g.target(b));
  }));
  r.add(measure("product-source-target", "s(gh) = s(h), t(gh) = t(g)", tol, ps, [&](const Point& c) {
    const auto [a, b] = g.pair_at(constants(c));
    const JetVec m = g.multiply(a, b);
    return std::max(max_diff(g.source(m), g.source(b)), max_diff(g.target(m), g.target(a)));
  }));
  r.add(measure("associativity", "(gh)k = g(hk)", tol, ts, [&](const Point& c) {
    const auto e = g.triple_at(constants(c));
    return max_diff(g.multiply(g.multiply(e[0], e[1]), e[2]), g.multiply(e[0], g.multiply(e[1], e[2])));
  }));
  r.add(measure("unit-law", "1_{t(g)} g = g = g 1_{s(g)}", tol, gs, [&](const Point& p) {
    const JetVec x = constants(p);
    return std::max(max_diff(g.multiply(g.unit(g.target(x)), x), x), max_diff(g.multiply(x, g.unit(g.source(x))), x));
  }));
  r.add(measure("inverse", "g g^{-1} = 1_{t(g)}, g^{-1} g = 1_{s(g)}", tol, gs, [&](const Point& p) {
    const JetVec x = constants(p);
    const JetVec i = g.inverse(x);
    return std::max(max_diff(g.multiply(x, i), g.unit(g.target(x))), max_diff(g.multiply(i, x), g.unit(g.source(x))));
  }));
  return r;
}

Report check_multiplicativity(const GroupoidChart& g, const std::vector<Point>& pair_points, double tol) {
  Report r;
  const int nc = g.pair_chart().dim();
  const auto pull1 = [&](const JetVec& phi) {
    return VecX(jacobian_of(phi, nc).transpose() * form_values(g.theta(values(phi))));
  };
  const auto pull2 = [&](const JetVec& phi) {
    const Mat D = jacobian_of(phi, nc);
    return Mat(D.transpose() * two_form_matrix(g.omega(values(phi))) * D);
  };
  if (g.precontact()) {
    r.add(measure("theta-multiplicative", "m^*theta = pr1^*theta pr2^*f + pr2^*theta", tol, pair_points,
                  [&](const Point& c) {
                    const auto [a, b] = g.pair_at(seed(c));
                    const JetVec m = g.multiply(a, b);
                    const VecX lhs = pull1(m);
                    const VecX rhs = pull1(a) * g.f(values(b)).value() + pull1(b);
                    return (lhs - rhs).cwiseAbs().maxCoeff();
                  }));
    r.add(measure("f-multiplicative", "f(gh) = f(g) f(h)", tol, pair_points, [&](const Point& c) {
      const auto [a, b] = g.pair_at(seed(c));
      const JetVec m = g.multiply(a, b);
      return std::abs(g.f(values(m)).value() - g.f(values(a)).value() * g.f(values(b)).value());
    }));
  } else {
    r.add(measure("omega-multiplicative", "m^*Omega = pr1^*Omega + pr2^*Omega", tol, pair_points,
                  [&](const Point& c) {
                    const auto [a, b] = g.pair_at(seed(c));
                    const JetVec m = g.multiply(a, b);
                    return (pull2(m) - pull2(a) - pull2(b)).cwiseAbs().maxCoeff();
                  }));
  }
  return r;
}

Mat source_jacobian(const GroupoidChart& g, const Point& p) { return jacobian_of(g.source(seed(p)), g.gamma.dim()); }
Mat target_jacobian(const GroupoidChart& g, const Point& p) { return jacobian_of(g.target(seed(p)), g.gamma.dim()); }

int nondegeneracy_defect(const GroupoidChart& g, const Point& p) {
  const int n = g.gamma.dim();
  const Mat Js = source_jacobian(g, p), Jt = target_jacobian(g, p);
  std::vector<Mat> blocks{Js, Jt};
  if (g.precontact()) {
    const Form th = g.theta(p);
    blocks.push_back(form_values(th).transpose());
    blocks.push_back(two_form_matrix(d(th)));
  } else {
    blocks.push_back(two_form_matrix(g.omega(p)));
  }
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Mat M(rows, n);
  Eigen::Index k = 0;
  for (const auto& b : blocks) {
    M.middleRows(k, b.rows()) = b;
    k += b.rows();
  }
  return n - rank_of(M);
}

Report check_nondegeneracy(const GroupoidChart& g, const std::vector<Point>& points) {
  Report r;
  r.add(measure("nondegeneracy",
                g.precontact() ? "ker t_* ∩ ker s_* ∩ ker theta ∩ ker dtheta = 0" : "ker t_* ∩ ker s_* ∩ ker Omega = 0",
                0.5, points, [&](const Point& p) { return static_cast<double>(nondegeneracy_defect(g, p)); }));
  return r;
}

Report groupoid_moment(const GroupoidChart& g, const std::vector<Point>& points, double tol) {
  if (!g.v || !g.precontact()) throw std::invalid_argument("groupoid has no circle action or no 1-form");
  Report r;
  r.add(measure("groupoid-moment", "J_Gamma = theta(v_Gamma) = 1 - f_Gamma", tol, points, [&](const Point& p) {
    return std::abs(pair(g.theta(p), g.v(p)).value() - (1.0 - g.f(p).value()));
  }));
  r.add(measure("action-preserves-theta", "L_v theta = 0", tol, points,
                [&](const Point& p) { return max_abs(lie_derivative(g.v(p), g.theta(p))); }));
  return r;
}

Report deck_invariance(const GroupoidChart& g, const std::vector<Point>& points, double tol) {
  Report r;
  r.add(measure("deck-invariance", "structure invariant under the deck translations", tol, points, [&](const Point& p) {
    double w = 0.0;
    for (const VecX& T : g.deck) {
      Point q = p;
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += T(static_cast<Eigen::Index>(i));
      if (g.precontact()) {
        w = std::max(w, (form_values(g.theta(q)) - form_values(g.theta(p))).cwiseAbs().maxCoeff());
        w = std::max(w, std::abs(g.f(q).value() - g.f(p).value()));
      } else {
        w = std::max(w, (two_form_matrix(g.omega(q)) - two_form_matrix(g.omega(p))).cwiseAbs().maxCoeff());
      }
    }
    return w;
  }));
  return r;
}

Report source_forward(const GroupoidChart& g, const StructureFrame& base_structure, const std::vector<Point>& points,
                      double tol) {
  const StructureFrame graph = g.precontact() ? graph_of_1form(g.theta, g.gamma) : graph_of_2form(g.omega, g.gamma);
  const MapField s = g.source_map();
  Report r;
  r.add(measure("source-forward", "s_* graph(theta_Gamma) = base structure at s(g)", tol, points, [&](const Point& p) {
    const SubspaceComparison c = compare_spans(pushforward(graph, s, p), base_structure.matrix(values(g.source(constants(p)))));
    return c.same_rank() ? c.residual : 1.0;
  }));
  return r;
}

namespace {

Point unit_point(const GroupoidChart& g, const Point& q) { return values(g.unit(constants(q))); }

}  // namespace

Mat ker_source_at_unit(const GroupoidChart& g, const Point& q) {
  return kernel_basis(source_jacobian(g, unit_point(g, q)));
}

Mat ker_target_at_unit(const GroupoidChart& g, const Point& q) {
  return kernel_basis(target_jacobian(g, unit_point(g, q)));
}

namespace {

struct UnitData {
  Mat Js, Jt, Du, W;
  VecX theta;
  VecX dlogf;
};

UnitData unit_data(const GroupoidChart& g, const Point& q) {
  const Point u = unit_point(g, q);
  UnitData d;
  d.Js = source_jacobian(g, u);
  d.Jt = target_jacobian(g, u);
  d.Du = jacobian_of(g.unit(seed(q)), g.base.dim());
  const Form th = g.theta(u);
  d.theta = form_values(th);
  d.W = two_form_matrix(jd::d(th));
  const Jet f = g.f(u);
  d.dlogf = VecX(g.gamma.dim());
  for (int i = 0; i < g.gamma.dim(); ++i) d.dlogf(i) = f.grad(i) / f.value();
  return d;
}

}  // namespace

Mat iso_sixteen_matrix(const GroupoidChart& g, const Point& q) {
  const UnitData u = unit_data(g, q);
  Mat M(2 * g.base.dim() + 2, g.gamma.dim());
  // r = −log f
  M << u.Jt, u.dlogf.transpose(), -u.Du.transpose() * u.W.transpose(), u.theta.transpose();
  return M;
}

Mat iso_seventeen_matrix(const GroupoidChart& g, const Point& q) {
  const UnitData u = unit_data(g, q);
  Mat M(2 * g.base.dim() + 2, g.gamma.dim());
  M << u.Js, -u.dlogf.transpose(), u.Du.transpose() * u.W.transpose(), -u.theta.transpose();
  return M;
}

VecX iso_sixteen(const GroupoidChart& g, const Point& q, const VecX& Y) { return iso_sixteen_matrix(g, q) * Y; }

VecX iso_seventeen(const GroupoidChart& g, const Point& q, const VecX& Y) { return iso_seventeen_matrix(g, q) * Y; }

Report iso_check(const GroupoidChart& g, const StructureFrame& base_structure, const std::vector<Point>& q_points,
                 double tol) {
  Report r;
  const auto image = [&](const Point& q, bool sixteen) {
    return sixteen ? Mat(iso_sixteen_matrix(g, q) * ker_source_at_unit(g, q))
                   : Mat(iso_seventeen_matrix(g, q) * ker_target_at_unit(g, q));
  };
  r.add(measure("iso-sixteen", "Y -> (t_*Y, -r_*Y)+(-dtheta(Y)|TQ, theta(Y)) maps ker s_* onto Lbar", tol, q_points,
                [&](const Point& q) {
                  const SubspaceComparison c = compare_spans(image(q, true), base_structure.matrix(q));
                  return c.same_rank() && c.rank_a == base_structure.rank() ? c.residual : 1.0;
                }));
  r.add(measure("iso-seventeen", "Y -> (s_*Y, r_*Y)+(dtheta(Y)|TQ, -theta(Y)) maps ker t_* onto Lbar", tol, q_points,
                [&](const Point& q) {
                  const SubspaceComparison c = compare_spans(image(q, false), base_structure.matrix(q));
                  return c.same_rank() && c.rank_a == base_structure.rank() ? c.residual : 1.0;
                }));
  r.add(measure("iso-inversion", "iso_seventeen = iso_sixteen o i_*", tol, q_points, [&](const Point& q) {
    const Point u = unit_point(g, q);
    const Mat Di = jacobian_of(g.inverse(seed(u)), g.gamma.dim());
    const Mat K = ker_target_at_unit(g, q);
    return (iso_seventeen_matrix(g, q) * K - iso_sixteen_matrix(g, q) * Di * K).cwiseAbs().maxCoeff();
  }));
  return r;
}

CorSolution cor_computation_solve(const GroupoidChart& g, const Point& p, const VecX& lambda) {
  const int n = g.gamma.dim();
  const int nq = g.base.dim();
  const E1Blocks b = split(lambda, nq, StructureKind::JacobiDirac);
  const Mat Js = source_jacobian(g, p), Jt = target_jacobian(g, p);
  const Form th = g.theta(p);
  const VecX theta = form_values(th);
  const Mat W = two_form_matrix(d(th));
  Mat M(2 * nq + 1 + n, n);
  VecX rhs(2 * nq + 1 + n);
  M << Jt, theta.transpose(), W.transpose(), Js;
  rhs << VecX::Zero(nq), -b.g, Js.transpose() * b.xi - b.f * theta, b.X;
  const LeastSquares ls = least_squares(M, rhs);
  CorSolution s;
  s.Y = ls.x;
  s.residual = ls.normalized;
  s.kernel_dim = n - rank_of(M);
  const Jet f = g.f(p);
  VecX df(n);
  for (int i = 0; i < n; ++i) df(i) = f.grad(i);
  s.r_residual = std::abs(-df.dot(s.Y) / f.value() - b.f);
  return s;
}

VecX left_translate(const GroupoidChart& g, const Point& p, const VecX& Y) {
  const JetVec x = constants(p);
  const JetVec u = g.unit(g.source(x));
  JetVec h(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    h[i] = Jet::constant(u[i].value(), 1) + Jet(Y(static_cast<Eigen::Index>(i))) * Jet::variable(0.0, 0, 1);
  const JetVec m = g.multiply(x, h);
  VecX r(static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) r(static_cast<Eigen::Index>(i)) = m[i].grad(0);
  return r;
}

// Built-in examples

GroupoidChart example_1dim() {
  GroupoidChart g;
  g.name = "1dim";
  g.gamma = Chart({"theta1", "t", "eps", "theta2", "x"}, {{0, 1}, {-1, 1}, {-1, 1}, {0, 1}, {-2, 2}}, {1, 0, 0, 1, 0});
  g.base = Chart({"x", "theta"}, {{-2, 2}, {0, 1}}, {0, 1});
  g.factors = {{FactorKind::Pair, {0, 3}, 1, 0.0}, {FactorKind::Action, {1, 4}, 0, -1.0}, {FactorKind::Group, {2}, -1, 0.0}};
  const Chart& c = g.gamma;
  g.theta = make_one_form({field_from("-exp(t)", c), field_from("0", c), field_from("x", c), field_from("1", c),
                           field_from("0", c)});
  g.f = field_from("exp(t)", c);
  g.v = make_vector({field_from("1", c), field_from("0", c), field_from("0", c), field_from("1", c), field_from("0", c)});
  VecX T = VecX::Zero(5);
  T << 1, 0, 0, 1, 0;
  g.deck = {T};
  // the slice {x = 0} between the two open orbits
  for (Point p : sample_points(c, 10, 99)) {
    p[4] = 0.0;
    g.extra_points.push_back(p);
  }
  return g;
}

GroupoidChart example_sympl() {
  GroupoidChart g;
  g.name = "sympl";
  g.gamma = Chart({"x1", "y1", "phi1", "s", "x2", "y2", "phi2"},
                  {{-1, 1}, {-1, 1}, {0, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {0, 1}}, {0, 0, 1, 0, 0, 0, 1});
  g.base = Chart({"x", "y", "phi"}, {{-1, 1}, {-1, 1}, {0, 1}}, {0, 0, 1});
  g.factors = {{FactorKind::Pair, {0, 4}, 0, 0.0},
               {FactorKind::Pair, {1, 5}, 1, 0.0},
               {FactorKind::Pair, {2, 6}, 2, 0.0},
               {FactorKind::Group, {3}, -1, 0.0}};
  const Chart& c = g.gamma;
  // −e^{−s} σ(copy 1) + σ(copy 2), σ = dφ + ½(x dy − y dx)
  g.theta = make_one_form({field_from("exp(-s)*y1/2", c), field_from("-exp(-s)*x1/2", c), field_from("-exp(-s)", c),
                           field_from("0", c), field_from("-y2/2", c), field_from("x2/2", c), field_from("1", c)});
  g.f = field_from("exp(-s)", c);
  g.v = make_vector({field_from("0", c), field_from("0", c), field_from("1", c), field_from("0", c), field_from("0", c),
                     field_from("0", c), field_from("1", c)});
  VecX T = VecX::Zero(7);
  T << 0, 0, 1, 0, 0, 0, 1;
  g.deck = {T};
  return g;
}

GroupoidChart example_lcs_Qplus() {
  GroupoidChart g;
  g.name = "lcs-Qplus";
  g.gamma = Chart({"theta1", "x1", "eps", "theta2", "x2"}, {{0, 1}, {0.5, 2}, {-1, 1}, {0, 1}, {0.5, 2}}, {1, 0, 0, 1, 0});
  g.base = Chart({"x", "theta"}, {{0.5, 2}, {0, 1}}, {0, 1});
  g.factors = {{FactorKind::Pair, {0, 3}, 1, 0.0}, {FactorKind::Pair, {1, 4}, 0, 0.0}, {FactorKind::Group, {2}, -1, 0.0}};
  const Chart& c = g.gamma;
  g.theta = make_one_form({field_from("-x2/x1", c), field_from("0", c), field_from("x2", c), field_from("1", c),
                           field_from("0", c)});
  g.f = field_from("x2/x1", c);
  g.v = make_vector({field_from("1", c), field_from("0", c), field_from("0", c), field_from("1", c), field_from("0", c)});
  VecX T = VecX::Zero(5);
  T << 1, 0, 0, 1, 0;
  g.deck = {T};
  return g;
}

GroupoidChart example_pair_presymplectic() {
  GroupoidChart g;
  g.name = "pair-presymplectic";
  g.gamma = Chart({"x1", "y1", "x2", "y2"}, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
  g.base = Chart({"x", "y"}, {{-1, 1}, {-1, 1}});
  g.factors = {{FactorKind::Pair, {0, 2}, 0, 0.0}, {FactorKind::Pair, {1, 3}, 1, 0.0}};
  const Chart& c = g.gamma;
  g.omega = make_form(4, 2, {{{0, 1}, field_from("-1", c)}, {{2, 3}, field_from("1", c)}});
  return g;
}

GroupoidChart example_1dim_reduced() {
  GroupoidChart g;
  g.name = "1dim-reduced";
  g.gamma = Chart({"x", "theta", "eps"}, {{-2, 2}, {0, 1}, {-1, 1}}, {0, 1, 0});
  g.base = Chart({"x"}, {{-2, 2}});
  g.factors = {{FactorKind::Unit, {0}, 0, 0.0}, {FactorKind::Group, {1}, -1, 0.0}, {FactorKind::Group, {2}, -1, 0.0}};
  const Chart& c = g.gamma;
  g.theta = make_one_form({field_from("0", c), field_from("1", c), field_from("x", c)});
  g.f = field_from("1", c);
  VecX T = VecX::Zero(3);
  T << 0, 1, 0;
  g.deck = {T};
  return g;
}

std::vector<std::string> builtin_groupoids() {
  return {"1dim", "sympl", "lcs-Qplus", "pair-presymplectic", "1dim-reduced"};
}

GroupoidChart builtin_groupoid(const std::string& name) {
  if (name == "1dim") return example_1dim();
  if (name == "sympl") return example_sympl();
  if (name == "lcs-Qplus") return example_lcs_Qplus();
  if (name == "pair-presymplectic") return example_pair_presymplectic();
  if (name == "1dim-reduced") return example_1dim_reduced();
  throw std::invalid_argument("unknown built-in groupoid '" + name + "'");
}

Report reduce_groupoid_1dim(int samples, std::uint64_t rng_seed, double tol) {
  const GroupoidChart big = example_1dim();
  const GroupoidChart red = example_1dim_reduced();
  Report r;
  // J⁻¹(0) = {t = 0}, parametrized by z = (θ1, ε, θ2, x)
  const Chart slice({"theta1", "eps", "theta2", "x"}, {{0, 1}, {-1, 1}, {0, 1}, {-2, 2}});
  const auto embed_slice = [](const JetVec& z) { return JetVec{z[0], Jet(0.0), z[1], z[2], z[3]}; };
  const auto quotient = [](const JetVec& g) { return JetVec{g[4], g[3] - g[0], g[2]}; };
  const auto zs = sample_points(slice, samples, rng_seed);
  r.add(measure("reduced-zero-level", "J_Gamma = 0 on {t = 0} and the quotient kills v_Gamma", tol, zs, [&](const Point& z) {
    const Point g = values(embed_slice(constants(z)));
    const double J = pair(big.theta(g), big.v(g)).value();
    const Mat Dq = jacobian_of(quotient(seed(g)), 5);
    return std::max(std::abs(J), (Dq * vec_values(big.v(g))).cwiseAbs().maxCoeff());
  }));
  r.add(measure("reduced-form", "theta_Gamma restricted to {t=0} = quotient^*(dtheta + x deps)", tol, zs, [&](const Point& z) {
    const JetVec gz = embed_slice(seed(z));
    const VecX lhs = jacobian_of(gz, 4).transpose() * form_values(big.theta(values(gz)));
    const JetVec qz = quotient(gz);
    const VecX rhs = jacobian_of(qz, 4).transpose() * form_values(red.theta(values(qz)));
    return (lhs - rhs).cwiseAbs().maxCoeff();
  }));
  const auto ps = sample_points(big.pair_chart(), samples, rng_seed + 1);
  r.add(measure("reduced-morphism", "quotient(gh) = quotient(g) quotient(h) on {t=0}", tol, ps, [&](const Point& c0) {
    Point c = c0;
    c[3] = 0.0;  // t1 of the action factor
    c[4] = 0.0;  // t2
    const auto [a, b] = big.pair_at(constants(c));
    return max_diff(quotient(big.multiply(a, b)), red.multiply(quotient(a), quotient(b)));
  }));
  const auto rs = gamma_samples(red, samples, rng_seed + 2);
  r.add(measure("reduced-symplectic", "d(dtheta + x deps) = dx ^ deps", 0.0 + tol, rs, [&](const Point& p) {
    const Form w = d(red.theta(p));
    return std::max({std::abs(w.get({0, 2}).value() - 1.0), std::abs(w.get({0, 1}).value()), std::abs(w.get({1, 2}).value())});
  }));
  Report s = check_structure(red, samples, rng_seed + 3, tol);
  for (auto& rec : s.records) rec.id = "reduced-" + rec.id;
  r.append(s);
  Report m = check_multiplicativity(red, sample_points(red.pair_chart(), samples, rng_seed + 4), tol);
  for (auto& rec : m.records) rec.id = "reduced-" + rec.id;
  r.append(m);
  Report nd = check_nondegeneracy(red, rs);
  for (auto& rec : nd.records) rec.id = "reduced-" + rec.id;
  r.append(nd);
  Report dk = deck_invariance(red, rs, tol);
  for (auto& rec : dk.records) rec.id = "reduced-" + rec.id;
  r.append(dk);
  r.add(measure("reduced-R-field", "Y from (0,0)+(0,-1): unique, theta(Y)=1, i_Y dtheta=0, Y = d/dtheta", tol, rs,
                [&](const Point& p) {
                  VecX lambda = VecX::Zero(4);
                  lambda(3) = -1.0;
                  const CorSolution s = cor_computation_solve(red, p, lambda);
                  if (s.kernel_dim != 0) return 1.0;
                  const Form th = red.theta(p);
                  const double t = form_values(th).dot(s.Y) - 1.0;
                  const double w = (two_form_matrix(d(th)).transpose() * s.Y).cwiseAbs().maxCoeff();
                  VecX e = VecX::Zero(3);
                  e(1) = 1.0;
                  return std::max({std::abs(t), w, (s.Y - e).cwiseAbs().maxCoeff(), s.residual});
                }));
  // the symplectic groupoid T*ℝ under the reduced one; its source is a forward Dirac map onto (ℝ, 0)
  GroupoidChart tr;
  tr.name = "T*R";
  tr.gamma = Chart({"x", "eps"}, {{-2, 2}, {-1, 1}});
  tr.base = Chart({"x"}, {{-2, 2}});
  tr.factors = {{FactorKind::Unit, {0}, 0, 0.0}, {FactorKind::Group, {1}, -1, 0.0}};
  tr.omega = make_form(2, 2, {{{0, 1}, field_from("1", tr.gamma)}});
  StructureFrame zero_poisson;
  zero_poisson.kind = StructureKind::Dirac;
  zero_poisson.chart = tr.base;
  zero_poisson.sections = {dirac_section(zero_vector(1), coordinate_differential(0, 1))};
  Report sf = source_forward(tr, zero_poisson, sample_points(tr.gamma, samples, rng_seed + 5), tol);
  for (auto& rec : sf.records) rec.id = "reduced-" + rec.id;
  r.append(sf);
  return r;
}

}  // namespace jd
