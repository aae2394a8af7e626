#include "jd/apaths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace jd {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

constexpr double kPi = std::numbers::pi;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

VecX as_vecx(const Point& p) { return Eigen::Map<const VecX>(p.data(), static_cast<Eigen::Index>(p.size())); }

Point as_point(const VecX& v) { return Point(v.data(), v.data() + v.size()); }

JetVec constants(const Point& p) {
  JetVec r;
  for (double v : p) r.emplace_back(v);
  return r;
}

void require_inside(const Chart& c, const Point& p) {
  for (int i = 0; i < c.dim(); ++i) {
    if (!c.period.empty() && c.period[at(i)] != 0.0) continue;
    const Interval& b = c.box[at(i)];
    const double w = b.hi - b.lo;
    if (!std::isfinite(p[at(i)]) || p[at(i)] < b.lo - w || p[at(i)] > b.hi + w)
      throw StructureError("path leaves the chart along " + c.names[at(i)]);
  }
}

// Fixed-step RK4 on [0, 1], recording every node.
std::vector<State> rk4_nodes(const std::function<void(const State&, State&, double)>& rhs, State x, int n) {
  if (n < 1) throw std::invalid_argument("need at least one step");
  odeint::runge_kutta4<State> stepper;
  const double h = 1.0 / n;
  std::vector<State> out{x};
  out.reserve(at(n + 1));
  for (int i = 0; i < n; ++i) {
    stepper.do_step(rhs, x, i * h, h);
    out.push_back(x);
  }
  return out;
}

double smooth_time(double u) { return u - std::sin(2.0 * kPi * u) / (2.0 * kPi); }
double smooth_rate(double u) { return 1.0 - std::cos(2.0 * kPi * u); }

}  // namespace

Mat AlgebroidModel::anchor(const Point& p) const { return frame.matrix(p).topRows(frame.dim()); }

VecX AlgebroidModel::value(const Point& p, const VecX& coeffs) const {
  if (coeffs.size() != rank()) throw std::invalid_argument("coefficient count does not match the frame rank");
  return frame.matrix(p) * coeffs;
}

StructureFunctions structure_functions(const AlgebroidModel& model, const Point& p) {
  const int k = model.rank();
  const auto vals = model.frame.values(p);
  const Mat F = model.frame.matrix(p);
  StructureFunctions s;
  s.c.assign(at(k), Mat::Zero(k, k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const VecX b = flatten(frame_bracket(vals[at(i)], vals[at(j)], model.frame.kind), model.frame.kind);
      const LeastSquares ls = least_squares(F, b);
      s.residual = std::max(s.residual, ls.normalized);
      for (int m = 0; m < k; ++m) {
        s.c[at(m)](i, j) = ls.x(m);
        s.c[at(m)](j, i) = -ls.x(m);
      }
    }
  return s;
}

APath integrate_base(const AlgebroidModel& model, const CoefficientPath& a, const Point& gamma0, int n) {
  const Chart& chart = model.frame.chart;
  if (static_cast<int>(gamma0.size()) != chart.dim()) throw std::invalid_argument("start point has the wrong dimension");
  const auto rhs = [&](const State& x, State& dx, double t) {
    require_inside(chart, x);
    const VecX v = model.anchor(x) * a(t);
    dx.assign(v.data(), v.data() + v.size());
  };
  APath path;
  path.kind = model.frame.kind;
  path.dim = chart.dim();
  path.coeffs = a;
  path.gamma = rk4_nodes(rhs, gamma0, n);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    path.t.push_back(t);
    path.a.push_back(a(t));
    path.element.push_back(model.value(path.gamma[at(i)], path.a.back()));
  }
  return path;
}

double apath_defect(const AlgebroidModel& model, const APath& path) {
  double w = 0.0;
  for (int i = 0; i < path.nodes(); ++i) {
    const double h = path.t[at(i + 1)] - path.t[at(i)];
    const VecX g0 = as_vecx(path.gamma[at(i)]), g1 = as_vecx(path.gamma[at(i + 1)]);
    const VecX v = model.anchor(as_point(0.5 * (g0 + g1))) * path.coeffs(path.t[at(i)] + 0.5 * h);
    w = std::max(w, ((g1 - g0) / h - v).cwiseAbs().maxCoeff());
  }
  return w;
}

double simpson(const std::vector<double>& values, double h) {
  const std::size_t n = values.size() - 1;
  if (values.size() < 3 || n % 2 != 0) throw std::invalid_argument("Simpson rule needs an even number of intervals");
  double s = values.front() + values.back();
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return s * h / 3.0;
}

double f_tilde(const APath& path) {
  if (path.kind != StructureKind::JacobiDirac) throw std::invalid_argument("f_tilde needs a Jacobi-Dirac path");
  std::vector<double> a3;
  for (int i = 0; i <= path.nodes(); ++i) a3.push_back(path.blocks(i).f);
  return std::exp(-simpson(a3, 1.0 / path.nodes()));
}

double moment_integral(const APath& path, const VectorField& e) {
  std::vector<double> v;
  for (int i = 0; i <= path.nodes(); ++i) {
    const Vec E = e(path.gamma[at(i)]);
    const VecX xi = path.blocks(i).xi;
    double s = 0.0;
    for (int k = 0; k < path.dim; ++k) s += xi(k) * E[k].value();
    v.push_back(s);
  }
  return simpson(v, 1.0 / path.nodes());
}

CoefficientPath concatenate(const CoefficientPath& a, const CoefficientPath& b) {
  // each half is reparametrized to stop at the junction
  return [a, b](double t) -> VecX {
    if (t <= 0.5) {
      const double u = 2.0 * t;
      return 2.0 * smooth_rate(u) * a(smooth_time(u));
    }
    const double u = 2.0 * t - 1.0;
    return 2.0 * smooth_rate(u) * b(smooth_time(u));
  };
}

Point develop(const GroupoidChart& g, const AlgebroidModel& model, const CoefficientPath& a, const Point& gamma0,
              int n) {
  if (!g.precontact() || model.frame.kind != StructureKind::JacobiDirac)
    throw std::invalid_argument("develop needs a precontact groupoid and a Jacobi-Dirac frame");
  {
    const Mat K = ker_target_at_unit(g, gamma0);
    const SubspaceComparison c = compare_spans(iso_seventeen_matrix(g, gamma0) * K, model.frame.matrix(gamma0));
    if (!c.same_rank() || c.residual > 1e-6)
      throw StructureError("the groupoid's algebroid does not match the path frame at the start point");
  }
  const auto rhs = [&](const State& x, State& dx, double t) {
    require_inside(g.gamma, x);
    const Point q = values(g.source(constants(x)));
    const Mat K = ker_target_at_unit(g, q);
    const VecX w = least_squares(iso_seventeen_matrix(g, q) * K, model.value(q, a(t))).x;
    const VecX v = left_translate(g, x, K * w);
    dx.assign(v.data(), v.data() + v.size());
  };
  return rk4_nodes(rhs, values(g.unit(constants(gamma0))), n).back();
}

LiftedPath lift_apath(const PreqInput& in, const APath& path, const Point& q0) {
  const int np = in.P.dim();
  const StructureFrame lc = diracization(in.L);
  const AlgebroidModel model{lc};
  const auto element_at = [&](const Point& q, double t) {
    const Point p(q.begin(), q.begin() + np);
    return split(model.value(p, path.coeffs(t)), np, StructureKind::JacobiDirac);
  };
  const auto rhs = [&](const State& x, State& dx, double t) {
    const E1Blocks b = element_at(x, t);
    const VecX v = anchor_hQ(in, b.X, b.xi, b.g, x);
    dx.assign(v.data(), v.data() + v.size());
  };
  LiftedPath out;
  out.q = rk4_nodes(rhs, q0, path.nodes());
  for (int i = 0; i <= path.nodes(); ++i) {
    const E1Blocks b = element_at(out.q[at(i)], path.t[at(i)]);
    out.element.push_back(lift_I_value(in, b.X, b.xi, b.g, out.q[at(i)]));
  }
  return out;
}

Report lift_checks(const PreqInput& in, const APath& path, const Point& q0, double rotation, double tol_projection,
                   double tol_equivariance) {
  const int np = in.P.dim();
  const int nq = in.Q.dim();
  const StructureFrame lc = diracization(in.L);
  const StructureFrame lbar = build_Lbar(in);
  const LiftedPath lift = lift_apath(in, path, q0);
  Report r;
  r.add(measure_once("lift-projection", "pi(lift) = base path", tol_projection, path.nodes() + 1, [&] {
    double w = 0.0;
    for (int i = 0; i <= path.nodes(); ++i)
      for (int k = 0; k < np; ++k) w = std::max(w, std::abs(lift.q[at(i)][at(k)] - path.gamma[at(i)][at(k)]));
    return w;
  }));
  r.add(measure_once("lift-coefficients", "projecting I(a) back to L+R recovers a", tol_projection, path.nodes() + 1, [&] {
    double w = 0.0;
    for (int i = 0; i <= path.nodes(); i += std::max(1, path.nodes() / 50)) {
      const E1Blocks b = split(lift.element[at(i)], nq, StructureKind::JacobiDirac);
      const VecX down = flatten(Vec(np), 0.0, VecX::Zero(np), b.g);
      VecX e = down;
      e.head(np) = b.X.head(np);
      e.segment(np + 1, np) = b.xi.head(np);
      const VecX coeffs = least_squares(lc.matrix(path.gamma[at(i)]), e).x;
      w = std::max(w, (coeffs - path.a[at(i)]).cwiseAbs().maxCoeff());
    }
    return w;
  }));
  r.add(measure_once("lift-in-Lbar", "I(a(t)) lies in Lbar along the lift", tol_projection, path.nodes() + 1, [&] {
    double w = 0.0;
    for (int i = 0; i <= path.nodes(); i += std::max(1, path.nodes() / 50)) {
      const Mat F = lbar.matrix(lift.q[at(i)]);
      w = std::max(w, least_squares(F, lift.element[at(i)]).normalized);
    }
    return w;
  }));
  r.add(measure_once("lift-equivariance", "lifting from q0 rotated by c = rotating the lift by c", tol_equivariance,
                     path.nodes() + 1, [&] {
                       Point q1 = q0;
                       q1[at(nq - 1)] += rotation;
                       const LiftedPath rot = lift_apath(in, path, q1);
                       double w = 0.0;
                       for (int i = 0; i <= path.nodes(); ++i)
                         for (int k = 0; k < nq; ++k) {
                           const double shift = k == nq - 1 ? rotation : 0.0;
                           w = std::max(w, std::abs(rot.q[at(i)][at(k)] - lift.q[at(i)][at(k)] - shift));
                         }
                       return w;
                     }));
  return r;
}

Report homotopy_residual(const AlgebroidModel& model, const HomotopyGrid& grid, double tol, const FrameConnection& conn,
                         bool expect_failure) {
  const std::size_t nt = grid.t.size(), ns = grid.s.size();
  if (nt < 3 || ns < 3 || grid.a.size() != nt || grid.b.size() != nt || grid.base.size() != nt)
    throw std::invalid_argument("homotopy grids do not match the time nodes");
  for (std::size_t i = 0; i < nt; ++i)
    if (grid.a[i].size() != ns || grid.b[i].size() != ns || grid.base[i].size() != ns)
      throw std::invalid_argument("homotopy grids do not match the deformation nodes");
  Report r;
  r.add(measure_once("homotopy-equation", "d_t b - d_s a = T(a, b)", tol, static_cast<int>((nt - 2) * (ns - 2)),
                     [&] {
                       double w = 0.0;
                       for (std::size_t i = 1; i + 1 < nt; ++i)
                         for (std::size_t j = 1; j + 1 < ns; ++j) {
                           const VecX dbt = (grid.b[i + 1][j] - grid.b[i - 1][j]) / (grid.t[i + 1] - grid.t[i - 1]);
                           const VecX das = (grid.a[i][j + 1] - grid.a[i][j - 1]) / (grid.s[j + 1] - grid.s[j - 1]);
                           const Point& p = grid.base[i][j];
                           const VecX& a = grid.a[i][j];
                           const VecX& b = grid.b[i][j];
                           const StructureFunctions sf = structure_functions(model, p);
                           VecX T(a.size());
                           for (Eigen::Index k = 0; k < T.size(); ++k) T(k) = a.dot(sf.c[static_cast<std::size_t>(k)] * b);
                           if (conn) {
                             const Mat rho = model.anchor(p);
                             T += conn(p, rho * b) * a - conn(p, rho * a) * b;
                           }
                           w = std::max(w, (dbt - das - T).cwiseAbs().maxCoeff());
                         }
                       return w;
                     },
                     expect_failure));
  r.add(measure_once("homotopy-start", "b(0, s) = 0", tol, static_cast<int>(ns), [&] {
    double w = 0.0;
    for (const VecX& b : grid.b.front()) w = std::max(w, b.cwiseAbs().maxCoeff());
    return w;
  }));
  r.add(measure_once("homotopy-endpoint", "b(1, s) = 0", tol, static_cast<int>(ns), [&] {
    double w = 0.0;
    for (const VecX& b : grid.b.back()) w = std::max(w, b.cwiseAbs().maxCoeff());
    return w;
  }));
  return r;
}

HomotopyGrid reparametrization_homotopy(const AlgebroidModel& model, const CoefficientPath& a0, const Point& gamma0,
                                        int nt, int ns) {
  HomotopyGrid g;
  for (int i = 0; i <= nt; ++i) g.t.push_back(static_cast<double>(i) / nt);
  for (int j = 0; j <= ns; ++j) g.s.push_back(static_cast<double>(j) / ns);
  g.a.assign(at(nt + 1), std::vector<VecX>(at(ns + 1)));
  g.b = g.a;
  g.base.assign(at(nt + 1), std::vector<Point>(at(ns + 1)));
  for (int j = 0; j <= ns; ++j) {
    const double s = g.s[at(j)];
    const CoefficientPath as = [&a0, s](double t) {
      return VecX((1.0 + 0.5 * s * (1.0 - 2.0 * t)) * a0(t + 0.5 * s * t * (1.0 - t)));
    };
    const APath path = integrate_base(model, as, gamma0, nt);
    for (int i = 0; i <= nt; ++i) {
      const double t = g.t[at(i)];
      g.a[at(i)][at(j)] = path.a[at(i)];
      g.b[at(i)][at(j)] = 0.5 * t * (1.0 - t) * a0(t + 0.5 * s * t * (1.0 - t));
      g.base[at(i)][at(j)] = path.gamma[at(i)];
    }
  }
  return g;
}

PeriodIntegral period_integral(const TwoForm& omega, const MapField& surface, int nu, int nv) {
  const auto value_at = [&](double u, double v) { return as_vecx(values(surface({u, v}))); };
  PeriodIntegral out;
  const auto edge_ok = [&](bool along_u) {
    double match = 0.0, c0 = 0.0, c1 = 0.0;
    const int m = 64;
    const VecX a0 = along_u ? value_at(0.0, 0.0) : value_at(0.0, 0.0);
    const VecX b0 = along_u ? value_at(1.0, 0.0) : value_at(0.0, 1.0);
    for (int k = 0; k <= m; ++k) {
      const double w = static_cast<double>(k) / m;
      const VecX a = along_u ? value_at(0.0, w) : value_at(w, 0.0);
      const VecX b = along_u ? value_at(1.0, w) : value_at(w, 1.0);
      match = std::max(match, (a - b).cwiseAbs().maxCoeff());
      c0 = std::max(c0, (a - a0).cwiseAbs().maxCoeff());
      c1 = std::max(c1, (b - b0).cwiseAbs().maxCoeff());
    }
    return std::min(match, std::max(c0, c1));
  };
  out.seam = std::max(edge_ok(true), edge_ok(false));
  if (out.seam > 1e-9) throw StructureError("surface is not closed: parameter edges neither match nor collapse");
  double sum = 0.0;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const Point uv{(i + 0.5) / nu, (j + 0.5) / nv};
      const JetVec img = surface(uv);
      const Form w = omega(values(img));
      const int m = static_cast<int>(img.size());
      double s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          if (a != b) s += w.get({a, b}).value() * img[at(a)].grad(0) * img[at(b)].grad(1);
      sum += s;
    }
  out.value = sum / (static_cast<double>(nu) * nv);
  return out;
}

CheckRecord prequantizability(const std::string& id, double value, double tol, bool expect_failure) {
  CheckRecord rec;
  rec.id = id;
  rec.anchor = "period integral of Omega over a closed surface is an integer";
  rec.threshold = tol;
  rec.samples = 1;
  rec.expect_failure = expect_failure;
  rec.max_residual = std::abs(value - std::round(value));
  rec.note = "value " + std::to_string(value);
  rec.decide();
  return rec;
}

MapField unit_sphere() {
  return [](const Point& uv) {
    const JetVec x = seed(uv);
    const Jet polar = Jet(kPi) * (x[0] - sin(Jet(2.0 * kPi) * x[0]) / Jet(2.0 * kPi));
    const Jet az = Jet(2.0 * kPi) * x[1];
    return JetVec{sin(polar) * cos(az), sin(polar) * sin(az), cos(polar)};
  };
}

TwoForm normalized_area_form(double scale) {
  const double k = scale / (4.0 * kPi);
  return make_form(3, 2,
                   {{{1, 2}, constant_field(k, 3) * coordinate_field(0, 3)},
                    {{0, 2}, constant_field(-k, 3) * coordinate_field(1, 3)},
                    {{0, 1}, constant_field(k, 3) * coordinate_field(2, 3)}});
}

}  // namespace jd
