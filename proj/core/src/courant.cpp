#include "jd/courant.hpp"

#include <algorithm>
#include <cmath>

namespace jd {

namespace {

Jet half(const Jet& a) { return Jet(0.5) * a; }

Jet zero_jet(int n) { return Jet::constant(0.0, n); }

Form scalar(const Jet& f, int n) { return scalar_form(f, n); }

// df as a 1-form
Form dscalar(const Jet& f, int n) { return d(scalar(f, n)); }

}  // namespace

E1Value to_e1(const DiracValue& v) {
  const int n = v.X.dim();
  return E1Value{v.X, zero_jet(n), v.xi, zero_jet(n)};
}

DiracValue to_dirac(const E1Value& v) { return DiracValue{v.X, v.xi}; }

E1Value operator+(const E1Value& a, const E1Value& b) { return E1Value{a.X + b.X, a.f + b.f, a.xi + b.xi, a.g + b.g}; }
E1Value operator-(const E1Value& a, const E1Value& b) { return E1Value{a.X - b.X, a.f - b.f, a.xi - b.xi, a.g - b.g}; }
E1Value operator*(const Jet& s, const E1Value& a) { return E1Value{s * a.X, s * a.f, s * a.xi, s * a.g}; }

Jet pair_plus(const DiracValue& a, const DiracValue& b) { return half(pair(a.xi, b.X) + pair(b.xi, a.X)); }

Jet pair_plus(const E1Value& a, const E1Value& b) {
  return half(pair(a.xi, b.X) + pair(b.xi, a.X) + b.g * a.f + a.g * b.f);
}

Jet pair_minus(const DiracValue& a, const DiracValue& b) { return half(pair(a.xi, b.X) - pair(b.xi, a.X)); }

Jet pair_minus(const E1Value& a, const E1Value& b) {
  return half(pair(a.xi, b.X) - pair(b.xi, a.X) - b.f * a.g + a.f * b.g);
}

DiracValue courant_bracket(const DiracValue& a, const DiracValue& b) {
  const int n = a.X.dim();
  Form xi = lie_derivative(a.X, b.xi) - lie_derivative(b.X, a.xi) +
            Jet(0.5) * d(scalar(pair(a.xi, b.X) - pair(b.xi, a.X), n));
  return DiracValue{lie_bracket(a.X, b.X), xi};
}

E1Value extended_courant_bracket(const E1Value& a, const E1Value& b) {
  const int n = a.X.dim();
  E1Value r;
  r.X = lie_bracket(a.X, b.X);
  r.f = directional(a.X, b.f) - directional(b.X, a.f);
  r.xi = lie_derivative(a.X, b.xi) - lie_derivative(b.X, a.xi) +
         Jet(0.5) * d(scalar(pair(a.xi, b.X) - pair(b.xi, a.X), n)) + a.f * b.xi - b.f * a.xi +
         Jet(0.5) * (b.g * dscalar(a.f, n) - a.g * dscalar(b.f, n) - a.f * dscalar(b.g, n) + b.f * dscalar(a.g, n));
  r.g = directional(a.X, b.g) - directional(b.X, a.g) + half(pair(a.xi, b.X) - pair(b.xi, a.X) - b.f * a.g + a.f * b.g);
  return r;
}

DiracSection courant_bracket(DiracSection a, DiracSection b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return courant_bracket(a(p), b(p)); };
}

E1Section extended_courant_bracket(E1Section a, E1Section b) {
  return [a = std::move(a), b = std::move(b)](const Point& p) { return extended_courant_bracket(a(p), b(p)); };
}

E1Section e1_section(VectorField X, ScalarField f, FormField xi, ScalarField g) {
  return [X = std::move(X), f = std::move(f), xi = std::move(xi), g = std::move(g)](const Point& p) {
    return E1Value{X(p), f(p), xi(p), g(p)};
  };
}

E1Section dirac_section(VectorField X, FormField xi) {
  return [X = std::move(X), xi = std::move(xi)](const Point& p) {
    const int n = static_cast<int>(p.size());
    return E1Value{X(p), zero_jet(n), xi(p), zero_jet(n)};
  };
}

E1Section scale(ScalarField c, E1Section s) {
  return [c = std::move(c), s = std::move(s)](const Point& p) { return c(p) * s(p); };
}

std::string to_string(StructureKind k) { return k == StructureKind::Dirac ? "dirac" : "jacobi-dirac"; }

std::vector<E1Value> StructureFrame::values(const Point& p) const {
  std::vector<E1Value> v;
  v.reserve(sections.size());
  for (const auto& s : sections) v.push_back(s(p));
  return v;
}

Mat StructureFrame::matrix(const Point& p) const {
  Mat m(ambient(), rank());
  for (int j = 0; j < rank(); ++j) m.col(j) = flatten(sections[static_cast<std::size_t>(j)](p), kind);
  return m;
}

VecX flatten(const E1Value& v, StructureKind kind) {
  const int n = v.X.dim();
  const bool jd = kind == StructureKind::JacobiDirac;
  VecX out(jd ? 2 * n + 2 : 2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) out(k++) = v.X[i].value();
  if (jd) out(k++) = v.f.value();
  for (int i = 0; i < n; ++i) out(k++) = v.xi.c[static_cast<std::size_t>(i)].value();
  if (jd) out(k++) = v.g.value();
  return out;
}

VecX flatten(const Vec& X, double f, const VecX& xi, double g) {
  const int n = X.dim();
  VecX out(2 * n + 2);
  for (int i = 0; i < n; ++i) out(i) = X[i].value();
  out(n) = f;
  out.segment(n + 1, n) = xi;
  out(2 * n + 1) = g;
  return out;
}

E1Blocks split(const VecX& v, int n, StructureKind kind) {
  E1Blocks b;
  b.X = v.segment(0, n);
  if (kind == StructureKind::JacobiDirac) {
    b.f = v(n);
    b.xi = v.segment(n + 1, n);
    b.g = v(2 * n + 1);
  } else {
    b.xi = v.segment(n, n);
  }
  return b;
}

VecX join(const E1Blocks& b, StructureKind kind) {
  const auto n = b.X.size();
  if (kind == StructureKind::Dirac) {
    VecX v(2 * n);
    v << b.X, b.xi;
    return v;
  }
  VecX v(2 * n + 2);
  v << b.X, b.f, b.xi, b.g;
  return v;
}

Jet pairing(const E1Value& a, const E1Value& b, StructureKind kind) {
  return kind == StructureKind::Dirac ? pair_plus(to_dirac(a), to_dirac(b)) : pair_plus(a, b);
}

double pairing(const VecX& a, const VecX& b, int n, StructureKind kind) {
  const E1Blocks x = split(a, n, kind), y = split(b, n, kind);
  double s = x.xi.dot(y.X) + y.xi.dot(x.X);
  if (kind == StructureKind::JacobiDirac) s += y.g * x.f + x.g * y.f;
  return 0.5 * s;
}

E1Value frame_bracket(const E1Value& a, const E1Value& b, StructureKind kind) {
  if (kind == StructureKind::Dirac) return to_e1(courant_bracket(to_dirac(a), to_dirac(b)));
  return extended_courant_bracket(a, b);
}

namespace {

std::vector<Point> check_points(const Chart& chart) { return sample_points(chart, 20, 42); }

}  // namespace

StructureFrame graph_of_2form(const TwoForm& omega, const Chart& chart) {
  StructureFrame fr;
  fr.kind = StructureKind::Dirac;
  fr.chart = chart;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) {
    VectorField e = coordinate_vector(i, n);
    fr.sections.push_back(dirac_section(e, interior_product(e, omega)));
  }
  return fr;
}

double poisson_residual(const BivectorField& lambda, const Point& p) {
  const Multi l = lambda(p);
  return max_abs(schouten(l, l));
}

double jacobi_residual(const BivectorField& lambda, const VectorField& e, const Point& p) {
  const Multi l = lambda(p);
  const Vec ev = e(p);
  const Multi lhs = schouten(l, l) - Jet(2.0) * wedge(as_multi(ev), l);
  return std::max(max_abs(lhs), max_abs(lie_derivative(ev, l)));
}

StructureFrame graph_of_bivector(const BivectorField& lambda, const Chart& chart, double tol) {
  for (const Point& p : check_points(chart))
    if (poisson_residual(lambda, p) > tol) throw StructureError("not Poisson: [Lambda,Lambda] != 0");
  StructureFrame fr;
  fr.kind = StructureKind::Dirac;
  fr.chart = chart;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) {
    FormField dx = coordinate_differential(i, n);
    VectorField x = [lambda, dx](const Point& p) { return sharp(lambda(p), dx(p)); };
    fr.sections.push_back(dirac_section(x, dx));
  }
  return fr;
}

StructureFrame graph_of_1form(const OneForm& sigma, const Chart& chart) {
  StructureFrame fr;
  fr.kind = StructureKind::JacobiDirac;
  fr.chart = chart;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) {
    fr.sections.push_back([sigma, i, n](const Point& p) {
      const Form s = sigma(p);
      Vec e(n);
      for (int k = 0; k < n; ++k) e[k] = Jet::constant(k == i ? 1.0 : 0.0, n);
      return E1Value{e, zero_jet(n), interior(e, d(s)), -pair(s, e)};
    });
  }
  fr.sections.push_back([sigma, n](const Point& p) {
    Vec z(n);
    for (int k = 0; k < n; ++k) z[k] = zero_jet(n);
    return E1Value{z, Jet::constant(1.0, n), sigma(p), zero_jet(n)};
  });
  return fr;
}

StructureFrame graph_of_jacobi_pair(const BivectorField& lambda, const VectorField& e, const Chart& chart,
                                    double tol) {
  for (const Point& p : check_points(chart))
    if (jacobi_residual(lambda, e, p) > tol) throw StructureError("not Jacobi: [E,Lambda] or [Lambda,Lambda]-2E^Lambda nonzero");
  StructureFrame fr;
  fr.kind = StructureKind::JacobiDirac;
  fr.chart = chart;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) {
    fr.sections.push_back([lambda, e, i, n](const Point& p) {
      Form dx(n, 1);
      dx.c[static_cast<std::size_t>(i)] = Jet::constant(1.0, n);
      const Vec ev = e(p);
      return E1Value{sharp(lambda(p), dx), ev[i], dx, zero_jet(n)};
    });
  }
  fr.sections.push_back([e, n](const Point& p) {
    return E1Value{Jet(-1.0) * e(p), zero_jet(n), Form(n, 1), Jet::constant(1.0, n)};
  });
  return fr;
}

StructureFrame diracization(const StructureFrame& l) {
  if (l.kind != StructureKind::Dirac) throw StructureError("diracization needs a Dirac frame");
  StructureFrame fr;
  fr.kind = StructureKind::JacobiDirac;
  fr.chart = l.chart;
  const int n = l.dim();
  for (const auto& s : l.sections)
    fr.sections.push_back([s, n](const Point& p) {
      E1Value v = s(p);
      v.f = zero_jet(n);
      v.g = zero_jet(n);
      return v;
    });
  fr.sections.push_back([n](const Point&) {
    Vec z(n);
    for (int k = 0; k < n; ++k) z[k] = zero_jet(n);
    return E1Value{z, zero_jet(n), Form(n, 1), Jet::constant(1.0, n)};
  });
  return fr;
}

void require_full_rank(const StructureFrame& frame, const std::vector<Point>& points) {
  if (frame.rank() != frame.expected_rank())
    throw RankDeficiency("frame has " + std::to_string(frame.rank()) + " sections, maximal isotropic rank is " +
                         std::to_string(frame.expected_rank()));
  for (const Point& p : points) {
    const int r = rank_of(frame.matrix(p));
    if (r < frame.rank()) throw RankDeficiency("frame sections are linearly dependent at a sample (rank " + std::to_string(r) + ")");
  }
}

double isotropy_residual(const StructureFrame& frame, const Point& p) {
  const auto v = frame.values(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j)
      worst = std::max(worst, std::abs(pairing(v[i], v[j], frame.kind).value()));
  return worst;
}

double closure_residual(const StructureFrame& frame, const Point& p) {
  const auto v = frame.values(p);
  const Mat m = frame.matrix(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      worst = std::max(worst, span_residual(m, flatten(frame_bracket(v[i], v[j], frame.kind), frame.kind)));
  return worst;
}

Report is_isotropic(const StructureFrame& frame, const std::vector<Point>& points, double tol) {
  require_full_rank(frame, points);
  Report r;
  r.add(measure("isotropy", "<s_i, s_j>_+ = 0 on the frame", tol, points,
                [&](const Point& p) { return isotropy_residual(frame, p); }));
  return r;
}

Report is_closed_under_bracket(const StructureFrame& frame, const std::vector<Point>& points, double tol) {
  require_full_rank(frame, points);
  Report r;
  const std::string anchor = frame.kind == StructureKind::Dirac ? "[s_i, s_j]_Courant in span(frame)"
                                                                : "[s_i, s_j]_E1 in span(frame)";
  r.add(measure("bracket-closure", anchor, tol, points, [&](const Point& p) { return closure_residual(frame, p); }));
  return r;
}

Mat pushforward(const StructureFrame& frame, const MapField& pi, const Point& q) {
  const JetVec image = pi(q);
  const int np = static_cast<int>(image.size());
  const int nq = frame.dim();
  Mat J(np, nq);
  for (int a = 0; a < np; ++a)
    for (int i = 0; i < nq; ++i) J(a, i) = image[static_cast<std::size_t>(a)].grad(i);
  if (rank_of(J) < np) throw StructureError("map is not submersive at the point");
  const Mat K = kernel_basis(J);
  const Mat F = frame.matrix(q);
  const bool jd = frame.kind == StructureKind::JacobiDirac;
  const int xi_at = jd ? nq + 1 : nq;
  const Mat xi = F.middleRows(xi_at, nq);
  const Mat N = kernel_basis(K.transpose() * xi);
  Mat out(jd ? 2 * np + 2 : 2 * np, N.cols());
  for (Eigen::Index c = 0; c < N.cols(); ++c) {
    const VecX v = F * N.col(c);
    const E1Blocks b = split(v, nq, frame.kind);
    E1Blocks r;
    r.X = J * b.X;
    r.f = b.f;
    r.xi = least_squares(J.transpose(), b.xi).x;
    r.g = b.g;
    out.col(c) = join(r, frame.kind);
  }
  return out;
}

Mat pullback(const StructureFrame& frame, const MapField& pi, const Point& q) {
  const JetVec image = pi(q);
  const int np = static_cast<int>(image.size());
  const int nq = static_cast<int>(q.size());
  Mat J(np, nq);
  for (int a = 0; a < np; ++a)
    for (int i = 0; i < nq; ++i) J(a, i) = image[static_cast<std::size_t>(a)].grad(i);
  if (rank_of(J) < np) throw StructureError("map is not submersive at the point");
  const Point p = values(image);
  const Mat F = frame.matrix(p);
  const Mat K = kernel_basis(J);
  const bool jd = frame.kind == StructureKind::JacobiDirac;
  Mat out(jd ? 2 * nq + 2 : 2 * nq, F.cols() + K.cols());
  for (Eigen::Index c = 0; c < F.cols(); ++c) {
    const E1Blocks b = split(F.col(c), np, frame.kind);
    E1Blocks r;
    r.X = least_squares(J, b.X).x;
    r.f = b.f;
    r.xi = J.transpose() * b.xi;
    r.g = b.g;
    out.col(c) = join(r, frame.kind);
  }
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    E1Blocks r;
    r.X = K.col(c);
    r.xi = VecX::Zero(nq);
    out.col(F.cols() + c) = join(r, frame.kind);
  }
  return out;
}

Hamiltonian find_hamiltonian(const ScalarField& f, const StructureFrame& frame, const Point& p, double tol) {
  const int n = frame.dim();
  const bool jd = frame.kind == StructureKind::JacobiDirac;
  const Mat F = frame.matrix(p);
  const Jet fj = f(p);
  const int top = jd ? n + 1 : n;  // rows of the (X, f) block
  const Mat B = F.bottomRows(F.rows() - top);
  VecX target(B.rows());
  for (int i = 0; i < n; ++i) target(i) = fj.grad(i);
  if (jd) target(n) = fj.value();
  const LeastSquares ls = least_squares(B, target);
  Hamiltonian h;
  h.residual = ls.normalized;
  h.admissible = ls.normalized <= tol;
  const VecX head = F.topRows(top) * ls.x;
  h.X = head.segment(0, n);
  h.phi = jd ? head(n) : 0.0;
  h.kernel_part = F.topRows(top) * kernel_basis(B);
  return h;
}

BracketValue admissible_bracket(const ScalarField& f, const ScalarField& g, const StructureFrame& frame,
                                const Point& p, double tol) {
  const int n = frame.dim();
  const bool jd = frame.kind == StructureKind::JacobiDirac;
  const Hamiltonian hg = find_hamiltonian(g, frame, p, tol);
  const Hamiltonian hf = find_hamiltonian(f, frame, p, tol);
  const Jet fj = f(p);
  VecX df(n);
  for (int i = 0; i < n; ++i) df(i) = fj.grad(i);
  BracketValue b;
  b.admissible = hg.admissible && hf.admissible;
  b.value = df.dot(hg.X) + (jd ? fj.value() * hg.phi : 0.0);
  for (Eigen::Index c = 0; c < hg.kernel_part.cols(); ++c) {
    const VecX k = hg.kernel_part.col(c);
    const double v = df.dot(k.segment(0, n)) + (jd ? fj.value() * k(n) : 0.0);
    b.ambiguity = std::max(b.ambiguity, std::abs(v));
  }
  return b;
}

}  // namespace jd
