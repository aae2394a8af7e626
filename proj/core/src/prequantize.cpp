#include "jd/prequantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace jd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> prefix(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return m;
}

Point head(const Point& q, int n) { return Point(q.begin(), q.begin() + n); }

Jet up(const Jet& a, int nq) {
  if (a.dim() == 0) return Jet::constant(a.value(), nq);
  const auto m = prefix(a.dim());
  return embed(a, nq, m);
}

// Restriction of a Q-jet to the slice θ = θ0, as a jet in P variables.
Jet slice(const Jet& a, const Point& p) {
  const int n = static_cast<int>(p.size());
  JetVec y = seed(p);
  y.push_back(Jet::constant(0.0, n));
  if (a.dim() == 0) return Jet::constant(a.value(), n);
  return compose(a, y);
}

Vec vec_values(const VecX& v, int n) {
  Vec r(static_cast<int>(v.size()));
  for (int i = 0; i < r.dim(); ++i) r[i] = Jet::constant(v(i), n);
  return r;
}

Form form_values(const VecX& v, int n) {
  Form r(static_cast<int>(v.size()), 1);
  for (int i = 0; i < r.n; ++i) r.c[static_cast<std::size_t>(i)] = Jet::constant(v(i), n);
  return r;
}

VecX vals(const Vec& v) {
  VecX r(v.dim());
  for (int i = 0; i < v.dim(); ++i) r(i) = v[i].value();
  return r;
}

VecX vals(const Form& f) {
  VecX r(f.size());
  for (int i = 0; i < f.size(); ++i) r(i) = f.c[static_cast<std::size_t>(i)].value();
  return r;
}

Jet beta_value(const PreqInput& in, const E1Value& s, const Point& p) {
  return pair(in.alpha(p), s.X) + pair(s.xi, in.A(p));
}

// (X_Q, f) ⊕ (ξ_Q, g) from jets over P and σ(q) over Q.
E1Value lift_value(const E1Value& s, const Jet& beta, const Form& sig, int nq) {
  const int n = nq - 1;
  Vec X(nq);
  Jet ax = Jet::constant(0.0, nq);
  for (int i = 0; i < n; ++i) {
    X[i] = up(s.X[i], nq);
    ax += sig.c[static_cast<std::size_t>(i)] * X[i];
  }
  const Jet g = up(s.g, nq);
  X[n] = -ax + up(beta, nq) - g;
  Form xi(nq, 1);
  for (int i = 0; i < n; ++i) xi.c[static_cast<std::size_t>(i)] = up(s.xi.c[static_cast<std::size_t>(i)], nq);
  xi.c[static_cast<std::size_t>(n)] = Jet::constant(0.0, nq);
  return E1Value{X, Jet::constant(0.0, nq), xi, g};
}

E1Value reeb_section(int nq) {
  Vec X(nq);
  for (int i = 0; i < nq; ++i) X[i] = Jet::constant(i == nq - 1 ? -1.0 : 0.0, nq);
  Form xi(nq, 1);
  for (auto& c : xi.c) c = Jet::constant(0.0, nq);
  return E1Value{X, Jet::constant(0.0, nq), xi, Jet::constant(1.0, nq)};
}

// Complex value carried as two real jets.
struct CJet {
  Jet re;
  Jet im;
};

// X(T) + 2πi c T
CJet covariant(const Vec& X, const CJet& t, const Jet& c) {
  return CJet{directional(X, t.re) - Jet(kTwoPi) * c * t.im, directional(X, t.im) + Jet(kTwoPi) * c * t.re};
}

double cabs(const CJet& a) { return std::hypot(a.re.value(), a.im.value()); }

double F_value(double theta, double re, double im) {
  return std::cos(kTwoPi * theta) * re + std::sin(kTwoPi * theta) * im;
}

}  // namespace

Chart circle_bundle(const Chart& P, const std::string& angle) {
  Chart s({angle}, {Interval{0.0, 1.0}}, {1.0});
  return product(P, s);
}

MapField bundle_projection(const PreqInput& in) {
  const int n = in.P.dim();
  return [n](const Point& q) {
    JetVec s = seed(q);
    s.resize(static_cast<std::size_t>(n));
    return s;
  };
}

ScalarField beta_of(const PreqInput& in, const E1Section& s) {
  return [in, s](const Point& p) { return beta_value(in, s(p), p); };
}

OneForm potential(const PreqInput& in) {
  const int n = in.P.dim();
  return [sigma = in.sigma, n](const Point& p) {
    Point q = p;
    q.push_back(0.0);
    const Form s = sigma(q);
    Form a(n, 1);
    for (int i = 0; i < n; ++i) a.c[static_cast<std::size_t>(i)] = slice(s.c[static_cast<std::size_t>(i)], p);
    return a;
  };
}

E1Value lift_to_Q(const E1Value& v, int dim_q) {
  const int n = v.X.dim();
  Vec X(dim_q);
  Form xi(dim_q, 1);
  for (int i = 0; i < dim_q; ++i) {
    X[i] = i < n ? up(v.X[i], dim_q) : Jet::constant(0.0, dim_q);
    xi.c[static_cast<std::size_t>(i)] = i < n ? up(v.xi.c[static_cast<std::size_t>(i)], dim_q) : Jet::constant(0.0, dim_q);
  }
  return E1Value{X, up(v.f, dim_q), xi, up(v.g, dim_q)};
}

Report check_preq_condition(const PreqInput& in, const std::vector<Point>& p_points,
                            const std::vector<Point>& q_points, double tol) {
  Report r;
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  r.add(measure("omega-closed", "dOmega = 0", tol, p_points, [&](const Point& p) {
    return in.Omega(p).deg + 1 <= kMaxDegree ? max_abs(d(in.Omega(p))) : 0.0;
  }));
  const TwoForm pull = lift_form(in.Omega, n, nq);
  r.add(measure("sigma-curvature", "d sigma = pi^* Omega", tol, q_points,
                [&](const Point& q) { return max_abs(d(in.sigma(q)) - pull(q)); }));
  r.add(measure("sigma-reeb", "sigma(E) = 1 and L_E sigma = 0", tol, q_points, [&](const Point& q) {
    const Form s = in.sigma(q);
    const Vec e = coordinate_vector(n, nq)(q);
    return std::max(std::abs(pair(s, e).value() - 1.0), max_abs(lie_derivative(e, s)));
  }));
  r.add(measure("cond1", "Omega(rho s_i, rho s_j) = Upsilon(s_i,s_j) + d_L beta(s_i,s_j)", tol, p_points,
                [&](const Point& p) {
                  const auto v = in.L.values(p);
                  const Form om = in.Omega(p);
                  std::vector<Jet> b;
                  for (const auto& s : v) b.push_back(beta_value(in, s, p));
                  double worst = 0.0;
                  for (std::size_t i = 0; i < v.size(); ++i)
                    for (std::size_t j = i + 1; j < v.size(); ++j) {
                      const DiracValue si = to_dirac(v[i]), sj = to_dirac(v[j]);
                      const E1Value br = to_e1(courant_bracket(si, sj));
                      const double dlb = directional(si.X, b[j]).value() - directional(sj.X, b[i]).value() -
                                         beta_value(in, br, p).value();
                      const double res = eval(om, si.X, sj.X).value() - pair_minus(si, sj).value() - dlb;
                      worst = std::max(worst, std::abs(res));
                    }
                  return worst;
                }));
  return r;
}

VecX anchor_hQ(const PreqInput& in, const VecX& X, const VecX& xi, double g, const Point& q) {
  const int n = in.P.dim();
  const Point p = head(q, n);
  const VecX s = vals(in.sigma(q));
  const VecX A = vals(in.A(p));
  const VecX alpha = vals(in.alpha(p));
  VecX h(n + 1);
  h.head(n) = X;
  h(n) = -s.head(n).dot(X) + alpha.dot(X) + xi.dot(A) - g;
  return h;
}

VecX lift_I_value(const PreqInput& in, const VecX& X, const VecX& xi, double g, const Point& q) {
  const int n = in.P.dim();
  Vec Xq = vec_values(anchor_hQ(in, X, xi, g, q), 0);
  VecX xq = VecX::Zero(n + 1);
  xq.head(n) = xi;
  return flatten(Xq, 0.0, xq, g);
}

E1Section lift_I(const PreqInput& in, E1Section s) {
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  return [in, s = std::move(s), n, nq](const Point& q) {
    const Point p = head(q, n);
    const E1Value v = s(p);
    return lift_value(v, beta_value(in, v, p), in.sigma(q), nq);
  };
}

StructureFrame build_Lbar0(const PreqInput& in) {
  StructureFrame fr;
  fr.kind = StructureKind::JacobiDirac;
  fr.chart = in.Q;
  for (const auto& s : in.L.sections) fr.sections.push_back(lift_I(in, s));
  const int nq = in.Q.dim();
  fr.sections.push_back([nq](const Point&) { return reeb_section(nq); });
  return fr;
}

StructureFrame build_Lbar(const PreqInput& in) {
  StructureFrame fr = build_Lbar0(in);
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  fr.sections.push_back([in, n, nq](const Point& q) {
    const Point p = head(q, n);
    const Form sig = in.sigma(q);
    const Vec A = in.A(p);
    const Form alpha = in.alpha(p);
    Vec X(nq);
    Jet aA = Jet::constant(0.0, nq);
    for (int i = 0; i < n; ++i) {
      X[i] = -up(A[i], nq);
      aA += sig.c[static_cast<std::size_t>(i)] * up(A[i], nq);
    }
    X[n] = aA;  // −A^H = −A + σ(A)E
    Form xi(nq, 1);
    for (int i = 0; i < nq; ++i) {
      Jet c = sig.c[static_cast<std::size_t>(i)];
      if (i < n) c -= up(alpha.c[static_cast<std::size_t>(i)], nq);
      xi.c[static_cast<std::size_t>(i)] = c;
    }
    return E1Value{X, Jet::constant(1.0, nq), xi, Jet::constant(0.0, nq)};
  });
  return fr;
}

Mat Lbar_matrix(const PreqInput& in, const Point& q, const VecX& A, const VecX& alpha) {
  const int n = in.P.dim();
  const Point p = head(q, n);
  const VecX sig = vals(in.sigma(q));
  const Mat F = in.L.matrix(p);
  Mat out(2 * n + 4, n + 2);
  for (int c = 0; c < n; ++c) {
    const VecX X = F.col(c).head(n);
    const VecX xi = F.col(c).tail(n);
    VecX h(n + 1);
    h.head(n) = X;
    h(n) = -sig.head(n).dot(X) + alpha.dot(X) + xi.dot(A);
    VecX xq = VecX::Zero(n + 1);
    xq.head(n) = xi;
    out.col(c) = flatten(vec_values(h, 0), 0.0, xq, 0.0);
  }
  out.col(n) = flatten(reeb_section(n + 1), StructureKind::JacobiDirac);
  VecX h(n + 1);
  h.head(n) = -A;
  h(n) = sig.head(n).dot(A);
  VecX xq = sig;
  xq.head(n) -= alpha;
  out.col(n + 1) = flatten(vec_values(h, 0), 1.0, xq, 0.0);
  return out;
}

AAlphaSolution solve_A_alpha(const StructureFrame& L, const std::vector<double>& beta, const Point& p,
                             const VecX& shift) {
  const int n = L.dim();
  const Mat F = L.matrix(p);
  if (rank_of(F) < L.rank()) throw RankDeficiency("Dirac frame loses rank at the point");
  const int k = L.rank();
  VecX b(k);
  for (int i = 0; i < k; ++i) b(i) = beta[static_cast<std::size_t>(i)];
  // 2<v, s_i>_+ = v_ξ(X_i) + ξ_i(v_X); unknown ordered [v_X, v_ξ]
  Mat M(k, 2 * n);
  for (int i = 0; i < k; ++i) {
    M.row(i).head(n) = F.col(i).tail(n).transpose();
    M.row(i).tail(n) = F.col(i).head(n).transpose();
  }
  VecX v = least_squares(M, b).x;
  const auto quad = [n](const VecX& w) { return w.head(n).dot(w.tail(n)); };
  const double bb = b.squaredNorm();
  if (bb > 0.0) v += (-quad(v) / bb) * (F * b);
  if (shift.size() == k) v += F * shift;
  AAlphaSolution s;
  s.A = v.head(n);
  s.alpha = v.tail(n);
  s.equation_residual = (M * v - b).cwiseAbs().maxCoeff();
  s.isotropy = std::abs(quad(v));
  return s;
}

Report morphism_check_I(const PreqInput& in, const std::vector<Point>& q_points, double tol) {
  Report r;
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  std::vector<E1Section> lifted;
  for (const auto& s : in.L.sections) lifted.push_back(lift_I(in, s));
  const E1Section unit = [nq](const Point&) { return reeb_section(nq); };
  r.add(measure("morphism-I", "[I(a),I(b)]_E1 = I([a,b]_Cou, 0) + <a,b>_- ((-E,0)+(0,1))", tol, q_points,
                [&](const Point& q) {
                  const Point p = head(q, n);
                  const auto v = in.L.values(p);
                  double worst = 0.0;
                  for (std::size_t i = 0; i < v.size(); ++i)
                    for (std::size_t j = i + 1; j < v.size(); ++j) {
                      const E1Value lhs = extended_courant_bracket(lifted[i](q), lifted[j](q));
                      const DiracValue a = to_dirac(v[i]), b = to_dirac(v[j]);
                      const E1Value br = to_e1(courant_bracket(a, b));
                      const E1Value rhs = lift_value(br, beta_value(in, br, p), in.sigma(q), nq) +
                                          up(pair_minus(a, b), nq) * reeb_section(nq);
                      const VecX diff = flatten(lhs, StructureKind::JacobiDirac) - flatten(rhs, StructureKind::JacobiDirac);
                      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
                    }
                  return worst;
                }));
  r.add(measure("morphism-unit", "[I(X,xi,0), I(0,0,1)]_E1 = 0", tol, q_points, [&](const Point& q) {
    double worst = 0.0;
    for (const auto& l : lifted)
      worst = std::max(worst, flatten(extended_courant_bracket(l(q), unit(q)), StructureKind::JacobiDirac)
                                  .cwiseAbs()
                                  .maxCoeff());
    return worst;
  }));
  r.add(measure("anchor-unit", "h_Q(0,0,1) = -E", tol, q_points, [&](const Point& q) {
    VecX h = anchor_hQ(in, VecX::Zero(n), VecX::Zero(n), 1.0, q);
    h(n) += 1.0;
    return h.cwiseAbs().maxCoeff();
  }));
  return r;
}

Extensions two_extensions(const StructureFrame& lbar0, const Point& q) {
  const int nq = lbar0.dim();
  const int amb = 2 * nq + 2;
  const Mat M0 = lbar0.matrix(q);
  Mat G = Mat::Zero(amb, amb);
  for (int i = 0; i < nq; ++i) {
    G(i, nq + 1 + i) = 0.5;
    G(nq + 1 + i, i) = 0.5;
  }
  G(nq, 2 * nq + 1) = 0.5;
  G(2 * nq + 1, nq) = 0.5;
  const Mat perp = kernel_basis(M0.transpose() * G);
  const Mat B0 = column_basis(M0);
  const Mat proj = perp - B0 * (B0.transpose() * perp);
  const Mat W = column_basis(proj);
  if (W.cols() != 2) throw StructureError("quotient of the orthogonal by the subbundle is not of rank 2");
  const Mat H = W.transpose() * G * W;
  const double det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (det > -1e-12 * scale * scale) throw StructureError("induced pairing on the rank 2 quotient is degenerate");
  // isotropic directions of a x^2 + 2 b x y + c y^2
  const double a = H(0, 0), b = H(0, 1), c = H(1, 1);
  std::vector<VecX> lines;
  const double disc = std::sqrt(b * b - a * c);
  if (std::abs(a) >= std::abs(c)) {
    for (double sgn : {1.0, -1.0}) {
      VecX w(2);
      w << (-b + sgn * disc), a;  // x/y = (−b ± disc)/a
      lines.push_back(w);
    }
  } else {
    for (double sgn : {1.0, -1.0}) {
      VecX w(2);
      w << c, (-b + sgn * disc);
      lines.push_back(w);
    }
  }
  Extensions e;
  e.isotropic_lines = static_cast<int>(lines.size());
  VecX unit = VecX::Zero(amb);
  unit(amb - 1) = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    Mat ext(amb, M0.cols() + 1);
    ext << M0, W * lines[static_cast<std::size_t>(k)].normalized();
    (k == 0 ? e.first : e.second) = ext;
    const double res = span_residual(ext, unit);
    if (res < best) {
      best = res;
      e.with_unit = k;
    }
  }
  e.unit_residual = best;
  return e;
}

ScalarField F_of(const PreqInput& in, const LineSection& s) {
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  const ScalarField re = lift_scalar(s.re, n, nq);
  const ScalarField im = lift_scalar(s.im, n, nq);
  return [re, im, n](const Point& q) {
    const JetVec x = seed(q);
    const Jet t = Jet(kTwoPi) * x[static_cast<std::size_t>(n)];
    return cos(t) * re(q) + sin(t) * im(q);
  };
}

Report function_bracket_laws(const PreqInput& in, const LineSection& s, const std::vector<ScalarField>& fs,
                             const std::vector<Point>& q_points, double tol) {
  Report r;
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  const StructureFrame lbar = build_Lbar(in);
  const ScalarField F = F_of(in, s);
  const LineSection is{[s](const Point& p) { return -s.im(p); }, s.re};
  const ScalarField Fi = F_of(in, is);
  const ScalarField one = constant_field(1.0, nq);
  const OneForm a = potential(in);
  std::vector<ScalarField> lifted;
  for (const auto& f : fs) lifted.push_back(lift_scalar(f, n, nq));

  r.add(measure("bracket-pullback", "{pi^*f, pi^*g}_Q = pi^*{f,g}", tol, q_points, [&](const Point& q) {
    const Point p = head(q, n);
    double worst = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = 0; j < fs.size(); ++j) {
        const BracketValue up_b = admissible_bracket(lifted[i], lifted[j], lbar, q);
        const BracketValue down = admissible_bracket(fs[i], fs[j], in.L, p);
        if (!up_b.admissible || !down.admissible) return std::numeric_limits<double>::quiet_NaN();
        worst = std::max(worst, std::abs(up_b.value - down.value));
      }
    return worst;
  }));
  r.add(measure("bracket-f-FS", "{pi^*f, F_S}_Q = F_{-Dtilde_{(X_f,df,f)} S}", tol, q_points, [&](const Point& q) {
    const Point p = head(q, n);
    const double theta = q[static_cast<std::size_t>(n)];
    double worst = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const BracketValue b = admissible_bracket(lifted[i], F, lbar, q);
      if (!b.admissible) return std::numeric_limits<double>::quiet_NaN();
      const Hamiltonian h = find_hamiltonian(fs[i], in.L, p);
      const Jet fj = fs[i](p);
      VecX df(n);
      for (int k = 0; k < n; ++k) df(k) = fj.grad(k);
      const Vec X = vec_values(h.X, n);
      const Jet beta = pair(in.alpha(p), X) + pair(form_values(df, n), in.A(p));
      const Jet c = pair(a(p), X) - beta + fj;
      const CJet t = covariant(X, CJet{s.re(p), s.im(p)}, c);
      const double expect = -F_value(theta, t.re.value(), t.im.value());
      worst = std::max(worst, std::abs(b.value - expect));
    }
    return worst;
  }));
  r.add(measure("bracket-FS-1", "{F_S, 1}_Q = -E(F_S) = 2 pi F_{iS}", tol, q_points, [&](const Point& q) {
    const BracketValue b = admissible_bracket(F, one, lbar, q);
    if (!b.admissible) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(b.value - kTwoPi * Fi(q).value());
  }));
  r.add(measure("bracket-f-1", "{pi^*f, 1}_Q = 0", tol, q_points, [&](const Point& q) {
    double worst = 0.0;
    for (const auto& f : lifted) {
      const BracketValue b = admissible_bracket(f, one, lbar, q);
      if (!b.admissible) return std::numeric_limits<double>::quiet_NaN();
      worst = std::max(worst, std::abs(b.value));
    }
    return worst;
  }));
  r.add(measure("E-FS", "E(F_S) = -2 pi F_{iS}", tol, q_points,
                [&](const Point& q) { return std::abs(F(q).grad(n) + kTwoPi * Fi(q).value()); }));
  r.add(measure("XH-FS", "X^H(F_S) = F_{nabla_X S}", tol, q_points, [&](const Point& q) {
    const Point p = head(q, n);
    const double theta = q[static_cast<std::size_t>(n)];
    const Jet fq = F(q);
    const VecX sig = vals(in.sigma(q));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec X = coordinate_vector(i, n)(p);
      const double lhs = fq.grad(i) - sig(i) * fq.grad(n);
      const CJet t = covariant(X, CJet{s.re(p), s.im(p)}, pair(a(p), X));
      worst = std::max(worst, std::abs(lhs - F_value(theta, t.re.value(), t.im.value())));
    }
    return worst;
  }));
  return r;
}

Report flat_connection_check(const PreqInput& in, const LineSection& s, const std::vector<Point>& p_points,
                             double tol) {
  Report r;
  const int n = in.P.dim();
  const OneForm a = potential(in);
  // test elements (c s_i, h) of L ⊕_Υ ℝ with non-constant coefficients
  const auto coeff = [n](int k) -> ScalarField {
    return [n, k](const Point& p) {
      const JetVec x = seed(p);
      Jet v = Jet::constant(1.0 + 0.1 * k, n);
      for (int i = 0; i < n; ++i) v += Jet(0.2 + 0.05 * (i + k)) * sin(x[static_cast<std::size_t>(i)] * Jet(1.0 + 0.3 * k));
      return v;
    };
  };
  const auto extra = [n](int k) -> ScalarField {
    return [n, k](const Point& p) {
      const JetVec x = seed(p);
      Jet v = Jet::constant(0.3 * k - 0.2, n);
      for (int i = 0; i < n; ++i) v += Jet(0.4 - 0.1 * i) * cos(x[static_cast<std::size_t>(i)] * Jet(0.7 + 0.2 * k));
      return v;
    };
  };
  struct Element {
    E1Section a;
    ScalarField h;
  };
  std::vector<Element> els;
  for (int i = 0; i < in.L.rank(); ++i)
    for (int k = 0; k < 2; ++k)
      els.push_back({scale(coeff(2 * i + k), in.L.sections[static_cast<std::size_t>(i)]), extra(2 * i + k)});

  const auto Dt = [&](const E1Value& e, const Jet& h, const CJet& t, const Point& p) {
    const Jet c = pair(a(p), e.X) - beta_value(in, e, p) + h;
    return covariant(e.X, t, c);
  };
  r.add(measure("flat-extended", "R(e1,e2)S = D~1 D~2 S - D~2 D~1 S - D~[e1,e2] S = 0", tol, p_points,
                [&](const Point& p) {
                  const CJet S{s.re(p), s.im(p)};
                  double worst = 0.0;
                  for (std::size_t i = 0; i < els.size(); ++i)
                    for (std::size_t j = i + 1; j < els.size(); ++j) {
                      const E1Value e1 = els[i].a(p), e2 = els[j].a(p);
                      const Jet h1 = els[i].h(p), h2 = els[j].h(p);
                      const CJet a12 = Dt(e1, h1, Dt(e2, h2, S, p), p);
                      const CJet a21 = Dt(e2, h2, Dt(e1, h1, S, p), p);
                      const DiracValue d1 = to_dirac(e1), d2 = to_dirac(e2);
                      const E1Value br = to_e1(courant_bracket(d1, d2));
                      const Jet hb = directional(d1.X, h2) - directional(d2.X, h1) + pair_minus(d1, d2);
                      const CJet ab = Dt(br, hb, S, p);
                      const CJet res{a12.re - a21.re - ab.re, a12.im - a21.im - ab.im};
                      worst = std::max(worst, cabs(res));
                    }
                  return worst;
                }));
  return r;
}

Report gauge_transform(const PreqInput& in, const ScalarField& phi, const std::vector<Point>& q_points,
                       double tol, bool against_unshifted) {
  const int n = in.P.dim();
  const int nq = in.Q.dim();
  PreqInput shifted = in;
  const OneForm dphi = lift_form([phi, n](const Point& p) { return d(scalar_form(phi(p), n)); }, n, nq);
  if (!against_unshifted) {
    shifted.sigma = [sigma = in.sigma, dphi](const Point& q) { return sigma(q) - dphi(q); };
  }
  const StructureFrame l1 = build_Lbar(in);
  const StructureFrame l2 = build_Lbar(shifted);
  Report r;
  r.add(measure(against_unshifted ? "gauge-control" : "gauge",
                against_unshifted ? "Phi_* Lbar(sigma) != Lbar(sigma) when d_L phi != 0"
                                  : "Phi_* Lbar(sigma) = Lbar(sigma - pi^* d phi), Phi(p,theta) = (p, theta + phi(p))",
                tol, q_points,
                [&](const Point& q) {
                  const Point p = head(q, n);
                  const Jet ph = phi(p);
                  Mat J = Mat::Identity(nq, nq);
                  for (int i = 0; i < n; ++i) J(n, i) = ph.grad(i);
                  const Mat Jinv_t = J.inverse().transpose();
                  const Mat F = l1.matrix(q);
                  Mat moved(F.rows(), F.cols());
                  for (Eigen::Index c = 0; c < F.cols(); ++c) {
                    E1Blocks b = split(F.col(c), nq, StructureKind::JacobiDirac);
                    b.X = J * b.X;
                    b.xi = Jinv_t * b.xi;
                    moved.col(c) = join(b, StructureKind::JacobiDirac);
                  }
                  Point q2 = q;
                  q2[static_cast<std::size_t>(n)] += ph.value();
                  return compare_spans(moved, l2.matrix(q2)).residual;
                },
                against_unshifted));
  return r;
}

Report pushforward_check(const PreqInput& in, const std::vector<Point>& q_points, double tol) {
  const StructureFrame lbar = build_Lbar(in);
  const StructureFrame lc = diracization(in.L);
  const MapField pi = bundle_projection(in);
  const int n = in.P.dim();
  Report r;
  r.add(measure("pushforward", "pi_* Lbar = L^c", tol, q_points, [&](const Point& q) {
    const SubspaceComparison c = compare_spans(pushforward(lbar, pi, q), lc.matrix(head(q, n)));
    return c.same_rank() ? c.residual : 1.0;
  }));
  return r;
}

}  // namespace jd
