#include "jd/jet.hpp"

#include <algorithm>
#include <cmath>

namespace jd {

namespace {

int common_dim(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw std::invalid_argument("jet dimension mismatch");
}

}  // namespace

Jet Jet::variable(double v, int i, int n) {
  if (n > kMaxDim || i < 0 || i >= n) throw std::out_of_range("jet variable index");
  Jet j(v);
  j.n_ = n;
  j.g_[static_cast<std::size_t>(i)] = 1.0;
  return j;
}

Jet Jet::constant(double v, int n) {
  if (n > kMaxDim) throw std::out_of_range("jet dimension");
  Jet j(v);
  j.n_ = n;
  return j;
}

double Jet::hess(int i, int j) const {
  if (i >= n_ || j >= n_) return 0.0;
  return h_[static_cast<std::size_t>(hidx(i, j))];
}

void Jet::set_grad(int i, double v) {
  if (i >= n_) throw std::out_of_range("jet gradient index");
  g_[static_cast<std::size_t>(i)] = v;
}

void Jet::set_hess(int i, int j, double v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("jet hessian index");
  h_[static_cast<std::size_t>(hidx(i, j))] = v;
}

void Jet::resize(int n) {
  if (n > kMaxDim) throw std::out_of_range("jet dimension");
  n_ = n;
}

Jet& Jet::operator+=(const Jet& o) {
  n_ = common_dim(n_, o.n_);
  v_ += o.v_;
  for (int i = 0; i < o.n_; ++i) g_[i] += o.g_[i];
  const int hs = o.n_ * (o.n_ + 1) / 2;
  for (int k = 0; k < hs; ++k) h_[k] += o.h_[k];
  order_ = std::min(order_, o.order_);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  n_ = common_dim(n_, o.n_);
  v_ -= o.v_;
  for (int i = 0; i < o.n_; ++i) g_[i] -= o.g_[i];
  const int hs = o.n_ * (o.n_ + 1) / 2;
  for (int k = 0; k < hs; ++k) h_[k] -= o.h_[k];
  order_ = std::min(order_, o.order_);
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  const int n = common_dim(n_, o.n_);
  const double a = v_, b = o.v_;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const int k = hidx(i, j);
      h_[k] = a * o.h_[k] + b * h_[k] + g_[i] * o.g_[j] + g_[j] * o.g_[i];
    }
  }
  for (int i = 0; i < n; ++i) g_[i] = a * o.g_[i] + b * g_[i];
  v_ = a * b;
  n_ = n;
  order_ = std::min(order_, o.order_);
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  const double b = o.v_;
  *this *= o.apply(1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b));
  return *this;
}

Jet Jet::apply(double f0, double f1, double f2) const {
  Jet r = *this;
  r.v_ = f0;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i <= j; ++i) {
      const int k = hidx(i, j);
      r.h_[k] = f1 * h_[k] + f2 * g_[i] * g_[j];
    }
  for (int i = 0; i < n_; ++i) r.g_[i] = f1 * g_[i];
  return r;
}

Jet operator-(const Jet& a) { return a.apply(-a.value(), -1.0, 0.0); }
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Jet& b) { return a *= b; }
Jet operator/(Jet a, const Jet& b) { return a /= b; }

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  return a.apply(std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet sqrt(const Jet& a) {
  const double r = std::sqrt(a.value());
  return a.apply(r, 0.5 / r, -0.25 / (r * a.value()));
}

Jet pow(const Jet& a, int k) {
  const double x = a.value();
  if (k == 0) return Jet::constant(1.0, a.dim());
  const double f0 = std::pow(x, k);
  const double f1 = k * std::pow(x, k - 1);
  const double f2 = k == 1 ? 0.0 : static_cast<double>(k) * (k - 1) * std::pow(x, k - 2);
  return a.apply(f0, f1, f2);
}

Jet partial(const Jet& a, int i) {
  if (a.order() < 1) throw OrderError("partial derivative of an order-0 jet");
  const int n = a.dim();
  Jet r = Jet::constant(a.grad(i), n);
  for (int j = 0; j < n; ++j) r.set_grad(j, a.hess(i, j));
  r.set_order(a.order() - 1);
  return r;
}

Jet embed(const Jet& a, int n, std::span<const int> map) {
  Jet r = Jet::constant(a.value(), n);
  r.set_order(a.order());
  const int m = a.dim();
  for (int i = 0; i < m; ++i) {
    const int ii = map[static_cast<std::size_t>(i)];
    if (ii < 0) continue;
    r.set_grad(ii, a.grad(i));
    for (int j = 0; j <= i; ++j) {
      const int jj = map[static_cast<std::size_t>(j)];
      if (jj < 0) continue;
      r.set_hess(ii, jj, a.hess(i, j));
    }
  }
  return r;
}

Jet compose(const Jet& f, std::span<const Jet> y) {
  const int m = f.dim();
  int n = 0;
  int order = f.order();
  for (const Jet& yj : y) {
    n = common_dim(n, yj.dim());
    order = std::min(order, yj.order());
  }
  Jet r = Jet::constant(f.value(), n);
  for (int a = 0; a < m; ++a) {
    const Jet& ya = y[static_cast<std::size_t>(a)];
    const double fa = f.grad(a);
    for (int i = 0; i < n; ++i) {
      r.set_grad(i, r.grad(i) + fa * ya.grad(i));
      for (int j = 0; j <= i; ++j) r.set_hess(i, j, r.hess(i, j) + fa * ya.hess(i, j));
    }
    for (int b = 0; b < m; ++b) {
      const double fab = f.hess(a, b);
      if (fab == 0.0) continue;
      const Jet& yb = y[static_cast<std::size_t>(b)];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) r.set_hess(i, j, r.hess(i, j) + fab * ya.grad(i) * yb.grad(j));
    }
  }
  r.set_order(order);
  return r;
}

JetVec seed(std::span<const double> p) {
  const int n = static_cast<int>(p.size());
  JetVec out;
  out.reserve(p.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(p[static_cast<std::size_t>(i)], i, n));
  return out;
}

std::vector<double> values(std::span<const Jet> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back(j.value());
  return out;
}

}  // namespace jd
