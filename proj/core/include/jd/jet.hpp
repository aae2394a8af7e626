#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jd {

// Widest chart any construction needs (the composable chart of the
// symplectic-example groupoid has 11 coordinates).
inline constexpr int kMaxDim = 12;
inline constexpr int kHessSize = kMaxDim * (kMaxDim + 1) / 2;

class OrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Second-order jet of a scalar at a point: value, gradient and Hessian with
// respect to n variables. The order tag records how many derivative levels are
// still exact; taking a partial derivative lowers it by one.
class Jet {
 public:
  Jet() = default;
  Jet(double v) : v_(v) {}  // NOLINT: constants convert implicitly

  static Jet variable(double v, int i, int n);
  static Jet constant(double v, int n);

  double value() const { return v_; }
  int dim() const { return n_; }
  int order() const { return order_; }

  double grad(int i) const { return i < n_ ? g_[static_cast<std::size_t>(i)] : 0.0; }
  double hess(int i, int j) const;

  void set_grad(int i, double v);
  void set_hess(int i, int j, double v);
  void set_value(double v) { v_ = v; }
  void set_order(int k) { order_ = k; }
  void resize(int n);

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  // f applied with f(v), f'(v), f''(v) already evaluated.
  Jet apply(double f0, double f1, double f2) const;

 private:
  static int hidx(int i, int j) { return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j; }

  double v_ = 0.0;
  int n_ = 0;
  int order_ = 2;
  std::array<double, kMaxDim> g_{};
  std::array<double, kHessSize> h_{};
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, const Jet& b);
Jet operator/(Jet a, const Jet& b);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, int k);

// d/dx_i of a jet; the result has order one less.
Jet partial(const Jet& a, int i);

// Same function with the variables renamed: old variable i becomes new
// variable map[i] in an n-variable space.
Jet embed(const Jet& a, int n, std::span<const int> map);

// Chain rule: f is a jet in variables y, and y are jets in variables x.
Jet compose(const Jet& f, std::span<const Jet> y);

using JetVec = std::vector<Jet>;

// Identity-seeded coordinate jets at a point.
JetVec seed(std::span<const double> p);

std::vector<double> values(std::span<const Jet> v);

}  // namespace jd
