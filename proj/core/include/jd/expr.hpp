#pragma once

// Coordinate expressions.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' ['-'] digits ]
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Identifiers are chart coordinates, declared parameters, or the constant pi.
// Functions: sin cos exp log sqrt.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jd/chart.hpp"
#include "jd/fields.hpp"
#include "jd/jet.hpp"

namespace jd {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string message, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string message_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class Op { Literal, Coord, Param, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

struct ExprNode {
  Op op = Op::Literal;
  double value = 0.0;  // literal
  int index = -1;      // coordinate or parameter slot
  int exponent = 0;    // Pow
  std::size_t offset = 0;
  std::string name;    // identifier as written
  std::shared_ptr<const ExprNode> a, b;
};

// Parsed expression bound to a coordinate list and a parameter list.
class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<const ExprNode> root, std::vector<std::string> coords, std::vector<std::string> params);

  const ExprNode* root() const { return root_.get(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::string>& params() const { return params_; }

  // Evaluate on arbitrary coordinate jets.
  Jet eval(std::span<const Jet> x, std::span<const double> param_values = {}) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> coords_;
  std::vector<std::string> params_;
};

Expr parse(std::string_view src, const std::vector<std::string>& coords, const std::vector<std::string>& params = {});
Expr parse(std::string_view src, const Chart& chart, const std::vector<std::string>& params = {});

// Jet at a point, seeded at the identity of the chart.
Jet eval_jet(const Expr& e, const Point& point, std::span<const double> param_values = {});

std::string to_string(const Expr& e);
std::string to_string(const ExprNode& n);

// Scalar field backed by an expression with fixed parameter values.
ScalarField expr_field(Expr e, std::vector<double> param_values = {});

// Convenience: parse with a named parameter table.
ScalarField field_from(std::string_view src, const Chart& chart, const std::map<std::string, double>& params = {});

}  // namespace jd
