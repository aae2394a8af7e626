#include "jd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace jd {

ParseError::ParseError(std::size_t offset, std::string message, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      offset_(offset),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

EvalError::EvalError(std::size_t offset, const std::string& message)
    : std::runtime_error("domain error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

Expr::Expr(std::shared_ptr<const ExprNode> root, std::vector<std::string> coords, std::vector<std::string> params)
    : root_(std::move(root)), coords_(std::move(coords)), params_(std::move(params)) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& coords, const std::vector<std::string>& params)
      : s_(src), coords_(coords), params_(params) {}

  NodePtr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "empty expression", "expression");
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'", "operator or end of input");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  static NodePtr bin(Op op, NodePtr a, NodePtr b, std::size_t at) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->offset = at;
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      skip();
      if (peek('+') || peek('-')) {
        const std::size_t at = pos_;
        const Op op = s_[pos_] == '+' ? Op::Add : Op::Sub;
        ++pos_;
        lhs = bin(op, lhs, term(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (peek('*') || peek('/')) {
        const std::size_t at = pos_;
        const Op op = s_[pos_] == '*' ? Op::Mul : Op::Div;
        ++pos_;
        lhs = bin(op, lhs, unary(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (peek('-')) {
      const std::size_t at = pos_;
      ++pos_;
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Neg;
      n->a = unary();
      n->offset = at;
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!peek('^')) return base;
    const std::size_t at = pos_;
    ++pos_;
    skip();
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(pos_, "exponent must be an integer literal", "integer");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      throw ParseError(pos_, "exponent must be an integer literal", "integer");
    const long k = std::strtol(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (k > 64) throw ParseError(start, "exponent too large", "integer <= 64");
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->a = std::move(base);
    n->exponent = static_cast<int>(neg ? -k : k);
    n->offset = at;
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input", "operand");
    const char c = s_[pos_];
    const std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError(pos_, "unbalanced parenthesis", "')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id(s_.substr(at, pos_ - at));
      if (peek('(')) return call(id, at);
      auto n = std::make_shared<ExprNode>();
      n->offset = at;
      n->name = id;
      for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == id) {
          n->op = Op::Coord;
          n->index = static_cast<int>(i);
          return n;
        }
      for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i] == id) {
          n->op = Op::Param;
          n->index = static_cast<int>(i);
          return n;
        }
      if (id == "pi") {
        n->op = Op::Literal;
        n->value = std::numbers::pi;
        return n;
      }
      throw ParseError(at, "unknown identifier '" + id + "'", "coordinate or parameter");
    }
    throw ParseError(at, "unexpected '" + std::string(1, c) + "'", "operand");
  }

  NodePtr number() {
    const std::size_t at = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string text(s_.substr(at, pos_ - at));
    if (text == ".") throw ParseError(at, "malformed number", "digits");
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Literal;
    n->value = std::strtod(text.c_str(), nullptr);
    n->offset = at;
    return n;
  }

  NodePtr call(const std::string& id, std::size_t at) {
    Op op;
    if (id == "sin") op = Op::Sin;
    else if (id == "cos") op = Op::Cos;
    else if (id == "exp") op = Op::Exp;
    else if (id == "log") op = Op::Log;
    else if (id == "sqrt") op = Op::Sqrt;
    else throw ParseError(at, "unknown function '" + id + "'", "sin, cos, exp, log or sqrt");
    ++pos_;  // '('
    NodePtr arg = expr();
    skip();
    if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError(pos_, "unbalanced parenthesis", "')'");
    ++pos_;
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(arg);
    n->offset = at;
    n->name = id;
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  const std::vector<std::string>& coords_;
  const std::vector<std::string>& params_;
};

Jet eval_node(const ExprNode& n, std::span<const Jet> x, std::span<const double> pv) {
  switch (n.op) {
    case Op::Literal:
      return Jet(n.value);
    case Op::Coord:
      return x[static_cast<std::size_t>(n.index)];
    case Op::Param:
      if (static_cast<std::size_t>(n.index) >= pv.size()) throw EvalError(n.offset, "parameter '" + n.name + "' has no value");
      return Jet(pv[static_cast<std::size_t>(n.index)]);
    case Op::Neg:
      return -eval_node(*n.a, x, pv);
    case Op::Sin:
      return sin(eval_node(*n.a, x, pv));
    case Op::Cos:
      return cos(eval_node(*n.a, x, pv));
    case Op::Exp:
      return exp(eval_node(*n.a, x, pv));
    case Op::Log: {
      Jet a = eval_node(*n.a, x, pv);
      if (!(a.value() > 0.0)) throw EvalError(n.offset, "log of non-positive value");
      return log(a);
    }
    case Op::Sqrt: {
      Jet a = eval_node(*n.a, x, pv);
      if (!(a.value() > 0.0)) throw EvalError(n.offset, "sqrt needs a positive argument for exact derivatives");
      return sqrt(a);
    }
    case Op::Add:
      return eval_node(*n.a, x, pv) + eval_node(*n.b, x, pv);
    case Op::Sub:
      return eval_node(*n.a, x, pv) - eval_node(*n.b, x, pv);
    case Op::Mul:
      return eval_node(*n.a, x, pv) * eval_node(*n.b, x, pv);
    case Op::Div: {
      Jet b = eval_node(*n.b, x, pv);
      if (b.value() == 0.0) throw EvalError(n.offset, "division by zero");
      return eval_node(*n.a, x, pv) / b;
    }
    case Op::Pow: {
      Jet a = eval_node(*n.a, x, pv);
      if (n.exponent < 0 && a.value() == 0.0) throw EvalError(n.offset, "negative power of zero");
      return pow(a, n.exponent);
    }
  }
  throw EvalError(n.offset, "bad node");
}

int prec(const ExprNode& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string wrap(const ExprNode& n, int need) {
  std::string s = to_string(n);
  return prec(n) < need ? "(" + s + ")" : s;
}

std::string literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos && s.find("inf") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

Jet Expr::eval(std::span<const Jet> x, std::span<const double> param_values) const {
  if (!root_) throw EvalError(0, "empty expression");
  if (x.size() != coords_.size()) throw std::invalid_argument("coordinate count mismatch");
  return eval_node(*root_, x, param_values);
}

Expr parse(std::string_view src, const std::vector<std::string>& coords, const std::vector<std::string>& params) {
  Parser p(src, coords, params);
  return Expr(p.run(), coords, params);
}

Expr parse(std::string_view src, const Chart& chart, const std::vector<std::string>& params) {
  return parse(src, chart.names, params);
}

Jet eval_jet(const Expr& e, const Point& point, std::span<const double> param_values) {
  const JetVec x = seed(point);
  Jet r = e.eval(x, param_values);
  if (r.dim() == 0) r = Jet::constant(r.value(), static_cast<int>(point.size()));
  return r;
}

std::string to_string(const ExprNode& n) {
  switch (n.op) {
    case Op::Literal:
      return literal(n.value);
    case Op::Coord:
    case Op::Param:
      return n.name;
    case Op::Neg:
      return "-" + wrap(*n.a, 3);
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
      return n.name + "(" + to_string(*n.a) + ")";
    case Op::Add:
      return wrap(*n.a, 1) + " + " + wrap(*n.b, 2);
    case Op::Sub:
      return wrap(*n.a, 1) + " - " + wrap(*n.b, 2);
    case Op::Mul:
      return wrap(*n.a, 2) + "*" + wrap(*n.b, 3);
    case Op::Div:
      return wrap(*n.a, 2) + "/" + wrap(*n.b, 3);
    case Op::Pow:
      return wrap(*n.a, 5) + "^" + std::to_string(n.exponent);
  }
  return "?";
}

std::string to_string(const Expr& e) { return e.root() ? to_string(*e.root()) : std::string(); }

ScalarField expr_field(Expr e, std::vector<double> param_values) {
  return [e = std::move(e), pv = std::move(param_values)](const Point& p) { return eval_jet(e, p, pv); };
}

ScalarField field_from(std::string_view src, const Chart& chart, const std::map<std::string, double>& params) {
  std::vector<std::string> names;
  std::vector<double> vals;
  for (const auto& [k, v] : params) {
    names.push_back(k);
    vals.push_back(v);
  }
  return expr_field(parse(src, chart, names), vals);
}

}  // namespace jd
