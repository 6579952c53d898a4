#include "einsteinprobe/expr.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace ep {

namespace {

using Kind = ExprNode::Kind;

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

bool integral_exponent(double c) {
  return std::floor(c) == c && std::abs(c) < 1e9;
}

double apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg:  return -x;
    case UnaryOp::Sin:  return std::sin(x);
    case UnaryOp::Cos:  return std::cos(x);
    case UnaryOp::Tan:  return std::tan(x);
    case UnaryOp::Sinh: return std::sinh(x);
    case UnaryOp::Cosh: return std::cosh(x);
    case UnaryOp::Tanh: return std::tanh(x);
    case UnaryOp::Exp:  return std::exp(x);
    case UnaryOp::Log:
      if (x <= 0.0) throw EvalError("log of non-positive value " + std::to_string(x));
      return std::log(x);
    case UnaryOp::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
  }
  throw EvalError("unknown unary op");
}

double apply_binary(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    case BinaryOp::Div:
      if (y == 0.0) throw EvalError("division by zero");
      return x / y;
    case BinaryOp::Pow:
      if (x == 0.0 && y < 0.0) throw EvalError("zero raised to negative power");
      if (x < 0.0 && !integral_exponent(y))
        throw EvalError("negative base " + std::to_string(x) +
                        " with non-integer exponent " + std::to_string(y));
      return std::pow(x, y);
  }
  throw EvalError("unknown binary op");
}

double eval_node(const ExprNode& n, std::span<const double> x, const ParamMap* params) {
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Coord:
      if (n.index < 0 || static_cast<std::size_t>(n.index) >= x.size())
        throw EvalError("coordinate index " + std::to_string(n.index) +
                        " out of range for point of dimension " + std::to_string(x.size()));
      return x[static_cast<std::size_t>(n.index)];
    case Kind::Param: {
      if (params != nullptr) {
        auto it = params->find(n.name);
        if (it != params->end()) return it->second;
      }
      throw EvalError("unbound parameter '" + n.name + "'");
    }
    case Kind::Unary:
      return apply_unary(n.uop, eval_node(*n.a, x, params));
    case Kind::Binary:
      return apply_binary(n.bop, eval_node(*n.a, x, params), eval_node(*n.b, x, params));
  }
  throw EvalError("corrupt expression node");
}

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 1;
    case Kind::Unary:
      return n.uop == UnaryOp::Neg ? 3 : 5;
    default:
      return 5;
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ExprNode& n, std::span<const std::string> coords, std::string& out);

void print_child(const ExprNode& c, int min_prec, std::span<const std::string> coords,
                 std::string& out) {
  bool parens = precedence(c) < min_prec;
  if (parens) out += '(';
  print_node(c, coords, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& n, std::span<const std::string> coords, std::string& out) {
  switch (n.kind) {
    case Kind::Constant:
      if (n.value < 0.0 || std::signbit(n.value)) {
        // negative literals render via unary minus, which the parser folds back
        out += '-';
        out += format_double(-n.value);
      } else {
        out += format_double(n.value);
      }
      return;
    case Kind::Coord:
      if (static_cast<std::size_t>(n.index) < coords.size()) {
        out += coords[static_cast<std::size_t>(n.index)];
      } else {
        out += 'x';
        out += std::to_string(n.index + 1);
      }
      return;
    case Kind::Param:
      out += n.name;
      return;
    case Kind::Unary:
      if (n.uop == UnaryOp::Neg) {
        out += '-';
        // grammar: "-" base, so anything non-atomic needs parentheses
        print_child(*n.a, 5, coords, out);
      } else {
        out += unary_op_name(n.uop);
        out += '(';
        print_node(*n.a, coords, out);
        out += ')';
      }
      return;
    case Kind::Binary: {
      int prec = precedence(n);
      const char* sym = nullptr;
      switch (n.bop) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow: sym = "^"; break;
      }
      if (n.bop == BinaryOp::Pow) {
        // factor := base ("^" base)?  -- both sides must be base-shaped
        print_child(*n.a, 5, coords, out);
        out += sym;
        print_child(*n.b, 5, coords, out);
      } else {
        print_child(*n.a, prec, coords, out);
        out += sym;
        // +,-,*,/ are left associative; the right child needs parens on ties
        print_child(*n.b, prec + 1, coords, out);
      }
      return;
    }
  }
}

}  // namespace

const char* unary_op_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg:  return "neg";
    case UnaryOp::Sin:  return "sin";
    case UnaryOp::Cos:  return "cos";
    case UnaryOp::Tan:  return "tan";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Exp:  return "exp";
    case UnaryOp::Log:  return "log";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

Expr Expr::constant(double v) {
  ExprNode n;
  n.kind = Kind::Constant;
  n.value = v;
  return Expr(make_node(std::move(n)));
}

Expr Expr::coord(int index) {
  if (index < 0) throw SpecError("coordinate index must be non-negative");
  ExprNode n;
  n.kind = Kind::Coord;
  n.index = index;
  return Expr(make_node(std::move(n)));
}

Expr Expr::param(std::string name) {
  ExprNode n;
  n.kind = Kind::Param;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::unary(UnaryOp op, const Expr& a) {
  if (op == UnaryOp::Neg) {
    if (a.node_->kind == Kind::Constant) return constant(-a.node_->value);
    if (a.node_->kind == Kind::Unary && a.node_->uop == UnaryOp::Neg)
      return Expr(a.node_->a);
  } else if (a.node_->kind == Kind::Constant) {
    try {
      double v = apply_unary(op, a.node_->value);
      if (std::isfinite(v)) return constant(v);
    } catch (const EvalError&) {
      // keep the node; evaluation reports the domain error
    }
  }
  ExprNode n;
  n.kind = Kind::Unary;
  n.uop = op;
  n.a = a.node_;
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
  const NodePtr& l = a.node_;
  const NodePtr& r = b.node_;
  if (op == BinaryOp::Pow && r->kind != Kind::Constant)
    throw SpecError("exponent must be a constant");
  if (l->kind == Kind::Constant && r->kind == Kind::Constant) {
    try {
      double v = apply_binary(op, l->value, r->value);
      if (std::isfinite(v)) return constant(v);
    } catch (const EvalError&) {
      // fold only well-defined results
    }
  }
  switch (op) {
    case BinaryOp::Add:
      if (is_const(l, 0.0)) return b;
      if (is_const(r, 0.0)) return a;
      break;
    case BinaryOp::Sub:
      if (is_const(r, 0.0)) return a;
      if (is_const(l, 0.0)) return unary(UnaryOp::Neg, b);
      break;
    case BinaryOp::Mul:
      if (is_const(l, 0.0) || is_const(r, 0.0)) return constant(0.0);
      if (is_const(l, 1.0)) return b;
      if (is_const(r, 1.0)) return a;
      break;
    case BinaryOp::Div:
      if (is_const(r, 1.0)) return a;
      break;
    case BinaryOp::Pow:
      if (is_const(r, 1.0)) return a;
      if (is_const(r, 0.0)) return constant(1.0);
      break;
  }
  ExprNode n;
  n.kind = Kind::Binary;
  n.bop = op;
  n.a = l;
  n.b = r;
  return Expr(make_node(std::move(n)));
}

double Expr::eval(std::span<const double> coords) const {
  double v = eval_node(*node_, coords, nullptr);
  if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value");
  return v;
}

double Expr::eval(std::span<const double> coords, const ParamMap& params) const {
  double v = eval_node(*node_, coords, &params);
  if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value");
  return v;
}

double Expr::constant_value() const {
  if (!is_constant()) throw EvalError("expression is not a constant");
  return node_->value;
}

Expr Expr::diff(int k) const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Param:
      return constant(0.0);
    case Kind::Coord:
      return constant(n.index == k ? 1.0 : 0.0);
    case Kind::Unary: {
      Expr u(n.a);
      Expr du = u.diff(k);
      switch (n.uop) {
        case UnaryOp::Neg:
          return unary(UnaryOp::Neg, du);
        case UnaryOp::Sin:
          return binary(BinaryOp::Mul, unary(UnaryOp::Cos, u), du);
        case UnaryOp::Cos:
          return unary(UnaryOp::Neg, binary(BinaryOp::Mul, unary(UnaryOp::Sin, u), du));
        case UnaryOp::Tan:
          return binary(BinaryOp::Mul,
                        binary(BinaryOp::Add, constant(1.0),
                               binary(BinaryOp::Pow, unary(UnaryOp::Tan, u), constant(2.0))),
                        du);
        case UnaryOp::Sinh:
          return binary(BinaryOp::Mul, unary(UnaryOp::Cosh, u), du);
        case UnaryOp::Cosh:
          return binary(BinaryOp::Mul, unary(UnaryOp::Sinh, u), du);
        case UnaryOp::Tanh:
          return binary(BinaryOp::Mul,
                        binary(BinaryOp::Sub, constant(1.0),
                               binary(BinaryOp::Pow, unary(UnaryOp::Tanh, u), constant(2.0))),
                        du);
        case UnaryOp::Exp:
          return binary(BinaryOp::Mul, unary(UnaryOp::Exp, u), du);
        case UnaryOp::Log:
          return binary(BinaryOp::Div, du, u);
        case UnaryOp::Sqrt:
          return binary(BinaryOp::Div, du,
                        binary(BinaryOp::Mul, constant(2.0), unary(UnaryOp::Sqrt, u)));
      }
      throw EvalError("unknown unary op in diff");
    }
    case Kind::Binary: {
      Expr u(n.a), v(n.b);
      switch (n.bop) {
        case BinaryOp::Add:
          return binary(BinaryOp::Add, u.diff(k), v.diff(k));
        case BinaryOp::Sub:
          return binary(BinaryOp::Sub, u.diff(k), v.diff(k));
        case BinaryOp::Mul:
          return binary(BinaryOp::Add, binary(BinaryOp::Mul, u.diff(k), v),
                        binary(BinaryOp::Mul, u, v.diff(k)));
        case BinaryOp::Div:
          return binary(BinaryOp::Div,
                        binary(BinaryOp::Sub, binary(BinaryOp::Mul, u.diff(k), v),
                               binary(BinaryOp::Mul, u, v.diff(k))),
                        binary(BinaryOp::Pow, v, constant(2.0)));
        case BinaryOp::Pow: {
          double c = v.constant_value();
          // d(u^c) = c * u^(c-1) * u'
          return binary(BinaryOp::Mul,
                        binary(BinaryOp::Mul, constant(c),
                               binary(BinaryOp::Pow, u, constant(c - 1.0))),
                        u.diff(k));
        }
      }
      throw EvalError("unknown binary op in diff");
    }
  }
  throw EvalError("corrupt expression node in diff");
}

Expr Expr::bind_params(const ParamMap& params) const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Coord:
      return *this;
    case Kind::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'");
      return constant(it->second);
    }
    case Kind::Unary:
      return unary(n.uop, Expr(n.a).bind_params(params));
    case Kind::Binary:
      return binary(n.bop, Expr(n.a).bind_params(params), Expr(n.b).bind_params(params));
  }
  throw EvalError("corrupt expression node in bind_params");
}

std::string Expr::str(std::span<const std::string> coord_names) const {
  std::string out;
  print_node(*node_, coord_names, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::Constant:
      return x.value == y.value || (std::isnan(x.value) && std::isnan(y.value));
    case Kind::Coord:
      return x.index == y.index;
    case Kind::Param:
      return x.name == y.name;
    case Kind::Unary:
      return x.uop == y.uop && structurally_equal(Expr(x.a), Expr(y.a));
    case Kind::Binary:
      return x.bop == y.bop && structurally_equal(Expr(x.a), Expr(y.a)) &&
             structurally_equal(Expr(x.b), Expr(y.b));
  }
  return false;
}

}  // namespace ep
