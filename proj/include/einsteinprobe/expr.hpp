#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "einsteinprobe/errors.hpp"

namespace ep {

using ParamMap = std::map<std::string, double>;

enum class UnaryOp { Neg, Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Constant, Coord, Param, Unary, Binary };

  Kind kind;
  double value = 0.0;     // Constant
  int index = 0;          // Coord
  std::string name;       // Param
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  NodePtr a, b;
};

/// Immutable expression over chart coordinates and named parameters.
///
/// Values are cheap shared handles; all factory functions apply constant
/// folding and the identity simplifications 0+u, u*1, u*0, u^1, u-0, u/1,
/// -(-u). The power operator requires a constant exponent.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v);
  static Expr coord(int index);
  static Expr param(std::string name);
  static Expr unary(UnaryOp op, const Expr& a);
  static Expr binary(BinaryOp op, const Expr& a, const Expr& b);

  /// Evaluate with every parameter already substituted; throws EvalError on
  /// a remaining parameter reference or a domain error.
  double eval(std::span<const double> coords) const;

  /// Evaluate with explicit parameter bindings.
  double eval(std::span<const double> coords, const ParamMap& params) const;

  /// Exact symbolic partial derivative with respect to coordinate `index`.
  Expr diff(int coord_index) const;

  /// Replace parameter references by constants. Unbound names throw.
  Expr bind_params(const ParamMap& params) const;

  bool is_constant() const { return node_->kind == ExprNode::Kind::Constant; }
  double constant_value() const;

  /// Render in the input grammar. Coordinate names default to x1..xn when
  /// not supplied; the output reparses to a structurally identical tree.
  std::string str(std::span<const std::string> coord_names = {}) const;

  const ExprNode& node() const { return *node_; }

  friend bool structurally_equal(const Expr& a, const Expr& b);

 private:
  explicit Expr(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Names visible to the expression parser. Identifiers resolve to
/// coordinates first, then parameters, then function names.
struct NameScope {
  std::vector<std::string> coords;
  std::vector<std::string> params;
};

/// Parse `text` against the grammar
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := base ("^" base)?
///   base   := number | ident | ident "(" expr ")" | "(" expr ")" | "-" base
/// Throws ParseError with a byte offset on failure.
Expr parse_expression(std::string_view text, const NameScope& names);

const char* unary_op_name(UnaryOp op);

}  // namespace ep
