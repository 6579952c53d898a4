#include "support/oracles.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ep::testing {

// ---- StackProgram -----------------------------------------------------------

StackProgram StackProgram::compile(const Expr& e) {
  StackProgram p;
  std::function<void(const ExprNode&)> walk = [&](const ExprNode& n) {
    switch (n.kind) {
      case ExprNode::Kind::Constant:
        p.code_.push_back({Instr::Op::PushConst, n.value, 0, {}, {}, {}});
        return;
      case ExprNode::Kind::Coord:
        p.code_.push_back({Instr::Op::PushCoord, 0.0, n.index, {}, {}, {}});
        return;
      case ExprNode::Kind::Param:
        p.code_.push_back({Instr::Op::PushParam, 0.0, 0, n.name, {}, {}});
        return;
      case ExprNode::Kind::Unary:
        walk(*n.a);
        p.code_.push_back({Instr::Op::Unary, 0.0, 0, {}, n.uop, {}});
        return;
      case ExprNode::Kind::Binary:
        walk(*n.a);
        walk(*n.b);
        p.code_.push_back({Instr::Op::Binary, 0.0, 0, {}, {}, n.bop});
        return;
    }
  };
  walk(e.node());
  return p;
}

double StackProgram::run(std::span<const double> coords, const ParamMap& params) const {
  std::vector<double> stack;
  stack.reserve(16);
  for (const Instr& in : code_) {
    switch (in.op) {
      case Instr::Op::PushConst:
        stack.push_back(in.value);
        break;
      case Instr::Op::PushCoord:
        stack.push_back(coords[static_cast<std::size_t>(in.index)]);
        break;
      case Instr::Op::PushParam:
        stack.push_back(params.at(in.name));
        break;
      case Instr::Op::Unary: {
        double a = stack.back();
        double r = 0.0;
        switch (in.uop) {
          case UnaryOp::Neg: r = -a; break;
          case UnaryOp::Sin: r = std::sin(a); break;
          case UnaryOp::Cos: r = std::cos(a); break;
          case UnaryOp::Tan: r = std::tan(a); break;
          case UnaryOp::Sinh: r = std::sinh(a); break;
          case UnaryOp::Cosh: r = std::cosh(a); break;
          case UnaryOp::Tanh: r = std::tanh(a); break;
          case UnaryOp::Exp: r = std::exp(a); break;
          case UnaryOp::Log: r = std::log(a); break;
          case UnaryOp::Sqrt: r = std::sqrt(a); break;
        }
        stack.back() = r;
        break;
      }
      case Instr::Op::Binary: {
        double b = stack.back();
        stack.pop_back();
        double a = stack.back();
        double r = 0.0;
        switch (in.bop) {
          case BinaryOp::Add: r = a + b; break;
          case BinaryOp::Sub: r = a - b; break;
          case BinaryOp::Mul: r = a * b; break;
          case BinaryOp::Div: r = a / b; break;
          case BinaryOp::Pow: r = std::pow(a, b); break;
        }
        stack.back() = r;
        break;
      }
    }
  }
  if (stack.size() != 1) throw std::logic_error("stack program left " + std::to_string(stack.size()));
  return stack.back();
}

// ---- random generation ------------------------------------------------------

Expr random_expr(std::mt19937_64& rng, int max_depth, int n_coords) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 99);
  auto leaf = [&]() -> Expr {
    int r = pick(rng);
    if (r < 40) return Expr::constant(std::round(coef(rng) * 8.0) / 8.0);
    return Expr::coord(static_cast<int>(rng() % static_cast<std::uint64_t>(n_coords)));
  };
  if (max_depth <= 0) return leaf();
  int r = pick(rng);
  if (r < 25) return leaf();
  if (r < 60) {
    static const UnaryOp ops[] = {UnaryOp::Neg,  UnaryOp::Sin,  UnaryOp::Cos, UnaryOp::Tan,
                                  UnaryOp::Sinh, UnaryOp::Cosh, UnaryOp::Tanh, UnaryOp::Exp,
                                  UnaryOp::Log,  UnaryOp::Sqrt};
    return Expr::unary(ops[rng() % 10], random_expr(rng, max_depth - 1, n_coords));
  }
  static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div};
  if (r < 92)
    return Expr::binary(ops[rng() % 4], random_expr(rng, max_depth - 1, n_coords),
                        random_expr(rng, max_depth - 1, n_coords));
  static const double exps[] = {-2.0, -1.0, 2.0, 3.0, 0.5, 1.5};
  return Expr::binary(BinaryOp::Pow, random_expr(rng, max_depth - 1, n_coords),
                      Expr::constant(exps[rng() % 6]));
}

std::vector<Eigen::VectorXd> random_interior_points(const ManifoldSpec& spec, int count,
                                                    std::uint64_t seed, double margin_frac) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd x(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      double w = spec.domain[i].width();
      double lo = spec.domain[i].lo + margin_frac * w;
      x[i] = lo + u(rng) * (1.0 - 2.0 * margin_frac) * w;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

// ---- finite-difference geometry oracles ------------------------------------

Tensor3 fd_christoffel(const ChartGeometry& geo, const Eigen::VectorXd& x, double h) {
  const int n = geo.dim();
  Tensor3 dg(n);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < n; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    Eigen::MatrixXd gp = geo.metric_at(sp(xp));
    Eigen::MatrixXd gm = geo.metric_at(sp(xm));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(k, i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  Eigen::MatrixXd g_inv = geo.inverse_metric_at(sp(x));
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += g_inv(i, l) * (dg(j, l, k) + dg(k, j, l) - dg(l, j, k));
        gamma(i, j, k) = 0.5 * s;
      }
  return gamma;
}

Tensor4 fd_riemann(const ChartGeometry& geo, const Eigen::VectorXd& x, double h) {
  const int n = geo.dim();
  std::vector<Tensor3> dgamma;  // dgamma[m](i,j,k) = d_m Gamma^i_{jk}
  dgamma.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd xp = x, xm = x;
  for (int m = 0; m < n; ++m) {
    xp[m] = x[m] + h;
    xm[m] = x[m] - h;
    Tensor3 gp = geo.christoffel_at(sp(xp));
    Tensor3 gm = geo.christoffel_at(sp(xm));
    Tensor3 d(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) d(i, j, k) = (gp(i, j, k) - gm(i, j, k)) / (2.0 * h);
    dgamma.push_back(std::move(d));
    xp[m] = x[m];
    xm[m] = x[m];
  }
  Tensor3 gamma = geo.christoffel_at(sp(x));
  Tensor4 r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = dgamma[static_cast<std::size_t>(j)](l, i, k) -
                     dgamma[static_cast<std::size_t>(i)](l, j, k);
          for (int m = 0; m < n; ++m)
            s += gamma(l, j, m) * gamma(m, i, k) - gamma(l, i, m) * gamma(m, j, k);
          r(l, i, j, k) = s;
        }
  return r;
}

double fd_scalar_diag2(const ChartGeometry& geo, const Eigen::VectorXd& x, double h) {
  // K = -1/(2 sqrt(EG)) [ d_u(G_u / sqrt(EG)) + d_v(E_v / sqrt(EG)) ], s = 2K
  auto E = [&](double u, double v) {
    Eigen::VectorXd p(2);
    p << u, v;
    return geo.metric_at(sp(p))(0, 0);
  };
  auto G = [&](double u, double v) {
    Eigen::VectorXd p(2);
    p << u, v;
    return geo.metric_at(sp(p))(1, 1);
  };
  auto P = [&](double u, double v) {  // G_u / sqrt(EG)
    double gu = (G(u + h, v) - G(u - h, v)) / (2.0 * h);
    return gu / std::sqrt(E(u, v) * G(u, v));
  };
  auto Q = [&](double u, double v) {  // E_v / sqrt(EG)
    double ev = (E(u, v + h) - E(u, v - h)) / (2.0 * h);
    return ev / std::sqrt(E(u, v) * G(u, v));
  };
  double u = x[0], v = x[1];
  double dP = (P(u + h, v) - P(u - h, v)) / (2.0 * h);
  double dQ = (Q(u, v + h) - Q(u, v - h)) / (2.0 * h);
  double K = -(dP + dQ) / (2.0 * std::sqrt(E(u, v) * G(u, v)));
  return 2.0 * K;
}

}  // namespace ep::testing
