#include "einsteinprobe/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace ep {

namespace {

[[noreturn]] void throw_not_spd(const Eigen::MatrixXd& g, std::span<const double> x) {
  int n = static_cast<int>(g.rows());
  int minor = n;
  for (int k = 1; k <= n; ++k) {
    if (g.topLeftCorner(k, k).determinant() <= 0.0) {
      minor = k;
      break;
    }
  }
  std::ostringstream os;
  os << "metric is not positive definite at point (";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << "): leading minor of order " << minor << " is non-positive";
  throw GeometryError(os.str());
}

}  // namespace

void CurvatureWorkspace::resize(int n) {
  g.resize(n, n);
  g_inv.resize(n, n);
  ricci.resize(n, n);
  identity = Eigen::MatrixXd::Identity(n, n);
  dg.resize(n);
  gamma.resize(n);
  dginv.resize(n);
  ddg.resize(n);
  dgamma.resize(n);
  riemann.resize(n);
  scalar = 0.0;
}

ScalarField::ScalarField(const ManifoldSpec& spec, const Expr& f)
    : n_(spec.dim), f_(f.bind_params(spec.params)) {
  grad_.reserve(n_);
  for (int i = 0; i < n_; ++i) grad_.push_back(f_.diff(i));
  hess_.reserve(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) hess_.push_back(i <= j ? grad_[i].diff(j) : Expr());
  // mirror the strict lower triangle so lookups stay branch-free
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j)
      hess_[static_cast<std::size_t>(i) * n_ + j] = hess_[static_cast<std::size_t>(j) * n_ + i];
}

double ScalarField::value_at(std::span<const double> x) const { return f_.eval(x); }

double ScalarField::gradient_entry(int i, std::span<const double> x) const {
  return grad_[static_cast<std::size_t>(i)].eval(x);
}

double ScalarField::hessian_entry(int i, int j, std::span<const double> x) const {
  return hess_[static_cast<std::size_t>(i) * n_ + j].eval(x);
}

ChartGeometry::ChartGeometry(ManifoldSpec spec) : spec_(std::move(spec)), n_(spec_.dim) {
  g_.reserve(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g_.push_back(spec_.metric_entry(i, j).bind_params(spec_.params));

  dg_.reserve(static_cast<std::size_t>(n_) * n_ * n_);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) dg_.push_back(g_expr(i, j).diff(k));

  ddg_.reserve(static_cast<std::size_t>(n_) * n_ * n_ * n_);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) ddg_.push_back(dg_expr(l, i, j).diff(k));
}

void ChartGeometry::frame_metric(std::span<const double> x, CurvatureWorkspace& ws) const {
  if (ws.g.rows() != n_) ws.resize(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      double v = g_expr(i, j).eval(x);
      ws.g(i, j) = v;
      ws.g(j, i) = v;
    }
  // closed-form SPD inverses for the common small dimensions (Sylvester
  // criterion on leading minors); Eigen LLT beyond that
  const Eigen::MatrixXd& g = ws.g;
  switch (n_) {
    case 1: {
      if (!(g(0, 0) > 0.0)) throw_not_spd(g, x);
      ws.g_inv(0, 0) = 1.0 / g(0, 0);
      return;
    }
    case 2: {
      double det = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
      if (!(g(0, 0) > 0.0) || !(det > 0.0)) throw_not_spd(g, x);
      double inv_det = 1.0 / det;
      ws.g_inv(0, 0) = g(1, 1) * inv_det;
      ws.g_inv(1, 1) = g(0, 0) * inv_det;
      ws.g_inv(0, 1) = ws.g_inv(1, 0) = -g(0, 1) * inv_det;
      return;
    }
    case 3: {
      double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
      double c00 = g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2);
      double c01 = g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2);
      double c02 = g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1);
      double det = g(0, 0) * c00 + g(0, 1) * c01 + g(0, 2) * c02;
      if (!(g(0, 0) > 0.0) || !(m2 > 0.0) || !(det > 0.0)) throw_not_spd(g, x);
      double inv_det = 1.0 / det;
      double c11 = g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2);
      double c12 = g(0, 1) * g(0, 2) - g(0, 0) * g(1, 2);
      double c22 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
      ws.g_inv(0, 0) = c00 * inv_det;
      ws.g_inv(1, 1) = c11 * inv_det;
      ws.g_inv(2, 2) = c22 * inv_det;
      ws.g_inv(0, 1) = ws.g_inv(1, 0) = c01 * inv_det;
      ws.g_inv(0, 2) = ws.g_inv(2, 0) = c02 * inv_det;
      ws.g_inv(1, 2) = ws.g_inv(2, 1) = c12 * inv_det;
      return;
    }
    default: {
      ws.llt.compute(ws.g);
      if (ws.llt.info() != Eigen::Success) throw_not_spd(ws.g, x);
      ws.g_inv = ws.llt.solve(ws.identity);
      return;
    }
  }
}

void ChartGeometry::frame_connection(std::span<const double> x, CurvatureWorkspace& ws) const {
  frame_metric(x, ws);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        double v = dg_expr(k, i, j).eval(x);
        ws.dg(k, i, j) = v;
        ws.dg(k, j, i) = v;
      }
  // Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{jl} - d_l g_{jk})
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = j; k < n_; ++k) {
        double s = 0.0;
        for (int l = 0; l < n_; ++l)
          s += ws.g_inv(i, l) * (ws.dg(j, l, k) + ws.dg(k, j, l) - ws.dg(l, j, k));
        s *= 0.5;
        ws.gamma(i, j, k) = s;
        ws.gamma(i, k, j) = s;
      }
}

void ChartGeometry::frame_curvature(std::span<const double> x, CurvatureWorkspace& ws) const {
  frame_connection(x, ws);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          double v = ddg_expr(k, l, i, j).eval(x);
          ws.ddg(k, l, i, j) = v;
          ws.ddg(k, l, j, i) = v;
        }
  // d_m g^{il} = -g^{ia} (d_m g_{ab}) g^{bl}
  for (int m = 0; m < n_; ++m)
    for (int i = 0; i < n_; ++i)
      for (int l = i; l < n_; ++l) {
        double s = 0.0;
        for (int a = 0; a < n_; ++a)
          for (int b = 0; b < n_; ++b) s += ws.g_inv(i, a) * ws.dg(m, a, b) * ws.g_inv(b, l);
        ws.dginv(m, i, l) = -s;
        ws.dginv(m, l, i) = -s;
      }
  // d_m Gamma^i_{jk}
  for (int m = 0; m < n_; ++m)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = j; k < n_; ++k) {
          double s = 0.0;
          for (int l = 0; l < n_; ++l) {
            double a = ws.dg(j, l, k) + ws.dg(k, j, l) - ws.dg(l, j, k);
            double da = ws.ddg(m, j, l, k) + ws.ddg(m, k, j, l) - ws.ddg(m, l, j, k);
            s += ws.dginv(m, i, l) * a + ws.g_inv(i, l) * da;
          }
          s *= 0.5;
          ws.dgamma(m, i, j, k) = s;
          ws.dgamma(m, i, k, j) = s;
        }
  // R^l_{ijk} = d_j Gamma^l_{ik} - d_i Gamma^l_{jk}
  //           + Gamma^l_{jm} Gamma^m_{ik} - Gamma^l_{im} Gamma^m_{jk}
  // (curvature-operator sign fixed so that r_ij = R^k_{ikj} is positive on
  // the round sphere)
  for (int l = 0; l < n_; ++l)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          double s = ws.dgamma(j, l, i, k) - ws.dgamma(i, l, j, k);
          for (int m = 0; m < n_; ++m)
            s += ws.gamma(l, j, m) * ws.gamma(m, i, k) - ws.gamma(l, i, m) * ws.gamma(m, j, k);
          ws.riemann(l, i, j, k) = s;
        }
  // r_ij = tr(Z -> R(d_i, Z) d_j)
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double s = 0.0;
      for (int k = 0; k < n_; ++k) s += ws.riemann(k, i, k, j);
      ws.ricci(i, j) = s;
    }
  ws.scalar = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) ws.scalar += ws.g_inv(i, j) * ws.ricci(i, j);
}

Eigen::MatrixXd ChartGeometry::metric_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_metric(x, ws);
  return ws.g;
}

Eigen::MatrixXd ChartGeometry::inverse_metric_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_metric(x, ws);
  return ws.g_inv;
}

Tensor3 ChartGeometry::christoffel_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_connection(x, ws);
  return ws.gamma;
}

Tensor4 ChartGeometry::riemann_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_curvature(x, ws);
  return ws.riemann;
}

Eigen::MatrixXd ChartGeometry::ricci_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_curvature(x, ws);
  return ws.ricci;
}

double ChartGeometry::scalar_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_curvature(x, ws);
  return ws.scalar;
}

CurvatureAt ChartGeometry::curvature_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_curvature(x, ws);
  CurvatureAt out;
  out.point = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  out.g = ws.g;
  out.g_inv = ws.g_inv;
  out.gamma = ws.gamma;
  out.riemann = ws.riemann;
  out.ricci = ws.ricci;
  out.scalar = ws.scalar;
  return out;
}

EigenResult ChartGeometry::ricci_eigenvalues_at(std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_curvature(x, ws);
  Eigen::MatrixXd r = 0.5 * (ws.ricci + ws.ricci.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(r, ws.g, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw GeometryError("generalized eigenvalue factorization failed (metric not SPD?)");
  EigenResult out;
  out.point = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  out.lambdas = solver.eigenvalues();
  return out;
}

double ChartGeometry::g_trace(std::span<const double> x, const Eigen::MatrixXd& b) const {
  if (b.rows() != n_ || b.cols() != n_)
    throw GeometryError("g_trace: form has dimension " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()) + ", expected " + std::to_string(n_));
  CurvatureWorkspace ws(n_);
  frame_metric(x, ws);
  return (ws.g_inv.array() * b.array()).sum();
}

Eigen::MatrixXd ChartGeometry::hessian_at(const ScalarField& f, std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  frame_connection(x, ws);
  Eigen::VectorXd grad(n_);
  for (int i = 0; i < n_; ++i) grad[i] = f.gradient_entry(i, x);
  Eigen::MatrixXd h(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      double v = f.hessian_entry(i, j, x);
      for (int k = 0; k < n_; ++k) v -= ws.gamma(k, i, j) * grad[k];
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

double ChartGeometry::laplace_beltrami_at(const ScalarField& f, std::span<const double> x) const {
  CurvatureWorkspace ws(n_);
  return laplace_beltrami_at(f, x, ws);
}

double ChartGeometry::laplace_beltrami_at(const ScalarField& f, std::span<const double> x,
                                          CurvatureWorkspace& ws) const {
  frame_connection(x, ws);
  double grad[8];
  std::vector<double> grad_dyn;
  double* gp = grad;
  if (n_ > 8) {
    grad_dyn.resize(static_cast<std::size_t>(n_));
    gp = grad_dyn.data();
  }
  for (int k = 0; k < n_; ++k) gp[k] = f.gradient_entry(k, x);
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      double h = f.hessian_entry(i, j, x);
      for (int k = 0; k < n_; ++k) h -= ws.gamma(k, i, j) * gp[k];
      s += (i == j ? 1.0 : 2.0) * ws.g_inv(i, j) * h;
    }
  return s;
}

}  // namespace ep
