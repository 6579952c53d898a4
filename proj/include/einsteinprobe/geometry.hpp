#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "einsteinprobe/manifold.hpp"
#include "einsteinprobe/tensors.hpp"

namespace ep {

/// Full pointwise curvature bundle.
struct CurvatureAt {
  Eigen::VectorXd point;
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  Tensor3 gamma;    // gamma(i,j,k) = Gamma^i_{jk}
  Tensor4 riemann;  // riemann(l,i,j,k): component of R(d_i, d_j) d_k along d_l
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

/// Eigenvalues of the Ricci tensor with respect to g, sorted ascending.
struct EigenResult {
  Eigen::VectorXd point;
  Eigen::VectorXd lambdas;
};

/// Reusable buffers for allocation-free curvature evaluation. Each thread
/// owns its workspace; ChartGeometry itself is immutable and shareable.
struct CurvatureWorkspace {
  CurvatureWorkspace() = default;
  explicit CurvatureWorkspace(int n) { resize(n); }
  void resize(int n);

  Eigen::MatrixXd g, g_inv, ricci, identity;
  Tensor3 dg, gamma, dginv;
  Tensor4 ddg, dgamma, riemann;
  double scalar = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

/// A scalar function on the chart with exact symbolic gradient and
/// coordinate Hessian, parameters pre-bound.
class ScalarField {
 public:
  ScalarField(const ManifoldSpec& spec, const Expr& f);

  double value_at(std::span<const double> x) const;
  double gradient_entry(int i, std::span<const double> x) const;
  double hessian_entry(int i, int j, std::span<const double> x) const;
  int dim() const { return n_; }

 private:
  int n_;
  Expr f_;
  std::vector<Expr> grad_;  // n
  std::vector<Expr> hess_;  // n*n, symmetric
};

/// Pointwise curvature engine for one chart. Construction binds parameters
/// and builds exact symbolic first and second derivatives of the metric
/// components; all evaluation methods are const and thread-safe.
class ChartGeometry {
 public:
  explicit ChartGeometry(ManifoldSpec spec);

  const ManifoldSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  bool in_domain(std::span<const double> x) const { return spec_.in_domain(x); }
  bool is_interior(std::span<const double> x) const { return spec_.is_interior(x); }
  Eigen::VectorXd domain_center() const { return spec_.center(); }

  // ---- allocation-free layers (fill the workspace in order) ----
  /// g and g_inv; throws GeometryError when g is not positive definite.
  void frame_metric(std::span<const double> x, CurvatureWorkspace& ws) const;
  /// + dg and Christoffel symbols.
  void frame_connection(std::span<const double> x, CurvatureWorkspace& ws) const;
  /// + second derivatives, Riemann, Ricci, scalar.
  void frame_curvature(std::span<const double> x, CurvatureWorkspace& ws) const;

  // ---- value-returning operations ----
  Eigen::MatrixXd metric_at(std::span<const double> x) const;
  Eigen::MatrixXd inverse_metric_at(std::span<const double> x) const;
  Tensor3 christoffel_at(std::span<const double> x) const;
  Tensor4 riemann_at(std::span<const double> x) const;
  Eigen::MatrixXd ricci_at(std::span<const double> x) const;
  double scalar_at(std::span<const double> x) const;
  CurvatureAt curvature_at(std::span<const double> x) const;

  /// Eigenvalues of ricci with respect to g (roots of det(r - lambda g)),
  /// ascending.
  EigenResult ricci_eigenvalues_at(std::span<const double> x) const;

  /// Trace of a bilinear form with respect to g: sum_ij g^ij b_ij.
  double g_trace(std::span<const double> x, const Eigen::MatrixXd& b) const;

  /// Hessian of f: H_ij = d_i d_j f - Gamma^k_ij d_k f.
  Eigen::MatrixXd hessian_at(const ScalarField& f, std::span<const double> x) const;
  /// Laplace-Beltrami of f: the g-trace of the Hessian.
  double laplace_beltrami_at(const ScalarField& f, std::span<const double> x) const;
  /// Workspace variant for tight loops.
  double laplace_beltrami_at(const ScalarField& f, std::span<const double> x,
                             CurvatureWorkspace& ws) const;

 private:
  const Expr& g_expr(int i, int j) const { return g_[static_cast<std::size_t>(i) * n_ + j]; }
  const Expr& dg_expr(int k, int i, int j) const {
    return dg_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }
  const Expr& ddg_expr(int k, int l, int i, int j) const {
    return ddg_[((static_cast<std::size_t>(k) * n_ + l) * n_ + i) * n_ + j];
  }

  ManifoldSpec spec_;
  int n_;
  std::vector<Expr> g_;    // params bound
  std::vector<Expr> dg_;   // dg[k,i,j] = d_k g_ij
  std::vector<Expr> ddg_;  // ddg[k,l,i,j] = d_k d_l g_ij
};

}  // namespace ep
