#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "einsteinprobe/geometry.hpp"

namespace ep {

/// Rule assigning a symmetric matrix of components to each chart point.
/// Either an affine combination a*ricci + b*metric or a user matrix of
/// expressions (symmetrized from its upper triangle at construction).
class BilinearFormField {
 public:
  static BilinearFormField metric() { return affine(0.0, 1.0); }
  static BilinearFormField ricci() { return affine(1.0, 0.0); }
  static BilinearFormField zero() { return affine(0.0, 0.0); }
  /// a*ricci + b*metric.
  static BilinearFormField affine(double ricci_coeff, double metric_coeff);
  /// Entries are expressions over the spec's coordinates and parameters;
  /// only the upper triangle of `entries` (row-major dim*dim) is read.
  static BilinearFormField from_exprs(const ManifoldSpec& spec, std::vector<Expr> entries);

  bool needs_curvature() const { return kind_ == Kind::Affine && ricci_coeff_ != 0.0; }

  /// Evaluate into `out` (resized to dim x dim, symmetric). On return the
  /// workspace holds at least the metric frame (g, g_inv) at x.
  void evaluate(const ChartGeometry& geo, std::span<const double> x, CurvatureWorkspace& ws,
                Eigen::MatrixXd& out) const;

  /// Convenience allocation form.
  Eigen::MatrixXd at(const ChartGeometry& geo, std::span<const double> x) const;

  std::string describe() const;

 private:
  enum class Kind { Affine, ExprMatrix };
  Kind kind_ = Kind::Affine;
  double ricci_coeff_ = 0.0;
  double metric_coeff_ = 0.0;
  int expr_dim_ = 0;
  std::vector<Expr> entries_;  // bound, symmetric, row-major
};

}  // namespace ep
