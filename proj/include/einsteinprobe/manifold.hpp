#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "einsteinprobe/expr.hpp"

namespace ep {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

/// A single-chart Riemannian manifold: coordinate names, parameter
/// bindings, a rectangular domain box, and a symmetric matrix of metric
/// component expressions.
struct ManifoldSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  ParamMap params;
  std::vector<Interval> domain;
  std::vector<Expr> metric;  // dim*dim, row-major, structurally symmetric

  const Expr& metric_entry(int i, int j) const {
    return metric[static_cast<std::size_t>(i) * dim + j];
  }
  Expr& metric_entry(int i, int j) {
    return metric[static_cast<std::size_t>(i) * dim + j];
  }

  bool in_domain(std::span<const double> x) const;
  bool is_interior(std::span<const double> x) const;
  Eigen::VectorXd center() const;

  /// Metric matrix with parameters bound, evaluated at x.
  Eigen::MatrixXd evaluate_metric(std::span<const double> x) const;

  /// Re-render as a spec document; parse_manifold of the result yields a
  /// structurally identical spec.
  std::string to_text() const;
};

/// Parse and validate a manifold spec document (JSON, see README for the
/// schema). Structural symmetry of the metric is enforced; entries strictly
/// below the diagonal may be null and are filled from the upper triangle.
/// The evaluated metric is checked for symmetric positive definiteness on a
/// small validation grid.
ManifoldSpec parse_manifold(const std::string& text);

/// Returns a copy with one parameter rebound (and revalidated).
ManifoldSpec with_param(const ManifoldSpec& spec, const std::string& name, double value);

/// Bundled catalog. Keys: euclidean2, flat_torus3, sphere2, hyperbolic2,
/// s2_x_s1, bumpy_sphere2.
ManifoldSpec builtin_spec(const std::string& name);
std::vector<std::string> builtin_spec_names();
/// Raw document text for a catalog key (what builtin_spec parses).
const std::string& builtin_spec_text(const std::string& name);

/// Deterministic stratified sample of the domain box: the full grid of
/// per-axis cell centers with m = ceil(min_count^(1/dim)) cells per axis.
/// Returns at least min_count interior points.
std::vector<Eigen::VectorXd> sample_grid(const ManifoldSpec& spec, int min_count);

/// Check symmetric positive definiteness of the evaluated metric on a
/// validation grid; throws GeometryError at the first failing point.
void validate_spd_on_grid(const ManifoldSpec& spec, int min_count);

}  // namespace ep
