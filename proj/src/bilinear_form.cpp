#include "einsteinprobe/bilinear_form.hpp"

#include <sstream>

namespace ep {

BilinearFormField BilinearFormField::affine(double ricci_coeff, double metric_coeff) {
  BilinearFormField f;
  f.kind_ = Kind::Affine;
  f.ricci_coeff_ = ricci_coeff;
  f.metric_coeff_ = metric_coeff;
  return f;
}

BilinearFormField BilinearFormField::from_exprs(const ManifoldSpec& spec,
                                                std::vector<Expr> entries) {
  int n = spec.dim;
  if (static_cast<int>(entries.size()) != n * n)
    throw SpecError("bilinear form: expected " + std::to_string(n * n) + " entries");
  BilinearFormField f;
  f.kind_ = Kind::ExprMatrix;
  f.expr_dim_ = n;
  f.entries_.resize(entries.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr bound = entries[static_cast<std::size_t>(i) * n + j].bind_params(spec.params);
      f.entries_[static_cast<std::size_t>(i) * n + j] = bound;
      f.entries_[static_cast<std::size_t>(j) * n + i] = bound;
    }
  return f;
}

void BilinearFormField::evaluate(const ChartGeometry& geo, std::span<const double> x,
                                 CurvatureWorkspace& ws, Eigen::MatrixXd& out) const {
  int n = geo.dim();
  if (out.rows() != n || out.cols() != n) out.resize(n, n);
  if (kind_ == Kind::ExprMatrix) {
    if (expr_dim_ != n)
      throw SpecError("bilinear form has dimension " + std::to_string(expr_dim_) +
                      ", chart has dimension " + std::to_string(n));
    geo.frame_metric(x, ws);  // keep the metric frame valid for trace callers
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = entries_[static_cast<std::size_t>(i) * n + j].eval(x);
        out(i, j) = v;
        out(j, i) = v;
      }
    return;
  }
  if (ricci_coeff_ != 0.0) {
    geo.frame_curvature(x, ws);
    out = ricci_coeff_ * ws.ricci;
    if (metric_coeff_ != 0.0) out += metric_coeff_ * ws.g;
  } else {
    geo.frame_metric(x, ws);
    if (metric_coeff_ != 0.0)
      out = metric_coeff_ * ws.g;
    else
      out.setZero();
  }
}

Eigen::MatrixXd BilinearFormField::at(const ChartGeometry& geo, std::span<const double> x) const {
  CurvatureWorkspace ws(geo.dim());
  Eigen::MatrixXd out;
  evaluate(geo, x, ws, out);
  return out;
}

std::string BilinearFormField::describe() const {
  if (kind_ == Kind::ExprMatrix) return "expr-matrix";
  std::ostringstream os;
  if (ricci_coeff_ == 0.0 && metric_coeff_ == 0.0) return "0";
  bool first = true;
  if (ricci_coeff_ != 0.0) {
    if (ricci_coeff_ == 1.0)
      os << "ricci";
    else
      os << ricci_coeff_ << "*ricci";
    first = false;
  }
  if (metric_coeff_ != 0.0) {
    if (!first) os << (metric_coeff_ < 0 ? " - " : " + ");
    double c = first ? metric_coeff_ : std::abs(metric_coeff_);
    if (c == 1.0)
      os << "g";
    else
      os << c << "*g";
  }
  return os.str();
}

}  // namespace ep
