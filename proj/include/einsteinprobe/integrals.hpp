#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "einsteinprobe/bilinear_form.hpp"
#include "einsteinprobe/path.hpp"

namespace ep {

/// Per-step realized covariation matrices dX_k dX_k^T (symmetric PSD).
std::vector<Eigen::MatrixXd> quadratic_variation_increments(const Path& path);

/// Sum of the per-step covariation matrices; approximates int g^{-1} dt.
Eigen::MatrixXd quadratic_variation_sum(const Path& path);

/// int b(dX,dX) = sum_k b_ij(X_k) dX^i_k dX^j_k  (left-endpoint evaluation).
double integrate_bilinear(const ChartGeometry& geo, const BilinearFormField& b, const Path& path);

/// int tr_g b(X_t) dt by a left-endpoint Riemann sum.
double integrate_trace(const ChartGeometry& geo, const BilinearFormField& b, const Path& path);

/// Residual of the Brownian covariation identity int b(dB,dB) = int tr b dt.
struct LemmaResidual {
  double bilinear = 0.0;
  double trace = 0.0;
  double residual = 0.0;  // bilinear - trace
};
LemmaResidual lemma_residual(const ChartGeometry& geo, const BilinearFormField& b,
                             const Path& path);

/// Terminal value of the compensated process
///   M = f(X_zeta) - f(X_0) - 1/2 sum_k Lap_g f(X_k) dt_k,
/// which vanishes in expectation for g-Brownian motion.
double martingale_increment(const ChartGeometry& geo, const ScalarField& f, const Path& path);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

/// Sample mean and standard error of the martingale increment over an
/// ensemble (at least 30 paths).
MeanStderr martingale_defect(const ChartGeometry& geo, const ScalarField& f,
                             std::span<const Path> paths);

}  // namespace ep
