#include "einsteinprobe/integrals.hpp"

#include <cmath>

#include "einsteinprobe/ensemble.hpp"

namespace ep {

std::vector<Eigen::MatrixXd> quadratic_variation_increments(const Path& path) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(path.steps()));
  for (int k = 0; k < path.steps(); ++k) {
    Eigen::VectorXd d = path.delta(k);
    out.push_back(d * d.transpose());
  }
  return out;
}

Eigen::MatrixXd quadratic_variation_sum(const Path& path) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(path.dim, path.dim);
  for (int k = 0; k < path.steps(); ++k) {
    Eigen::VectorXd d = path.delta(k);
    sum.noalias() += d * d.transpose();
  }
  return sum;
}

namespace {

// dX_k^T M dX_k without temporaries
double quad_step(const Eigen::MatrixXd& m, const Path& path, int k) {
  const int n = path.dim;
  const double* s0 = path.states.data() + static_cast<std::size_t>(k) * n;
  const double* s1 = s0 + n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double di = s1[i] - s0[i];
    for (int j = 0; j < n; ++j) total += di * m(i, j) * (s1[j] - s0[j]);
  }
  return total;
}

}  // namespace

double integrate_bilinear(const ChartGeometry& geo, const BilinearFormField& b,
                          const Path& path) {
  const int n = path.dim;
  CurvatureWorkspace ws(n);
  Eigen::MatrixXd bm(n, n);
  double total = 0.0;
  for (int k = 0; k < path.steps(); ++k) {
    b.evaluate(geo, path.state(k), ws, bm);
    total += quad_step(bm, path, k);
  }
  return total;
}

double integrate_trace(const ChartGeometry& geo, const BilinearFormField& b, const Path& path) {
  const int n = path.dim;
  CurvatureWorkspace ws(n);
  Eigen::MatrixXd bm(n, n);
  double total = 0.0;
  for (int k = 0; k < path.steps(); ++k) {
    b.evaluate(geo, path.state(k), ws, bm);
    double tr = (ws.g_inv.array() * bm.array()).sum();
    total += tr * (path.times[static_cast<std::size_t>(k) + 1] -
                   path.times[static_cast<std::size_t>(k)]);
  }
  return total;
}

LemmaResidual lemma_residual(const ChartGeometry& geo, const BilinearFormField& b,
                             const Path& path) {
  const int n = path.dim;
  CurvatureWorkspace ws(n);
  Eigen::MatrixXd bm(n, n);
  LemmaResidual out;
  for (int k = 0; k < path.steps(); ++k) {
    b.evaluate(geo, path.state(k), ws, bm);
    out.bilinear += quad_step(bm, path, k);
    out.trace += (ws.g_inv.array() * bm.array()).sum() *
                 (path.times[static_cast<std::size_t>(k) + 1] -
                  path.times[static_cast<std::size_t>(k)]);
  }
  out.residual = out.bilinear - out.trace;
  return out;
}

double martingale_increment(const ChartGeometry& geo, const ScalarField& f, const Path& path) {
  CurvatureWorkspace ws(path.dim);
  double compensator = 0.0;
  for (int k = 0; k < path.steps(); ++k) {
    double lap = geo.laplace_beltrami_at(f, path.state(k), ws);
    compensator += lap * (path.times[static_cast<std::size_t>(k) + 1] -
                          path.times[static_cast<std::size_t>(k)]);
  }
  return f.value_at(path.state(path.steps())) - f.value_at(path.state(0)) - 0.5 * compensator;
}

MeanStderr martingale_defect(const ChartGeometry& geo, const ScalarField& f,
                             std::span<const Path> paths) {
  if (paths.empty()) throw StochasticError("martingale_defect: empty ensemble");
  if (paths.size() < 30)
    throw StochasticError("martingale_defect: ensemble must have at least 30 paths, got " +
                          std::to_string(paths.size()));
  std::vector<double> m(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) m[i] = martingale_increment(geo, f, paths[i]);
  MeanStderr out;
  out.mean = mean(m);
  out.stderr_ = stderr_of_mean(m);
  out.count = static_cast<int>(paths.size());
  return out;
}

}  // namespace ep
