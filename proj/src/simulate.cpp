#include "einsteinprobe/simulate.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "einsteinprobe/rng.hpp"

namespace ep {

namespace {

/// Lower-triangular Cholesky factor of a small SPD matrix into `lower`.
/// Falls back to Eigen beyond dimension 3.
void cholesky_lower(const Eigen::MatrixXd& a, Eigen::MatrixXd& lower,
                    Eigen::LLT<Eigen::MatrixXd>& llt) {
  const int n = static_cast<int>(a.rows());
  if (n <= 3) {
    double l00 = a(0, 0);
    if (!(l00 > 0.0)) throw GeometryError("simulate_bm: diffusion factor is not SPD");
    l00 = std::sqrt(l00);
    lower(0, 0) = l00;
    if (n >= 2) {
      double l10 = a(1, 0) / l00;
      double d1 = a(1, 1) - l10 * l10;
      if (!(d1 > 0.0)) throw GeometryError("simulate_bm: diffusion factor is not SPD");
      lower(1, 0) = l10;
      lower(1, 1) = std::sqrt(d1);
      lower(0, 1) = 0.0;
    }
    if (n == 3) {
      double l20 = a(2, 0) / l00;
      double l21 = (a(2, 1) - l20 * lower(1, 0)) / lower(1, 1);
      double d2 = a(2, 2) - l20 * l20 - l21 * l21;
      if (!(d2 > 0.0)) throw GeometryError("simulate_bm: diffusion factor is not SPD");
      lower(2, 0) = l20;
      lower(2, 1) = l21;
      lower(2, 2) = std::sqrt(d2);
      lower(0, 2) = lower(1, 2) = 0.0;
    }
    return;
  }
  llt.compute(a);
  if (llt.info() != Eigen::Success)
    throw GeometryError("simulate_bm: diffusion factor is not SPD");
  lower = llt.matrixL();
}

}  // namespace

Path simulate_bm(const ChartGeometry& geo, const Eigen::VectorXd& x0, double T, double dt,
                 std::uint64_t seed) {
  const int n = geo.dim();
  if (x0.size() != n) throw StochasticError("simulate_bm: start point has wrong dimension");
  if (!(dt > 0.0)) throw StochasticError("simulate_bm: dt must be positive");
  if (!(T >= dt)) throw StochasticError("simulate_bm: horizon T must be at least dt");
  if (!geo.is_interior({x0.data(), static_cast<std::size_t>(n)}))
    throw StochasticError("simulate_bm: start point is not interior to the domain box");

  // T = full_steps * dt + remainder (remainder only when T/dt is fractional)
  auto full_steps = static_cast<std::int64_t>(std::floor(T / dt + 1e-9));
  double remainder = T - static_cast<double>(full_steps) * dt;
  if (remainder < dt * 1e-9) remainder = 0.0;
  std::int64_t total_steps = full_steps + (remainder > 0.0 ? 1 : 0);

  Path path;
  path.spec_name = geo.spec().name;
  path.scheme = kSchemeVersion;
  path.dim = n;
  path.dt = dt;
  path.horizon = T;
  path.seed = seed;
  path.times.reserve(static_cast<std::size_t>(total_steps) + 1);
  path.states.reserve((static_cast<std::size_t>(total_steps) + 1) * n);
  path.noise.reserve(static_cast<std::size_t>(total_steps) * n);

  GaussianStream rng(seed);
  CurvatureWorkspace ws(n);
  Eigen::LLT<Eigen::MatrixXd> sigma_llt;
  Eigen::MatrixXd sigma(n, n);
  Eigen::VectorXd x = x0;
  Eigen::VectorXd drift(n), dw(n), xnext(n);

  path.times.push_back(0.0);
  for (int i = 0; i < n; ++i) path.states.push_back(x[i]);

  for (std::int64_t k = 0; k < total_steps; ++k) {
    double h = (k < full_steps) ? dt : remainder;
    double t_next = (k + 1 < total_steps) ? static_cast<double>(k + 1) * dt : T;

    geo.frame_connection({x.data(), static_cast<std::size_t>(n)}, ws);
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += ws.g_inv(i, j) * ws.gamma(c, i, j);
      drift[c] = -0.5 * s;
    }
    cholesky_lower(ws.g_inv, sigma, sigma_llt);

    double sqrth = std::sqrt(h);
    for (int i = 0; i < n; ++i) dw[i] = sqrth * rng.normal();
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += sigma(i, j) * dw[j];
      xnext[i] = x[i] + h * drift[i] + s;
    }

    if (!geo.in_domain({xnext.data(), static_cast<std::size_t>(n)})) break;

    path.times.push_back(t_next);
    for (int i = 0; i < n; ++i) path.states.push_back(xnext[i]);
    for (int i = 0; i < n; ++i) path.noise.push_back(dw[i]);
    x = xnext;
  }

  path.exit_time = path.times.back();
  return path;
}

}  // namespace ep
