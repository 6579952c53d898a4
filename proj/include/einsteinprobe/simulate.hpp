#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "einsteinprobe/geometry.hpp"
#include "einsteinprobe/path.hpp"

namespace ep {

/// Identifies the discretization + RNG recipe baked into Path::scheme.
inline constexpr const char* kSchemeVersion = "em1-boxmuller";

/// Simulate g-Brownian motion started at x0 by Euler-Maruyama:
///   dX^k = -1/2 g^{ij} Gamma^k_{ij} dt + sigma^k_a dW^a,  sigma sigma^T = g^{-1}
/// with sigma the lower-triangular Cholesky factor of g^{-1}, recomputed
/// every step. The walk stops at horizon T or at the first step that would
/// leave the domain box (that step is dropped and exit_time is the time of
/// the last retained state).
///
/// Throws StochasticError for a non-interior start or bad step size, and
/// GeometryError if the metric fails to be SPD along the path.
Path simulate_bm(const ChartGeometry& geo, const Eigen::VectorXd& x0, double T, double dt,
                 std::uint64_t seed);

}  // namespace ep
