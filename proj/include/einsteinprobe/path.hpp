#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ep {

/// One discretized Brownian trajectory in a chart.
///
/// states holds K+1 points of dimension dim (row-major); noise holds the K
/// driving Gaussian increments (variance dt per full step). All retained
/// states lie in the domain box and times.back() == exit_time <= horizon.
/// Re-simulation with identical (spec, x0, T, dt, seed, scheme) reproduces
/// the path bit-exactly.
struct Path {
  std::string spec_name;
  std::string scheme;
  int dim = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;   // K+1
  std::vector<double> states;  // (K+1)*dim
  std::vector<double> noise;   // K*dim
  double exit_time = 0.0;

  int steps() const { return static_cast<int>(times.size()) - 1; }

  std::span<const double> state(int k) const {
    return {states.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  std::span<const double> increment_noise(int k) const {
    return {noise.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
  /// State increment X_{k+1} - X_k.
  Eigen::VectorXd delta(int k) const {
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i)
      d[i] = states[static_cast<std::size_t>(k + 1) * dim + i] -
             states[static_cast<std::size_t>(k) * dim + i];
    return d;
  }
};

/// RFC 4180 CSV dump, header "t,<coord names>".
void write_path_csv(const Path& path, std::span<const std::string> coord_names, std::ostream& os);

}  // namespace ep
