#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "einsteinprobe/geometry.hpp"
#include "einsteinprobe/path.hpp"

namespace ep {

// ---- deterministic reductions -------------------------------------------

/// Pairwise (cascade) summation: fixed association order, independent of
/// thread count, and accurate for large ensembles.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);
double rms(std::span<const double> values);
/// Standard error of the mean (unbiased sample variance / n, square root).
double stderr_of_mean(std::span<const double> values);
/// q-quantile of |values| by sorting a copy (q in [0,1]).
double quantile_abs(std::span<const double> values, double q);
/// Fraction of entries with |value| <= bound.
double fraction_within(std::span<const double> values, double bound);

// ---- ensemble execution ---------------------------------------------------

enum class ExecMode { Serial, Parallel };

/// Worker threads available to parallel ensembles: OpenMP's maximum,
/// optionally capped by the EINSTEINPROBE_THREADS environment variable.
int ensemble_thread_count();

struct EnsembleConfig {
  Eigen::VectorXd x0;
  double T = 1.0;
  double dt = 1e-3;
  int paths = 256;
  std::uint64_t seed = 1;
  ExecMode mode = ExecMode::Parallel;
};

/// Row-major paths x width table of per-path statistics.
struct EnsembleTable {
  int paths = 0;
  int width = 0;
  std::vector<double> data;

  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * width, static_cast<std::size_t>(width)};
  }
  std::vector<double> column(int j) const {
    std::vector<double> c(static_cast<std::size_t>(paths));
    for (int i = 0; i < paths; ++i) c[static_cast<std::size_t>(i)] = row(i)[static_cast<std::size_t>(j)];
    return c;
  }
};

/// Per-path statistic: receives the path index, the simulated path, and the
/// output row to fill. Must be safe to call concurrently on distinct paths.
using PathStatFn = std::function<void(int, const Path&, std::span<double>)>;

/// Simulate cfg.paths independent paths (path i is seeded by
/// path_seed(cfg.seed, i)) and collect per-path statistics. Results are
/// identical for both execution modes and any thread count.
EnsembleTable run_ensemble(const ChartGeometry& geo, const EnsembleConfig& cfg, int stat_width,
                           const PathStatFn& fn);

}  // namespace ep
