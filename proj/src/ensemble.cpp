#include "einsteinprobe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "einsteinprobe/rng.hpp"
#include "einsteinprobe/simulate.hpp"

namespace ep {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double rms(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size()));
}

double stderr_of_mean(std::span<const double> values) {
  std::size_t n = values.size();
  if (n < 2) return 0.0;
  double m = mean(values);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = values[i] - m;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

double quantile_abs(std::span<const double> values, double q) {
  if (values.empty()) return 0.0;
  std::vector<double> a(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) a[i] = std::abs(values[i]);
  std::sort(a.begin(), a.end());
  double pos = q * static_cast<double>(a.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, a.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return a[lo] + frac * (a[hi] - a[lo]);
}

double fraction_within(std::span<const double> values, double bound) {
  if (values.empty()) return 1.0;
  std::size_t count = 0;
  for (double v : values)
    if (std::abs(v) <= bound) ++count;
  return static_cast<double>(count) / static_cast<double>(values.size());
}

int ensemble_thread_count() {
#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  if (const char* env = std::getenv("EINSTEINPROBE_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1) threads = std::min(threads, cap);
    } catch (const std::exception&) {
      // ignore unparsable values
    }
  }
  return threads;
}

EnsembleTable run_ensemble(const ChartGeometry& geo, const EnsembleConfig& cfg, int stat_width,
                           const PathStatFn& fn) {
  if (cfg.paths < 1) throw StochasticError("run_ensemble: need at least one path");
  if (stat_width < 1) throw StochasticError("run_ensemble: need a positive stat width");

  EnsembleTable table;
  table.paths = cfg.paths;
  table.width = stat_width;
  table.data.assign(static_cast<std::size_t>(cfg.paths) * stat_width, 0.0);

  // exceptions may not escape an OpenMP region; capture per path and
  // rethrow the lowest-index failure so both modes report identically
  std::vector<std::string> errors(static_cast<std::size_t>(cfg.paths));
  auto worker = [&](int i) {
    try {
      Path p =
          simulate_bm(geo, cfg.x0, cfg.T, cfg.dt, path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      fn(i, p, {table.data.data() + static_cast<std::size_t>(i) * stat_width,
                static_cast<std::size_t>(stat_width)});
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
      if (errors[static_cast<std::size_t>(i)].empty()) errors[static_cast<std::size_t>(i)] = "unknown error";
    }
  };

#ifdef _OPENMP
  if (cfg.mode == ExecMode::Parallel) {
    int threads = ensemble_thread_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < cfg.paths; ++i) worker(i);
  } else {
    for (int i = 0; i < cfg.paths; ++i) worker(i);
  }
#else
  for (int i = 0; i < cfg.paths; ++i) worker(i);
#endif
  for (const std::string& err : errors)
    if (!err.empty()) throw StochasticError("ensemble path failed: " + err);
  return table;
}

}  // namespace ep
