// Times the path-ensemble kernel in serial and OpenMP modes on the same
// workload and checks that the two produce identical statistics.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "einsteinprobe/ensemble.hpp"
#include "einsteinprobe/integrals.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ep::EnsembleTable run_once(const ep::ChartGeometry& geo, ep::ExecMode mode, int paths, double dt,
                           double T, double* elapsed) {
  ep::EnsembleConfig cfg;
  cfg.x0 = geo.domain_center();
  cfg.T = T;
  cfg.dt = dt;
  cfg.paths = paths;
  cfg.seed = 42;
  cfg.mode = mode;
  ep::BilinearFormField g_field = ep::BilinearFormField::metric();
  auto start = Clock::now();
  ep::EnsembleTable table =
      ep::run_ensemble(geo, cfg, 1, [&](int, const ep::Path& p, std::span<double> out) {
        out[0] = ep::lemma_residual(geo, g_field, p).residual;
      });
  *elapsed = seconds_since(start);
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::string spec = "sphere2";
  int paths = 2000;
  double dt = 1e-3;
  double T = 1.0;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    std::string value = argv[i + 1];
    if (flag == "--spec") spec = value;
    else if (flag == "--paths") paths = std::stoi(value);
    else if (flag == "--dt") dt = std::stod(value);
    else if (flag == "--T") T = std::stod(value);
  }

  ep::ChartGeometry geo(ep::builtin_spec(spec));
  std::printf("spec=%s paths=%d dt=%g T=%g threads=%d\n", spec.c_str(), paths, dt, T,
              ep::ensemble_thread_count());

  double serial_s = 0.0, parallel_s = 0.0;
  ep::EnsembleTable serial = run_once(geo, ep::ExecMode::Serial, paths, dt, T, &serial_s);
  ep::EnsembleTable parallel = run_once(geo, ep::ExecMode::Parallel, paths, dt, T, &parallel_s);

  double max_diff = 0.0;
  for (int i = 0; i < paths; ++i)
    max_diff = std::max(max_diff, std::abs(serial.row(i)[0] - parallel.row(i)[0]));

  std::printf("serial   %8.3f s   %10.1f paths/s\n", serial_s, paths / serial_s);
  std::printf("parallel %8.3f s   %10.1f paths/s\n", parallel_s, paths / parallel_s);
  std::printf("speedup  %.2fx\n", serial_s / parallel_s);
  std::printf("max |serial - parallel| = %g (%s)\n", max_diff,
              max_diff == 0.0 ? "bit-identical" : "MISMATCH");
  return max_diff == 0.0 ? 0 : 1;
}
