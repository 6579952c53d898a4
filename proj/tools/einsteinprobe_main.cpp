// einsteinprobe: curvature tables, Brownian paths, covariation integrals,
// and Einstein classification for user-specified Riemannian charts.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include <CLI11.hpp>
#include <json.hpp>

#include "einsteinprobe/classify.hpp"
#include "einsteinprobe/integrals.hpp"
#include "einsteinprobe/simulate.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitSpecFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string spec;
  std::string out = "-";
  std::uint64_t seed = 1;
  int samples = 200;
  int paths = 256;
  double dt = 1e-3;
  double horizon = 1.0;
  double tol = 1e-6;
  std::string format = "json";
};

ep::ManifoldSpec load_spec(const std::string& ref) {
  constexpr const char* prefix = "catalog:";
  if (ref.rfind(prefix, 0) == 0) return ep::builtin_spec(ref.substr(std::string(prefix).size()));
  std::ifstream in(ref, std::ios::binary);
  if (!in) throw ep::SpecError("cannot open spec file '" + ref + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ep::parse_manifold(buf.str());
}

void write_output(const std::string& dest, const std::string& content) {
  if (dest == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(dest, std::ios::binary);
  if (!out) throw ep::SpecError("cannot open output file '" + dest + "'");
  out << content;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ep::ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const ep::EvalError*>(&e)) return "evaluation_error";
  if (dynamic_cast<const ep::GeometryError*>(&e)) return "geometry_error";
  if (dynamic_cast<const ep::StochasticError*>(&e)) return "stochastic_error";
  if (dynamic_cast<const ep::HypothesisError*>(&e)) return "hypothesis_error";
  if (dynamic_cast<const ep::SpecError*>(&e)) return "spec_error";
  return "internal_error";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json config_json(const Options& o, bool stochastic) {
  ordered_json j;
  j["samples"] = o.samples;
  if (stochastic) {
    j["paths"] = o.paths;
    j["dt"] = o.dt;
    j["T"] = o.horizon;
  }
  j["tol"] = o.tol;
  j["seed"] = o.seed;
  return j;
}

int cmd_validate(const Options& o) {
  ep::ManifoldSpec spec = load_spec(o.spec);
  ep::validate_spd_on_grid(spec, o.samples);
  ordered_json j;
  j["spec"] = spec.name;
  j["dim"] = spec.dim;
  j["samples_checked"] = static_cast<int>(ep::sample_grid(spec, o.samples).size());
  j["valid"] = true;
  write_output(o.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_curvature(const Options& o) {
  ep::ChartGeometry geo(load_spec(o.spec));
  auto samples = ep::sample_grid(geo.spec(), o.samples);
  const int n = geo.dim();

  if (o.format == "json") {
    ordered_json j;
    j["spec"] = geo.spec().name;
    j["sample_count"] = static_cast<int>(samples.size());
    ordered_json rows = ordered_json::array();
    for (const auto& x : samples) {
      std::span<const double> xs{x.data(), static_cast<std::size_t>(n)};
      ep::CurvatureAt c = geo.curvature_at(xs);
      ep::EigenResult er = geo.ricci_eigenvalues_at(xs);
      ordered_json row;
      ordered_json pt = ordered_json::array();
      for (int i = 0; i < n; ++i) pt.push_back(x[i]);
      row["point"] = pt;
      row["g"] = matrix_json(c.g);
      row["ricci"] = matrix_json(c.ricci);
      row["scalar"] = c.scalar;
      ordered_json ev = ordered_json::array();
      for (int i = 0; i < n; ++i) ev.push_back(er.lambdas[i]);
      row["eigenvalues"] = ev;
      rows.push_back(row);
    }
    j["rows"] = rows;
    write_output(o.out, j.dump(2) + "\n");
    return kExitOk;
  }

  // csv
  std::ostringstream os;
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << geo.spec().coords[static_cast<std::size_t>(i)];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) os << ",g_" << (i + 1) << (j + 1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) os << ",ricci_" << (i + 1) << (j + 1);
  os << ",scalar";
  for (int i = 0; i < n; ++i) os << ",lambda_" << (i + 1);
  os << "\r\n";
  for (const auto& x : samples) {
    std::span<const double> xs{x.data(), static_cast<std::size_t>(n)};
    ep::CurvatureAt c = geo.curvature_at(xs);
    ep::EigenResult er = geo.ricci_eigenvalues_at(xs);
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << format_double(x[i]);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) os << "," << format_double(c.g(i, j));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) os << "," << format_double(c.ricci(i, j));
    os << "," << format_double(c.scalar);
    for (int i = 0; i < n; ++i) os << "," << format_double(er.lambdas[i]);
    os << "\r\n";
  }
  write_output(o.out, os.str());
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  ep::ChartGeometry geo(load_spec(o.spec));
  ep::Path path = ep::simulate_bm(geo, geo.domain_center(), o.horizon, o.dt, o.seed);
  std::ostringstream os;
  ep::write_path_csv(path, geo.spec().coords, os);
  write_output(o.out, os.str());
  return kExitOk;
}

int cmd_verify(const Options& o) {
  ep::ChartGeometry geo(load_spec(o.spec));
  const int n = geo.dim();
  auto samples = ep::sample_grid(geo.spec(), o.samples);

  ordered_json checks = ordered_json::array();
  auto push_check = [&checks](const std::string& name, double statistic, double threshold) {
    checks.push_back({{"name", name},
                      {"statistic", statistic},
                      {"threshold", threshold},
                      {"pass", statistic <= threshold}});
  };

  // pointwise trace identities
  double trace_dev = 0.0;
  double eigen_sum_dev = 0.0;
  for (const auto& x : samples) {
    std::span<const double> xs{x.data(), static_cast<std::size_t>(n)};
    trace_dev = std::max(trace_dev, std::abs(geo.g_trace(xs, geo.metric_at(xs)) - n));
    ep::EigenResult er = geo.ricci_eigenvalues_at(xs);
    eigen_sum_dev = std::max(eigen_sum_dev, std::abs(er.lambdas.sum() - geo.scalar_at(xs)));
  }
  push_check("g_trace_identity", trace_dev, 1e-12);
  push_check("eigen_sum_identity", eigen_sum_dev, 1e-8);

  ep::ScalarConstancy sc = ep::scalar_constancy(geo, samples, o.tol);
  push_check("scalar_constancy", sc.spread / std::max(1.0, std::abs(sc.c)), o.tol);

  ep::EnsembleConfig ens;
  ens.x0 = geo.domain_center();
  ens.T = o.horizon;
  ens.dt = o.dt;
  ens.paths = o.paths;
  ens.seed = o.seed;

  // covariation identity int g(dB,dB) = n * zeta: per-path residual scale is
  // sqrt(2 n T dt) exactly, independent of the chart
  ep::BilinearFormField g_field = ep::BilinearFormField::metric();
  ep::EnsembleTable lemma = ep::run_ensemble(
      geo, ens, 1, [&](int, const ep::Path& p, std::span<double> out) {
        out[0] = ep::lemma_residual(geo, g_field, p).residual;
      });
  push_check("lemma_residual_q95", ep::quantile_abs(lemma.column(0), 0.95),
             7.5 * std::sqrt(2.0 * n * o.horizon * o.dt));

  if (sc.is_constant) {
    // deviation field scale: eigenvalues of r - (c/n) g with respect to g
    ep::BilinearFormField dev = ep::deviation_form(geo, sc.c);
    double s_max = 0.0;
    {
      ep::CurvatureWorkspace ws(n);
      Eigen::MatrixXd bm;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      for (const auto& x : samples) {
        std::span<const double> xs{x.data(), static_cast<std::size_t>(n)};
        dev.evaluate(geo, xs, ws, bm);
        Eigen::MatrixXd sym = 0.5 * (bm + bm.transpose());
        solver.compute(sym, ws.g, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
        s_max = std::max(s_max, solver.eigenvalues().array().square().sum());
      }
    }
    ep::DeviationStats dstats = ep::deviation_integral(geo, ens, sc.c);
    double threshold = std::max(7.5 * std::sqrt(2.0 * o.dt * o.horizon * s_max),
                                1e-9 * (1.0 + std::abs(sc.c)));
    push_check("deviation_integral_q95", dstats.q95_abs, threshold);
  }

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c["pass"].get<bool>();

  ordered_json j;
  j["spec"] = geo.spec().name;
  j["config"] = config_json(o, true);
  j["checks"] = checks;
  j["all_pass"] = all_pass;
  write_output(o.out, j.dump(2) + "\n");
  return kExitOk;  // verify reports; classify judges
}

int cmd_classify(const Options& o) {
  ep::ChartGeometry geo(load_spec(o.spec));
  ep::ClassifyConfig cfg;
  cfg.samples = o.samples;
  cfg.paths = o.paths;
  cfg.dt = o.dt;
  cfg.T = o.horizon;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  ep::ClassificationReport report = ep::classify(geo, cfg);
  write_output(o.out, report.to_json().dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature, Brownian motion, and Einstein classification on Riemannian charts"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&o](CLI::App* cmd, bool stochastic, bool sampled) {
    cmd->add_option("--spec", o.spec, "spec file path or catalog:KEY")->required();
    cmd->add_option("--seed", o.seed, "RNG master seed");
    cmd->add_option("--out", o.out, "output path, - for stdout");
    if (sampled) cmd->add_option("--samples", o.samples, "domain sample count")->check(CLI::Range(2, 1000000));
    if (stochastic) {
      cmd->add_option("--paths", o.paths, "ensemble size")->check(CLI::Range(1, 100000000));
      cmd->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
      cmd->add_option("--T", o.horizon, "time horizon")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--tol", o.tol, "deterministic tolerance")->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "parse a spec and check SPD on samples");
  add_common(validate, false, true);
  CLI::App* curvature = app.add_subcommand("curvature", "curvature table at sampled points");
  add_common(curvature, false, true);
  curvature->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  CLI::App* simulate = app.add_subcommand("simulate", "dump one Brownian path as CSV");
  add_common(simulate, true, false);
  CLI::App* verify = app.add_subcommand("verify", "run named statistical checks, report JSON");
  add_common(verify, true, true);
  CLI::App* classify = app.add_subcommand("classify", "classify the metric, report JSON");
  add_common(classify, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (o.horizon < o.dt) {
    std::cerr << "usage error: --T must be at least --dt\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (curvature->parsed()) return cmd_curvature(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (verify->parsed()) return cmd_verify(o);
    if (classify->parsed()) return cmd_classify(o);
    std::cerr << "usage error: no subcommand\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = {{"type", error_type(e)}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return kExitSpecFailure;
  }
}
