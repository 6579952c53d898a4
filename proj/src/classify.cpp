#include "einsteinprobe/classify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "einsteinprobe/integrals.hpp"

namespace ep {

ScalarConstancy scalar_constancy(const ChartGeometry& geo,
                                 std::span<const Eigen::VectorXd> samples, double tol) {
  if (samples.size() < 2)
    throw SpecError("scalar_constancy: need at least two sample points");
  std::vector<double> s(samples.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s[i] = geo.scalar_at({samples[i].data(), static_cast<std::size_t>(samples[i].size())});
    lo = std::min(lo, s[i]);
    hi = std::max(hi, s[i]);
  }
  ScalarConstancy out;
  out.c = mean(s);
  out.spread = hi - lo;
  out.is_constant = out.spread <= tol * std::max(1.0, std::abs(out.c));
  return out;
}

double eigenvalue_gap(const ChartGeometry& geo, std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw SpecError("eigenvalue_gap: empty sample");
  const int n = geo.dim();
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) {
    EigenResult er = geo.ricci_eigenvalues_at({x.data(), static_cast<std::size_t>(x.size())});
    double s = geo.scalar_at({x.data(), static_cast<std::size_t>(x.size())});
    for (int i = 0; i < n; ++i) gap = std::min(gap, er.lambdas[i] - s / n);
  }
  return gap;
}

BilinearFormField deviation_form(const ChartGeometry& geo, double c) {
  return BilinearFormField::affine(1.0, -c / geo.dim());
}

DeviationStats deviation_integral(const ChartGeometry& geo, const EnsembleConfig& cfg, double c) {
  BilinearFormField dev = deviation_form(geo, c);
  EnsembleTable table =
      run_ensemble(geo, cfg, 1, [&](int, const Path& p, std::span<double> out) {
        out[0] = integrate_bilinear(geo, dev, p);
      });
  std::vector<double> v = table.column(0);
  DeviationStats out;
  out.mean = mean(v);
  out.stderr_ = stderr_of_mean(v);
  out.rms = rms(v);
  out.q95_abs = quantile_abs(v, 0.95);
  for (double x : v) out.max_abs = std::max(out.max_abs, std::abs(x));
  out.paths = cfg.paths;
  return out;
}

PositivityReport positivity_check(const ChartGeometry& geo, const BilinearFormField& b,
                                  std::span<const Eigen::VectorXd> samples,
                                  const EnsembleConfig& cfg, double tol) {
  // hypothesis: eigenvalues of b with respect to g are >= 0 wherever sampled
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  CurvatureWorkspace ws(geo.dim());
  Eigen::MatrixXd bm;
  for (const auto& x : samples) {
    std::span<const double> xs{x.data(), static_cast<std::size_t>(x.size())};
    b.evaluate(geo, xs, ws, bm);
    geo.frame_metric(xs, ws);
    Eigen::MatrixXd sym = 0.5 * (bm + bm.transpose());
    solver.compute(sym, ws.g, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
      throw GeometryError("positivity_check: eigenvalue factorization failed");
    double lmin = solver.eigenvalues().minCoeff();
    if (lmin < -tol) {
      std::ostringstream os;
      os << "positivity_check hypothesis violated: eigenvalue " << lmin << " < " << -tol
         << " at point (";
      for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw HypothesisError(os.str());
    }
  }

  EnsembleTable table = run_ensemble(geo, cfg, 1, [&](int, const Path& p, std::span<double> out) {
    out[0] = integrate_bilinear(geo, b, p);
  });
  std::vector<double> v = table.column(0);
  PositivityReport out;
  out.min_integral = std::numeric_limits<double>::infinity();
  out.max_integral = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    out.min_integral = std::min(out.min_integral, x);
    out.max_integral = std::max(out.max_integral, x);
  }
  out.paths = cfg.paths;
  out.nonzero_witnessed = out.max_integral > tol;
  out.verdict = out.nonzero_witnessed ? "b != 0 witnessed" : "consistent with b = 0";
  return out;
}

std::string verdict_tag(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Einstein: return "Einstein";
    case Verdict::Kind::RicciFlat: return "Ricci-flat";
    case Verdict::Kind::NotEinstein: return "NotEinstein";
    case Verdict::Kind::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

nlohmann::ordered_json ClassificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = spec_name;
  j["sample_count"] = sample_count;
  j["scalar"] = {{"constant", scalar_constant}, {"c", c}, {"relative_spread", relative_spread}};
  j["eigenvalue_gap"] = eigenvalue_gap;
  if (deviation) {
    j["deviation"] = {{"mean", deviation->mean},   {"stderr", deviation->stderr_},
                      {"rms", deviation->rms},     {"q95_abs", deviation->q95_abs},
                      {"max_abs", deviation->max_abs}, {"paths", deviation->paths},
                      {"skipped", false}};
  } else {
    j["deviation"] = {{"skipped", true}};
  }
  j["pointwise_einstein_residual"] = pointwise_einstein_residual;
  j["verdict"] = verdict_tag(verdict.kind);
  if (verdict.kind == Verdict::Kind::Einstein || verdict.kind == Verdict::Kind::RicciFlat)
    j["lambda"] = verdict.lambda;
  else
    j["reason"] = verdict.reason;
  j["config"] = {{"samples", config.samples}, {"paths", config.paths}, {"dt", config.dt},
                 {"T", config.T},             {"tol", config.tol},     {"seed", config.seed}};
  return j;
}

ClassificationReport classify(const ChartGeometry& geo, const ClassifyConfig& cfg) {
  ClassificationReport report;
  report.spec_name = geo.spec().name;
  report.config = cfg;
  try {
    std::vector<Eigen::VectorXd> samples = sample_grid(geo.spec(), cfg.samples);
    report.sample_count = static_cast<int>(samples.size());

    ScalarConstancy sc = scalar_constancy(geo, samples, cfg.tol);
    report.scalar_constant = sc.is_constant;
    report.c = sc.c;
    report.relative_spread = sc.spread / std::max(1.0, std::abs(sc.c));
    if (!sc.is_constant) {
      std::ostringstream os;
      os << "non-constant scalar curvature (relative spread " << report.relative_spread
         << " > tol " << cfg.tol << ")";
      report.verdict.kind = Verdict::Kind::NotEinstein;
      report.verdict.reason = os.str();
      return report;  // stochastic stage not run
    }

    report.eigenvalue_gap = eigenvalue_gap(geo, samples);

    // pointwise residual max_x ||r - (c/n) g||_inf, the deterministic evidence
    const int n = geo.dim();
    CurvatureWorkspace ws(n);
    double residual = 0.0;
    for (const auto& x : samples) {
      geo.frame_curvature({x.data(), static_cast<std::size_t>(x.size())}, ws);
      residual =
          std::max(residual, (ws.ricci - (sc.c / n) * ws.g).cwiseAbs().maxCoeff());
    }
    report.pointwise_einstein_residual = residual;

    // corroborating stochastic stage
    EnsembleConfig ens;
    ens.x0 = geo.domain_center();
    ens.T = cfg.T;
    ens.dt = cfg.dt;
    ens.paths = cfg.paths;
    ens.seed = cfg.seed;
    ens.mode = cfg.mode;
    report.deviation = deviation_integral(geo, ens, sc.c);

    if (report.eigenvalue_gap < -cfg.tol) {
      std::ostringstream os;
      os << "eigenvalue gap " << report.eigenvalue_gap << " < 0";
      report.verdict.kind = Verdict::Kind::NotEinstein;
      report.verdict.reason = os.str();
    } else if (residual > cfg.tol) {
      std::ostringstream os;
      os << "pointwise Einstein residual " << residual << " > tol " << cfg.tol;
      report.verdict.kind = Verdict::Kind::NotEinstein;
      report.verdict.reason = os.str();
    } else if (std::abs(sc.c) <= cfg.tol) {
      report.verdict.kind = Verdict::Kind::RicciFlat;
      report.verdict.lambda = 0.0;
    } else {
      report.verdict.kind = Verdict::Kind::Einstein;
      report.verdict.lambda = sc.c / n;
    }
  } catch (const Error& e) {
    report.verdict.kind = Verdict::Kind::Indeterminate;
    report.verdict.reason = e.what();
  }
  return report;
}

}  // namespace ep
