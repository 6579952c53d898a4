#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "einsteinprobe/bilinear_form.hpp"
#include "einsteinprobe/ensemble.hpp"
#include "einsteinprobe/geometry.hpp"

namespace ep {

/// Constancy test for the scalar curvature over a point sample.
struct ScalarConstancy {
  bool is_constant = false;
  double c = 0.0;       // mean sampled scalar curvature
  double spread = 0.0;  // max - min over the sample
};

ScalarConstancy scalar_constancy(const ChartGeometry& geo,
                                 std::span<const Eigen::VectorXd> samples, double tol);

/// min over samples x and indices i of lambda_i(x) - s(x)/n. Always <= 0 up
/// to roundoff; equality characterizes pointwise-Einstein metrics.
double eigenvalue_gap(const ChartGeometry& geo, std::span<const Eigen::VectorXd> samples);

/// The deviation field r_g - (c/n) g; its g-trace at x is s(x) - c.
BilinearFormField deviation_form(const ChartGeometry& geo, double c);

/// Ensemble statistics of int (r - (c/n) g)(dB,dB) over seeded paths.
struct DeviationStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  double rms = 0.0;
  double q95_abs = 0.0;
  double max_abs = 0.0;
  int paths = 0;
};

DeviationStats deviation_integral(const ChartGeometry& geo, const EnsembleConfig& cfg, double c);

/// Outcome of the positivity witness test.
struct PositivityReport {
  double min_integral = 0.0;
  double max_integral = 0.0;
  int paths = 0;
  bool nonzero_witnessed = false;  // some path integral exceeded tol
  std::string verdict;             // "b != 0 witnessed" | "consistent with b = 0"
};

/// Requires the sampled eigenvalues of b with respect to g to be >= -tol
/// (throws HypothesisError otherwise), then inspects path integrals of b:
/// any integral above tol witnesses b != 0.
PositivityReport positivity_check(const ChartGeometry& geo, const BilinearFormField& b,
                                  std::span<const Eigen::VectorXd> samples,
                                  const EnsembleConfig& cfg, double tol);

struct ClassifyConfig {
  int samples = 200;
  int paths = 256;
  double dt = 1e-3;
  double T = 1.0;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  ExecMode mode = ExecMode::Parallel;
};

struct Verdict {
  enum class Kind { Einstein, RicciFlat, NotEinstein, Indeterminate };
  Kind kind = Kind::Indeterminate;
  double lambda = 0.0;  // Einstein / RicciFlat
  std::string reason;   // NotEinstein / Indeterminate
};

std::string verdict_tag(Verdict::Kind kind);

struct ClassificationReport {
  std::string spec_name;
  int sample_count = 0;
  bool scalar_constant = false;
  double c = 0.0;
  double relative_spread = 0.0;
  double eigenvalue_gap = 0.0;
  std::optional<DeviationStats> deviation;  // absent when the stochastic stage was skipped
  double pointwise_einstein_residual = 0.0;
  Verdict verdict;
  ClassifyConfig config;

  nlohmann::ordered_json to_json() const;
};

/// Run the full pipeline: scalar constancy -> eigenvalue gap -> pointwise
/// Einstein residual -> deviation integral (corroborating evidence), then
/// render the verdict. A non-constant scalar short-circuits before the
/// stochastic stage; any stage error yields Indeterminate.
ClassificationReport classify(const ChartGeometry& geo, const ClassifyConfig& cfg);

}  // namespace ep
