#include "einsteinprobe/manifold.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <json.hpp>

namespace ep {

namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& msg) { throw SpecError("manifold spec: " + msg); }

Expr parse_metric_entry(const ordered_json& cell, const NameScope& names, int i, int j) {
  std::string where = "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]";
  if (cell.is_number()) return Expr::constant(cell.get<double>());
  if (cell.is_string()) {
    try {
      return parse_expression(cell.get<std::string>(), names);
    } catch (const ParseError& e) {
      fail(where + ": " + e.what());
    }
  }
  fail(where + " must be a number or an expression string");
}

}  // namespace

bool ManifoldSpec::in_domain(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (x[i] < domain[i].lo || x[i] > domain[i].hi) return false;
  return true;
}

bool ManifoldSpec::is_interior(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (x[i] <= domain[i].lo || x[i] >= domain[i].hi) return false;
  return true;
}

Eigen::VectorXd ManifoldSpec::center() const {
  Eigen::VectorXd c(dim);
  for (int i = 0; i < dim; ++i) c[i] = domain[i].center();
  return c;
}

Eigen::MatrixXd ManifoldSpec::evaluate_metric(std::span<const double> x) const {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double v = metric_entry(i, j).eval(x, params);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

std::string ManifoldSpec::to_text() const {
  ordered_json j;
  j["name"] = name;
  j["dim"] = dim;
  j["coords"] = coords;
  if (!params.empty()) {
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
  }
  ordered_json dom = ordered_json::array();
  for (const auto& iv : domain) dom.push_back({iv.lo, iv.hi});
  j["domain"] = dom;
  ordered_json m = ordered_json::array();
  for (int i = 0; i < dim; ++i) {
    ordered_json row = ordered_json::array();
    for (int jj = 0; jj < dim; ++jj) row.push_back(metric_entry(i, jj).str(coords));
    m.push_back(row);
  }
  j["metric"] = m;
  return j.dump(2) + "\n";
}

ManifoldSpec parse_manifold(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("spec is not valid JSON: ") + e.what(),
                     e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) fail("top level must be a JSON object");

  ManifoldSpec spec;
  if (!doc.contains("name") || !doc["name"].is_string()) fail("missing string field 'name'");
  spec.name = doc["name"].get<std::string>();

  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) fail("missing integer field 'dim'");
  spec.dim = doc["dim"].get<int>();
  if (spec.dim < 1) fail("'dim' must be a positive integer");

  if (!doc.contains("coords") || !doc["coords"].is_array()) fail("missing array field 'coords'");
  for (const auto& c : doc["coords"]) {
    if (!c.is_string()) fail("'coords' entries must be strings");
    spec.coords.push_back(c.get<std::string>());
  }
  if (static_cast<int>(spec.coords.size()) != spec.dim)
    fail("dimension mismatch: " + std::to_string(spec.coords.size()) + " coords for dim " +
         std::to_string(spec.dim));
  for (std::size_t i = 0; i < spec.coords.size(); ++i)
    for (std::size_t j = i + 1; j < spec.coords.size(); ++j)
      if (spec.coords[i] == spec.coords[j]) fail("duplicate coordinate name '" + spec.coords[i] + "'");

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) fail("'params' must be an object of numbers");
    for (const auto& [k, v] : doc["params"].items()) {
      if (!v.is_number()) fail("parameter '" + k + "' must be a number");
      spec.params[k] = v.get<double>();
    }
  }

  if (!doc.contains("domain") || !doc["domain"].is_array()) fail("missing array field 'domain'");
  if (static_cast<int>(doc["domain"].size()) != spec.dim)
    fail("dimension mismatch: " + std::to_string(doc["domain"].size()) + " domain intervals for dim " +
         std::to_string(spec.dim));
  for (const auto& iv : doc["domain"]) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      fail("domain intervals must be [lo, hi] number pairs");
    Interval interval{iv[0].get<double>(), iv[1].get<double>()};
    if (!(interval.lo < interval.hi))
      fail("empty or inverted domain interval [" + format_double(interval.lo) + ", " +
           format_double(interval.hi) + "]");
    spec.domain.push_back(interval);
  }

  NameScope names;
  names.coords = spec.coords;
  for (const auto& [k, v] : spec.params) names.params.push_back(k);

  if (!doc.contains("metric") || !doc["metric"].is_array()) fail("missing array field 'metric'");
  const ordered_json& m = doc["metric"];
  if (static_cast<int>(m.size()) != spec.dim)
    fail("metric must be a " + std::to_string(spec.dim) + "x" + std::to_string(spec.dim) + " array");
  spec.metric.assign(static_cast<std::size_t>(spec.dim) * spec.dim, Expr::constant(0.0));
  std::vector<char> given(spec.metric.size(), 0);
  for (int i = 0; i < spec.dim; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != spec.dim)
      fail("metric row " + std::to_string(i) + " must have " + std::to_string(spec.dim) + " entries");
    for (int j = 0; j < spec.dim; ++j) {
      const auto& cell = m[i][j];
      if (cell.is_null()) {
        if (j >= i)
          fail("metric[" + std::to_string(i) + "][" + std::to_string(j) +
               "] may not be null: only entries strictly below the diagonal may be omitted");
        continue;
      }
      spec.metric_entry(i, j) = parse_metric_entry(cell, names, i, j);
      given[static_cast<std::size_t>(i) * spec.dim + j] = 1;
    }
  }
  // symmetrize: explicit pairs must agree structurally, missing entries mirror
  for (int i = 0; i < spec.dim; ++i)
    for (int j = i + 1; j < spec.dim; ++j) {
      bool up = given[static_cast<std::size_t>(i) * spec.dim + j];
      bool lo = given[static_cast<std::size_t>(j) * spec.dim + i];
      if (!up) fail("metric[" + std::to_string(i) + "][" + std::to_string(j) + "] is required");
      if (lo) {
        if (!structurally_equal(spec.metric_entry(i, j), spec.metric_entry(j, i)))
          fail("non-symmetric explicit entries at metric[" + std::to_string(i) + "][" +
               std::to_string(j) + "] and metric[" + std::to_string(j) + "][" + std::to_string(i) +
               "]");
      } else {
        spec.metric_entry(j, i) = spec.metric_entry(i, j);
      }
    }

  validate_spd_on_grid(spec, 16);
  return spec;
}

ManifoldSpec with_param(const ManifoldSpec& spec, const std::string& name, double value) {
  ManifoldSpec out = spec;
  if (out.params.find(name) == out.params.end())
    throw SpecError("manifold spec: unknown parameter '" + name + "'");
  out.params[name] = value;
  validate_spd_on_grid(out, 16);
  return out;
}

std::vector<Eigen::VectorXd> sample_grid(const ManifoldSpec& spec, int min_count) {
  if (min_count < 1) min_count = 1;
  int n = spec.dim;
  int m = static_cast<int>(std::ceil(std::pow(static_cast<double>(min_count), 1.0 / n)));
  if (m < 1) m = 1;
  while (std::pow(static_cast<double>(m), n) < min_count) ++m;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);

  std::vector<Eigen::VectorXd> pts;
  pts.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = spec.domain[i].lo + (idx[i] + 0.5) * spec.domain[i].width() / m;
    pts.push_back(std::move(x));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return pts;
}

void validate_spd_on_grid(const ManifoldSpec& spec, int min_count) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (const auto& x : sample_grid(spec, min_count)) {
    Eigen::MatrixXd g = spec.evaluate_metric({x.data(), static_cast<std::size_t>(spec.dim)});
    llt.compute(g);
    if (llt.info() != Eigen::Success) {
      // identify the first failing leading principal minor for the report
      int minor = spec.dim;
      for (int k = 1; k <= spec.dim; ++k) {
        if (g.topLeftCorner(k, k).determinant() <= 0.0) {
          minor = k;
          break;
        }
      }
      std::ostringstream os;
      os << "metric is not positive definite at point (";
      for (int i = 0; i < spec.dim; ++i) os << (i ? ", " : "") << x[i];
      os << "): leading minor of order " << minor << " is non-positive";
      throw GeometryError(os.str());
    }
  }
}

}  // namespace ep
