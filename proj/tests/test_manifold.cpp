#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <numbers>
#include <sstream>

#include "einsteinprobe/manifold.hpp"
#include "support/oracles.hpp"

using ep::builtin_spec;
using ep::ManifoldSpec;
using ep::parse_manifold;

namespace {

bool specs_structurally_equal(const ManifoldSpec& a, const ManifoldSpec& b) {
  if (a.name != b.name || a.dim != b.dim || a.coords != b.coords || a.params != b.params)
    return false;
  for (int i = 0; i < a.dim; ++i)
    if (a.domain[i].lo != b.domain[i].lo || a.domain[i].hi != b.domain[i].hi) return false;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      if (!structurally_equal(a.metric_entry(i, j), b.metric_entry(i, j))) return false;
  return true;
}

}  // namespace

TEST_CASE("flat 2D spec parses to the identity metric") {
  ManifoldSpec spec = parse_manifold(R"({
    "name": "flat",
    "dim": 2,
    "coords": ["x1", "x2"],
    "domain": [[-1, 1], [-1, 1]],
    "metric": [["1", "0"], ["0", "1"]]
  })");
  CHECK(spec.dim == 2);
  for (const auto& x : ep::sample_grid(spec, 9)) {
    Eigen::MatrixXd g = spec.evaluate_metric(ep::testing::sp(x));
    CHECK(g.isIdentity(0.0));
  }
}

TEST_CASE("sphere chart example evaluates to diag(1,1) at the equator") {
  ManifoldSpec spec = parse_manifold(R"({
    "name": "sphere",
    "dim": 2,
    "coords": ["theta", "phi"],
    "params": {"R": 1.0},
    "domain": [[0.3, 2.8], [0.1, 6.1]],
    "metric": [["R^2", 0], [null, "R^2*sin(theta)^2"]]
  })");
  double x[2] = {std::numbers::pi / 2, 1.0};
  Eigen::MatrixXd g = spec.evaluate_metric({x, 2});
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(0, 1) == 0.0);
  // null below the diagonal was filled by symmetry
  CHECK(structurally_equal(spec.metric_entry(1, 0), spec.metric_entry(0, 1)));
}

TEST_CASE("malformed documents produce located syntax errors") {
  CHECK_THROWS_AS(parse_manifold("dim = banana"), ep::ParseError);
  try {
    parse_manifold("dim = banana");
  } catch (const ep::ParseError& e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("validation failures") {
  auto spec_text = [](const std::string& metric, const std::string& domain = "[[-1, 1], [-1, 1]]",
                      const std::string& coords = R"(["x1", "x2"])") {
    return std::string(R"({"name": "t", "dim": 2, "coords": )") + coords +
           R"(, "domain": )" + domain + R"(, "metric": )" + metric + "}";
  };

  // dimension mismatches
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, 1]]", "[[-1, 1], [-1, 1]]",
                                                R"(["x1", "x2", "x3"])")),
                       doctest::Contains("dimension mismatch"), ep::SpecError);
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, 1]]", "[[-1, 1]]")),
                       doctest::Contains("dimension mismatch"), ep::SpecError);
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0]]")), doctest::Contains("metric"),
                       ep::SpecError);

  // inverted / empty interval
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, 1]]", "[[1, -1], [-1, 1]]")),
                       doctest::Contains("inverted"), ep::SpecError);
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, 1]]", "[[0, 0], [-1, 1]]")),
                       doctest::Contains("inverted"), ep::SpecError);

  // unknown identifier inside a metric expression
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text(R"([["zeta", 0], [0, 1]])")),
                       doctest::Contains("unknown identifier"), ep::SpecError);

  // non-symmetric explicit entries
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text(R"([[1, "x1"], ["x2", 1]])")),
                       doctest::Contains("non-symmetric"), ep::SpecError);

  // null misuse
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[null, 0], [0, 1]]")),
                       doctest::Contains("null"), ep::SpecError);
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, null], [null, 1]]")),
                       doctest::Contains("null"), ep::SpecError);

  // duplicate coordinates
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, 1]]", "[[-1, 1], [-1, 1]]",
                                                R"(["x1", "x1"])")),
                       doctest::Contains("duplicate"), ep::SpecError);

  // not positive definite on the validation grid
  CHECK_THROWS_WITH_AS(parse_manifold(spec_text("[[1, 0], [0, -1]]")),
                       doctest::Contains("positive definite"), ep::GeometryError);

  // evaluation error inside an entry
  CHECK_THROWS_AS(parse_manifold(spec_text(R"([["1/0", 0], [0, 1]])")), ep::EvalError);
}

TEST_CASE("printing a parsed spec and re-parsing is the identity") {
  for (const std::string& name : ep::builtin_spec_names()) {
    ManifoldSpec spec = builtin_spec(name);
    ManifoldSpec back = parse_manifold(spec.to_text());
    CHECK_MESSAGE(specs_structurally_equal(spec, back), "round trip failed for " << name);
  }
}

TEST_CASE("builtin catalog") {
  auto names = ep::builtin_spec_names();
  CHECK(names == std::vector<std::string>{"bumpy_sphere2", "euclidean2", "flat_torus3",
                                          "hyperbolic2", "s2_x_s1", "sphere2"});

  ManifoldSpec sphere = builtin_spec("sphere2");
  CHECK(sphere.dim == 2);
  CHECK(sphere.coords == std::vector<std::string>{"theta", "phi"});
  CHECK(sphere.params.at("R") == 1.0);
  CHECK(sphere.domain[0].lo == 0.3);
  CHECK(sphere.domain[0].hi == 2.8);
  CHECK(sphere.domain[1].lo == 0.1);
  CHECK(sphere.domain[1].hi == 6.1);

  ManifoldSpec flat = builtin_spec("euclidean2");
  Eigen::VectorXd x = flat.center();
  CHECK(flat.evaluate_metric(ep::testing::sp(x)).isIdentity(0.0));
  CHECK(flat.domain[0].lo == -5.0);
  CHECK(flat.domain[0].hi == 5.0);

  CHECK_THROWS_WITH_AS(builtin_spec("minkowski"), doctest::Contains("unknown catalog key"),
                       ep::SpecError);
}

TEST_CASE("catalog files on disk match the embedded catalog") {
  for (const std::string& name : ep::builtin_spec_names()) {
    std::ifstream in(std::string(EINSTEINPROBE_CATALOG_DIR) + "/" + name + ".json",
                     std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing catalog file for " << name);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK_MESSAGE(buf.str() == ep::builtin_spec_text(name), "catalog drift for " << name);
  }
}

TEST_CASE("with_param rebinds and revalidates") {
  ManifoldSpec sphere = builtin_spec("sphere2");
  ManifoldSpec big = ep::with_param(sphere, "R", 2.0);
  double x[2] = {std::numbers::pi / 2, 1.0};
  CHECK(big.evaluate_metric({x, 2})(0, 0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(ep::with_param(sphere, "Q", 1.0), ep::SpecError);
  CHECK_THROWS_AS(ep::with_param(sphere, "R", 0.0), ep::GeometryError);  // degenerate metric
}

TEST_CASE("sample_grid is deterministic, interior, and at least the requested size") {
  ManifoldSpec sphere = builtin_spec("sphere2");
  auto pts = ep::sample_grid(sphere, 100);
  CHECK(pts.size() == 100);  // 10x10 in dimension 2
  for (const auto& p : pts) CHECK(sphere.is_interior(ep::testing::sp(p)));
  auto again = ep::sample_grid(sphere, 100);
  REQUIRE(again.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == again[i]);

  ManifoldSpec torus = builtin_spec("flat_torus3");
  CHECK(ep::sample_grid(torus, 100).size() == 125);  // 5^3
}
