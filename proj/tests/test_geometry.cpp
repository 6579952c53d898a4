#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "einsteinprobe/geometry.hpp"
#include "support/oracles.hpp"

using ep::builtin_spec;
using ep::ChartGeometry;
using ep::Expr;
using ep::ManifoldSpec;
using ep::ScalarField;
using ep::testing::sp;

namespace {

Expr parse_on(const ManifoldSpec& spec, const std::string& text) {
  ep::NameScope names;
  names.coords = spec.coords;
  for (const auto& [k, v] : spec.params) names.params.push_back(k);
  return ep::parse_expression(text, names);
}

}  // namespace

TEST_CASE("flat charts: identity data, zero curvature everywhere") {
  for (const char* name : {"euclidean2", "flat_torus3"}) {
    ChartGeometry geo(builtin_spec(name));
    for (const auto& x : ep::sample_grid(geo.spec(), 27)) {
      CHECK(geo.christoffel_at(sp(x)).max_abs() == 0.0);
      CHECK(geo.riemann_at(sp(x)).max_abs() <= 1e-10);
      CHECK(geo.ricci_at(sp(x)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(std::abs(geo.scalar_at(sp(x))) <= 1e-10);
    }
  }
  ChartGeometry flat(builtin_spec("euclidean2"));
  Eigen::VectorXd x = flat.domain_center();
  CHECK(flat.metric_at(sp(x)).isIdentity(0.0));
  CHECK(flat.inverse_metric_at(sp(x)).isIdentity(0.0));
}

TEST_CASE("sphere2: metric, Christoffel symbols, r = g, s = 2") {
  ChartGeometry geo(builtin_spec("sphere2"));
  const double pi = std::numbers::pi;

  Eigen::VectorXd eq(2);
  eq << pi / 2, 1.0;
  Eigen::MatrixXd g = geo.metric_at(sp(eq));
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(geo.inverse_metric_at(sp(eq))(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((g * geo.inverse_metric_at(sp(eq)) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);

  Eigen::VectorXd x(2);
  x << pi / 3, 2.0;
  ep::Tensor3 gamma = geo.christoffel_at(sp(x));
  CHECK(gamma(0, 1, 1) == doctest::Approx(-std::sin(pi / 3) * std::cos(pi / 3)).epsilon(1e-12));
  CHECK(gamma(1, 0, 1) == doctest::Approx(1.0 / std::tan(pi / 3)).epsilon(1e-12));
  CHECK(gamma(1, 1, 0) == gamma(1, 0, 1));  // symmetric in the lower pair

  for (const auto& p : ep::sample_grid(geo.spec(), 25)) {
    Eigen::MatrixXd gg = geo.metric_at(sp(p));
    Eigen::MatrixXd ric = geo.ricci_at(sp(p));
    CHECK((ric - gg).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(geo.scalar_at(sp(p)) == doctest::Approx(2.0).epsilon(1e-12));
    // sectional curvature: <R(d_theta, d_phi) d_theta, d_phi> / det g
    ep::Tensor4 r = geo.riemann_at(sp(p));
    double r_low = 0.0;
    for (int m = 0; m < 2; ++m) r_low += gg(1, m) * r(m, 0, 1, 0);
    double sec = r_low / (gg(0, 0) * gg(1, 1) - gg(0, 1) * gg(0, 1));
    CHECK(sec == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("hyperbolic2: inverse metric, Christoffels, r = -g, s = -2") {
  ChartGeometry geo(builtin_spec("hyperbolic2"));
  Eigen::VectorXd x(2);
  x << 0.0, 2.0;
  Eigen::MatrixXd g = geo.metric_at(sp(x));
  CHECK(g(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  Eigen::MatrixXd gi = geo.inverse_metric_at(sp(x));
  CHECK(gi(0, 0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(gi(1, 1) == doctest::Approx(4.0).epsilon(1e-13));

  ep::Tensor3 gamma = geo.christoffel_at(sp(x));
  CHECK(gamma(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));  // Gamma^x_{xy} = -1/y

  for (const auto& p : ep::sample_grid(geo.spec(), 25)) {
    Eigen::MatrixXd gg = geo.metric_at(sp(p));
    CHECK((geo.ricci_at(sp(p)) + gg).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(geo.scalar_at(sp(p)) == doctest::Approx(-2.0).epsilon(1e-12));
  }
}

TEST_CASE("s2_x_s1 product chart: block Ricci, eigenvalues (0,1,1), s = 2") {
  ChartGeometry geo(builtin_spec("s2_x_s1"));
  for (const auto& p : ep::testing::random_interior_points(geo.spec(), 20, 31337)) {
    Eigen::MatrixXd ric = geo.ricci_at(sp(p));
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected(0, 0) = 1.0;
    expected(1, 1) = std::sin(p[0]) * std::sin(p[0]);
    CHECK((ric - expected).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(geo.scalar_at(sp(p)) == doctest::Approx(2.0).epsilon(1e-11));
    ep::EigenResult er = geo.ricci_eigenvalues_at(sp(p));
    CHECK(er.lambdas[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(er.lambdas[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(er.lambdas[2] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Christoffel symbols match the finite-difference oracle on every catalog spec") {
  for (const std::string& name : ep::builtin_spec_names()) {
    ChartGeometry geo(builtin_spec(name));
    for (const auto& x : ep::testing::random_interior_points(geo.spec(), 100, 1234)) {
      ep::Tensor3 sym = geo.christoffel_at(sp(x));
      ep::Tensor3 fd = ep::testing::fd_christoffel(geo, x);
      double worst = 0.0;
      const int n = geo.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(sym(i, j, k) - fd(i, j, k)));
      CHECK_MESSAGE(worst <= 1e-5, name << ": FD mismatch " << worst);
    }
  }
}

TEST_CASE("Riemann tensor: antisymmetry and finite-difference consistency") {
  for (const char* name : {"sphere2", "hyperbolic2", "bumpy_sphere2", "s2_x_s1"}) {
    ChartGeometry geo(builtin_spec(name));
    for (const auto& x : ep::testing::random_interior_points(geo.spec(), 10, 555)) {
      ep::Tensor4 r = geo.riemann_at(sp(x));
      const int n = geo.dim();
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              CHECK(std::abs(r(l, i, j, k) + r(l, j, i, k)) <= 1e-9);
      ep::Tensor4 fd = ep::testing::fd_riemann(geo, x);
      double worst = 0.0;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              worst = std::max(worst, std::abs(r(l, i, j, k) - fd(l, i, j, k)));
      CHECK_MESSAGE(worst <= 1e-4, name << ": FD Riemann mismatch " << worst);
    }
  }
}

TEST_CASE("scalar curvature of 2D diagonal charts matches the Gauss-curvature oracle") {
  for (const char* name : {"sphere2", "hyperbolic2", "bumpy_sphere2"}) {
    ChartGeometry geo(builtin_spec(name));
    for (const auto& x : ep::testing::random_interior_points(geo.spec(), 25, 99)) {
      double s = geo.scalar_at(sp(x));
      double s_fd = ep::testing::fd_scalar_diag2(geo, x);
      CHECK_MESSAGE(std::abs(s - s_fd) <= 1e-5, name << " at (" << x[0] << "," << x[1] << ")");
    }
  }
}

TEST_CASE("eigenvalue sums equal the scalar curvature at 100 random points per spec") {
  for (const std::string& name : ep::builtin_spec_names()) {
    ChartGeometry geo(builtin_spec(name));
    for (const auto& x : ep::testing::random_interior_points(geo.spec(), 100, 2024)) {
      ep::EigenResult er = geo.ricci_eigenvalues_at(sp(x));
      CHECK(std::abs(er.lambdas.sum() - geo.scalar_at(sp(x))) <= 1e-8);
      for (int i = 0; i + 1 < geo.dim(); ++i) CHECK(er.lambdas[i] <= er.lambdas[i + 1]);
    }
  }
}

TEST_CASE("g_trace: identity on g, zero on 0, scalar on ricci") {
  for (const std::string& name : ep::builtin_spec_names()) {
    ChartGeometry geo(builtin_spec(name));
    Eigen::VectorXd x = geo.domain_center();
    CHECK(std::abs(geo.g_trace(sp(x), geo.metric_at(sp(x))) - geo.dim()) <= 1e-12);
    CHECK(geo.g_trace(sp(x), Eigen::MatrixXd::Zero(geo.dim(), geo.dim())) == 0.0);
  }
  ChartGeometry sphere(builtin_spec("sphere2"));
  Eigen::VectorXd x = sphere.domain_center();
  CHECK(sphere.g_trace(sp(x), sphere.ricci_at(sp(x))) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(sphere.g_trace(sp(x), Eigen::MatrixXd::Zero(3, 3)), ep::GeometryError);
  // linearity
  Eigen::MatrixXd a = sphere.ricci_at(sp(x));
  Eigen::MatrixXd b = sphere.metric_at(sp(x));
  CHECK(sphere.g_trace(sp(x), 2.0 * a + b) ==
        doctest::Approx(2.0 * sphere.g_trace(sp(x), a) + sphere.g_trace(sp(x), b))
            .epsilon(1e-13));
}

TEST_CASE("Hessian and Laplace-Beltrami") {
  ChartGeometry flat(builtin_spec("euclidean2"));
  Eigen::VectorXd x(2);
  x << 0.7, -1.3;

  ScalarField sq(flat.spec(), parse_on(flat.spec(), "x1^2"));
  CHECK(flat.laplace_beltrami_at(sq, sp(x)) == doctest::Approx(2.0).epsilon(1e-14));

  ScalarField cross(flat.spec(), parse_on(flat.spec(), "x1*x2"));
  Eigen::MatrixXd h = flat.hessian_at(cross, sp(x));
  CHECK(h(0, 0) == 0.0);
  CHECK(h(1, 1) == 0.0);
  CHECK(h(0, 1) == 1.0);
  CHECK(h(1, 0) == 1.0);

  ScalarField lin(flat.spec(), parse_on(flat.spec(), "3*x1 - 2*x2"));
  CHECK(flat.hessian_at(lin, sp(x)).cwiseAbs().maxCoeff() == 0.0);

  ScalarField con(flat.spec(), parse_on(flat.spec(), "4"));
  CHECK(flat.laplace_beltrami_at(con, sp(x)) == 0.0);

  // cos(theta) is a -2 eigenfunction on the unit sphere
  ChartGeometry sphere(builtin_spec("sphere2"));
  ScalarField f(sphere.spec(), parse_on(sphere.spec(), "cos(theta)"));
  for (const auto& p : ep::testing::random_interior_points(sphere.spec(), 20, 7)) {
    double lap = sphere.laplace_beltrami_at(f, sp(p));
    CHECK(lap == doctest::Approx(-2.0 * std::cos(p[0])).epsilon(1e-9));
    // g-trace of the Hessian is the Laplacian
    double tr = sphere.g_trace(sp(p), sphere.hessian_at(f, sp(p)));
    CHECK(std::abs(tr - lap) <= 1e-9);
  }
}

TEST_CASE("constant metric scaling: ricci fixed, scalar and eigenvalues scale by 1/k^2") {
  ChartGeometry unit(builtin_spec("sphere2"));
  ChartGeometry scaled(ep::with_param(builtin_spec("sphere2"), "R", 2.0));
  for (const auto& x : ep::testing::random_interior_points(unit.spec(), 20, 11)) {
    Eigen::MatrixXd r1 = unit.ricci_at(sp(x));
    Eigen::MatrixXd r2 = scaled.ricci_at(sp(x));
    CHECK((r1 - r2).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(scaled.scalar_at(sp(x)) == doctest::Approx(unit.scalar_at(sp(x)) / 4.0).epsilon(1e-8));
    Eigen::VectorXd l1 = unit.ricci_eigenvalues_at(sp(x)).lambdas;
    Eigen::VectorXd l2 = scaled.ricci_eigenvalues_at(sp(x)).lambdas;
    for (int i = 0; i < 2; ++i) CHECK(l2[i] == doctest::Approx(l1[i] / 4.0).epsilon(1e-8));
  }
}

TEST_CASE("a metric that is not positive definite is a hard error with location") {
  ManifoldSpec bad;
  bad.name = "indefinite";
  bad.dim = 2;
  bad.coords = {"x1", "x2"};
  bad.domain = {{-1.0, 1.0}, {-1.0, 1.0}};
  bad.metric = {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(0.0),
                Expr::constant(-1.0)};
  ChartGeometry geo(std::move(bad));
  Eigen::VectorXd x(2);
  x << 0.25, 0.5;
  CHECK_THROWS_WITH_AS(geo.metric_at(sp(x)), doctest::Contains("leading minor of order 2"),
                       ep::GeometryError);
  CHECK_THROWS_WITH_AS(geo.metric_at(sp(x)), doctest::Contains("0.25"), ep::GeometryError);
}
