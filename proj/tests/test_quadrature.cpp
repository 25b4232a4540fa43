#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "xhho/enrichment.hpp"
#include "xhho/quadrature.hpp"
#include "xhho/spaces.hpp"

using namespace xhho;

namespace {

// Exact integral of x^a y^b over a polygon via Green's theorem; expands the
// edge parametrisations binomially, so it shares nothing with the library's
// Gauss machinery.
std::vector<double> poly_pow(double c0, double c1, int p) {
  std::vector<double> out{1.0};
  for (int i = 0; i < p; ++i) {
    std::vector<double> next(out.size() + 1, 0.0);
    for (size_t j = 0; j < out.size(); ++j) {
      next[j] += out[j] * c0;
      next[j + 1] += out[j] * c1;
    }
    out = next;
  }
  return out;
}

double exact_monomial_integral(const std::vector<Point2>& poly, int a, int b) {
  double total = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Point2 p0 = poly[i], p1 = poly[(i + 1) % n];
    const double dx = p1.x() - p0.x(), dy = p1.y() - p0.y();
    if (dy == 0.0) continue;
    const auto xs = poly_pow(p0.x(), dx, a + 1);
    const auto ys = poly_pow(p0.y(), dy, b);
    std::vector<double> prod(xs.size() + ys.size() - 1, 0.0);
    for (size_t j = 0; j < xs.size(); ++j)
      for (size_t k = 0; k < ys.size(); ++k) prod[j + k] += xs[j] * ys[k];
    double integral = 0.0;
    for (size_t m = 0; m < prod.size(); ++m) integral += prod[m] / static_cast<double>(m + 1);
    total += integral * dy / (a + 1);
  }
  return total;
}

const EnrichmentFunction u1 = corner_singular_function(1, 1.5 * M_PI, M_PI / 2.0);

HomogeneousFn psi_homog() { return {u1.value, 2.0 / 3.0, Point2(0, 0)}; }

// square [-0.5,0] x [0,0.5]: one vertex at the origin, theta in [pi/2, pi]
const std::vector<Point2> corner_square = {Point2(0, 0), Point2(0, 0.5), Point2(-0.5, 0.5),
                                           Point2(-0.5, 0)};
const std::vector<Point2> far_square = {Point2(-1, -1), Point2(-0.5, -1), Point2(-0.5, -0.5),
                                        Point2(-1, -0.5)};

double polar_corner_square(const std::function<double(const Point2&)>& f, double tol = 1e-10) {
  // radius of the corner square seen from the origin: theta in [pi/2, pi]
  auto radius = [](double theta) {
    return 0.5 / std::max(std::abs(std::cos(theta)), std::abs(std::sin(theta)));
  };
  return oracle::integrate_polar(f, Point2(0, 0), M_PI / 2.0, M_PI, radius, tol);
}

} // namespace

TEST_CASE("edge rules are exact and weights sum to length") {
  const Point2 a(0.2, -0.3), b(1.4, 0.9);
  const double len = (b - a).norm();
  for (int deg = 0; deg <= 11; ++deg) {
    const EdgeRule rule = edge_rule(a, b, deg);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(len).epsilon(1e-14));
    // monomial in arc length about the midpoint
    for (int p = 0; p <= deg; ++p) {
      double got = 0.0;
      for (size_t i = 0; i < rule.points.size(); ++i) {
        const double t = (rule.points[i] - 0.5 * (a + b)).dot((b - a) / len);
        got += rule.weights[i] * std::pow(t, p);
      }
      const double exact = (p % 2 == 1) ? 0.0 : 2.0 * std::pow(0.5 * len, p + 1) / (p + 1);
      CHECK(got == doctest::Approx(exact).epsilon(1e-13).scale(std::pow(0.5 * len, p + 1)));
    }
  }
}

TEST_CASE("polygon rules: spot values and monomial exactness") {
  const PolyGeom unit_square =
      make_poly_geom({Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)});
  CHECK(integrate_polygon(unit_square, [](const Point2&) { return 1.0; }, 2) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate_polygon(unit_square, [](const Point2& x) { return x.x() * x.y(); }, 2) ==
        doctest::Approx(0.25).epsilon(1e-14));

  const PolyGeom tri = make_poly_geom({Point2(0, 0), Point2(1, 0), Point2(0, 1)});
  CHECK(integrate_polygon(tri, [](const Point2& x) { return x.x(); }, 1) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  const PolyGeom pentagon = make_poly_geom(
      {Point2(0, 0), Point2(1.1, -0.2), Point2(1.6, 0.8), Point2(0.7, 1.5), Point2(-0.3, 0.9)});
  for (int deg = 0; deg <= 8; ++deg) {
    const PolygonRule rule = polygon_rule(pentagon, deg);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(pentagon.area).epsilon(1e-13));
    for (int a = 0; a + 0 <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double got = 0.0;
        for (size_t i = 0; i < rule.points.size(); ++i)
          got += rule.weights[i] * std::pow(rule.points[i].x(), a) * std::pow(rule.points[i].y(), b);
        const double exact = exact_monomial_integral(pentagon.pts, a, b);
        CHECK(got == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("adaptive oracle on singular and trivial integrands") {
  // int_0^1 x^(-1/3) dx = 3/2
  const AdaptiveResult r1 = adaptive_edge(
      Point2(0, 0), Point2(1, 0), [](const Point2& x) { return std::pow(x.x(), -1.0 / 3.0); },
      1e-10, Point2(0, 0));
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.5).epsilon(1e-10));

  const PolyGeom unit_square =
      make_poly_geom({Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)});
  const AdaptiveResult r2 =
      adaptive_polygon(unit_square, [](const Point2&) { return 1.0; }, 1e-12);
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-13));

  // oracle self-consistency across two tolerance levels on r^(2/3) sin(2theta/3)
  const PolyGeom quarter =
      make_poly_geom({Point2(0, 0), Point2(0.5, 0), Point2(0.5, 0.5), Point2(0, 0.5)});
  auto f = [](const Point2& x) {
    const double r = x.norm(), t = std::atan2(x.y(), x.x());
    return r == 0.0 ? 0.0 : std::pow(r, 2.0 / 3.0) * std::sin(2.0 * t / 3.0);
  };
  const AdaptiveResult coarse = adaptive_polygon(quarter, f, 1e-8, Point2(0, 0));
  const AdaptiveResult fine = adaptive_polygon(quarter, f, 1e-10, Point2(0, 0));
  CHECK(coarse.converged);
  CHECK(fine.converged);
  CHECK(coarse.value == doctest::Approx(fine.value).epsilon(1e-8));
}

TEST_CASE("singular volume recursion vs the polar oracle on the corner square") {
  const PolyGeom T = make_poly_geom(corner_square);
  const ScaledMonomial one{0, 0, T.centroid, T.diameter};
  const double got = integrate_singular_volume(T, psi_homog(), one, EdgeOpts{});
  const double want = polar_corner_square(u1.value);
  CHECK(got == doctest::Approx(want).epsilon(1e-8));

  // low-degree monomials too
  for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{2, 0}}) {
    const ScaledMonomial m{a, b, T.centroid, T.diameter};
    const double g = integrate_singular_volume(T, psi_homog(), m, EdgeOpts{});
    const double w = polar_corner_square([&](const Point2& x) { return u1.value(x) * m.eval(x); });
    CHECK(g == doctest::Approx(w).epsilon(1e-8));
  }
}

TEST_CASE("singular volume recursion matches plain Gauss far from the origin") {
  const PolyGeom T = make_poly_geom(far_square);
  for (auto [a, b] : {std::pair{0, 0}, std::pair{2, 1}, std::pair{0, 3}}) {
    const ScaledMonomial m{a, b, T.centroid, T.diameter};
    const double rec = integrate_singular_volume(T, psi_homog(), m, EdgeOpts{});
    const double gauss =
        integrate_polygon(T, [&](const Point2& x) { return u1.value(x) * m.eval(x); }, 20);
    CHECK(rec == doctest::Approx(gauss).epsilon(1e-9));
  }
}

TEST_CASE("recursion depth equals monomial degree plus one") {
  const PolyGeom T = make_poly_geom(corner_square);
  for (int q = 0; q <= 4; ++q) {
    const ScaledMonomial m{q == 0 ? 0 : q - q / 2, q / 2, T.centroid, T.diameter};
    REQUIRE(m.degree() == q);
    quad_counters().reset();
    (void)integrate_singular_volume(T, psi_homog(), m, EdgeOpts{});
    CHECK(quad_counters().last_volume_levels == q + 1);
  }
  // with the monomial centred on the homogeneity center the volume term
  // vanishes and the recursion terminates at the first level
  quad_counters().reset();
  (void)integrate_singular_volume(T, psi_homog(), ScaledMonomial{2, 1, Point2(0, 0), 1.0},
                                  EdgeOpts{});
  CHECK(quad_counters().last_volume_levels == 1);
}

TEST_CASE("radial edge recursion vs the 1D oracle") {
  // theta = pi ray: psi = r^(2/3) sin(pi/3) along it, away from zero arms
  const Point2 a(0, 0), b(-0.5, 0);
  const ScaledMonomial m{1, 0, Point2(-0.3, 0.1), 0.5};
  const double got = integrate_singular_edge(a, b, psi_homog(), m, EdgeOpts{});
  auto f = [&](double r) {
    const Point2 x(-r, 0.0);
    return u1.value(x) * m.eval(x);
  };
  const double want = oracle::integrate_1d(f, 1e-15, 0.5, 1e-12);
  CHECK(got == doctest::Approx(want).epsilon(1e-10));

  // the theta = 2*pi arm: psi vanishes identically there
  const double arm = integrate_singular_edge(Point2(0, 0), Point2(0.5, 0), psi_homog(),
                                             ScaledMonomial{}, EdgeOpts{});
  CHECK(std::abs(arm) < 1e-14);

  // radial edge not touching the origin
  const Point2 c(0, -0.25), d(0, -0.75);
  const ScaledMonomial m2{0, 2, Point2(0.1, -0.5), 0.5};
  const double got2 = integrate_singular_edge(c, d, psi_homog(), m2, EdgeOpts{});
  auto f2 = [&](double r) {
    const Point2 x(0.0, -r);
    return u1.value(x) * m2.eval(x);
  };
  const double want2 = oracle::integrate_1d(f2, 0.25, 0.75, 1e-12);
  CHECK(got2 == doctest::Approx(want2).epsilon(1e-10));
}

TEST_CASE("vertex term vanishes at the singular endpoint for integrable traces") {
  // grad(psi).n on a radial edge from the origin: homogeneous of degree -1/3,
  // still integrable; the recursion must return a finite value matching the
  // 1D oracle
  const Point2 a(0, 0), b(0, -0.5);
  const Point2 n(1.0, 0.0);
  HomogeneousFn g{[n](const Point2& x) { return u1.gradient(x).dot(n); }, 2.0 / 3.0 - 1.0,
                  Point2(0, 0)};
  const double got = integrate_singular_edge(a, b, g, ScaledMonomial{}, EdgeOpts{});
  auto f = [&](double r) { return u1.gradient(Point2(0.0, -r)).dot(n); };
  const double want = oracle::integrate_1d(f, 1e-14, 0.5, 1e-12);
  CHECK(std::isfinite(got));
  CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("non-radial edges: Gauss self-convergence away from the origin") {
  const Point2 a(-1.0, -0.5), b(-0.6, -0.9);
  auto f = [&](const Point2& x) { return u1.value(x) * x.x() * x.y(); };
  const double g20 = integrate_edge(a, b, f, 20);
  const double g40 = integrate_edge(a, b, f, 40);
  CHECK(g20 == doctest::Approx(g40).epsilon(1e-12));
}

TEST_CASE("edges through the interior singular point are rejected") {
  CHECK_THROWS_AS(integrate_singular_edge(Point2(-0.5, 0), Point2(0.5, 0), psi_homog(),
                                          ScaledMonomial{}, EdgeOpts{}),
                  std::invalid_argument);
}

TEST_CASE("gradient stiffness identities") {
  const PolyGeom corner = make_poly_geom(corner_square);
  const PolyGeom far = make_poly_geom(far_square);
  auto trace = [&](const EdgeGeom& e) {
    return HomogeneousFn{
        [n = e.outward_normal](const Point2& x) { return u1.gradient(x).dot(n); },
        2.0 / 3.0 - 1.0, Point2(0, 0)};
  };

  // constant test function: gradient vanishes
  const double zero =
      integrate_gradient_stiffness(corner, trace, ScaledMonomial{0, 0, corner.centroid, 1.0},
                                   EdgeOpts{});
  // int grad(psi).grad(1) = 0; the boundary reduction gives int (grad psi.n)
  // over the boundary, which vanishes for harmonic psi
  CHECK(std::abs(zero) < 1e-12);

  // far element: boundary reduction matches volumetric Gauss
  const ScaledMonomial m{1, 1, far.centroid, far.diameter};
  const double red = integrate_gradient_stiffness(far, trace, m, EdgeOpts{});
  const double vol =
      integrate_polygon(far, [&](const Point2& x) { return u1.gradient(x).dot(m.grad(x)); }, 20);
  CHECK(red == doctest::Approx(vol).epsilon(1e-9));

  // corner element, first-degree monomial, against the polar oracle
  const ScaledMonomial m1{1, 0, corner.centroid, corner.diameter};
  const double red1 = integrate_gradient_stiffness(corner, trace, m1, EdgeOpts{});
  const double polar =
      polar_corner_square([&](const Point2& x) { return u1.gradient(x).dot(m1.grad(x)); }, 1e-9);
  CHECK(red1 == doctest::Approx(polar).epsilon(1e-7));
}

TEST_CASE("homogeneous recursion equals the adaptive oracle across a small mesh") {
  const Mesh mesh = generate_cartesian(Domain::LShape, 2);
  for (int e : {0, 1, 4}) { // a far element and corner-adjacent ones
    const PolyGeom T = poly_geom(mesh, e);
    for (auto [a, b] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{2, 0}}) {
      const ScaledMonomial m{a, b, T.centroid, T.diameter};
      const double rec = integrate_singular_volume(T, psi_homog(), m, EdgeOpts{});
      const double ada = adaptive_polygon_or_throw(
          T, [&](const Point2& x) { return u1.value(x) * m.eval(x); }, 1e-11, Point2(0, 0));
      CHECK(rec == doctest::Approx(ada).epsilon(1e-8));
    }
  }
}

TEST_CASE("oscillatory enrichment never enters the homogeneous recursion") {
  const Mesh mesh = generate_cartesian(Domain::Square, 2);
  const EnrichmentFunction psi = oscillatory_function(0.05, Point2(0.5, 0.5));
  const EnrichmentSpace space = build_enrichment_space(
      mesh, {psi}, std::numeric_limits<double>::infinity(), Point2(0.5, 0.5));

  quad_counters().reset();
  QuadSpec spec;
  spec.k = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    (void)build_cell_basis(mesh, e, 0, space, spec);
    (void)build_cell_unknown_basis(mesh, e, 0, space, spec);
  }
  for (int f = 0; f < mesh.num_faces(); ++f) (void)build_face_basis(mesh, f, 0, space, spec);

  CHECK(quad_counters().singular_volume_calls == 0);
  CHECK(quad_counters().singular_edge_recursions == 0);
  CHECK(quad_counters().adaptive_calls > 0);
}
