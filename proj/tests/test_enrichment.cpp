#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xhho/enrichment.hpp"
#include "xhho/errors.hpp"

using namespace xhho;

namespace {

const double kOmega = 1.5 * M_PI;

// random point in the L-shape sector at distance [rmin, rmax] from the origin
Point2 sector_point(std::mt19937& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> ur(rmin, rmax), ut(0.0, kOmega);
  const double r = ur(rng), t = M_PI / 2.0 + ut(rng);
  return Point2(r * std::cos(t), r * std::sin(t));
}

} // namespace

TEST_CASE("corner function: values on arms and basic identities") {
  const EnrichmentFunction u1 = corner_singular_function(1, kOmega, M_PI / 2.0);
  CHECK(u1.harmonic);
  REQUIRE(u1.homogeneity.has_value());
  CHECK(u1.homogeneity->degree == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // theta = pi/2 is the first Dirichlet arm: value r^(2/3) sin(0) = 0
  CHECK(u1.value(Point2(0.0, 1.0)) == doctest::Approx(0.0));
  // Euler identity at the spec's sample point
  const Point2 x(0.3, -0.4);
  const double lhs = u1.gradient(x).dot(x);
  const double rhs = (2.0 / 3.0) * u1.value(x);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("corner function vanishes on both arms, both branches") {
  const EnrichmentFunction power = corner_singular_function(1, kOmega, M_PI / 2.0);
  // j = 3, omega = 3*pi/2 gives j*pi/omega = 2: the logarithmic branch
  const EnrichmentFunction logb = corner_singular_function(3, kOmega, M_PI / 2.0);
  CHECK_FALSE(logb.homogeneity.has_value());

  for (double r : {0.1, 0.5, 1.3}) {
    // arm theta = pi/2 (positive y axis) and theta = pi/2 + omega = 2*pi
    CHECK(std::abs(power.value(Point2(0.0, r))) < 1e-14);
    CHECK(std::abs(power.value(Point2(r, 0.0))) < 1e-14);
    CHECK(std::abs(logb.value(Point2(0.0, r))) < 1e-13);
    CHECK(std::abs(logb.value(Point2(r, 0.0))) < 1e-13);
  }
}

TEST_CASE("Euler identity at 100 random sample points") {
  std::mt19937 rng(7);
  const EnrichmentFunction u1 = corner_singular_function(1, kOmega, M_PI / 2.0);
  const double alpha = u1.homogeneity->degree;
  const Point2 c = u1.homogeneity->center;
  for (int i = 0; i < 100; ++i) {
    const Point2 x = sector_point(rng, 0.05, 1.4);
    const double f = u1.value(x);
    const double euler = u1.gradient(x).dot(x - c) - alpha * f;
    CHECK(std::abs(euler) <= 1e-10 * (std::abs(alpha * f) + 1.0));
  }
}

TEST_CASE("harmonicity via finite differences, both branches") {
  std::mt19937 rng(11);
  for (int j : {1, 3}) {
    const EnrichmentFunction fn = corner_singular_function(j, kOmega, M_PI / 2.0);
    for (int i = 0; i < 25; ++i) {
      const Point2 x = sector_point(rng, 0.1, 1.2);
      // stay away from the arms so the FD stencil does not cross the cut
      if (x.y() > -0.05 && x.x() > -0.05) continue;
      CHECK(std::abs(oracle::fd_laplacian(fn.value, x, 1e-4)) <= 1e-4);
      CHECK(fn.laplacian(x) == 0.0);
    }
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937 rng(13);
  for (int j : {1, 3}) {
    const EnrichmentFunction fn = corner_singular_function(j, kOmega, M_PI / 2.0);
    for (int i = 0; i < 25; ++i) {
      const Point2 x = sector_point(rng, 0.1, 1.2);
      if (x.y() > -0.05 && x.x() > -0.05) continue;
      const Point2 fd = oracle::fd_gradient(fn.value, x);
      CHECK((fn.gradient(x) - fd).norm() <= 1e-6 * fd.norm());
    }
  }
}

TEST_CASE("omega domain of validity") {
  CHECK_THROWS_AS(corner_singular_function(1, 2.0 * M_PI, 0.0), ConfigError);
  CHECK_THROWS_AS(corner_singular_function(1, M_PI, 0.0), ConfigError);
  CHECK_THROWS_AS(corner_singular_function(1, 2.2 * M_PI, 0.0), ConfigError);
  CHECK_NOTHROW(corner_singular_function(1, 1.9 * M_PI, 0.0));
}

TEST_CASE("oscillatory function") {
  const Point2 center(0.5, 0.5);
  const EnrichmentFunction psi = oscillatory_function(0.05, center);
  CHECK_FALSE(psi.harmonic);
  CHECK_FALSE(psi.homogeneity.has_value());
  CHECK_FALSE(psi.singular_point.has_value());

  // sin(1/0.05) = sin(20)
  CHECK(psi.value(center) == doctest::Approx(0.9129452507276277).epsilon(1e-15));
  CHECK(psi.gradient(center).norm() == doctest::Approx(0.0));

  // closed-form Laplacian against the 5-point stencil
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int i = 0; i < 20; ++i) {
    const Point2 x(u(rng), u(rng));
    const double fd = oracle::fd_laplacian(psi.value, x, 1e-4);
    CHECK(psi.laplacian(x) == doctest::Approx(fd).epsilon(1e-5));
  }
  // gradient against central differences
  for (int i = 0; i < 20; ++i) {
    const Point2 x(u(rng), u(rng));
    const Point2 fd = oracle::fd_gradient(psi.value, x);
    CHECK((psi.gradient(x) - fd).norm() <= 1e-6 * (fd.norm() + 1.0));
  }

  CHECK_THROWS_AS(oscillatory_function(0.0, center), ConfigError);
}

TEST_CASE("enrichment space cut-off sets") {
  const Mesh mesh = generate_cartesian(Domain::LShape, 4); // 48 elements
  std::vector<EnrichmentFunction> fns = {corner_singular_function(1, kOmega, M_PI / 2.0)};

  SUBCASE("element within gamma is enriched") {
    // centroids of the corner-touching cells sit at distance 0.25*sqrt(2)/2
    const EnrichmentSpace space = build_enrichment_space(mesh, fns, 0.2, Point2(0, 0));
    bool any = false;
    for (int e : space.enriched_elements) {
      CHECK((mesh.elements[e].centroid - Point2(0, 0)).norm() < 0.2);
      any = true;
    }
    CHECK(any);
  }

  SUBCASE("gamma zero disables enrichment") {
    const EnrichmentSpace space = build_enrichment_space(mesh, fns, 0.0, Point2(0, 0));
    CHECK(space.enriched_elements.empty());
    CHECK(space.enriched_faces.empty());
    CHECK(space.empty());
  }

  SUBCASE("gamma infinity enriches everything") {
    const EnrichmentSpace space = build_enrichment_space(
        mesh, fns, std::numeric_limits<double>::infinity(), Point2(0, 0));
    CHECK(static_cast<int>(space.enriched_elements.size()) == mesh.num_elements());
  }

  SUBCASE("two-route equivalence of the enriched face set") {
    // gamma so that exactly the cells touching the origin are enriched
    const EnrichmentSpace space = build_enrichment_space(mesh, fns, 0.19, Point2(0, 0));
    CHECK(space.enriched_elements.size() == 3);
    // route 1 (definition): faces whose adjacency intersects T_gamma
    std::set<int> by_definition;
    for (int f = 0; f < mesh.num_faces(); ++f) {
      const Face& face = mesh.faces[f];
      if (space.element_enriched(face.elem0) ||
          (face.elem1 >= 0 && space.element_enriched(face.elem1)))
        by_definition.insert(f);
    }
    CHECK(by_definition == space.enriched_faces);
  }
}
