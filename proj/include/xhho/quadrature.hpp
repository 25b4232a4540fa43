#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "xhho/geometry.hpp"
#include "xhho/mesh.hpp"

namespace xhho {

// ---------------------------------------------------------------------------
// Geometry carriers (mesh-independent so tests can build standalone shapes)
// ---------------------------------------------------------------------------

struct EdgeGeom {
  Point2 a, b;
  Point2 outward_normal; // unit, out of the polygon
  Point2 midpoint;       // x_F
  double length = 0.0;
};

struct PolyGeom {
  std::vector<Point2> pts; // CCW
  std::vector<EdgeGeom> edges;
  Point2 centroid;
  double area = 0.0;
  double diameter = 0.0;
};

PolyGeom make_poly_geom(const std::vector<Point2>& ccw_pts);
PolyGeom poly_geom(const Mesh& mesh, int elem);

// ---------------------------------------------------------------------------
// Basic Gauss rules
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes/weights on [-1,1]; cached, safe for concurrent lookup.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int npoints);

struct EdgeRule {
  std::vector<Point2> points;
  std::vector<double> weights; // sum to edge length
};

/// Exact for 1D polynomials (along the edge) up to the given degree.
EdgeRule edge_rule(const Point2& a, const Point2& b, int degree);

struct PolygonRule {
  std::vector<Point2> points;
  std::vector<double> weights; // sum to polygon area
};

/// Fan sub-triangulation about the centroid with a collapsed tensor rule on
/// each triangle; exact on bivariate polynomials up to the given degree.
PolygonRule polygon_rule(const PolyGeom& T, int degree);

double integrate_polygon(const PolyGeom& T, const std::function<double(const Point2&)>& f, int degree);
double integrate_edge(const Point2& a, const Point2& b, const std::function<double(const Point2&)>& f,
                      int npoints);

// ---------------------------------------------------------------------------
// Homogeneous-function boundary-reduction quadrature
// ---------------------------------------------------------------------------

/// Monomial ((x-origin)/h)^ax * ((y-origin)/h)^ay in scaled local coordinates.
struct ScaledMonomial {
  int ax = 0, ay = 0;
  Point2 origin = Point2::Zero();
  double h = 1.0;

  int degree() const { return ax + ay; }
  double eval(const Point2& p) const;
  Point2 grad(const Point2& p) const;
  double laplacian(const Point2& p) const;
};

/// A scalar integrand factor that is homogeneous of the given degree about
/// center: f(center + lambda*y) = lambda^degree f(center + y).
struct HomogeneousFn {
  std::function<double(const Point2&)> f;
  double degree = 0.0;
  Point2 center = Point2::Zero();
};

/// Options for the edge integrals the boundary reduction falls back to.
struct EdgeOpts {
  int gauss_points = 12;       // smooth x enrichment away from the singularity
  double adaptive_tol = 1e-12; // non-radial edges close to the singularity
  double near_factor = 1.0;    // "close" means dist(edge, center) < near_factor * h_F
  double radial_tol = 1e-12;   // angular tolerance for radial detection
};

/// True when all points of segment [a,b] share the same polar angle about c.
bool is_radial_edge(const Point2& a, const Point2& b, const Point2& c, double angle_tol = 1e-12);

/// Integral over the segment [a,b] of g * monomial (arc-length measure).
/// Radial edges through/toward the singular point are evaluated exactly by
/// the vertex-term recursion
///   |y| g phi |_{v0}^{v1} = (1 + beta + q) \int g phi dr + \int g (y0 . grad phi) dr,
/// which lowers the monomial degree until it reaches zero. Other edges use
/// Gauss-Legendre, or adaptive bisection when the edge sits close to the
/// singular point. Requires 1 + beta + degree > 0 on the radial path.
double integrate_singular_edge(const Point2& a, const Point2& b, const HomogeneousFn& g,
                               const ScaledMonomial& m, const EdgeOpts& opts);

/// Integral over the segment [a,b] of g(x) * p(r) where p is a polynomial in
/// the radial distance r = |x - g.center| with the given coefficients
/// (p(r) = sum_k coeffs[k] r^k). Only valid on radial edges; exact.
double integrate_radial_edge_rpoly(const Point2& a, const Point2& b, const HomogeneousFn& g,
                                   const std::vector<double>& coeffs);

/// Integral over the polygon of g * monomial via the divergence-theorem
/// recursion
///   (d + beta + q) \int_T g phi = sum_F (x_F - c).n_TF \int_F g phi
///                                 - \int_T g (x0 - c).grad phi,
/// valid when the singular point is not strictly inside T.
double integrate_singular_volume(const PolyGeom& T, const HomogeneousFn& g, const ScaledMonomial& m,
                                 const EdgeOpts& opts);

/// \int_T grad(psi).grad(monomial) for harmonic psi, reduced to boundary
/// integrals of monomial * (grad psi . n); grad_psi_dot_n must supply the
/// normal trace as a homogeneous function per edge.
double integrate_gradient_stiffness(
    const PolyGeom& T, const std::function<HomogeneousFn(const EdgeGeom&)>& grad_psi_dot_n,
    const ScaledMonomial& m, const EdgeOpts& opts);

// ---------------------------------------------------------------------------
// Adaptive oracle
// ---------------------------------------------------------------------------

struct AdaptiveResult {
  double value = 0.0;
  double achieved_tol = 0.0; // relative to the integrand magnitude scale
  bool converged = false;
};

/// Global adaptive bisection on a segment; a declared singular point makes
/// the initial split land on it when it is interior.
AdaptiveResult adaptive_edge(const Point2& a, const Point2& b,
                             const std::function<double(const Point2&)>& f, double tol,
                             const std::optional<Point2>& singular = std::nullopt);

/// Global adaptive quadrature on a polygon: fan sub-triangulation, then
/// worst-first 4-way splits until the error estimate drops below tol times
/// the integrand magnitude. Subdivision clusters toward the singular point.
AdaptiveResult adaptive_polygon(const PolyGeom& T, const std::function<double(const Point2&)>& f,
                                double tol, const std::optional<Point2>& singular = std::nullopt);

/// Throwing wrappers used by library call sites (QuadratureError on failure).
double adaptive_edge_or_throw(const Point2& a, const Point2& b,
                              const std::function<double(const Point2&)>& f, double tol,
                              const std::optional<Point2>& singular = std::nullopt);
double adaptive_polygon_or_throw(const PolyGeom& T, const std::function<double(const Point2&)>& f,
                                 double tol, const std::optional<Point2>& singular = std::nullopt);

// ---------------------------------------------------------------------------
// Dispatch instrumentation (tests assert path selection)
// ---------------------------------------------------------------------------

struct QuadCounters {
  long singular_volume_calls = 0;
  long singular_edge_recursions = 0;
  long gauss_edge_calls = 0;
  long adaptive_calls = 0;
  int last_volume_levels = 0; // distinct monomial degrees visited

  void reset() { *this = QuadCounters{}; }
};

QuadCounters& quad_counters();

} // namespace xhho
