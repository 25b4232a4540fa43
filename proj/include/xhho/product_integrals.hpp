#pragma once

#include <functional>
#include <vector>

#include "xhho/enrichment.hpp"
#include "xhho/quadrature.hpp"

namespace xhho {

/// Quadrature policy shared by all basis/operator integrals of one run.
struct QuadSpec {
  int k = 1;      // face polynomial degree
  int safety = 0; // added to all Gauss orders (--quad-safety)
  double adaptive_tol = 1e-11;  // non-homogeneous enrichment integrals
  double sing_edge_tol = 1e-12; // adaptive fallback near the singular point

  // exact for products of two basis polynomials
  int poly_degree() const { return 2 * (k + 1) + 2 + 2 * safety; }
  // smooth x enrichment away from the singularity
  int enrich_edge_points() const { return 2 * (k + 1) + 8 + safety; }
  int enrich_cell_degree() const { return 2 * (k + 1) + 16 + 2 * safety; }

  EdgeOpts edge_opts() const {
    EdgeOpts o;
    o.gauss_points = enrich_edge_points();
    o.adaptive_tol = sing_edge_tol;
    return o;
  }
};

/// Dispatching integrals of basis-function products over one element.
/// Enrichment factors are routed by their metadata: the boundary-reduction
/// recursion when homogeneous and the element sits within h_T of the
/// singular point, plain Gauss when the element is far from it, and the
/// adaptive oracle when no homogeneity is available.
class ElementIntegrator {
public:
  ElementIntegrator(const PolyGeom& T, const QuadSpec& spec) : T_(T), spec_(spec) {}

  const PolyGeom& geom() const { return T_; }

  double mono_mono(const ScaledMonomial& a, const ScaledMonomial& b) const;
  double enrich_mono(const EnrichmentFunction& e, const ScaledMonomial& m) const;
  double enrich_enrich(const EnrichmentFunction& e1, const EnrichmentFunction& e2) const;
  double lap_mono(const EnrichmentFunction& e, const ScaledMonomial& m) const;
  double lap_lap(const EnrichmentFunction& e1, const EnrichmentFunction& e2) const;
  double lap_enrich(const EnrichmentFunction& lap_of, const EnrichmentFunction& value_of) const;

  double grad_mono_grad_mono(const ScaledMonomial& a, const ScaledMonomial& b) const;
  double grad_enrich_grad_mono(const EnrichmentFunction& e, const ScaledMonomial& m) const;
  double grad_enrich_grad_enrich(const EnrichmentFunction& e1, const EnrichmentFunction& e2) const;

  double smooth_mono(const std::function<double(const Point2&)>& f, bool adaptive,
                     const ScaledMonomial& m) const;
  double smooth_lap(const std::function<double(const Point2&)>& f, bool adaptive,
                    const EnrichmentFunction& e) const;
  double smooth_moment(const std::function<double(const Point2&)>& f, bool adaptive) const;
  double grad_smooth_grad_mono(const std::function<Point2(const Point2&)>& grad, bool adaptive,
                               const ScaledMonomial& m) const;
  /// (grad v, grad psi)_T for smooth v; uses the harmonicity of psi to reduce
  /// to boundary integrals of v (grad psi . n).
  double grad_smooth_grad_enrich(const std::function<double(const Point2&)>& value,
                                 const std::function<Point2(const Point2&)>& grad, bool adaptive,
                                 const EnrichmentFunction& e) const;

  bool near_singular(const Point2& c) const {
    return point_polygon_distance(c, T_.pts) < T_.diameter;
  }

private:
  const PolyGeom& T_;
  QuadSpec spec_;
};

/// A polynomial factor living on one face: pointwise evaluator, its degree,
/// and (for radial faces) its expansion in the radial distance r about a
/// given center.
struct PolyOnFace {
  std::function<double(const Point2&)> eval;
  int degree = 0;
  std::function<std::vector<double>(const Point2&)> r_coeffs;
};

PolyOnFace product(const PolyOnFace& a, const PolyOnFace& b);

/// Dispatching integrals over one face (straight segment).
class FaceIntegrator {
public:
  FaceIntegrator(const Point2& a, const Point2& b, const QuadSpec& spec);

  /// t^p in the face coordinate t = 2 (x - midpoint).dir / h in [-1,1].
  PolyOnFace face_mono(int p) const;
  /// A 2D scaled monomial restricted to this face.
  PolyOnFace mono_trace(const ScaledMonomial& m) const;

  double poly_poly(const PolyOnFace& a, const PolyOnFace& b) const;
  double homog_poly(const HomogeneousFn& g, const PolyOnFace& p) const;
  double homog_homog(const HomogeneousFn& g1, const HomogeneousFn& g2) const;
  double smooth_poly(const std::function<double(const Point2&)>& f, bool adaptive,
                     const PolyOnFace& p) const;
  double smooth_homog(const std::function<double(const Point2&)>& f, const HomogeneousFn& g) const;
  /// Last-resort pairing for factors without useful metadata.
  double generic_pair(const std::function<double(const Point2&)>& f,
                      const std::function<double(const Point2&)>& g, bool adaptive) const;

  bool radial_about(const Point2& c) const { return is_radial_edge(a_, b_, c, opts_.radial_tol); }
  bool near(const Point2& c) const { return point_segment_distance(c, a_, b_) < h_; }

  const Point2& a() const { return a_; }
  const Point2& b() const { return b_; }
  double length() const { return h_; }

private:
  Point2 a_, b_, mid_, dir_; // dir_ = (b-a)/h
  double h_;
  QuadSpec spec_;
  EdgeOpts opts_;
};

/// (c0 + c1 r)^p as coefficients in r.
std::vector<double> affine_power(double c0, double c1, int p);
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

} // namespace xhho
