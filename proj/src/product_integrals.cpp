#include "xhho/product_integrals.hpp"

#include <cmath>

#include "xhho/errors.hpp"

namespace xhho {

namespace {

HomogeneousFn as_homogeneous(const EnrichmentFunction& e) {
  return HomogeneousFn{e.value, e.homogeneity->degree, e.homogeneity->center};
}

} // namespace

std::vector<double> affine_power(double c0, double c1, int p) {
  std::vector<double> out{1.0};
  std::vector<double> base{c0, c1};
  for (int i = 0; i < p; ++i) out = convolve(out, base);
  return out;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

PolyOnFace product(const PolyOnFace& a, const PolyOnFace& b) {
  PolyOnFace p;
  p.degree = a.degree + b.degree;
  p.eval = [ea = a.eval, eb = b.eval](const Point2& x) { return ea(x) * eb(x); };
  if (a.r_coeffs && b.r_coeffs)
    p.r_coeffs = [ra = a.r_coeffs, rb = b.r_coeffs](const Point2& c) {
      return convolve(ra(c), rb(c));
    };
  return p;
}

// ---------------------------------------------------------------------------
// ElementIntegrator
// ---------------------------------------------------------------------------

double ElementIntegrator::mono_mono(const ScaledMonomial& a, const ScaledMonomial& b) const {
  return integrate_polygon(
      T_, [&](const Point2& x) { return a.eval(x) * b.eval(x); }, spec_.poly_degree());
}

double ElementIntegrator::enrich_mono(const EnrichmentFunction& e, const ScaledMonomial& m) const {
  if (e.homogeneity) {
    const HomogeneousFn g = as_homogeneous(e);
    if (near_singular(g.center)) return integrate_singular_volume(T_, g, m, spec_.edge_opts());
    return integrate_polygon(
        T_, [&](const Point2& x) { return e.value(x) * m.eval(x); }, spec_.enrich_cell_degree());
  }
  if (e.singular_point && !near_singular(*e.singular_point))
    return integrate_polygon(
        T_, [&](const Point2& x) { return e.value(x) * m.eval(x); }, spec_.enrich_cell_degree());
  return adaptive_polygon_or_throw(
      T_, [&](const Point2& x) { return e.value(x) * m.eval(x); }, spec_.adaptive_tol,
      e.singular_point);
}

double ElementIntegrator::enrich_enrich(const EnrichmentFunction& e1,
                                        const EnrichmentFunction& e2) const {
  if (e1.homogeneity && e2.homogeneity &&
      (e1.homogeneity->center - e2.homogeneity->center).norm() == 0.0) {
    HomogeneousFn g;
    g.center = e1.homogeneity->center;
    g.degree = e1.homogeneity->degree + e2.homogeneity->degree;
    g.f = [v1 = e1.value, v2 = e2.value](const Point2& x) { return v1(x) * v2(x); };
    if (near_singular(g.center))
      return integrate_singular_volume(T_, g, ScaledMonomial{}, spec_.edge_opts());
    return integrate_polygon(T_, g.f, spec_.enrich_cell_degree());
  }
  auto f = [&](const Point2& x) { return e1.value(x) * e2.value(x); };
  if (e1.singular_point && !near_singular(*e1.singular_point))
    return integrate_polygon(T_, f, spec_.enrich_cell_degree());
  return adaptive_polygon_or_throw(T_, f, spec_.adaptive_tol, e1.singular_point);
}

double ElementIntegrator::lap_mono(const EnrichmentFunction& e, const ScaledMonomial& m) const {
  return adaptive_polygon_or_throw(
      T_, [&](const Point2& x) { return e.laplacian(x) * m.eval(x); }, spec_.adaptive_tol,
      e.singular_point);
}

double ElementIntegrator::lap_lap(const EnrichmentFunction& e1, const EnrichmentFunction& e2) const {
  return adaptive_polygon_or_throw(
      T_, [&](const Point2& x) { return e1.laplacian(x) * e2.laplacian(x); }, spec_.adaptive_tol,
      e1.singular_point);
}

double ElementIntegrator::lap_enrich(const EnrichmentFunction& lap_of,
                                     const EnrichmentFunction& value_of) const {
  return adaptive_polygon_or_throw(
      T_, [&](const Point2& x) { return lap_of.laplacian(x) * value_of.value(x); },
      spec_.adaptive_tol, lap_of.singular_point);
}

double ElementIntegrator::grad_mono_grad_mono(const ScaledMonomial& a, const ScaledMonomial& b) const {
  return integrate_polygon(
      T_, [&](const Point2& x) { return a.grad(x).dot(b.grad(x)); }, spec_.poly_degree());
}

double ElementIntegrator::grad_enrich_grad_mono(const EnrichmentFunction& e,
                                                const ScaledMonomial& m) const {
  if (e.harmonic && e.homogeneity) {
    const double alpha = e.homogeneity->degree;
    const Point2 center = e.homogeneity->center;
    auto trace = [&](const EdgeGeom& edge) {
      HomogeneousFn g;
      g.center = center;
      g.degree = alpha - 1.0;
      g.f = [grad = e.gradient, n = edge.outward_normal](const Point2& x) {
        return grad(x).dot(n);
      };
      return g;
    };
    return integrate_gradient_stiffness(T_, trace, m, spec_.edge_opts());
  }
  auto f = [&](const Point2& x) { return e.gradient(x).dot(m.grad(x)); };
  if (e.singular_point && !near_singular(*e.singular_point))
    return integrate_polygon(T_, f, spec_.enrich_cell_degree());
  return adaptive_polygon_or_throw(T_, f, spec_.adaptive_tol, e.singular_point);
}

double ElementIntegrator::grad_enrich_grad_enrich(const EnrichmentFunction& e1,
                                                  const EnrichmentFunction& e2) const {
  if (e1.harmonic && e1.homogeneity && e2.homogeneity &&
      (e1.homogeneity->center - e2.homogeneity->center).norm() == 0.0) {
    // int grad(e2).grad(e1) = sum_F int e2 (grad e1 . n); product homogeneous
    const Point2 center = e1.homogeneity->center;
    const double beta = e1.homogeneity->degree - 1.0 + e2.homogeneity->degree;
    double value = 0.0;
    for (const EdgeGeom& edge : T_.edges) {
      HomogeneousFn g;
      g.center = center;
      g.degree = beta;
      g.f = [g1 = e1.gradient, v2 = e2.value, n = edge.outward_normal](const Point2& x) {
        return v2(x) * g1(x).dot(n);
      };
      value += integrate_singular_edge(edge.a, edge.b, g, ScaledMonomial{}, spec_.edge_opts());
    }
    return value;
  }
  auto f = [&](const Point2& x) { return e1.gradient(x).dot(e2.gradient(x)); };
  if (e1.singular_point && !near_singular(*e1.singular_point))
    return integrate_polygon(T_, f, spec_.enrich_cell_degree());
  return adaptive_polygon_or_throw(T_, f, spec_.adaptive_tol, e1.singular_point);
}

double ElementIntegrator::smooth_mono(const std::function<double(const Point2&)>& f, bool adaptive,
                                      const ScaledMonomial& m) const {
  auto fn = [&](const Point2& x) { return f(x) * m.eval(x); };
  if (adaptive) return adaptive_polygon_or_throw(T_, fn, spec_.adaptive_tol);
  return integrate_polygon(T_, fn, spec_.enrich_cell_degree());
}

double ElementIntegrator::smooth_lap(const std::function<double(const Point2&)>& f, bool,
                                     const EnrichmentFunction& e) const {
  return adaptive_polygon_or_throw(
      T_, [&](const Point2& x) { return f(x) * e.laplacian(x); }, spec_.adaptive_tol,
      e.singular_point);
}

double ElementIntegrator::smooth_moment(const std::function<double(const Point2&)>& f,
                                        bool adaptive) const {
  if (adaptive) return adaptive_polygon_or_throw(T_, f, spec_.adaptive_tol);
  return integrate_polygon(T_, f, spec_.enrich_cell_degree());
}

double ElementIntegrator::grad_smooth_grad_mono(const std::function<Point2(const Point2&)>& grad,
                                                bool adaptive, const ScaledMonomial& m) const {
  auto fn = [&](const Point2& x) { return grad(x).dot(m.grad(x)); };
  if (adaptive) return adaptive_polygon_or_throw(T_, fn, spec_.adaptive_tol);
  return integrate_polygon(T_, fn, spec_.enrich_cell_degree());
}

double ElementIntegrator::grad_smooth_grad_enrich(const std::function<double(const Point2&)>& value,
                                                  const std::function<Point2(const Point2&)>& grad,
                                                  bool adaptive, const EnrichmentFunction& e) const {
  if (e.harmonic) {
    // (grad v, grad psi)_T = sum_F int_F v (grad psi . n)
    double total = 0.0;
    const bool sing_near = e.singular_point && near_singular(*e.singular_point);
    for (const EdgeGeom& edge : T_.edges) {
      // a tangent gradient makes the trace an analytic zero; its pointwise
      // values are rounding jitter no quadrature can integrate
      const auto& [xs, ws] = gauss_legendre(9);
      double max_trace = 0.0, max_grad = 0.0;
      for (int i = 0; i < 9; ++i) {
        const Point2 g = e.gradient(edge.midpoint + 0.5 * xs[i] * (edge.b - edge.a));
        max_trace = std::max(max_trace, std::abs(g.dot(edge.outward_normal)));
        max_grad = std::max(max_grad, g.norm());
      }
      if (max_trace <= 1e-12 * max_grad) continue;

      auto fn = [&](const Point2& x) { return value(x) * e.gradient(x).dot(edge.outward_normal); };
      const bool edge_near =
          e.singular_point &&
          point_segment_distance(*e.singular_point, edge.a, edge.b) < edge.length;
      if (adaptive || (sing_near && edge_near))
        total += adaptive_edge_or_throw(edge.a, edge.b, fn, spec_.sing_edge_tol);
      else
        total += integrate_edge(edge.a, edge.b, fn, spec_.enrich_edge_points());
    }
    return total;
  }
  auto fn = [&](const Point2& x) { return grad(x).dot(e.gradient(x)); };
  return adaptive_polygon_or_throw(T_, fn, spec_.adaptive_tol, e.singular_point);
}

// ---------------------------------------------------------------------------
// FaceIntegrator
// ---------------------------------------------------------------------------

FaceIntegrator::FaceIntegrator(const Point2& a, const Point2& b, const QuadSpec& spec)
    : a_(a), b_(b), mid_(0.5 * (a + b)), h_((b - a).norm()), spec_(spec), opts_(spec.edge_opts()) {
  dir_ = (b_ - a_) / h_;
}

PolyOnFace FaceIntegrator::face_mono(int p) const {
  PolyOnFace out;
  out.degree = p;
  out.eval = [mid = mid_, dir = dir_, h = h_, p](const Point2& x) {
    const double t = 2.0 * (x - mid).dot(dir) / h;
    double v = 1.0;
    for (int i = 0; i < p; ++i) v *= t;
    return v;
  };
  out.r_coeffs = [mid = mid_, dir = dir_, h = h_, a = a_, b = b_, p](const Point2& c) {
    // on a radial face x = c + r*u; t is affine in r
    const double ra = (a - c).norm(), rb = (b - c).norm();
    const Point2 far = (ra > rb) ? a : b;
    const Point2 u = (far - c) / std::max(ra, rb);
    const double t0 = 2.0 * (c - mid).dot(dir) / h;
    const double t1 = 2.0 * u.dot(dir) / h;
    return affine_power(t0, t1, p);
  };
  return out;
}

PolyOnFace FaceIntegrator::mono_trace(const ScaledMonomial& m) const {
  PolyOnFace out;
  out.degree = m.degree();
  out.eval = [m](const Point2& x) { return m.eval(x); };
  out.r_coeffs = [m, a = a_, b = b_](const Point2& c) {
    const double ra = (a - c).norm(), rb = (b - c).norm();
    const Point2 far = (ra > rb) ? a : b;
    const Point2 u = (far - c) / std::max(ra, rb);
    const auto px = affine_power((c.x() - m.origin.x()) / m.h, u.x() / m.h, m.ax);
    const auto py = affine_power((c.y() - m.origin.y()) / m.h, u.y() / m.h, m.ay);
    return convolve(px, py);
  };
  return out;
}

double FaceIntegrator::poly_poly(const PolyOnFace& a, const PolyOnFace& b) const {
  const EdgeRule rule = edge_rule(a_, b_, a.degree + b.degree + 2 * spec_.safety);
  double s = 0.0;
  for (size_t i = 0; i < rule.points.size(); ++i)
    s += rule.weights[i] * a.eval(rule.points[i]) * b.eval(rule.points[i]);
  return s;
}

double FaceIntegrator::homog_poly(const HomogeneousFn& g, const PolyOnFace& p) const {
  if (radial_about(g.center)) return integrate_radial_edge_rpoly(a_, b_, g, p.r_coeffs(g.center));
  auto fn = [&](const Point2& x) { return g.f(x) * p.eval(x); };
  if (near(g.center)) return adaptive_edge_or_throw(a_, b_, fn, opts_.adaptive_tol);
  return integrate_edge(a_, b_, fn, opts_.gauss_points);
}

double FaceIntegrator::homog_homog(const HomogeneousFn& g1, const HomogeneousFn& g2) const {
  auto fn = [&](const Point2& x) { return g1.f(x) * g2.f(x); };
  if ((g1.center - g2.center).norm() == 0.0 && radial_about(g1.center)) {
    HomogeneousFn g{fn, g1.degree + g2.degree, g1.center};
    return integrate_radial_edge_rpoly(a_, b_, g, {1.0});
  }
  if (near(g1.center) || near(g2.center))
    return adaptive_edge_or_throw(a_, b_, fn, opts_.adaptive_tol);
  return integrate_edge(a_, b_, fn, opts_.gauss_points);
}

double FaceIntegrator::smooth_poly(const std::function<double(const Point2&)>& f, bool adaptive,
                                   const PolyOnFace& p) const {
  auto fn = [&](const Point2& x) { return f(x) * p.eval(x); };
  if (adaptive) return adaptive_edge_or_throw(a_, b_, fn, spec_.adaptive_tol);
  return integrate_edge(a_, b_, fn, opts_.gauss_points);
}

double FaceIntegrator::smooth_homog(const std::function<double(const Point2&)>& f,
                                    const HomogeneousFn& g) const {
  auto fn = [&](const Point2& x) { return f(x) * g.f(x); };
  if (near(g.center)) return adaptive_edge_or_throw(a_, b_, fn, spec_.sing_edge_tol);
  return integrate_edge(a_, b_, fn, opts_.gauss_points);
}

double FaceIntegrator::generic_pair(const std::function<double(const Point2&)>& f,
                                    const std::function<double(const Point2&)>& g,
                                    bool adaptive) const {
  auto fn = [&](const Point2& x) { return f(x) * g(x); };
  if (adaptive) return adaptive_edge_or_throw(a_, b_, fn, spec_.adaptive_tol);
  return integrate_edge(a_, b_, fn, opts_.gauss_points);
}

} // namespace xhho
