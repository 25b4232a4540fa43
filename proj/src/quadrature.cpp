#include "xhho/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

#include "xhho/errors.hpp"

namespace xhho {

QuadCounters& quad_counters() {
  static QuadCounters counters;
  return counters;
}

// ---------------------------------------------------------------------------
// Geometry carriers
// ---------------------------------------------------------------------------

PolyGeom make_poly_geom(const std::vector<Point2>& ccw_pts) {
  PolyGeom T;
  T.pts = ccw_pts;
  const int n = static_cast<int>(ccw_pts.size());
  double area2 = 0.0;
  Point2 c(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const Point2& a = ccw_pts[i];
    const Point2& b = ccw_pts[(i + 1) % n];
    const double w = cross2(a, b);
    area2 += w;
    c += w * (a + b);
  }
  T.area = 0.5 * area2;
  T.centroid = c / (3.0 * area2);
  T.diameter = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) T.diameter = std::max(T.diameter, (ccw_pts[i] - ccw_pts[j]).norm());
  T.edges.resize(n);
  for (int i = 0; i < n; ++i) {
    EdgeGeom& e = T.edges[i];
    e.a = ccw_pts[i];
    e.b = ccw_pts[(i + 1) % n];
    e.length = (e.b - e.a).norm();
    e.midpoint = 0.5 * (e.a + e.b);
    e.outward_normal = rot_minus90(e.b - e.a) / e.length;
  }
  return T;
}

PolyGeom poly_geom(const Mesh& mesh, int elem) { return make_poly_geom(mesh.polygon(elem)); }

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    x[n - 1 - i] = xi;
    w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  return {x, w};
}

} // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(npoints);
  if (it == cache.end()) it = cache.emplace(npoints, compute_gauss_legendre(npoints)).first;
  return it->second;
}

EdgeRule edge_rule(const Point2& a, const Point2& b, int degree) {
  const int n = std::max(1, degree / 2 + 1); // exactness 2n-1 >= degree
  const auto& [x, w] = gauss_legendre(n);
  EdgeRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a).norm();
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (a + b) + 0.5 * x[i] * (b - a);
    rule.weights[i] = w[i] * half;
  }
  return rule;
}

namespace {

// Collapsed tensor rule on a triangle: map [0,1]^2 -> reference simplex via
// (u,v) -> (u(1-v), uv) with Jacobian u, then affine to (p0,p1,p2).
void append_triangle_rule(const Point2& p0, const Point2& p1, const Point2& p2, int degree,
                          std::vector<Point2>& pts, std::vector<double>& wts) {
  const int nu = (degree + 2) / 2 + 1;
  const int nv = (degree + 1) / 2 + 1;
  const auto& [xu, wu] = gauss_legendre(nu);
  const auto& [xv, wv] = gauss_legendre(nv);
  const double jac = 2.0 * (0.5 * cross2(p1 - p0, p2 - p0)); // 2*area
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      const double xi = u * (1.0 - v);
      const double eta = u * v;
      pts.push_back(p0 + xi * (p1 - p0) + eta * (p2 - p0));
      wts.push_back(0.25 * wu[i] * wv[j] * u * jac);
    }
  }
}

} // namespace

PolygonRule polygon_rule(const PolyGeom& T, int degree) {
  PolygonRule rule;
  if (T.pts.size() == 3) {
    append_triangle_rule(T.pts[0], T.pts[1], T.pts[2], degree, rule.points, rule.weights);
    return rule;
  }
  for (const EdgeGeom& e : T.edges)
    append_triangle_rule(T.centroid, e.a, e.b, degree, rule.points, rule.weights);
  return rule;
}

double integrate_polygon(const PolyGeom& T, const std::function<double(const Point2&)>& f, int degree) {
  const PolygonRule rule = polygon_rule(T, degree);
  double s = 0.0;
  for (size_t i = 0; i < rule.points.size(); ++i) s += rule.weights[i] * f(rule.points[i]);
  return s;
}

double integrate_edge(const Point2& a, const Point2& b, const std::function<double(const Point2&)>& f,
                      int npoints) {
  ++quad_counters().gauss_edge_calls;
  const auto& [x, w] = gauss_legendre(npoints);
  const double half = 0.5 * (b - a).norm();
  double s = 0.0;
  for (int i = 0; i < npoints; ++i) s += w[i] * half * f(0.5 * (a + b) + 0.5 * x[i] * (b - a));
  return s;
}

// ---------------------------------------------------------------------------
// Scaled monomials
// ---------------------------------------------------------------------------

namespace {
double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}
} // namespace

double ScaledMonomial::eval(const Point2& p) const {
  const double sx = (p.x() - origin.x()) / h;
  const double sy = (p.y() - origin.y()) / h;
  return ipow(sx, ax) * ipow(sy, ay);
}

Point2 ScaledMonomial::grad(const Point2& p) const {
  const double sx = (p.x() - origin.x()) / h;
  const double sy = (p.y() - origin.y()) / h;
  const double gx = ax == 0 ? 0.0 : ax * ipow(sx, ax - 1) * ipow(sy, ay) / h;
  const double gy = ay == 0 ? 0.0 : ay * ipow(sx, ax) * ipow(sy, ay - 1) / h;
  return Point2(gx, gy);
}

double ScaledMonomial::laplacian(const Point2& p) const {
  const double sx = (p.x() - origin.x()) / h;
  const double sy = (p.y() - origin.y()) / h;
  double lap = 0.0;
  if (ax >= 2) lap += ax * (ax - 1) * ipow(sx, ax - 2) * ipow(sy, ay);
  if (ay >= 2) lap += ay * (ay - 1) * ipow(sx, ax) * ipow(sy, ay - 2);
  return lap / (h * h);
}

// ---------------------------------------------------------------------------
// Radial edges and the vertex-term recursion
// ---------------------------------------------------------------------------

bool is_radial_edge(const Point2& a, const Point2& b, const Point2& c, double angle_tol) {
  const double ra = (a - c).norm();
  const double rb = (b - c).norm();
  const double scale = std::max(ra, rb);
  if (scale == 0.0) return false;
  const double endpoint_tol = 1e-14 * scale;
  if (ra <= endpoint_tol || rb <= endpoint_tol) return true; // endpoint at the singular point
  double dtheta = std::atan2(b.y() - c.y(), b.x() - c.x()) - std::atan2(a.y() - c.y(), a.x() - c.x());
  dtheta = std::remainder(dtheta, 2.0 * M_PI);
  return std::abs(dtheta) <= angle_tol;
}

namespace {

// True when the singular point lies strictly between the endpoints on the
// segment's carrier line (the recursion is not applicable there).
bool passes_through_interior(const Point2& a, const Point2& b, const Point2& c) {
  const double len = (b - a).norm();
  if (point_segment_distance(c, a, b) > 1e-13 * len) return false;
  const double ra = (a - c).norm(), rb = (b - c).norm();
  return ra > 1e-13 * len && rb > 1e-13 * len &&
         (a - c).dot(b - c) < 0.0; // opposite sides
}

struct RadialEdgeCtx {
  Point2 a, b;      // endpoints
  Point2 y0;        // monomial origin relative to the homogeneity center
  const HomogeneousFn* g;
  double h;         // monomial scaling
  std::map<std::pair<int, int>, double> memo;
};

// Vertex term |y| g(x) phi(x); identically zero at the singular point as long
// as 1 + beta + q > 0, so never evaluate g there.
double vertex_term(const RadialEdgeCtx& ctx, const Point2& x, const ScaledMonomial& m) {
  const double r = (x - ctx.g->center).norm();
  if (r <= 1e-300) return 0.0;
  return r * ctx.g->f(x) * m.eval(x);
}

double radial_edge_recurse(RadialEdgeCtx& ctx, int ax, int ay) {
  const auto key = std::make_pair(ax, ay);
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) return it->second;
  ++quad_counters().singular_edge_recursions;

  ScaledMonomial m{ax, ay, ctx.g->center + ctx.y0, ctx.h};
  const int q = ax + ay;
  const double coeff = 1.0 + ctx.g->degree + q;
  if (!(coeff > 0.0))
    throw std::invalid_argument("radial edge recursion: 1 + beta + q must be positive");

  double value = vertex_term(ctx, ctx.b, m) - vertex_term(ctx, ctx.a, m);
  // account for the orientation of increasing r along the segment
  const double ra = (ctx.a - ctx.g->center).norm();
  const double rb = (ctx.b - ctx.g->center).norm();
  if (ra > rb) value = -value;

  if (ax > 0 && ctx.y0.x() != 0.0)
    value -= ctx.y0.x() * (ax / ctx.h) * radial_edge_recurse(ctx, ax - 1, ay);
  if (ay > 0 && ctx.y0.y() != 0.0)
    value -= ctx.y0.y() * (ay / ctx.h) * radial_edge_recurse(ctx, ax, ay - 1);

  value /= coeff;
  ctx.memo.emplace(key, value);
  return value;
}

double edge_center_distance(const Point2& a, const Point2& b, const Point2& c) {
  return point_segment_distance(c, a, b);
}

} // namespace

double integrate_singular_edge(const Point2& a, const Point2& b, const HomogeneousFn& g,
                               const ScaledMonomial& m, const EdgeOpts& opts) {
  if (passes_through_interior(a, b, g.center))
    throw std::invalid_argument(
        "integrate_singular_edge: segment passes strictly through the singular point");

  if (is_radial_edge(a, b, g.center, opts.radial_tol)) {
    RadialEdgeCtx ctx{a, b, m.origin - g.center, &g, m.h, {}};
    return radial_edge_recurse(ctx, m.ax, m.ay);
  }

  auto integrand = [&](const Point2& x) { return g.f(x) * m.eval(x); };
  const double len = (b - a).norm();
  if (edge_center_distance(a, b, g.center) < opts.near_factor * len) {
    ++quad_counters().adaptive_calls;
    return adaptive_edge_or_throw(a, b, integrand, opts.adaptive_tol);
  }
  return integrate_edge(a, b, integrand, opts.gauss_points);
}

double integrate_radial_edge_rpoly(const Point2& a, const Point2& b, const HomogeneousFn& g,
                                   const std::vector<double>& coeffs) {
  const double ra = (a - g.center).norm();
  const double rb = (b - g.center).norm();
  const double r0 = std::min(ra, rb);
  const double r1 = std::max(ra, rb);
  const Point2 far = (ra > rb) ? a : b;
  const Point2 unit_dir = (far - g.center) / r1;
  const double g_unit = g.f(g.center + unit_dir); // g(x(r)) = r^beta * g_unit
  double value = 0.0;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    const double p = g.degree + static_cast<double>(k) + 1.0;
    double primitive;
    if (std::abs(p) < 1e-14)
      primitive = std::log(r1) - (r0 > 0.0 ? std::log(r0) : std::log(r1)); // p==0 needs r0>0
    else
      primitive = (std::pow(r1, p) - (r0 > 0.0 ? std::pow(r0, p) : 0.0)) / p;
    value += coeffs[k] * primitive;
  }
  return g_unit * value;
}

// ---------------------------------------------------------------------------
// Volume recursion
// ---------------------------------------------------------------------------

namespace {

struct VolumeCtx {
  const PolyGeom* T;
  const HomogeneousFn* g;
  Point2 y0; // monomial origin relative to the homogeneity center
  double h;
  const EdgeOpts* opts;
  std::map<std::pair<int, int>, double> memo;
  int max_level = 0;
};

double volume_recurse(VolumeCtx& ctx, int ax, int ay, int level) {
  ctx.max_level = std::max(ctx.max_level, level);
  const auto key = std::make_pair(ax, ay);
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) return it->second;

  ScaledMonomial m{ax, ay, ctx.g->center + ctx.y0, ctx.h};
  const int q = ax + ay;
  const double coeff = 2.0 + ctx.g->degree + q; // d = 2
  if (!(coeff > 0.0))
    throw std::invalid_argument("volume recursion: d + beta + q must be positive");

  double value = 0.0;
  for (const EdgeGeom& e : ctx.T->edges) {
    const double xn = (e.midpoint - ctx.g->center).dot(e.outward_normal);
    if (xn == 0.0) continue;
    value += xn * integrate_singular_edge(e.a, e.b, *ctx.g, m, *ctx.opts);
  }
  if (ax > 0 && ctx.y0.x() != 0.0)
    value -= ctx.y0.x() * (ax / ctx.h) * volume_recurse(ctx, ax - 1, ay, level + 1);
  if (ay > 0 && ctx.y0.y() != 0.0)
    value -= ctx.y0.y() * (ay / ctx.h) * volume_recurse(ctx, ax, ay - 1, level + 1);

  value /= coeff;
  ctx.memo.emplace(key, value);
  return value;
}

} // namespace

double integrate_singular_volume(const PolyGeom& T, const HomogeneousFn& g, const ScaledMonomial& m,
                                 const EdgeOpts& opts) {
  ++quad_counters().singular_volume_calls;
  if (point_strictly_inside(g.center, T.pts))
    throw std::invalid_argument(
        "integrate_singular_volume: homogeneity center strictly inside the element");
  VolumeCtx ctx{&T, &g, m.origin - g.center, m.h, &opts, {}, 0};
  const double value = volume_recurse(ctx, m.ax, m.ay, 1);
  quad_counters().last_volume_levels = ctx.max_level;
  return value;
}

double integrate_gradient_stiffness(
    const PolyGeom& T, const std::function<HomogeneousFn(const EdgeGeom&)>& grad_psi_dot_n,
    const ScaledMonomial& m, const EdgeOpts& opts) {
  double value = 0.0;
  for (const EdgeGeom& e : T.edges) {
    const HomogeneousFn trace = grad_psi_dot_n(e);
    value += integrate_singular_edge(e.a, e.b, trace, m, opts);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Adaptive oracle (worst-first global refinement)
// ---------------------------------------------------------------------------

namespace {

struct Seg {
  Point2 a, b;
  double value; // GL15
  double err;   // |GL15 - GL7|, zeroed below the rounding noise floor
  int depth;
};

// An error estimate cannot be meaningful below eps * max|f| * measure; treat
// such nodes as exact so integrands that are pure rounding noise (analytic
// zeros) terminate instead of stalling the refinement queue.
double noise_floor(double fmax, double measure) {
  return 32.0 * std::numeric_limits<double>::epsilon() * fmax * measure;
}

Seg make_seg(const Point2& a, const Point2& b, const std::function<double(const Point2&)>& f,
             int depth) {
  Seg s{a, b, 0.0, 0.0, depth};
  const auto& [x, w] = gauss_legendre(15);
  const double half = 0.5 * (b - a).norm();
  double fine = 0.0, fmax = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(0.5 * (a + b) + 0.5 * x[i] * (b - a));
    fine += w[i] * half * v;
    fmax = std::max(fmax, std::abs(v));
  }
  s.value = fine;
  const double coarse = integrate_edge(a, b, f, 7);
  s.err = std::abs(s.value - coarse);
  if (s.err <= noise_floor(fmax, 2.0 * half)) s.err = 0.0;
  return s;
}

struct Tri {
  Point2 p0, p1, p2;
  double value; // higher-degree rule
  double err;
  int depth;
};

double tri_rule(const Point2& p0, const Point2& p1, const Point2& p2,
                const std::function<double(const Point2&)>& f, int degree) {
  std::vector<Point2> pts;
  std::vector<double> wts;
  append_triangle_rule(p0, p1, p2, degree, pts, wts);
  double s = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) s += wts[i] * f(pts[i]);
  return s;
}

Tri make_tri(const Point2& p0, const Point2& p1, const Point2& p2,
             const std::function<double(const Point2&)>& f, int depth) {
  Tri t{p0, p1, p2, 0.0, 0.0, depth};
  std::vector<Point2> pts;
  std::vector<double> wts;
  append_triangle_rule(p0, p1, p2, 11, pts, wts);
  double fine = 0.0, fmax = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double v = f(pts[i]);
    fine += wts[i] * v;
    fmax = std::max(fmax, std::abs(v));
  }
  t.value = fine;
  const double coarse = tri_rule(p0, p1, p2, f, 5);
  t.err = std::abs(t.value - coarse);
  const double area = 0.5 * std::abs(cross2(p1 - p0, p2 - p0));
  if (t.err <= noise_floor(fmax, area)) t.err = 0.0;
  return t;
}

template <typename Node>
AdaptiveResult run_adaptive(std::vector<Node> initial, double tol,
                            const std::function<std::vector<Node>(const Node&)>& split,
                            int max_depth, long max_nodes) {
  auto cmp = [](const Node& x, const Node& y) { return x.err < y.err; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
  double total = 0.0, total_err = 0.0, scale = 0.0;
  for (const Node& n : initial) {
    total += n.value;
    total_err += n.err;
    scale += std::abs(n.value);
    queue.push(n);
  }
  scale = std::max(scale, 1e-280);
  long nodes = static_cast<long>(initial.size());

  while (total_err > tol * scale && !queue.empty() && nodes < max_nodes) {
    const Node worst = queue.top();
    if (worst.err <= 0.0) break;
    queue.pop();
    total -= worst.value;
    total_err -= worst.err;
    if (worst.depth >= max_depth) {
      // freeze this node: keep its contribution, drop its error from the queue
      total += worst.value;
      continue;
    }
    for (Node& child : split(worst)) {
      total += child.value;
      total_err += child.err;
      scale = std::max(scale, std::abs(total));
      queue.push(std::move(child));
      ++nodes;
    }
  }

  AdaptiveResult res;
  res.value = total;
  res.achieved_tol = total_err / scale;
  res.converged = total_err <= tol * scale;
  return res;
}

} // namespace

AdaptiveResult adaptive_edge(const Point2& a, const Point2& b,
                             const std::function<double(const Point2&)>& f, double tol,
                             const std::optional<Point2>& singular) {
  ++quad_counters().adaptive_calls;
  std::vector<Seg> initial;
  if (singular) {
    // land the initial split on the singular point when it cuts the segment
    const double len = (b - a).norm();
    const double t = (*singular - a).dot(b - a) / (len * len);
    if (t > 1e-12 && t < 1.0 - 1e-12 && point_segment_distance(*singular, a, b) < 1e-12 * len) {
      const Point2 mid = a + t * (b - a);
      initial.push_back(make_seg(a, mid, f, 0));
      initial.push_back(make_seg(mid, b, f, 0));
    }
  }
  if (initial.empty()) initial.push_back(make_seg(a, b, f, 0));

  std::function<std::vector<Seg>(const Seg&)> split = [&](const Seg& s) {
    const Point2 mid = 0.5 * (s.a + s.b);
    return std::vector<Seg>{make_seg(s.a, mid, f, s.depth + 1), make_seg(mid, s.b, f, s.depth + 1)};
  };
  return run_adaptive<Seg>(std::move(initial), tol, split, 60, 40000);
}

AdaptiveResult adaptive_polygon(const PolyGeom& T, const std::function<double(const Point2&)>& f,
                                double tol, const std::optional<Point2>& singular) {
  ++quad_counters().adaptive_calls;
  std::vector<Tri> initial;
  // Fan about the singular point when it is a polygon vertex (clusters the
  // subdivision on it); otherwise fan about the centroid. A triangle without
  // a declared singular vertex is its own initial node.
  Point2 apex = T.centroid;
  bool singular_vertex = false;
  if (singular) {
    for (const Point2& p : T.pts)
      if ((p - *singular).norm() < 1e-13 * T.diameter) {
        apex = p;
        singular_vertex = true;
        break;
      }
  }
  if (T.pts.size() == 3 && !singular_vertex) {
    initial.push_back(make_tri(T.pts[0], T.pts[1], T.pts[2], f, 0));
  } else {
    for (const EdgeGeom& e : T.edges) {
      const double doubled = cross2(e.a - apex, e.b - apex);
      if (std::abs(doubled) < 1e-300) continue; // apex on this edge
      initial.push_back(make_tri(apex, e.a, e.b, f, 0));
    }
  }

  std::function<std::vector<Tri>(const Tri&)> split = [&](const Tri& t) {
    const Point2 m01 = 0.5 * (t.p0 + t.p1), m12 = 0.5 * (t.p1 + t.p2), m20 = 0.5 * (t.p2 + t.p0);
    return std::vector<Tri>{make_tri(t.p0, m01, m20, f, t.depth + 1),
                            make_tri(m01, t.p1, m12, f, t.depth + 1),
                            make_tri(m20, m12, t.p2, f, t.depth + 1),
                            make_tri(m01, m12, m20, f, t.depth + 1)};
  };
  return run_adaptive<Tri>(std::move(initial), tol, split, 50, 200000);
}

double adaptive_edge_or_throw(const Point2& a, const Point2& b,
                              const std::function<double(const Point2&)>& f, double tol,
                              const std::optional<Point2>& singular) {
  const AdaptiveResult res = adaptive_edge(a, b, f, tol, singular);
  if (!res.converged)
    throw QuadratureError(res.achieved_tol, "adaptive edge quadrature stalled at tolerance " +
                                                std::to_string(res.achieved_tol));
  return res.value;
}

double adaptive_polygon_or_throw(const PolyGeom& T, const std::function<double(const Point2&)>& f,
                                 double tol, const std::optional<Point2>& singular) {
  const AdaptiveResult res = adaptive_polygon(T, f, tol, singular);
  if (!res.converged)
    throw QuadratureError(res.achieved_tol, "adaptive polygon quadrature stalled at tolerance " +
                                                std::to_string(res.achieved_tol));
  return res.value;
}

} // namespace xhho
