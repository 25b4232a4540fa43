// Test-only reference integrators, independent of the library's quadrature
// machinery: recursive adaptive Simpson in 1D, nested polar integration for
// singular integrands, and finite-difference derivative checks.
#pragma once

#include <cmath>
#include <functional>

#include "xhho/geometry.hpp"

namespace oracle {

using Fn1 = std::function<double(double)>;

inline double simpson(const Fn1& f, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const Fn1& f, double a, double b, double fa, double fm,
                                   double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on [a,b]; singular endpoints are fine as long as the
/// integrand is never evaluated exactly there (pass a slightly shrunk range
/// when it would be, or rely on the limit existing).
inline double integrate_1d(const Fn1& f, double a, double b, double tol = 1e-11,
                           int max_depth = 52) {
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Integral of f over the sector theta in [t0,t1], r in (0, R(theta)] in
/// polar coordinates about `center` (measure r dr dtheta). Handles r^alpha
/// singularities at the center for alpha > -2.
inline double integrate_polar(const std::function<double(const xhho::Point2&)>& f,
                              const xhho::Point2& center, double t0, double t1,
                              const std::function<double(double)>& radius, double tol = 1e-10) {
  auto inner = [&](double theta) {
    const double R = radius(theta);
    auto g = [&](double r) {
      const xhho::Point2 x = center + r * xhho::Point2(std::cos(theta), std::sin(theta));
      return f(x) * r;
    };
    // split off the singular end so Simpson never sees r = 0
    const double eps = 1e-13 * R;
    return integrate_1d(g, eps, R, tol * 1e-2);
  };
  return integrate_1d(inner, t0, t1, tol);
}

/// Radius function of the axis-aligned square [x0,x0+s] x [y0,y0+s] seen from
/// one of its corners sitting at the origin.
struct CornerSquareRadius {
  double s;
  double t_lo, t_hi; // angular range of the square from the corner
  double operator()(double theta) const {
    const double c = std::abs(std::cos(theta)), si = std::abs(std::sin(theta));
    return s / std::max(c, si);
  }
};

inline xhho::Point2 fd_gradient(const std::function<double(const xhho::Point2&)>& f,
                                const xhho::Point2& x, double h = 1e-6) {
  return xhho::Point2((f(x + xhho::Point2(h, 0)) - f(x - xhho::Point2(h, 0))) / (2 * h),
                      (f(x + xhho::Point2(0, h)) - f(x - xhho::Point2(0, h))) / (2 * h));
}

inline double fd_laplacian(const std::function<double(const xhho::Point2&)>& f,
                           const xhho::Point2& x, double h = 1e-4) {
  return (f(x + xhho::Point2(h, 0)) + f(x - xhho::Point2(h, 0)) + f(x + xhho::Point2(0, h)) +
          f(x - xhho::Point2(0, h)) - 4.0 * f(x)) /
         (h * h);
}

} // namespace oracle
