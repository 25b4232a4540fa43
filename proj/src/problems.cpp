#include "xhho/problems.hpp"

#include <cmath>

#include "xhho/errors.hpp"

namespace xhho {

namespace {

void set_sine_product(DecomposedFn& fn) {
  fn.smooth = [](const Point2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
  fn.smooth_grad = [](const Point2& x) {
    return Point2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                  M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  };
}

} // namespace

Problem lshape_corner(double omega) {
  Problem p;
  p.name = "lshape_corner";
  p.domain = Domain::LShape;
  p.singular_point = Point2(0.0, 0.0);

  const EnrichmentFunction psi = corner_singular_function(1, omega, M_PI / 2.0);
  set_sine_product(p.exact);
  p.exact.special.emplace_back(1.0, psi);

  p.source.smooth = [](const Point2& x) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  p.enrichment = {psi};
  return p;
}

Problem square_oscillatory(double epsilon) {
  Problem p;
  p.name = "square_oscillatory";
  p.domain = Domain::Square;
  p.singular_point = Point2(0.5, 0.5);

  const EnrichmentFunction psi = oscillatory_function(epsilon, p.singular_point);
  set_sine_product(p.exact);
  p.exact.special.emplace_back(1.0, psi);

  p.source.smooth = [lap = psi.laplacian](const Point2& x) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()) - lap(x);
  };
  p.source.smooth_adaptive = true;
  p.enrichment = {psi};
  return p;
}

Problem custom_problem(const std::string& name, double omega) {
  Problem p;
  p.name = name;
  p.domain = Domain::LShape;
  p.singular_point = Point2(0.0, 0.0);
  p.source.smooth = nullptr; // all custom solutions are harmonic

  if (name == "linear") {
    p.exact.smooth = [](const Point2& x) { return x.x() + x.y(); };
    p.exact.smooth_grad = [](const Point2&) { return Point2(1.0, 1.0); };
    return p;
  }
  if (name == "quadratic") {
    p.exact.smooth = [](const Point2& x) { return x.x() * x.x() - x.y() * x.y(); };
    p.exact.smooth_grad = [](const Point2& x) { return Point2(2.0 * x.x(), -2.0 * x.y()); };
    return p;
  }
  if (name == "cubic") {
    p.exact.smooth = [](const Point2& x) {
      return x.x() * x.x() * x.x() - 3.0 * x.x() * x.y() * x.y();
    };
    p.exact.smooth_grad = [](const Point2& x) {
      return Point2(3.0 * (x.x() * x.x() - x.y() * x.y()), -6.0 * x.x() * x.y());
    };
    return p;
  }
  if (name == "corner_pure") {
    const EnrichmentFunction psi = corner_singular_function(1, omega, M_PI / 2.0);
    p.exact.special.emplace_back(1.0, psi);
    p.enrichment = {psi};
    return p;
  }
  throw ConfigError("unknown problem '" + name + "'");
}

Problem make_problem(const std::string& name, double omega, double epsilon) {
  if (name == "lshape_corner") return lshape_corner(omega);
  if (name == "square_oscillatory") return square_oscillatory(epsilon);
  return custom_problem(name, omega);
}

} // namespace xhho
