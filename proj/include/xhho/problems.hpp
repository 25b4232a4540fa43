#pragma once

#include <string>

#include "xhho/local_ops.hpp"

namespace xhho {

/// A benchmark: exact solution (decomposed), matching source term, Dirichlet
/// data (the exact trace), and the enrichment candidates a run may enable.
struct Problem {
  std::string name;
  Domain domain = Domain::Square;
  DecomposedFn exact;
  DecomposedFn source; // f = -lap(u)
  std::vector<EnrichmentFunction> enrichment; // what --enrichment turns on
  Point2 singular_point = Point2::Zero();     // cut-off center for T_gamma
};

/// L-shape with one re-entrant corner at the origin:
///   u = sin(pi x1) sin(pi x2) + r^alpha sin(alpha (theta - pi/2)),
/// alpha = pi/omega, f = 2 pi^2 sin(pi x1) sin(pi x2).
Problem lshape_corner(double omega = 1.5 * M_PI);

/// Oscillatory solution on the unit square:
///   u = sin(pi x1) sin(pi x2) + sin(1/(rhat^2 + eps)),
/// rhat the distance to (0.5, 0.5).
Problem square_oscillatory(double epsilon = 0.05);

/// Harmonic polynomial solutions of degree 1..3 (f = 0) for exactness tests:
/// "linear", "quadratic", "cubic"; "corner_pure" is u = psi alone on the
/// L-shape. Throws ConfigError for unknown names.
Problem custom_problem(const std::string& name, double omega = 1.5 * M_PI);

/// Lookup by CLI name (lshape_corner, square_oscillatory, or a custom id).
Problem make_problem(const std::string& name, double omega, double epsilon);

} // namespace xhho
