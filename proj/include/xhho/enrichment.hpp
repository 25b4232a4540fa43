#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xhho/geometry.hpp"
#include "xhho/mesh.hpp"

namespace xhho {

/// f(c + lambda*x) = lambda^degree * f(c + x) about the given center.
struct Homogeneity {
  double degree;
  Point2 center;
};

/// A known non-polynomial solution feature with the metadata quadrature
/// needs: whether it is harmonic, where it is singular, and whether it is
/// homogeneous (which enables exact boundary-reduction integration).
struct EnrichmentFunction {
  std::string label;
  std::function<double(const Point2&)> value;
  std::function<Point2(const Point2&)> gradient;
  std::function<double(const Point2&)> laplacian; // identically 0 when harmonic
  bool harmonic = false;
  std::optional<Point2> singular_point;
  std::optional<Homogeneity> homogeneity;
};

/// Corner singular function u_j about the origin, with the angular variable
/// theta - theta_offset wrapped into [0, omega]:
///   u_j = r^(j*pi/omega) sin((j*pi/omega)(theta - theta_offset))
/// or, when j*pi/omega is an integer, the logarithmic variant
///   r^m (ln r sin(m phi) + phi cos(m phi)).
/// Both branches are harmonic and vanish on the arms phi = 0 and phi = omega.
/// Requires pi < omega < 2*pi (the slit-domain limit is rejected).
EnrichmentFunction corner_singular_function(int j, double omega, double theta_offset);

/// psi = sin(1/(rhat^2 + epsilon)) with rhat the distance to center. Smooth
/// everywhere, not harmonic; the Laplacian is provided in closed form.
EnrichmentFunction oscillatory_function(double epsilon, const Point2& center);

/// Static cut-off enrichment: elements whose centroid lies within distance
/// gamma of the singular point, plus every face touching one of them.
/// gamma = 0 disables enrichment; gamma = +inf enriches globally.
struct EnrichmentSpace {
  std::vector<EnrichmentFunction> functions;
  std::set<int> enriched_elements; // T_gamma
  std::set<int> enriched_faces;    // F_gamma
  double gamma = 0.0;
  Point2 cutoff_center = Point2::Zero();

  bool empty() const { return functions.empty() || enriched_elements.empty(); }
  bool element_enriched(int e) const { return enriched_elements.count(e) > 0; }
  bool face_enriched(int f) const { return enriched_faces.count(f) > 0; }
  bool all_harmonic() const;
};

EnrichmentSpace build_enrichment_space(const Mesh& mesh, std::vector<EnrichmentFunction> functions,
                                       double gamma, const Point2& singular_point);

} // namespace xhho
