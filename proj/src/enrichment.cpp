#include "xhho/enrichment.hpp"

#include <cmath>

#include "xhho/errors.hpp"

namespace xhho {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Wrap theta - offset into [0, 2*pi), then clamp roundoff stragglers that
// land in the cut sector back onto the nearest arm.
double sector_angle(const Point2& x, double theta_offset, double omega) {
  double phi = std::atan2(x.y(), x.x()) - theta_offset;
  phi -= kTwoPi * std::floor(phi / kTwoPi);
  if (phi > omega) phi = (phi - omega < kTwoPi - phi) ? omega : 0.0;
  return phi;
}

} // namespace

bool EnrichmentSpace::all_harmonic() const {
  for (const EnrichmentFunction& f : functions)
    if (!f.harmonic) return false;
  return true;
}

EnrichmentFunction corner_singular_function(int j, double omega, double theta_offset) {
  if (j < 1) throw ConfigError("corner singular function needs j >= 1");
  if (!(omega > M_PI && omega < kTwoPi))
    throw ConfigError("corner angle omega must lie in (pi, 2*pi); the slit limit is excluded");

  const double alpha = j * M_PI / omega;
  const double nearest = std::round(alpha);
  const bool log_branch = std::abs(alpha - nearest) < 1e-12;

  EnrichmentFunction fn;
  fn.harmonic = true;
  fn.singular_point = Point2(0.0, 0.0);

  if (!log_branch) {
    fn.label = "corner_j" + std::to_string(j);
    fn.homogeneity = Homogeneity{alpha, Point2(0.0, 0.0)};
    fn.value = [alpha, theta_offset, omega](const Point2& x) {
      const double r = x.norm();
      if (r == 0.0) return 0.0;
      const double phi = sector_angle(x, theta_offset, omega);
      return std::pow(r, alpha) * std::sin(alpha * phi);
    };
    fn.gradient = [alpha, theta_offset, omega](const Point2& x) {
      const double r = x.norm();
      const double phi = sector_angle(x, theta_offset, omega);
      const double theta = std::atan2(x.y(), x.x());
      const double ra = alpha * std::pow(r, alpha - 1.0);
      const Point2 er(std::cos(theta), std::sin(theta));
      const Point2 et(-std::sin(theta), std::cos(theta));
      return Point2(ra * (std::sin(alpha * phi) * er + std::cos(alpha * phi) * et));
    };
  } else {
    // Im(z^m log z): harmonic, vanishing on both arms, but not homogeneous.
    const double m = nearest;
    fn.label = "corner_log_j" + std::to_string(j);
    fn.value = [m, theta_offset, omega](const Point2& x) {
      const double r = x.norm();
      if (r == 0.0) return 0.0;
      const double phi = sector_angle(x, theta_offset, omega);
      return std::pow(r, m) * (std::log(r) * std::sin(m * phi) + phi * std::cos(m * phi));
    };
    fn.gradient = [m, theta_offset, omega](const Point2& x) {
      const double r = x.norm();
      const double phi = sector_angle(x, theta_offset, omega);
      const double theta = std::atan2(x.y(), x.x());
      const double rm1 = std::pow(r, m - 1.0);
      const double lr = std::log(r);
      const double ur = rm1 * (m * (lr * std::sin(m * phi) + phi * std::cos(m * phi)) + std::sin(m * phi));
      const double ut = rm1 * (m * lr * std::cos(m * phi) + std::cos(m * phi) - m * phi * std::sin(m * phi));
      const Point2 er(std::cos(theta), std::sin(theta));
      const Point2 et(-std::sin(theta), std::cos(theta));
      return Point2(ur * er + ut * et);
    };
  }
  fn.laplacian = [](const Point2&) { return 0.0; };
  return fn;
}

EnrichmentFunction oscillatory_function(double epsilon, const Point2& center) {
  if (!(epsilon > 0.0)) throw ConfigError("oscillatory enrichment needs epsilon > 0");

  EnrichmentFunction fn;
  fn.label = "oscillatory";
  fn.harmonic = false;
  fn.value = [epsilon, center](const Point2& x) {
    const double s = (x - center).squaredNorm() + epsilon;
    return std::sin(1.0 / s);
  };
  fn.gradient = [epsilon, center](const Point2& x) {
    const Point2 d = x - center;
    const double s = d.squaredNorm() + epsilon;
    return Point2(-2.0 * std::cos(1.0 / s) / (s * s) * d);
  };
  // With s = rhat^2 + eps and u = 1/s:
  //   lap psi = -sin(u)|grad u|^2 + cos(u) lap u,
  //   |grad u|^2 = 4 rhat^2 / s^4,  lap u = 8 rhat^2 / s^3 - 4 / s^2.
  fn.laplacian = [epsilon, center](const Point2& x) {
    const double r2 = (x - center).squaredNorm();
    const double s = r2 + epsilon;
    const double u = 1.0 / s;
    return -std::sin(u) * 4.0 * r2 / (s * s * s * s) + std::cos(u) * (8.0 * r2 / (s * s * s) - 4.0 / (s * s));
  };
  return fn;
}

EnrichmentSpace build_enrichment_space(const Mesh& mesh, std::vector<EnrichmentFunction> functions,
                                       double gamma, const Point2& singular_point) {
  if (gamma < 0.0) throw ConfigError("cut-off gamma must be >= 0");

  EnrichmentSpace space;
  space.functions = std::move(functions);
  space.gamma = gamma;
  space.cutoff_center = singular_point;
  if (gamma == 0.0 || space.functions.empty()) return space;

  for (int e = 0; e < mesh.num_elements(); ++e)
    if ((singular_point - mesh.elements[e].centroid).norm() < gamma)
      space.enriched_elements.insert(e);

  for (int e : space.enriched_elements)
    for (int f : mesh.elements[e].face_ids) space.enriched_faces.insert(f);

  return space;
}

} // namespace xhho
