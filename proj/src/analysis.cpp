#include "xhho/analysis.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "xhho/errors.hpp"

namespace xhho {

using Eigen::VectorXd;

ErrorReport compute_errors(const Mesh& mesh, const LocalOperatorsSet& ops,
                           const DiscreteSolution& sol, const DecomposedFn& exact) {
  ErrorReport rep;
  rep.h = mesh.h;
  rep.nb_cells = mesh.num_elements();
  rep.nb_internal_edges = mesh.num_internal_faces();
  rep.k = ops.k;
  rep.cell_condition = ops.max_cell_condition;

  const GlobalDofs iu = interpolate_global(ops, exact);

  double cell_num = 0.0, cell_den = 0.0, face_num = 0.0, face_den = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    cell_num += (sol.cell[e] - iu.cell[e]).squaredNorm();
    cell_den += iu.cell[e].squaredNorm();
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const double hF = mesh.faces[f].diameter;
    face_num += hF * (sol.face[f] - iu.face[f]).squaredNorm();
    face_den += hF * iu.face[f].squaredNorm();
  }

  double h1_num = 0.0, h1_den = 0.0, ea_num = 0.0, ea_den = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementOperators& op = ops.ops[e];
    const VectorXd pi = elliptic_project(ops, e, exact);
    const VectorXd d = sol.recon[e] - pi;
    h1_num += d.dot(op.G * d);
    h1_den += pi.dot(op.G * pi);

    const VectorXd vi = gather_local(ops, e, iu.cell, iu.face);
    const VectorXd vs = gather_local(ops, e, sol.cell, sol.face);
    const VectorXd diff = vs - vi;
    ea_num += diff.dot(op.aT * diff);
    ea_den += vi.dot(op.aT * vi);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.E0 = (cell_den > 0.0 && face_den > 0.0)
               ? std::sqrt(cell_num / cell_den) + std::sqrt(face_num / face_den)
               : nan;
  rep.E1 = h1_den > 0.0 ? std::sqrt(std::max(h1_num, 0.0) / h1_den) : nan;
  rep.Ea = ea_den > 0.0 ? std::sqrt(std::max(ea_num, 0.0) / ea_den) : nan;
  return rep;
}

double h1_error_vs_exact(const Mesh& mesh, const LocalOperatorsSet& ops,
                         const DiscreteSolution& sol, const DecomposedFn& exact) {
  double num = 0.0, den = 0.0;
  std::optional<Point2> singular;
  for (const auto& [c, sp] : exact.special)
    if (sp.singular_point) singular = sp.singular_point;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const CellBasis& ext = ops.ext[e];
    const Eigen::VectorXd& coeffs = sol.recon[e];
    auto mismatch = [&](const Point2& x) {
      Point2 g = -exact.grad_at(x);
      for (int i = 0; i < ext.dim(); ++i) g += coeffs(i) * ext.grad(i, x);
      return g.squaredNorm();
    };
    auto exact_sq = [&](const Point2& x) { return exact.grad_at(x).squaredNorm(); };
    const PolyGeom geom = poly_geom(mesh, e);
    const bool near = singular && point_polygon_distance(*singular, geom.pts) < geom.diameter;
    if (near) {
      num += adaptive_polygon_or_throw(geom, mismatch, 1e-9, singular);
      den += adaptive_polygon_or_throw(geom, exact_sq, 1e-9, singular);
    } else {
      num += integrate_polygon(geom, mismatch, ops.spec.enrich_cell_degree());
      den += integrate_polygon(geom, exact_sq, ops.spec.enrich_cell_degree());
    }
  }
  return std::sqrt(std::max(num, 0.0) / den);
}

RateSet convergence_rates(const std::vector<ErrorReport>& reports) {
  if (reports.size() < 2) throw ConfigError("convergence_rates needs at least 2 reports");
  RateSet rates;
  for (size_t i = 0; i + 1 < reports.size(); ++i) {
    const double lh = std::log(reports[i].h / reports[i + 1].h);
    if (!(reports[i].h > reports[i + 1].h))
      throw ConfigError("convergence_rates needs strictly decreasing h");
    auto rate = [lh](double e0, double e1) {
      if (!(e0 > 0.0) || !(e1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return std::log(e0 / e1) / lh;
    };
    rates.E0.push_back(rate(reports[i].E0, reports[i + 1].E0));
    rates.E1.push_back(rate(reports[i].E1, reports[i + 1].E1));
    rates.Ea.push_back(rate(reports[i].Ea, reports[i + 1].Ea));
  }
  return rates;
}

double least_squares_rate(const std::vector<double>& h, const std::vector<double>& e, int window) {
  const int n = static_cast<int>(h.size());
  const int m = std::min(window, n);
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - m; i < n; ++i) {
    if (!(e[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(h[i]);
    const double y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_table_header(std::ostream& out, bool ref_hk) {
  out << "MeshSize NbCells NbInternalEdges EdgeDegree L2Error H1Error EnergyError CellCondition";
  if (ref_hk) out << " LogH_slope";
  out << '\n';
}

void write_table_row(std::ostream& out, const ErrorReport& r, std::optional<double> ref_hk) {
  const auto flags = out.flags();
  out.precision(8);
  out << std::scientific << r.h << ' ' << r.nb_cells << ' ' << r.nb_internal_edges << ' ' << r.k
      << ' ' << r.E0 << ' ' << r.E1 << ' ' << r.Ea << ' ' << r.cell_condition;
  if (ref_hk) out << ' ' << *ref_hk;
  out << '\n';
  out.flags(flags);
}

} // namespace xhho
