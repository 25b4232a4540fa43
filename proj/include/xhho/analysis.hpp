#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xhho/assembly.hpp"

namespace xhho {

struct ErrorReport {
  double h = 0.0;
  int nb_cells = 0;
  int nb_internal_edges = 0;
  int k = 0;
  double E0 = 0.0; // relative L2 (cell + face parts)
  double E1 = 0.0; // relative broken H1 reconstruction error
  double Ea = 0.0; // relative discrete energy error
  double cell_condition = 1.0;
  double gamma = 0.0;
  std::string enrichment = "none";
};

/// The three relative error metrics of a solved run against an exact
/// solution with known gradient and decomposition.
ErrorReport compute_errors(const Mesh& mesh, const LocalOperatorsSet& ops,
                           const DiscreteSolution& sol, const DecomposedFn& exact);

/// Relative broken H1 distance of the reconstruction to the exact solution,
/// |p u_h - u|_{H1(Th)} / |u|_{H1(Th)}, by direct quadrature of the gradient
/// mismatch (adaptive near the singular point).
double h1_error_vs_exact(const Mesh& mesh, const LocalOperatorsSet& ops,
                         const DiscreteSolution& sol, const DecomposedFn& exact);

struct RateSet {
  std::vector<double> E0, E1, Ea; // pairwise rates between consecutive meshes
};

/// Pairwise rates log(e_i/e_{i+1}) / log(h_i/h_{i+1}); requires strictly
/// decreasing h.
RateSet convergence_rates(const std::vector<ErrorReport>& reports);

/// Least-squares slope of log(e) vs log(h) over the last `window` reports.
double least_squares_rate(const std::vector<double>& h, const std::vector<double>& e,
                          int window = 3);

/// Whitespace table, one row per run. `ref_hk` adds the LogH_slope column
/// (h^k reference line) used by the k-sweep.
void write_table_header(std::ostream& out, bool ref_hk);
void write_table_row(std::ostream& out, const ErrorReport& r, std::optional<double> ref_hk);

} // namespace xhho
