#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "xhho/analysis.hpp"
#include "xhho/problems.hpp"

namespace xhho {

struct RunConfig {
  std::string problem = "lshape_corner";
  std::string mesh_family = "cartesian"; // cartesian | triangular | file
  std::vector<int> refinements = {2, 4, 8};
  std::vector<std::string> mesh_files;
  int k_min = 1, k_max = 1;
  bool ksweep = false; // k range on a single mesh, with the h^k reference column
  double gamma = 0.0;
  std::string enrichment = "none"; // none | corner | oscillatory
  double omega = 1.5 * M_PI;
  double epsilon = 0.05;
  StabVariant stab = StabVariant::L2;
  SolverOptions solver;
  int quad_safety = 0;
};

struct RunRow {
  int mesh_index = 0;
  int k = 0;
  bool ok = false;
  ErrorReport report;
  std::string failure; // empty when ok
};

struct RunResult {
  std::vector<RunRow> rows;
  bool conditioning_failure = false;
  bool solver_failure = false;
  std::map<int, RateSet> pairwise_rates;              // per k (h-mode)
  std::map<int, std::array<double, 3>> lsq_rates;     // per k: {E0, E1, Ea}
  double max_condition = 0.0;

  bool all_ok() const { return !conditioning_failure && !solver_failure; }
};

std::vector<int> parse_int_list(const std::string& text);   // "2,4,8"
std::pair<int, int> parse_k_range(const std::string& text); // "1" or "0:3"
double parse_gamma(const std::string& text);                // number or "inf"

/// Executes a configured batch: one table row per (mesh, k) pair, written in
/// config order, plus a human-readable summary (rates, max condition,
/// failures). An h-convergence run aborts at the first conditioning failure
/// and keeps the rows completed so far; a k-sweep records the failure and
/// continues with the next k.
RunResult run(const RunConfig& config, std::ostream& table, std::ostream& summary);

} // namespace xhho
