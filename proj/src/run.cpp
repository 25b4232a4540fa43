#include "xhho/run.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "xhho/errors.hpp"

namespace xhho {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw ConfigError("empty refinement list");
  return out;
}

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int k = std::stoi(text);
    return {k, k};
  }
  const int a = std::stoi(text.substr(0, colon));
  const int b = std::stoi(text.substr(colon + 1));
  if (a > b) throw ConfigError("invalid k range '" + text + "'");
  return {a, b};
}

double parse_gamma(const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  return std::stod(text);
}

namespace {

std::vector<EnrichmentFunction> select_enrichment(const RunConfig& cfg, const Problem& problem) {
  if (cfg.enrichment == "none") return {};
  if (cfg.enrichment == "corner") return {corner_singular_function(1, cfg.omega, M_PI / 2.0)};
  if (cfg.enrichment == "oscillatory")
    return {oscillatory_function(cfg.epsilon, problem.singular_point)};
  throw ConfigError("unknown enrichment '" + cfg.enrichment + "'");
}

std::vector<Mesh> build_meshes(const RunConfig& cfg, const Problem& problem) {
  std::vector<Mesh> meshes;
  if (cfg.mesh_family == "file") {
    if (cfg.mesh_files.empty()) throw ConfigError("mesh family 'file' needs mesh files");
    for (const std::string& path : cfg.mesh_files) {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
      meshes.push_back(read_mesh(in));
    }
    return meshes;
  }
  if (cfg.refinements.empty()) throw ConfigError("empty refinement list");
  for (int n : cfg.refinements) {
    if (n < 1) throw ConfigError("refinement must be >= 1");
    if (cfg.mesh_family == "cartesian")
      meshes.push_back(generate_cartesian(problem.domain, n));
    else if (cfg.mesh_family == "triangular")
      meshes.push_back(generate_triangular(problem.domain, n));
    else
      throw ConfigError("unknown mesh family '" + cfg.mesh_family + "'");
  }
  return meshes;
}

} // namespace

RunResult run(const RunConfig& cfg, std::ostream& table, std::ostream& summary) {
  if (cfg.k_min < 0 || cfg.k_min > cfg.k_max) throw ConfigError("invalid k range");
  if (cfg.gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (cfg.ksweep && cfg.refinements.size() + cfg.mesh_files.size() > 1)
    throw ConfigError("k-sweep runs on a single mesh");

  const Problem problem = make_problem(cfg.problem, cfg.omega, cfg.epsilon);
  const std::vector<EnrichmentFunction> enr_fns = select_enrichment(cfg, problem);
  const Point2 cutoff_center =
      cfg.enrichment == "corner" ? Point2(0.0, 0.0) : problem.singular_point;
  const std::vector<Mesh> meshes = build_meshes(cfg, problem);

  RunResult result;
  write_table_header(table, cfg.ksweep);

  for (int mi = 0; mi < static_cast<int>(meshes.size()); ++mi) {
    const Mesh& mesh = meshes[mi];
    bool abort_remaining = false;
    for (int k = cfg.k_min; k <= cfg.k_max && !abort_remaining; ++k) {
      RunRow row;
      row.mesh_index = mi;
      row.k = k;
      try {
        QuadSpec spec;
        spec.k = k;
        spec.safety = cfg.quad_safety;
        const EnrichmentSpace space =
            build_enrichment_space(mesh, enr_fns, cfg.gamma, cutoff_center);
        const LocalOperatorsSet ops = build_operators(mesh, k, space, cfg.stab, spec);
        const GlobalSystem sys = assemble(mesh, ops, problem.source, &problem.exact);
        const DiscreteSolution sol = solve(sys, cfg.solver);
        row.report = compute_errors(mesh, ops, sol, problem.exact);
        row.report.gamma = cfg.gamma;
        row.report.enrichment = cfg.enrichment;
        row.ok = true;
        result.max_condition = std::max(result.max_condition, row.report.cell_condition);
        const std::optional<double> ref =
            cfg.ksweep ? std::optional<double>(std::pow(mesh.h, k)) : std::nullopt;
        write_table_row(table, row.report, ref);
      } catch (const ConditioningError& err) {
        row.failure = err.what();
        result.conditioning_failure = true;
        if (!cfg.ksweep) abort_remaining = true;
      } catch (const SolverError& err) {
        row.failure = err.what();
        result.solver_failure = true;
        if (!cfg.ksweep) abort_remaining = true;
      }
      result.rows.push_back(std::move(row));
    }
    if (abort_remaining) break;
  }

  // rates per k over the successful h-sequence
  if (!cfg.ksweep) {
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      std::vector<ErrorReport> seq;
      for (const RunRow& row : result.rows)
        if (row.ok && row.k == k) seq.push_back(row.report);
      if (seq.size() >= 2) {
        result.pairwise_rates[k] = convergence_rates(seq);
        std::vector<double> h, e0, e1, ea;
        for (const ErrorReport& r : seq) {
          h.push_back(r.h);
          e0.push_back(r.E0);
          e1.push_back(r.E1);
          ea.push_back(r.Ea);
        }
        result.lsq_rates[k] = {least_squares_rate(h, e0), least_squares_rate(h, e1),
                               least_squares_rate(h, ea)};
      }
    }
  }

  summary << "problem " << cfg.problem << ", mesh " << cfg.mesh_family << ", stab "
          << (cfg.stab == StabVariant::L2 ? "l2" : cfg.stab == StabVariant::Grad ? "grad" : "bdry")
          << ", enrichment " << cfg.enrichment << " (gamma " << cfg.gamma << ")\n";
  summary << "max cell condition " << result.max_condition << "\n";
  for (const auto& [k, rates] : result.lsq_rates)
    summary << "k=" << k << " least-squares rates (last 3 meshes): L2 " << rates[0] << ", H1 "
            << rates[1] << ", energy " << rates[2] << "\n";
  for (const RunRow& row : result.rows)
    if (!row.ok)
      summary << "FAILED mesh " << row.mesh_index << " k=" << row.k << ": " << row.failure << "\n";
  return result;
}

} // namespace xhho
