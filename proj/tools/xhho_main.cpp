#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "xhho/errors.hpp"
#include "xhho/run.hpp"

// Exit codes: 0 success, 2 config error, 3 conditioning failure, 4 solver failure.

int main(int argc, char** argv) {
  CLI::App app{"Hybrid high-order Poisson solver with enriched local spaces"};
  app.set_config("--config", "", "key=value config file; flags override file entries");

  std::string problem = "lshape_corner";
  std::string mesh = "cartesian";
  std::string refine = "2,4,8";
  std::string krange = "1";
  std::string gamma = "0";
  std::string enrichment = "none";
  std::string stab = "l2";
  std::string solver = "direct";
  std::string out_path;
  double omega = 1.5 * M_PI;
  double epsilon = 0.05;
  double cg_tol = 1e-12;
  int quad_safety = 0;
  bool ksweep = false;

  app.add_option("--problem", problem,
                 "lshape_corner | square_oscillatory | linear | quadratic | cubic | corner_pure");
  app.add_option("--mesh", mesh, "cartesian | triangular | file:<path>[,<path>...]");
  app.add_option("--refine", refine, "comma-separated cells-per-unit list");
  app.add_option("--k", krange, "face degree, single value or range a:b");
  app.add_option("--gamma", gamma, "enrichment cut-off radius (real or 'inf')");
  app.add_option("--enrichment", enrichment, "none | corner | oscillatory");
  app.add_option("--omega", omega, "re-entrant corner angle (default 3*pi/2)");
  app.add_option("--epsilon", epsilon, "oscillatory parameter (default 0.05)");
  app.add_option("--stab", stab, "l2 | grad | bdry");
  app.add_option("--solver", solver, "direct | cg");
  app.add_option("--cg-tol", cg_tol, "relative tolerance for cg");
  app.add_option("--quad-safety", quad_safety, "added to all Gauss orders");
  app.add_flag("--ksweep", ksweep, "sweep k on a single mesh instead of refining");
  app.add_option("--out", out_path, "table output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    xhho::RunConfig cfg;
    cfg.problem = problem;
    if (mesh.rfind("file:", 0) == 0) {
      cfg.mesh_family = "file";
      std::stringstream ss(mesh.substr(5));
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) cfg.mesh_files.push_back(item);
    } else {
      cfg.mesh_family = mesh;
      cfg.refinements = xhho::parse_int_list(refine);
    }
    std::tie(cfg.k_min, cfg.k_max) = xhho::parse_k_range(krange);
    cfg.gamma = xhho::parse_gamma(gamma);
    cfg.enrichment = enrichment;
    cfg.omega = omega;
    cfg.epsilon = epsilon;
    cfg.quad_safety = quad_safety;
    cfg.ksweep = ksweep;
    if (stab == "l2")
      cfg.stab = xhho::StabVariant::L2;
    else if (stab == "grad")
      cfg.stab = xhho::StabVariant::Grad;
    else if (stab == "bdry")
      cfg.stab = xhho::StabVariant::Bdry;
    else
      throw xhho::ConfigError("unknown stabilisation '" + stab + "'");
    if (solver == "direct")
      cfg.solver.kind = xhho::SolverOptions::Kind::Direct;
    else if (solver == "cg")
      cfg.solver.kind = xhho::SolverOptions::Kind::CG;
    else
      throw xhho::ConfigError("unknown solver '" + solver + "'");
    cfg.solver.cg_tol = cg_tol;
    if (ksweep && cfg.mesh_family != "file" && cfg.refinements.size() != 1)
      throw xhho::ConfigError("--ksweep needs exactly one mesh");

    std::ostringstream table;
    xhho::RunResult result = xhho::run(cfg, table, std::cerr);

    if (out_path.empty()) {
      std::cout << table.str();
    } else {
      std::ofstream out(out_path);
      if (!out) throw xhho::ConfigError("cannot open output file '" + out_path + "'");
      out << table.str();
    }

    if (result.conditioning_failure) return 3;
    if (result.solver_failure) return 4;
    return 0;
  } catch (const xhho::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const xhho::ConditioningError& e) {
    std::cerr << "conditioning failure: " << e.what() << "\n";
    return 3;
  } catch (const xhho::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
