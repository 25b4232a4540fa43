#pragma once

#include <Eigen/Sparse>

#include "xhho/local_ops.hpp"

namespace xhho {

struct SolverOptions {
  enum class Kind { Direct, CG };
  Kind kind = Kind::Direct;
  double cg_tol = 1e-12;
};

/// Statically condensed global system over interior-face DOFs, with the
/// per-element Schur data needed to recover cell unknowns afterwards.
/// Boundary faces carry the Dirichlet lifting pi_F(g_D) and are moved to the
/// right-hand side.
struct GlobalSystem {
  const Mesh* mesh = nullptr;
  const LocalOperatorsSet* ops = nullptr;
  std::vector<int> offset; // per face: global DOF offset, -1 on the boundary
  int n_unknowns = 0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  std::vector<Eigen::VectorXd> lifting;  // per face, nonempty on the boundary
  std::vector<Eigen::VectorXd> cell_rhs; // per element, (f, cu)_T moments
  std::vector<Eigen::MatrixXd> rec_Acc_inv_Acf; // per element
  std::vector<Eigen::VectorXd> rec_Acc_inv_bc;  // per element
};

struct DiscreteSolution {
  std::vector<Eigen::VectorXd> cell;  // per element
  std::vector<Eigen::VectorXd> face;  // per face (boundary = lifting values)
  std::vector<Eigen::VectorXd> recon; // per element, extended-basis coefficients
  double residual = 0.0;
};

GlobalSystem assemble(const Mesh& mesh, const LocalOperatorsSet& ops, const DecomposedFn& source,
                      const DecomposedFn* dirichlet);

DiscreteSolution solve(const GlobalSystem& system, const SolverOptions& options = {});

/// Full cell+face solve without condensation; test oracle for condensation
/// equivalence on small meshes.
DiscreteSolution solve_uncondensed(const GlobalSystem& system);

/// Gathers an element's local DOF vector from global cell/face data.
Eigen::VectorXd gather_local(const LocalOperatorsSet& ops, int elem,
                             const std::vector<Eigen::VectorXd>& cells,
                             const std::vector<Eigen::VectorXd>& faces);

/// sqrt(sum_T a_T(v_T, v_T)) of a global DOF assignment.
double energy_norm(const LocalOperatorsSet& ops, const std::vector<Eigen::VectorXd>& cells,
                   const std::vector<Eigen::VectorXd>& faces);

struct GlobalDofs {
  std::vector<Eigen::VectorXd> cell;
  std::vector<Eigen::VectorXd> face;
};

/// Global interpolate I_h: component-wise projections on every element and
/// every face (boundary included).
GlobalDofs interpolate_global(const LocalOperatorsSet& ops, const DecomposedFn& fn);

} // namespace xhho
