#include "xhho/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "xhho/errors.hpp"

namespace xhho {

using Eigen::MatrixXd;
using Eigen::VectorXd;

GlobalSystem assemble(const Mesh& mesh, const LocalOperatorsSet& ops, const DecomposedFn& source,
                      const DecomposedFn* dirichlet) {
  GlobalSystem sys;
  sys.mesh = &mesh;
  sys.ops = &ops;

  sys.offset.assign(mesh.num_faces(), -1);
  sys.lifting.resize(mesh.num_faces());
  int off = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.faces[f].boundary) {
      if (dirichlet)
        sys.lifting[f] = l2_project_face(ops.faces[f], *dirichlet, ops.spec);
      else
        sys.lifting[f] = VectorXd::Zero(ops.faces[f].dim());
    } else {
      sys.offset[f] = off;
      off += ops.faces[f].dim();
    }
  }
  sys.n_unknowns = off;

  sys.rhs = VectorXd::Zero(off);
  sys.cell_rhs.resize(mesh.num_elements());
  sys.rec_Acc_inv_Acf.resize(mesh.num_elements());
  sys.rec_Acc_inv_bc.resize(mesh.num_elements());

  std::vector<Eigen::Triplet<double>> triplets;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementOperators& op = ops.ops[e];
    const int nc = op.n_cell;
    const int nf_tot = op.ndof - nc;

    const PolyGeom geom = poly_geom(mesh, e);
    sys.cell_rhs[e] = l2_project_cell(ops.unknown[e], geom, source, ops.spec);

    const MatrixXd Acc = op.aT.block(0, 0, nc, nc);
    const MatrixXd Acf = op.aT.block(0, nc, nc, nf_tot);
    const MatrixXd Aff = op.aT.block(nc, nc, nf_tot, nf_tot);

    Eigen::LDLT<MatrixXd> ldlt(Acc);
    const VectorXd D = ldlt.vectorD();
    if (!(D.minCoeff() > 1e-14 * D.maxCoeff()))
      throw ConditioningError(e, ops.ext[e].raw_condition,
                              "element " + std::to_string(e) +
                                  ": cell block of a_T numerically singular in condensation");
    sys.rec_Acc_inv_Acf[e] = ldlt.solve(Acf);
    sys.rec_Acc_inv_bc[e] = ldlt.solve(sys.cell_rhs[e]);

    const MatrixXd S = Aff - Acf.transpose() * sys.rec_Acc_inv_Acf[e];
    const VectorXd g = -Acf.transpose() * sys.rec_Acc_inv_bc[e];

    // scatter: interior rows/cols into the matrix, boundary columns to rhs
    const int nfaces = static_cast<int>(op.face_ids.size());
    std::vector<int> local_off(nfaces), global_off(nfaces);
    for (int lf = 0; lf < nfaces; ++lf) {
      local_off[lf] = op.face_offset(lf) - nc;
      global_off[lf] = sys.offset[op.face_ids[lf]];
    }
    for (int li = 0; li < nfaces; ++li) {
      if (global_off[li] < 0) continue;
      for (int mi = 0; mi < op.n_face[li]; ++mi) {
        const int row = global_off[li] + mi;
        sys.rhs(row) += g(local_off[li] + mi);
        for (int lj = 0; lj < nfaces; ++lj) {
          for (int mj = 0; mj < op.n_face[lj]; ++mj) {
            const double v = S(local_off[li] + mi, local_off[lj] + mj);
            if (global_off[lj] >= 0)
              triplets.emplace_back(row, global_off[lj] + mj, v);
            else
              sys.rhs(row) -= v * sys.lifting[op.face_ids[lj]](mj);
          }
        }
      }
    }
  }

  sys.A.resize(off, off);
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

namespace {

void recover_cells_and_reconstruct(const GlobalSystem& sys, DiscreteSolution& sol) {
  const LocalOperatorsSet& ops = *sys.ops;
  const Mesh& mesh = *sys.mesh;
  sol.cell.resize(mesh.num_elements());
  sol.recon.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementOperators& op = ops.ops[e];
    VectorXd uf(op.ndof - op.n_cell);
    int pos = 0;
    for (size_t lf = 0; lf < op.face_ids.size(); ++lf) {
      uf.segment(pos, op.n_face[lf]) = sol.face[op.face_ids[lf]];
      pos += op.n_face[lf];
    }
    sol.cell[e] = sys.rec_Acc_inv_bc[e] - sys.rec_Acc_inv_Acf[e] * uf;
    VectorXd local(op.ndof);
    local.head(op.n_cell) = sol.cell[e];
    local.tail(op.ndof - op.n_cell) = uf;
    sol.recon[e] = op.reconstruction * local;
  }
}

void scatter_face_solution(const GlobalSystem& sys, const VectorXd& x, DiscreteSolution& sol) {
  const Mesh& mesh = *sys.mesh;
  sol.face.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (sys.offset[f] < 0)
      sol.face[f] = sys.lifting[f];
    else
      sol.face[f] = x.segment(sys.offset[f], sys.ops->faces[f].dim());
  }
}

} // namespace

DiscreteSolution solve(const GlobalSystem& sys, const SolverOptions& options) {
  VectorXd x = VectorXd::Zero(sys.n_unknowns);
  if (sys.n_unknowns > 0) {
    if (options.kind == SolverOptions::Kind::Direct) {
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.A);
      if (llt.info() != Eigen::Success) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.A);
        double min_pivot = 0.0;
        if (ldlt.info() == Eigen::Success) min_pivot = ldlt.vectorD().minCoeff();
        int suspect = 0;
        for (int e = 0; e < sys.mesh->num_elements(); ++e)
          if (sys.ops->ext[e].raw_condition > sys.ops->ext[suspect].raw_condition) suspect = e;
        throw SolverError("condensed system not positive definite (smallest pivot " +
                          std::to_string(min_pivot) + ", suspect element " +
                          std::to_string(suspect) + ")");
      }
      x = llt.solve(sys.rhs);
    } else {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(sys.A);
      cg.setTolerance(options.cg_tol);
      cg.setMaxIterations(20 * sys.n_unknowns + 1000);
      x = cg.solve(sys.rhs);
      if (cg.info() != Eigen::Success)
        throw SolverError("conjugate gradient did not converge (error " +
                          std::to_string(cg.error()) + ")");
    }
  }

  DiscreteSolution sol;
  const double bnorm = sys.rhs.norm();
  sol.residual = bnorm > 0.0 ? (sys.A * x - sys.rhs).norm() / bnorm : (sys.A * x).norm();
  if (sol.residual > 1e-9)
    throw SolverError("solver residual " + std::to_string(sol.residual) + " above contract");

  scatter_face_solution(sys, x, sol);
  recover_cells_and_reconstruct(sys, sol);
  return sol;
}

DiscreteSolution solve_uncondensed(const GlobalSystem& sys) {
  const LocalOperatorsSet& ops = *sys.ops;
  const Mesh& mesh = *sys.mesh;

  std::vector<int> cell_off(mesh.num_elements());
  int n = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    cell_off[e] = n;
    n += ops.ops[e].n_cell;
  }
  const int face_base = n;
  n += sys.n_unknowns;

  VectorXd rhs = VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementOperators& op = ops.ops[e];
    // global index per local dof; -1 for boundary lifting entries
    std::vector<int> gid(op.ndof, -1);
    std::vector<double> lifted(op.ndof, 0.0);
    for (int m = 0; m < op.n_cell; ++m) gid[m] = cell_off[e] + m;
    for (size_t lf = 0; lf < op.face_ids.size(); ++lf) {
      const int f = op.face_ids[lf];
      for (int m = 0; m < op.n_face[lf]; ++m) {
        const int l = op.face_offset(static_cast<int>(lf)) + m;
        if (sys.offset[f] >= 0)
          gid[l] = face_base + sys.offset[f] + m;
        else
          lifted[l] = sys.lifting[f](m);
      }
    }
    for (int m = 0; m < op.n_cell; ++m) rhs(gid[m]) += sys.cell_rhs[e](m);
    for (int i = 0; i < op.ndof; ++i) {
      if (gid[i] < 0) continue;
      for (int j = 0; j < op.ndof; ++j) {
        if (gid[j] >= 0)
          triplets.emplace_back(gid[i], gid[j], op.aT(i, j));
        else
          rhs(gid[i]) -= op.aT(i, j) * lifted[j];
      }
    }
  }

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("uncondensed system factorisation failed");
  const VectorXd x = ldlt.solve(rhs);

  DiscreteSolution sol;
  const double bnorm = rhs.norm();
  sol.residual = bnorm > 0.0 ? (A * x - rhs).norm() / bnorm : (A * x).norm();
  scatter_face_solution(sys, x.tail(sys.n_unknowns), sol);
  sol.cell.resize(mesh.num_elements());
  sol.recon.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementOperators& op = ops.ops[e];
    sol.cell[e] = x.segment(cell_off[e], op.n_cell);
    VectorXd local(op.ndof);
    local.head(op.n_cell) = sol.cell[e];
    int pos = op.n_cell;
    for (size_t lf = 0; lf < op.face_ids.size(); ++lf) {
      local.segment(pos, op.n_face[lf]) = sol.face[op.face_ids[lf]];
      pos += op.n_face[lf];
    }
    sol.recon[e] = op.reconstruction * local;
  }
  return sol;
}

VectorXd gather_local(const LocalOperatorsSet& ops, int elem,
                      const std::vector<VectorXd>& cells, const std::vector<VectorXd>& faces) {
  const ElementOperators& op = ops.ops[elem];
  VectorXd local(op.ndof);
  local.head(op.n_cell) = cells[elem];
  for (size_t lf = 0; lf < op.face_ids.size(); ++lf)
    local.segment(op.face_offset(static_cast<int>(lf)), op.n_face[lf]) = faces[op.face_ids[lf]];
  return local;
}

double energy_norm(const LocalOperatorsSet& ops, const std::vector<VectorXd>& cells,
                   const std::vector<VectorXd>& faces) {
  double s = 0.0;
  for (int e = 0; e < ops.mesh->num_elements(); ++e) {
    const VectorXd v = gather_local(ops, e, cells, faces);
    s += v.dot(ops.ops[e].aT * v);
  }
  return std::sqrt(std::max(s, 0.0));
}

GlobalDofs interpolate_global(const LocalOperatorsSet& ops, const DecomposedFn& fn) {
  GlobalDofs out;
  out.cell.resize(ops.mesh->num_elements());
  out.face.resize(ops.mesh->num_faces());
  for (int e = 0; e < ops.mesh->num_elements(); ++e) {
    const PolyGeom geom = poly_geom(*ops.mesh, e);
    out.cell[e] = l2_project_cell(ops.unknown[e], geom, fn, ops.spec);
  }
  for (int f = 0; f < ops.mesh->num_faces(); ++f)
    out.face[f] = l2_project_face(ops.faces[f], fn, ops.spec);
  return out;
}

} // namespace xhho
