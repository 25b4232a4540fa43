#pragma once

#include <Eigen/Dense>

#include "xhho/spaces.hpp"

namespace xhho {

enum class StabVariant { L2, Grad, Bdry };

/// A function handed to projectors/interpolators, decomposed into a smooth
/// part and known enrichment-type components so each piece can be integrated
/// by the right quadrature path.
struct DecomposedFn {
  std::function<double(const Point2&)> smooth;      // nullptr means 0
  std::function<Point2(const Point2&)> smooth_grad; // required by elliptic_project
  bool smooth_adaptive = false;
  std::vector<std::pair<double, EnrichmentFunction>> special;

  double value_at(const Point2& x) const;
  Point2 grad_at(const Point2& x) const;
};

/// Per-element discrete operators in the orthonormalised bases. Local DOF
/// vectors are ordered [cell unknowns | face 0 | face 1 | ...] following the
/// element's face list.
struct ElementOperators {
  int elem = -1;
  int n_cell = 0;
  std::vector<int> n_face;
  int ndof = 0;
  std::vector<int> face_ids;

  Eigen::MatrixXd reconstruction; // n_ext x ndof
  Eigen::MatrixXd G;              // extended-basis stiffness (grad, grad)
  Eigen::MatrixXd stiffness_core; // R^T G R
  Eigen::MatrixXd stab;
  Eigen::MatrixXd aT;
  Eigen::MatrixXd mix;                 // (cu_m, ext_i)_T
  std::vector<Eigen::MatrixXd> trace;  // per face: (fb_m, ext_i)_F

  int face_offset(int local_face) const;
};

struct LocalOperatorsSet {
  const Mesh* mesh = nullptr;
  int k = 0;
  QuadSpec spec;
  StabVariant variant = StabVariant::L2;
  std::vector<CellBasis> ext;     // per element, P^{k+1}_x(T)
  std::vector<CellBasis> unknown; // per element, P^k_Delta(T)
  std::vector<FaceBasis> faces;   // per face, P^k_N(F)
  std::vector<ElementOperators> ops;
  double max_cell_condition = 0.0;
};

/// Builds every basis and every local operator. grad/bdry stabilisations
/// require all enrichment to be harmonic (the element unknowns must stay
/// polynomial).
LocalOperatorsSet build_operators(const Mesh& mesh, int k, const EnrichmentSpace& enr,
                                  StabVariant variant, const QuadSpec& spec);

/// L2 projection moments in the orthonormal basis.
Eigen::VectorXd l2_project_cell(const CellBasis& basis, const PolyGeom& geom,
                                const DecomposedFn& fn, const QuadSpec& spec);
Eigen::VectorXd l2_project_face(const FaceBasis& basis, const DecomposedFn& fn,
                                const QuadSpec& spec);

/// Extended elliptic projection onto P^{k+1}_x(T): gradient matching on the
/// complement of constants plus the mean closure.
Eigen::VectorXd elliptic_project(const LocalOperatorsSet& set, int elem, const DecomposedFn& fn);

/// Component-wise interpolator (pi_Delta, pi_N per face) as a local DOF vector.
Eigen::VectorXd interpolate_element(const LocalOperatorsSet& set, int elem, const DecomposedFn& fn);

/// Potential reconstruction of a local DOF vector: coefficients in the
/// extended basis.
Eigen::VectorXd reconstruct(const ElementOperators& ops, const Eigen::VectorXd& dofs);

/// Standalone stabilisation assembly (also stored in ElementOperators::stab).
Eigen::MatrixXd stabilization(const LocalOperatorsSet& set, int elem, StabVariant variant);

} // namespace xhho
