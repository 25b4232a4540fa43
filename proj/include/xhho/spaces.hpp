#pragma once

#include <Eigen/Dense>

#include "xhho/enrichment.hpp"
#include "xhho/mesh.hpp"
#include "xhho/product_integrals.hpp"

namespace xhho {

enum class BasisKind { CellExtended, CellUnknown, FaceUnknown };

struct CellRawFunc {
  enum class Type { Monomial, EnrichValue, EnrichLaplacian };
  Type type = Type::Monomial;
  ScaledMonomial mono;
  int enr = -1; // index into the owning basis' enr_funcs
};

/// L2-orthonormalised basis on one element. Raw functions are scaled
/// monomials in (x - x_T)/h_T followed by enrichment slots; `ortho` maps raw
/// to orthonormal (rows are the kept functions, columns the raw ones).
class CellBasis {
public:
  BasisKind kind = BasisKind::CellExtended;
  int owner = -1;
  Point2 center = Point2::Zero(); // x_T
  double hT = 1.0;
  std::vector<CellRawFunc> raw;
  std::vector<EnrichmentFunction> enr_funcs;
  Eigen::MatrixXd ortho;    // dim x raw.size()
  Eigen::MatrixXd raw_mass; // pre-orthonormalisation mass matrix
  std::vector<int> kept;
  std::vector<int> dropped;
  double raw_condition = 1.0;

  int dim() const { return static_cast<int>(ortho.rows()); }
  int size_raw() const { return static_cast<int>(raw.size()); }
  bool has_enrichment() const;

  double eval_raw(int j, const Point2& x) const;
  Point2 grad_raw(int j, const Point2& x) const;
  double eval(int i, const Point2& x) const;
  Point2 grad(int i, const Point2& x) const;
};

struct FaceRawFunc {
  enum class Type { Monomial, EnrichNormalTrace };
  Type type = Type::Monomial;
  int power = 0;
  int enr = -1;
};

/// L2-orthonormalised basis on one face. Raw functions are powers of the
/// signed arc-length coordinate t in [-1,1], followed by grad(psi).n_F slots
/// for enriched faces. Slots that are (numerically) identically zero, such
/// as radial faces where the enrichment gradient is tangent, are dropped.
class FaceBasis {
public:
  int owner = -1;
  Point2 a, b, midpoint, normal, dir;
  double hF = 1.0;
  std::vector<FaceRawFunc> raw;
  std::vector<EnrichmentFunction> enr_funcs;
  Eigen::MatrixXd ortho;
  Eigen::MatrixXd raw_mass;
  std::vector<int> kept;
  std::vector<int> dropped;
  double raw_condition = 1.0;

  int dim() const { return static_cast<int>(ortho.rows()); }
  int size_raw() const { return static_cast<int>(raw.size()); }
  double t_of(const Point2& x) const { return 2.0 * (x - midpoint).dot(dir) / hF; }

  double eval_raw(int j, const Point2& x) const;
  double eval(int i, const Point2& x) const;
};

/// Monomial exponent pairs up to the given total degree, degree-graded.
std::vector<std::pair<int, int>> monomial_exponents(int max_degree);

/// P^{k+1}(T) plus one value slot per enrichment function when the element
/// lies in T_gamma.
CellBasis build_cell_basis(const Mesh& mesh, int elem, int k, const EnrichmentSpace& enr,
                           const QuadSpec& spec);

/// P^k(T) plus lap(psi) slots for non-harmonic enrichment; harmonic
/// enrichment adds nothing and the space stays purely polynomial.
CellBasis build_cell_unknown_basis(const Mesh& mesh, int elem, int k, const EnrichmentSpace& enr,
                                   const QuadSpec& spec);

/// P^k(F) plus grad(psi).n_F slots when the face lies in F_gamma.
FaceBasis build_face_basis(const Mesh& mesh, int face, int k, const EnrichmentSpace& enr,
                           const QuadSpec& spec);

/// max over elements of lambda_max/lambda_min of the raw mass matrices.
double max_condition(const std::vector<CellBasis>& bases);

/// Raw-pair integral dispatch across two cell bases on the same element.
double cell_raw_product(const ElementIntegrator& integ, const CellBasis& A, int i,
                        const CellBasis& B, int j);

} // namespace xhho
