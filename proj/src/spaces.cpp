#include "xhho/spaces.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "xhho/errors.hpp"

namespace xhho {

namespace {

constexpr double kDropTol = 1e-12;          // relative residual for slot drops
constexpr double kTangencyTol = 1e-12;      // pointwise |grad psi . n| / |grad psi|
constexpr double kConditionFailure = 1e16;  // orthonormalisation breaks down here

struct GramSchmidtResult {
  Eigen::MatrixXd ortho; // dim x n (full raw index space)
  std::vector<int> kept, dropped;
  double raw_condition = 1.0;
};

double condition_of(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

GramSchmidtResult orthonormalize(const Eigen::MatrixXd& M, const std::vector<bool>& droppable,
                                 const std::vector<bool>& pre_dropped, int owner,
                                 const char* what) {
  const int n = static_cast<int>(M.rows());
  std::vector<int> eff;
  for (int i = 0; i < n; ++i)
    if (!pre_dropped[i]) eff.push_back(i);
  const int m = static_cast<int>(eff.size());

  Eigen::MatrixXd Me(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Me(i, j) = 0.5 * (M(eff[i], eff[j]) + M(eff[j], eff[i]));

  GramSchmidtResult res;
  res.raw_condition = condition_of(Me);
  for (int i = 0; i < n; ++i)
    if (pre_dropped[i]) res.dropped.push_back(i);

  bool any_slot = false;
  for (int i = 0; i < m; ++i) any_slot |= droppable[eff[i]];
  if (any_slot && !(res.raw_condition < kConditionFailure))
    throw ConditioningError(owner, res.raw_condition,
                            std::string(what) + " " + std::to_string(owner) +
                                ": raw mass condition " + std::to_string(res.raw_condition) +
                                " (enrichment numerically dependent, orthonormalisation fails)");
  if (!any_slot && !std::isfinite(res.raw_condition))
    throw ConditioningError(owner, res.raw_condition,
                            std::string(what) + " " + std::to_string(owner) +
                                ": polynomial mass matrix is numerically singular");

  std::vector<Eigen::VectorXd> rows;
  std::vector<int> row_raw;
  auto project_out = [&](Eigen::VectorXd& v) {
    for (const Eigen::VectorXd& u : rows) v -= (u.dot(Me * v)) * u;
  };

  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    v(i) = 1.0;
    project_out(v);
    project_out(v); // reorthogonalisation pass
    const double n2 = v.dot(Me * v);
    const double orig2 = Me(i, i);
    if (droppable[eff[i]]) {
      if (!(n2 > kDropTol * kDropTol * orig2)) {
        res.dropped.push_back(eff[i]);
        continue;
      }
    } else if (!(n2 > 1e-28 * orig2)) {
      throw ConditioningError(owner, res.raw_condition,
                              std::string(what) + " " + std::to_string(owner) +
                                  ": polynomial raw function is numerically dependent");
    }
    v /= std::sqrt(n2);
    rows.push_back(v);
    row_raw.push_back(eff[i]);
    res.kept.push_back(eff[i]);
  }

  auto ortho_defect = [&]() {
    double worst = 0.0;
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j <= i; ++j) {
        const double want = (i == j) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(rows[i].dot(Me * rows[j]) - want));
      }
    return worst;
  };

  // The defect measurement itself is noise-limited: evaluating the Gram
  // matrix of the orthonormalised functions in doubles carries an error of
  // order eps * condition. Enforce 1e-10 where that is attainable and the
  // noise floor otherwise; outright breakdown is caught by the condition
  // threshold above.
  const double kOrthoTol =
      std::max(1e-10, 64.0 * std::numeric_limits<double>::epsilon() * res.raw_condition);

  if (ortho_defect() > kOrthoTol) {
    for (size_t i = 0; i < rows.size(); ++i) {
      Eigen::VectorXd v = rows[i];
      for (size_t j = 0; j < i; ++j) v -= (rows[j].dot(Me * v)) * rows[j];
      const double n2 = v.dot(Me * v);
      if (!(n2 > 0.0))
        throw ConditioningError(owner, res.raw_condition,
                                std::string(what) + " " + std::to_string(owner) +
                                    ": re-orthonormalisation divides by a numerical zero");
      rows[i] = v / std::sqrt(n2);
    }
    if (ortho_defect() > kOrthoTol)
      throw ConditioningError(owner, res.raw_condition,
                              std::string(what) + " " + std::to_string(owner) +
                                  ": orthonormalisation failed (defect above tolerance)");
  }

  res.ortho = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), n);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < m; ++c) res.ortho(static_cast<int>(r), eff[c]) = rows[r](c);
  return res;
}

} // namespace

std::vector<std::pair<int, int>> monomial_exponents(int max_degree) {
  std::vector<std::pair<int, int>> out;
  for (int d = 0; d <= max_degree; ++d)
    for (int ay = 0; ay <= d; ++ay) out.emplace_back(d - ay, ay);
  return out;
}

// ---------------------------------------------------------------------------
// CellBasis
// ---------------------------------------------------------------------------

bool CellBasis::has_enrichment() const {
  for (int j : kept)
    if (raw[j].type != CellRawFunc::Type::Monomial) return true;
  return false;
}

double CellBasis::eval_raw(int j, const Point2& x) const {
  const CellRawFunc& f = raw[j];
  switch (f.type) {
  case CellRawFunc::Type::Monomial: return f.mono.eval(x);
  case CellRawFunc::Type::EnrichValue: return enr_funcs[f.enr].value(x);
  case CellRawFunc::Type::EnrichLaplacian: return enr_funcs[f.enr].laplacian(x);
  }
  return 0.0;
}

Point2 CellBasis::grad_raw(int j, const Point2& x) const {
  const CellRawFunc& f = raw[j];
  switch (f.type) {
  case CellRawFunc::Type::Monomial: return f.mono.grad(x);
  case CellRawFunc::Type::EnrichValue: return enr_funcs[f.enr].gradient(x);
  case CellRawFunc::Type::EnrichLaplacian:
    throw std::logic_error("gradient of a Laplacian slot is not available");
  }
  return Point2::Zero();
}

double CellBasis::eval(int i, const Point2& x) const {
  double s = 0.0;
  for (int j = 0; j < size_raw(); ++j)
    if (ortho(i, j) != 0.0) s += ortho(i, j) * eval_raw(j, x);
  return s;
}

Point2 CellBasis::grad(int i, const Point2& x) const {
  Point2 s = Point2::Zero();
  for (int j = 0; j < size_raw(); ++j)
    if (ortho(i, j) != 0.0) s += ortho(i, j) * grad_raw(j, x);
  return s;
}

double cell_raw_product(const ElementIntegrator& integ, const CellBasis& A, int i,
                        const CellBasis& B, int j) {
  using T = CellRawFunc::Type;
  const CellRawFunc& a = A.raw[i];
  const CellRawFunc& b = B.raw[j];
  if (a.type == T::Monomial && b.type == T::Monomial) return integ.mono_mono(a.mono, b.mono);
  if (a.type == T::Monomial && b.type == T::EnrichValue)
    return integ.enrich_mono(B.enr_funcs[b.enr], a.mono);
  if (a.type == T::EnrichValue && b.type == T::Monomial)
    return integ.enrich_mono(A.enr_funcs[a.enr], b.mono);
  if (a.type == T::Monomial && b.type == T::EnrichLaplacian)
    return integ.lap_mono(B.enr_funcs[b.enr], a.mono);
  if (a.type == T::EnrichLaplacian && b.type == T::Monomial)
    return integ.lap_mono(A.enr_funcs[a.enr], b.mono);
  if (a.type == T::EnrichValue && b.type == T::EnrichValue)
    return integ.enrich_enrich(A.enr_funcs[a.enr], B.enr_funcs[b.enr]);
  if (a.type == T::EnrichLaplacian && b.type == T::EnrichLaplacian)
    return integ.lap_lap(A.enr_funcs[a.enr], B.enr_funcs[b.enr]);
  if (a.type == T::EnrichLaplacian && b.type == T::EnrichValue)
    return integ.lap_enrich(A.enr_funcs[a.enr], B.enr_funcs[b.enr]);
  // EnrichValue x EnrichLaplacian
  return integ.lap_enrich(B.enr_funcs[b.enr], A.enr_funcs[a.enr]);
}

namespace {

CellBasis build_cell_basis_impl(const Mesh& mesh, int elem, int degree, BasisKind kind,
                                const EnrichmentSpace& enr, const QuadSpec& spec) {
  CellBasis basis;
  basis.kind = kind;
  basis.owner = elem;
  const Element& T = mesh.elements[elem];
  basis.center = T.centroid;
  basis.hT = T.diameter;

  for (auto [ax, ay] : monomial_exponents(degree))
    basis.raw.push_back({CellRawFunc::Type::Monomial,
                         ScaledMonomial{ax, ay, basis.center, basis.hT}, -1});

  if (enr.element_enriched(elem)) {
    basis.enr_funcs = enr.functions; // slot index == enrichment index for both kinds
    for (int i = 0; i < static_cast<int>(enr.functions.size()); ++i) {
      if (kind == BasisKind::CellExtended)
        basis.raw.push_back({CellRawFunc::Type::EnrichValue, ScaledMonomial{}, i});
      else if (!enr.functions[i].harmonic)
        basis.raw.push_back({CellRawFunc::Type::EnrichLaplacian, ScaledMonomial{}, i});
    }
  }

  const PolyGeom geom = poly_geom(mesh, elem);
  const ElementIntegrator integ(geom, spec);
  const int n = basis.size_raw();
  basis.raw_mass.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = cell_raw_product(integ, basis, i, basis, j);
      basis.raw_mass(i, j) = v;
      basis.raw_mass(j, i) = v;
    }

  std::vector<bool> droppable(n, false), pre_dropped(n, false);
  for (int i = 0; i < n; ++i) droppable[i] = (basis.raw[i].type != CellRawFunc::Type::Monomial);

  auto gs = orthonormalize(basis.raw_mass, droppable, pre_dropped, elem, "element");
  basis.ortho = std::move(gs.ortho);
  basis.kept = std::move(gs.kept);
  basis.dropped = std::move(gs.dropped);
  basis.raw_condition = gs.raw_condition;
  return basis;
}

} // namespace

CellBasis build_cell_basis(const Mesh& mesh, int elem, int k, const EnrichmentSpace& enr,
                           const QuadSpec& spec) {
  return build_cell_basis_impl(mesh, elem, k + 1, BasisKind::CellExtended, enr, spec);
}

CellBasis build_cell_unknown_basis(const Mesh& mesh, int elem, int k, const EnrichmentSpace& enr,
                                   const QuadSpec& spec) {
  return build_cell_basis_impl(mesh, elem, k, BasisKind::CellUnknown, enr, spec);
}

// ---------------------------------------------------------------------------
// FaceBasis
// ---------------------------------------------------------------------------

double FaceBasis::eval_raw(int j, const Point2& x) const {
  const FaceRawFunc& f = raw[j];
  if (f.type == FaceRawFunc::Type::Monomial) {
    double v = 1.0;
    const double t = t_of(x);
    for (int i = 0; i < f.power; ++i) v *= t;
    return v;
  }
  return enr_funcs[f.enr].gradient(x).dot(normal);
}

double FaceBasis::eval(int i, const Point2& x) const {
  double s = 0.0;
  for (int j = 0; j < size_raw(); ++j)
    if (ortho(i, j) != 0.0) s += ortho(i, j) * eval_raw(j, x);
  return s;
}

FaceBasis build_face_basis(const Mesh& mesh, int face, int k, const EnrichmentSpace& enr,
                           const QuadSpec& spec) {
  FaceBasis basis;
  basis.owner = face;
  const Face& F = mesh.faces[face];
  basis.a = mesh.vertex(F.v0);
  basis.b = mesh.vertex(F.v1);
  basis.midpoint = F.midpoint;
  basis.normal = F.normal;
  basis.hF = F.diameter;
  basis.dir = (basis.b - basis.a) / basis.hF;

  for (int p = 0; p <= k; ++p) basis.raw.push_back({FaceRawFunc::Type::Monomial, p, -1});

  if (enr.face_enriched(face)) {
    for (const EnrichmentFunction& fn : enr.functions) {
      const int local = static_cast<int>(basis.enr_funcs.size());
      basis.enr_funcs.push_back(fn);
      basis.raw.push_back({FaceRawFunc::Type::EnrichNormalTrace, 0, local});
    }
  }

  const int n = basis.size_raw();
  std::vector<bool> droppable(n, false), pre_dropped(n, false);

  // Degenerate-slot guard: a slot whose normal trace is pointwise negligible
  // against the full gradient (e.g. radial faces with tangent grad psi) is
  // removed before orthonormalisation; its mass entries are pure noise.
  const EdgeRule samples = edge_rule(basis.a, basis.b, 2 * k + 9);
  for (int i = 0; i < n; ++i) {
    if (basis.raw[i].type != FaceRawFunc::Type::EnrichNormalTrace) continue;
    droppable[i] = true;
    const EnrichmentFunction& fn = basis.enr_funcs[basis.raw[i].enr];
    double max_trace = 0.0, max_grad = 0.0;
    for (const Point2& x : samples.points) {
      const Point2 g = fn.gradient(x);
      max_trace = std::max(max_trace, std::abs(g.dot(basis.normal)));
      max_grad = std::max(max_grad, g.norm());
    }
    if (max_trace <= kTangencyTol * max_grad) pre_dropped[i] = true;
  }

  const FaceIntegrator integ(basis.a, basis.b, spec);
  basis.raw_mass.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      if (pre_dropped[i] || pre_dropped[j]) {
        v = 0.0;
      } else if (basis.raw[i].type == FaceRawFunc::Type::Monomial &&
                 basis.raw[j].type == FaceRawFunc::Type::Monomial) {
        v = integ.poly_poly(integ.face_mono(basis.raw[i].power), integ.face_mono(basis.raw[j].power));
      } else if (basis.raw[i].type == FaceRawFunc::Type::Monomial ||
                 basis.raw[j].type == FaceRawFunc::Type::Monomial) {
        const int mono = basis.raw[i].type == FaceRawFunc::Type::Monomial ? i : j;
        const int slot = mono == i ? j : i;
        const EnrichmentFunction& fn = basis.enr_funcs[basis.raw[slot].enr];
        auto trace = [&fn, nrm = basis.normal](const Point2& x) { return fn.gradient(x).dot(nrm); };
        if (fn.homogeneity)
          v = integ.homog_poly(HomogeneousFn{trace, fn.homogeneity->degree - 1.0,
                                             fn.homogeneity->center},
                               integ.face_mono(basis.raw[mono].power));
        else
          v = integ.smooth_poly(trace, true, integ.face_mono(basis.raw[mono].power));
      } else {
        const EnrichmentFunction& f1 = basis.enr_funcs[basis.raw[i].enr];
        const EnrichmentFunction& f2 = basis.enr_funcs[basis.raw[j].enr];
        auto t1 = [&f1, nrm = basis.normal](const Point2& x) { return f1.gradient(x).dot(nrm); };
        auto t2 = [&f2, nrm = basis.normal](const Point2& x) { return f2.gradient(x).dot(nrm); };
        if (f1.homogeneity && f2.homogeneity)
          v = integ.homog_homog(
              HomogeneousFn{t1, f1.homogeneity->degree - 1.0, f1.homogeneity->center},
              HomogeneousFn{t2, f2.homogeneity->degree - 1.0, f2.homogeneity->center});
        else
          v = integ.generic_pair(t1, t2, true);
      }
      basis.raw_mass(i, j) = v;
      basis.raw_mass(j, i) = v;
    }

  auto gs = orthonormalize(basis.raw_mass, droppable, pre_dropped, face, "face");
  basis.ortho = std::move(gs.ortho);
  basis.kept = std::move(gs.kept);
  basis.dropped = std::move(gs.dropped);
  basis.raw_condition = gs.raw_condition;
  return basis;
}

double max_condition(const std::vector<CellBasis>& bases) {
  double c = 0.0;
  for (const CellBasis& b : bases) c = std::max(c, b.raw_condition);
  return c;
}

} // namespace xhho
