#include "xhho/local_ops.hpp"

#include <cmath>

#include "xhho/errors.hpp"

namespace xhho {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double DecomposedFn::value_at(const Point2& x) const {
  double v = smooth ? smooth(x) : 0.0;
  for (const auto& [c, fn] : special) v += c * fn.value(x);
  return v;
}

Point2 DecomposedFn::grad_at(const Point2& x) const {
  Point2 g = smooth_grad ? smooth_grad(x) : Point2(Point2::Zero());
  for (const auto& [c, fn] : special) g += c * fn.gradient(x);
  return g;
}

int ElementOperators::face_offset(int local_face) const {
  int off = n_cell;
  for (int i = 0; i < local_face; ++i) off += n_face[i];
  return off;
}

namespace {

// adaptive is the fallback for enrichment without homogeneity: always for
// oscillatory-type functions, near the singular point for the rest
bool enrichment_adaptive_on_face(const EnrichmentFunction& e, const FaceIntegrator& integ) {
  if (e.homogeneity) return false;
  if (!e.singular_point) return true;
  return integ.near(*e.singular_point);
}

HomogeneousFn value_homog(const EnrichmentFunction& e) {
  return HomogeneousFn{e.value, e.homogeneity->degree, e.homogeneity->center};
}

HomogeneousFn trace_homog(const EnrichmentFunction& e, const Point2& n) {
  return HomogeneousFn{[grad = e.gradient, n](const Point2& x) { return grad(x).dot(n); },
                       e.homogeneity->degree - 1.0, e.homogeneity->center};
}

std::function<double(const Point2&)> trace_fn(const EnrichmentFunction& e, const Point2& n) {
  return [grad = e.gradient, n](const Point2& x) { return grad(x).dot(n); };
}

PolyOnFace grad_mono_dot_n(const FaceIntegrator& integ, const ScaledMonomial& m, const Point2& n) {
  PolyOnFace out;
  out.degree = std::max(m.degree() - 1, 0);
  out.eval = [m, n](const Point2& x) { return m.grad(x).dot(n); };
  std::vector<std::pair<double, PolyOnFace>> parts;
  if (m.ax > 0 && n.x() != 0.0)
    parts.push_back({n.x() * m.ax / m.h, integ.mono_trace({m.ax - 1, m.ay, m.origin, m.h})});
  if (m.ay > 0 && n.y() != 0.0)
    parts.push_back({n.y() * m.ay / m.h, integ.mono_trace({m.ax, m.ay - 1, m.origin, m.h})});
  out.r_coeffs = [parts](const Point2& c) {
    std::vector<double> acc{0.0};
    for (const auto& [w, p] : parts) {
      const std::vector<double> v = p.r_coeffs(c);
      if (v.size() > acc.size()) acc.resize(v.size(), 0.0);
      for (size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
    }
    return acc;
  };
  return out;
}

// (fraw_m, cellraw_j|_F)_F
double face_cell_product(const FaceIntegrator& integ, const FaceBasis& FB, int m,
                         const CellBasis& CB, int j) {
  const FaceRawFunc& fr = FB.raw[m];
  const CellRawFunc& cr = CB.raw[j];
  if (cr.type == CellRawFunc::Type::EnrichLaplacian)
    throw std::logic_error("Laplacian slots have no face traces in any admissible variant");

  if (fr.type == FaceRawFunc::Type::Monomial) {
    const PolyOnFace fp = integ.face_mono(fr.power);
    if (cr.type == CellRawFunc::Type::Monomial) return integ.poly_poly(fp, integ.mono_trace(cr.mono));
    const EnrichmentFunction& e = CB.enr_funcs[cr.enr];
    if (e.homogeneity) return integ.homog_poly(value_homog(e), fp);
    return integ.smooth_poly(e.value, enrichment_adaptive_on_face(e, integ), fp);
  }

  const EnrichmentFunction& ef = FB.enr_funcs[fr.enr];
  if (cr.type == CellRawFunc::Type::Monomial) {
    const PolyOnFace mp = integ.mono_trace(cr.mono);
    if (ef.homogeneity) return integ.homog_poly(trace_homog(ef, FB.normal), mp);
    return integ.smooth_poly(trace_fn(ef, FB.normal), enrichment_adaptive_on_face(ef, integ), mp);
  }
  const EnrichmentFunction& ec = CB.enr_funcs[cr.enr];
  if (ef.homogeneity && ec.homogeneity)
    return integ.homog_homog(trace_homog(ef, FB.normal), value_homog(ec));
  return integ.generic_pair(trace_fn(ef, FB.normal), ec.value, true);
}

// (fraw_m, grad(cellraw_j).n)_F with n the element's outward normal
double face_cellgrad_product(const FaceIntegrator& integ, const FaceBasis& FB, int m,
                             const CellBasis& CB, int j, const Point2& n) {
  const FaceRawFunc& fr = FB.raw[m];
  const CellRawFunc& cr = CB.raw[j];
  if (cr.type == CellRawFunc::Type::EnrichLaplacian)
    throw std::logic_error("Laplacian slots never enter boundary terms");

  if (cr.type == CellRawFunc::Type::Monomial) {
    const PolyOnFace gp = grad_mono_dot_n(integ, cr.mono, n);
    if (fr.type == FaceRawFunc::Type::Monomial) return integ.poly_poly(integ.face_mono(fr.power), gp);
    const EnrichmentFunction& ef = FB.enr_funcs[fr.enr];
    if (ef.homogeneity) return integ.homog_poly(trace_homog(ef, FB.normal), gp);
    return integ.smooth_poly(trace_fn(ef, FB.normal), enrichment_adaptive_on_face(ef, integ), gp);
  }

  const EnrichmentFunction& ec = CB.enr_funcs[cr.enr];
  if (fr.type == FaceRawFunc::Type::Monomial) {
    const PolyOnFace fp = integ.face_mono(fr.power);
    if (ec.homogeneity) return integ.homog_poly(trace_homog(ec, n), fp);
    return integ.smooth_poly(trace_fn(ec, n), enrichment_adaptive_on_face(ec, integ), fp);
  }
  const EnrichmentFunction& ef = FB.enr_funcs[fr.enr];
  if (ef.homogeneity && ec.homogeneity)
    return integ.homog_homog(trace_homog(ef, FB.normal), trace_homog(ec, n));
  return integ.generic_pair(trace_fn(ef, FB.normal), trace_fn(ec, n), true);
}

// int grad(e1).grad(e2) over the element, choosing which factor supplies the
// boundary-reduced gradient (needs harmonicity)
double pair_grad_enrich(const ElementIntegrator& integ, const EnrichmentFunction& e1,
                        const EnrichmentFunction& e2) {
  if (e1.harmonic && e1.homogeneity) return integ.grad_enrich_grad_enrich(e1, e2);
  if (e2.harmonic && e2.homogeneity) return integ.grad_enrich_grad_enrich(e2, e1);
  return integ.grad_enrich_grad_enrich(e1, e2); // adaptive path inside
}

double ext_stiffness_raw(const ElementIntegrator& integ, const CellBasis& X, int i, int j) {
  using T = CellRawFunc::Type;
  const CellRawFunc& a = X.raw[i];
  const CellRawFunc& b = X.raw[j];
  if (a.type == T::Monomial && b.type == T::Monomial)
    return integ.grad_mono_grad_mono(a.mono, b.mono);
  if (a.type == T::Monomial) return integ.grad_enrich_grad_mono(X.enr_funcs[b.enr], a.mono);
  if (b.type == T::Monomial) return integ.grad_enrich_grad_mono(X.enr_funcs[a.enr], b.mono);
  return pair_grad_enrich(integ, X.enr_funcs[a.enr], X.enr_funcs[b.enr]);
}

int monomial_index(int ax, int ay) {
  const int d = ax + ay;
  return d * (d + 1) / 2 + ay;
}

// Delta(ext raw_j) expanded over the unknown-basis raw functions
MatrixXd laplacian_expansion(const CellBasis& ext, const CellBasis& cu) {
  MatrixXd D = MatrixXd::Zero(ext.size_raw(), cu.size_raw());
  for (int j = 0; j < ext.size_raw(); ++j) {
    const CellRawFunc& r = ext.raw[j];
    if (r.type == CellRawFunc::Type::Monomial) {
      const double h2 = r.mono.h * r.mono.h;
      if (r.mono.ax >= 2)
        D(j, monomial_index(r.mono.ax - 2, r.mono.ay)) += r.mono.ax * (r.mono.ax - 1) / h2;
      if (r.mono.ay >= 2)
        D(j, monomial_index(r.mono.ax, r.mono.ay - 2)) += r.mono.ay * (r.mono.ay - 1) / h2;
    } else if (r.type == CellRawFunc::Type::EnrichValue && !ext.enr_funcs[r.enr].harmonic) {
      for (int p = 0; p < cu.size_raw(); ++p)
        if (cu.raw[p].type == CellRawFunc::Type::EnrichLaplacian && cu.raw[p].enr == r.enr)
          D(j, p) += 1.0;
    }
  }
  return D;
}

ElementOperators build_element(const Mesh& mesh, int elem, const LocalOperatorsSet& set) {
  const CellBasis& ext = set.ext[elem];
  const CellBasis& cu = set.unknown[elem];
  const Element& T = mesh.elements[elem];
  const QuadSpec& spec = set.spec;

  ElementOperators op;
  op.elem = elem;
  op.face_ids = T.face_ids;
  op.n_cell = cu.dim();
  for (int f : T.face_ids) op.n_face.push_back(set.faces[f].dim());
  op.ndof = op.n_cell;
  for (int nf : op.n_face) op.ndof += nf;

  const PolyGeom geom = poly_geom(mesh, elem);
  const ElementIntegrator integ(geom, spec);
  const int nx = ext.size_raw();
  const int nx_dim = ext.dim();

  // extended-basis stiffness
  MatrixXd Kraw(nx, nx);
  for (int i = 0; i < nx; ++i)
    for (int j = i; j < nx; ++j) {
      const double v = ext_stiffness_raw(integ, ext, i, j);
      Kraw(i, j) = v;
      Kraw(j, i) = v;
    }
  op.G = ext.ortho * Kraw * ext.ortho.transpose();
  op.G = 0.5 * (op.G + op.G.transpose()).eval();

  // mixed mass (cu x ext)
  MatrixXd Mraw_ux(cu.size_raw(), nx);
  for (int p = 0; p < cu.size_raw(); ++p)
    for (int j = 0; j < nx; ++j) Mraw_ux(p, j) = cell_raw_product(integ, cu, p, ext, j);
  op.mix = cu.ortho * Mraw_ux * ext.ortho.transpose();

  // (cu_m, Delta ext_i)
  const MatrixXd Draw = laplacian_expansion(ext, cu);
  const MatrixXd C = cu.ortho * cu.raw_mass * Draw.transpose() * ext.ortho.transpose();

  // boundary matrices per face
  const int nfaces = T.num_faces();
  std::vector<MatrixXd> grad_trace(nfaces);
  op.trace.resize(nfaces);
  for (int lf = 0; lf < nfaces; ++lf) {
    const FaceBasis& FB = set.faces[T.face_ids[lf]];
    const Point2 n_TF = mesh.outward_normal(elem, lf);
    const FaceIntegrator finteg(FB.a, FB.b, spec);
    MatrixXd Traw(FB.size_raw(), nx), Graw(FB.size_raw(), nx);
    for (int m = 0; m < FB.size_raw(); ++m)
      for (int j = 0; j < nx; ++j) {
        const bool dead = std::find(FB.dropped.begin(), FB.dropped.end(), m) != FB.dropped.end();
        Traw(m, j) = dead ? 0.0 : face_cell_product(finteg, FB, m, ext, j);
        Graw(m, j) = dead ? 0.0 : face_cellgrad_product(finteg, FB, m, ext, j, n_TF);
      }
    op.trace[lf] = FB.ortho * Traw * ext.ortho.transpose();
    grad_trace[lf] = FB.ortho * Graw * ext.ortho.transpose();
  }

  // reconstruction: gradient system on the complement of constants,
  // mean fixed to the cell unknown's mean
  MatrixXd B = MatrixXd::Zero(nx_dim, op.ndof);
  B.block(0, 0, nx_dim, op.n_cell) = -C.transpose();
  for (int lf = 0; lf < nfaces; ++lf)
    B.block(0, op.face_offset(lf), nx_dim, op.n_face[lf]) = grad_trace[lf].transpose();

  op.reconstruction = MatrixXd::Zero(nx_dim, op.ndof);
  if (nx_dim > 1) {
    const MatrixXd Gred = op.G.block(1, 1, nx_dim - 1, nx_dim - 1);
    Eigen::LDLT<MatrixXd> ldlt(Gred);
    const VectorXd D = ldlt.vectorD();
    const double dmax = D.maxCoeff();
    if (!(D.minCoeff() > 1e-14 * dmax))
      throw ConditioningError(elem, ext.raw_condition,
                              "element " + std::to_string(elem) +
                                  ": reconstruction stiffness numerically singular (raw condition " +
                                  std::to_string(ext.raw_condition) + ")");
    op.reconstruction.block(1, 0, nx_dim - 1, op.ndof) =
        ldlt.solve(B.block(1, 0, nx_dim - 1, op.ndof));
  }
  op.reconstruction(0, 0) = 1.0; // both constant modes are 1/sqrt(|T|)

  op.stiffness_core = op.reconstruction.transpose() * op.G * op.reconstruction;
  op.stiffness_core = 0.5 * (op.stiffness_core + op.stiffness_core.transpose()).eval();
  return op;
}

MatrixXd assemble_stab(const Mesh& mesh, const LocalOperatorsSet& set, int elem,
                       StabVariant variant) {
  const ElementOperators& op = set.ops[elem];
  const CellBasis& cu = set.unknown[elem];
  const Element& T = mesh.elements[elem];
  const QuadSpec& spec = set.spec;
  const double hT = T.diameter;

  MatrixXd S = MatrixXd::Zero(op.ndof, op.ndof);

  MatrixXd Dcell = -op.mix * op.reconstruction;
  Dcell.block(0, 0, op.n_cell, op.n_cell) += MatrixXd::Identity(op.n_cell, op.n_cell);

  std::vector<MatrixXd> Dface(T.num_faces());
  for (int lf = 0; lf < T.num_faces(); ++lf) {
    Dface[lf] = -op.trace[lf] * op.reconstruction;
    Dface[lf].block(0, op.face_offset(lf), op.n_face[lf], op.n_face[lf]) +=
        MatrixXd::Identity(op.n_face[lf], op.n_face[lf]);
  }

  switch (variant) {
  case StabVariant::L2: {
    S = (1.0 / (hT * hT)) * Dcell.transpose() * Dcell;
    for (int lf = 0; lf < T.num_faces(); ++lf) S += (1.0 / hT) * Dface[lf].transpose() * Dface[lf];
    break;
  }
  case StabVariant::Grad: {
    const PolyGeom geom = poly_geom(mesh, elem);
    const ElementIntegrator integ(geom, spec);
    MatrixXd Guraw(cu.size_raw(), cu.size_raw());
    for (int i = 0; i < cu.size_raw(); ++i)
      for (int j = i; j < cu.size_raw(); ++j) {
        const double v = integ.grad_mono_grad_mono(cu.raw[i].mono, cu.raw[j].mono);
        Guraw(i, j) = v;
        Guraw(j, i) = v;
      }
    const MatrixXd Gu = cu.ortho * Guraw * cu.ortho.transpose();
    S = Dcell.transpose() * Gu * Dcell;
    for (int lf = 0; lf < T.num_faces(); ++lf) S += (1.0 / hT) * Dface[lf].transpose() * Dface[lf];
    break;
  }
  case StabVariant::Bdry: {
    for (int lf = 0; lf < T.num_faces(); ++lf) {
      const FaceBasis& FB = set.faces[T.face_ids[lf]];
      const FaceIntegrator finteg(FB.a, FB.b, spec);
      MatrixXd Xraw(FB.size_raw(), cu.size_raw());
      for (int m = 0; m < FB.size_raw(); ++m)
        for (int j = 0; j < cu.size_raw(); ++j)
          Xraw(m, j) = face_cell_product(finteg, FB, m, cu, j);
      const MatrixXd X = FB.ortho * Xraw * cu.ortho.transpose();
      MatrixXd Yraw(cu.size_raw(), cu.size_raw());
      for (int i = 0; i < cu.size_raw(); ++i)
        for (int j = i; j < cu.size_raw(); ++j) {
          const double v = finteg.poly_poly(finteg.mono_trace(cu.raw[i].mono),
                                            finteg.mono_trace(cu.raw[j].mono));
          Yraw(i, j) = v;
          Yraw(j, i) = v;
        }
      const MatrixXd Y = cu.ortho * Yraw * cu.ortho.transpose();
      S += (1.0 / hT) * (Dface[lf].transpose() * Dface[lf] -
                         Dface[lf].transpose() * X * Dcell - Dcell.transpose() * X.transpose() * Dface[lf] +
                         Dcell.transpose() * Y * Dcell);
    }
    break;
  }
  }
  return 0.5 * (S + S.transpose());
}

} // namespace

LocalOperatorsSet build_operators(const Mesh& mesh, int k, const EnrichmentSpace& enr,
                                  StabVariant variant, const QuadSpec& spec) {
  if (variant != StabVariant::L2 && !enr.empty() && !enr.all_harmonic())
    throw ConfigError("grad/bdry stabilisation requires harmonic enrichment "
                      "(element unknowns must stay polynomial)");

  LocalOperatorsSet set;
  set.mesh = &mesh;
  set.k = k;
  set.spec = spec;
  set.variant = variant;

  set.ext.reserve(mesh.num_elements());
  set.unknown.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    set.ext.push_back(build_cell_basis(mesh, e, k, enr, spec));
    set.unknown.push_back(build_cell_unknown_basis(mesh, e, k, enr, spec));
  }
  set.faces.reserve(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f)
    set.faces.push_back(build_face_basis(mesh, f, k, enr, spec));

  set.max_cell_condition = max_condition(set.ext);

  set.ops.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) set.ops.push_back(build_element(mesh, e, set));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    ElementOperators& op = set.ops[e];
    op.stab = assemble_stab(mesh, set, e, variant);
    op.aT = op.stiffness_core + op.stab;
    op.aT = 0.5 * (op.aT + op.aT.transpose()).eval();
  }
  return set;
}

// ---------------------------------------------------------------------------
// Projections and interpolation of callables
// ---------------------------------------------------------------------------

namespace {

double cell_raw_moment(const ElementIntegrator& integ, const CellBasis& B, int j,
                       const DecomposedFn& fn, const QuadSpec& spec) {
  const CellRawFunc& r = B.raw[j];
  double v = 0.0;
  switch (r.type) {
  case CellRawFunc::Type::Monomial:
    if (fn.smooth) v += integ.smooth_mono(fn.smooth, fn.smooth_adaptive, r.mono);
    for (const auto& [c, sp] : fn.special) v += c * integ.enrich_mono(sp, r.mono);
    break;
  case CellRawFunc::Type::EnrichValue: {
    const EnrichmentFunction& e = B.enr_funcs[r.enr];
    if (fn.smooth)
      v += adaptive_polygon_or_throw(
          integ.geom(), [&](const Point2& x) { return fn.smooth(x) * e.value(x); },
          spec.sing_edge_tol, e.singular_point);
    for (const auto& [c, sp] : fn.special) v += c * integ.enrich_enrich(sp, e);
    break;
  }
  case CellRawFunc::Type::EnrichLaplacian: {
    const EnrichmentFunction& e = B.enr_funcs[r.enr];
    if (fn.smooth) v += integ.smooth_lap(fn.smooth, fn.smooth_adaptive, e);
    for (const auto& [c, sp] : fn.special) v += c * integ.lap_enrich(e, sp);
    break;
  }
  }
  return v;
}

} // namespace

VectorXd l2_project_cell(const CellBasis& basis, const PolyGeom& geom, const DecomposedFn& fn,
                         const QuadSpec& spec) {
  const ElementIntegrator integ(geom, spec);
  VectorXd raw(basis.size_raw());
  for (int j = 0; j < basis.size_raw(); ++j) raw(j) = cell_raw_moment(integ, basis, j, fn, spec);
  return basis.ortho * raw;
}

VectorXd l2_project_face(const FaceBasis& basis, const DecomposedFn& fn, const QuadSpec& spec) {
  const FaceIntegrator integ(basis.a, basis.b, spec);
  VectorXd raw = VectorXd::Zero(basis.size_raw());
  for (int m = 0; m < basis.size_raw(); ++m) {
    if (std::find(basis.dropped.begin(), basis.dropped.end(), m) != basis.dropped.end()) continue;
    const FaceRawFunc& r = basis.raw[m];
    double v = 0.0;
    if (r.type == FaceRawFunc::Type::Monomial) {
      const PolyOnFace fp = integ.face_mono(r.power);
      if (fn.smooth) v += integ.smooth_poly(fn.smooth, fn.smooth_adaptive, fp);
      for (const auto& [c, sp] : fn.special) {
        if (sp.homogeneity)
          v += c * integ.homog_poly(value_homog(sp), fp);
        else
          v += c * integ.smooth_poly(sp.value, enrichment_adaptive_on_face(sp, integ), fp);
      }
    } else {
      const EnrichmentFunction& e = basis.enr_funcs[r.enr];
      if (fn.smooth) {
        if (e.homogeneity)
          v += integ.smooth_homog(fn.smooth, trace_homog(e, basis.normal));
        else
          v += integ.generic_pair(fn.smooth, trace_fn(e, basis.normal), true);
      }
      for (const auto& [c, sp] : fn.special) {
        if (sp.homogeneity && e.homogeneity)
          v += c * integ.homog_homog(value_homog(sp), trace_homog(e, basis.normal));
        else
          v += c * integ.generic_pair(sp.value, trace_fn(e, basis.normal), true);
      }
    }
    raw(m) = v;
  }
  return basis.ortho * raw;
}

VectorXd elliptic_project(const LocalOperatorsSet& set, int elem, const DecomposedFn& fn) {
  const CellBasis& ext = set.ext[elem];
  const ElementOperators& op = set.ops[elem];
  const PolyGeom geom = poly_geom(*set.mesh, elem);
  const ElementIntegrator integ(geom, set.spec);

  VectorXd raw = VectorXd::Zero(ext.size_raw());
  for (int j = 0; j < ext.size_raw(); ++j) {
    const CellRawFunc& r = ext.raw[j];
    double v = 0.0;
    if (r.type == CellRawFunc::Type::Monomial) {
      if (fn.smooth_grad) v += integ.grad_smooth_grad_mono(fn.smooth_grad, fn.smooth_adaptive, r.mono);
      for (const auto& [c, sp] : fn.special) v += c * integ.grad_enrich_grad_mono(sp, r.mono);
    } else {
      const EnrichmentFunction& e = ext.enr_funcs[r.enr];
      if (fn.smooth)
        v += integ.grad_smooth_grad_enrich(fn.smooth, fn.smooth_grad, fn.smooth_adaptive, e);
      for (const auto& [c, sp] : fn.special) v += c * pair_grad_enrich(integ, sp, e);
    }
    raw(j) = v;
  }
  const VectorXd rhs = ext.ortho * raw;

  const int n = ext.dim();
  VectorXd p = VectorXd::Zero(n);
  if (n > 1) {
    const MatrixXd Gred = op.G.block(1, 1, n - 1, n - 1);
    p.tail(n - 1) = Gred.ldlt().solve(rhs.tail(n - 1));
  }
  double mean = 0.0;
  if (fn.smooth) mean += integ.smooth_moment(fn.smooth, fn.smooth_adaptive);
  for (const auto& [c, sp] : fn.special)
    mean += c * integ.enrich_mono(sp, ScaledMonomial{0, 0, Point2::Zero(), 1.0});
  p(0) = mean / std::sqrt(geom.area);
  return p;
}

VectorXd interpolate_element(const LocalOperatorsSet& set, int elem, const DecomposedFn& fn) {
  const ElementOperators& op = set.ops[elem];
  const PolyGeom geom = poly_geom(*set.mesh, elem);
  VectorXd dofs(op.ndof);
  dofs.head(op.n_cell) = l2_project_cell(set.unknown[elem], geom, fn, set.spec);
  for (size_t lf = 0; lf < op.face_ids.size(); ++lf)
    dofs.segment(op.face_offset(static_cast<int>(lf)), op.n_face[lf]) =
        l2_project_face(set.faces[op.face_ids[lf]], fn, set.spec);
  return dofs;
}

VectorXd reconstruct(const ElementOperators& ops, const VectorXd& dofs) {
  return ops.reconstruction * dofs;
}

MatrixXd stabilization(const LocalOperatorsSet& set, int elem, StabVariant variant) {
  if (variant != StabVariant::L2) {
    for (const EnrichmentFunction& e : set.ext[elem].enr_funcs)
      if (!e.harmonic)
        throw ConfigError("grad/bdry stabilisation requires harmonic enrichment");
  }
  return assemble_stab(*set.mesh, set, elem, variant);
}

} // namespace xhho
