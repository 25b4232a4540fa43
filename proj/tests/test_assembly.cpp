#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "test_meshes.hpp"
#include "xhho/analysis.hpp"
#include "xhho/assembly.hpp"
#include "xhho/problems.hpp"

using namespace xhho;
using Eigen::VectorXd;

namespace {

const double kOmega = 1.5 * M_PI;

EnrichmentSpace corner_space(const Mesh& mesh, double gamma) {
  return build_enrichment_space(mesh, {corner_singular_function(1, kOmega, M_PI / 2.0)}, gamma,
                                Point2(0, 0));
}

DecomposedFn zero_fn() {
  DecomposedFn fn;
  fn.smooth = nullptr;
  return fn;
}

} // namespace

TEST_CASE("homogeneous problem has the zero solution") {
  const Mesh mesh = generate_cartesian(Domain::LShape, 2);
  QuadSpec spec;
  spec.k = 1;
  const LocalOperatorsSet ops = build_operators(mesh, 1, corner_space(mesh, 0.0), StabVariant::L2, spec);
  const GlobalSystem sys = assemble(mesh, ops, zero_fn(), nullptr);
  const DiscreteSolution sol = solve(sys);
  for (const VectorXd& c : sol.cell) CHECK(c.norm() <= 1e-14);
  for (const VectorXd& f : sol.face) CHECK(f.norm() <= 1e-14);
}

TEST_CASE("scheme is exact on affine solutions for every k") {
  const Problem p = custom_problem("linear");
  const Mesh mesh = generate_cartesian(Domain::LShape, 2);
  for (int k : {0, 1, 2}) {
    QuadSpec spec;
    spec.k = k;
    const LocalOperatorsSet ops =
        build_operators(mesh, k, corner_space(mesh, 0.0), StabVariant::L2, spec);
    const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);
    const DiscreteSolution sol = solve(sys);
    const GlobalDofs iu = interpolate_global(ops, p.exact);
    double err = 0.0, ref = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const VectorXd d = gather_local(ops, e, sol.cell, sol.face) - gather_local(ops, e, iu.cell, iu.face);
      const VectorXd v = gather_local(ops, e, iu.cell, iu.face);
      err += d.dot(ops.ops[e].aT * d);
      ref += v.dot(ops.ops[e].aT * v);
    }
    CHECK(std::sqrt(std::max(err, 0.0)) <= 1e-10 * std::sqrt(ref));
  }
}

TEST_CASE("scheme is exact on the singular function with global enrichment") {
  const Problem p = custom_problem("corner_pure");
  const Mesh mesh = generate_cartesian(Domain::LShape, 1);
  QuadSpec spec;
  spec.k = 1;
  const LocalOperatorsSet ops = build_operators(
      mesh, 1, corner_space(mesh, std::numeric_limits<double>::infinity()), StabVariant::L2, spec);
  const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);
  const DiscreteSolution sol = solve(sys);
  const ErrorReport rep = compute_errors(mesh, ops, sol, p.exact);
  CHECK(rep.Ea <= 1e-8);
}

TEST_CASE("condensed and uncondensed solves agree on small meshes") {
  std::vector<std::pair<Mesh, double>> cases;
  cases.emplace_back(generate_cartesian(Domain::LShape, 2), 0.4);          // 12 elements
  cases.emplace_back(generate_triangular(Domain::LShape, 2), 0.4);         // 24 elements
  cases.emplace_back(generate_cartesian(Domain::Square, 1), 0.0);          // 1 element
  std::istringstream hex(fixtures::brick_mesh_text(2, 3, 0.3));
  cases.emplace_back(read_mesh(hex), 0.0); // 8 polygonal cells

  const Problem p = lshape_corner();
  for (const auto& [mesh, gamma] : cases) {
    REQUIRE(mesh.num_elements() <= 32);
    for (int k : {0, 1}) {
      QuadSpec spec;
      spec.k = k;
      const LocalOperatorsSet ops =
          build_operators(mesh, k, corner_space(mesh, gamma), StabVariant::L2, spec);
      const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);
      const DiscreteSolution condensed = solve(sys);
      const DiscreteSolution full = solve_uncondensed(sys);
      for (int f = 0; f < mesh.num_faces(); ++f) {
        const double scale = std::max(condensed.face[f].norm(), 1.0);
        CHECK((condensed.face[f] - full.face[f]).norm() <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("condensed matrix is symmetric and the residual is small") {
  const Problem p = lshape_corner();
  const Mesh mesh = generate_cartesian(Domain::LShape, 4);
  QuadSpec spec;
  spec.k = 1;
  const LocalOperatorsSet ops =
      build_operators(mesh, 1, corner_space(mesh, 0.3), StabVariant::L2, spec);
  const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);

  const Eigen::SparseMatrix<double> At = Eigen::SparseMatrix<double>(sys.A.transpose());
  CHECK((sys.A - At).norm() <= 1e-12 * sys.A.norm());

  const DiscreteSolution sol = solve(sys);
  CHECK(sol.residual <= 1e-10);

  SUBCASE("cg solves the same system") {
    SolverOptions cg;
    cg.kind = SolverOptions::Kind::CG;
    cg.cg_tol = 1e-13;
    const DiscreteSolution sol_cg = solve(sys, cg);
    for (int f = 0; f < mesh.num_faces(); ++f)
      CHECK((sol.face[f] - sol_cg.face[f]).norm() <= 1e-8 * std::max(1.0, sol.face[f].norm()));
  }
}

TEST_CASE("one-element mesh with k=0 recovers an affine solution") {
  const Problem p = custom_problem("linear");
  const Mesh mesh = generate_cartesian(Domain::Square, 1);
  QuadSpec spec;
  spec.k = 0;
  const LocalOperatorsSet ops =
      build_operators(mesh, 0, corner_space(mesh, 0.0), StabVariant::L2, spec);
  const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);
  CHECK(sys.n_unknowns == 0); // every face is boundary
  const DiscreteSolution sol = solve(sys);
  // cell mean of x + y over (0,1)^2 is 1; constant basis function is 1
  CHECK(sol.cell[0](0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy norm") {
  const Mesh mesh = generate_cartesian(Domain::LShape, 2);
  QuadSpec spec;
  spec.k = 1;
  const LocalOperatorsSet ops = build_operators(
      mesh, 1, corner_space(mesh, std::numeric_limits<double>::infinity()), StabVariant::L2, spec);

  SUBCASE("zero vector") {
    std::vector<VectorXd> cells(mesh.num_elements()), faces(mesh.num_faces());
    for (int e = 0; e < mesh.num_elements(); ++e) cells[e] = VectorXd::Zero(ops.ops[e].n_cell);
    for (int f = 0; f < mesh.num_faces(); ++f) faces[f] = VectorXd::Zero(ops.faces[f].dim());
    CHECK(energy_norm(ops, cells, faces) == 0.0);
  }

  SUBCASE("interpolate of psi against the closed-form Dirichlet energy") {
    DecomposedFn psi;
    psi.special.emplace_back(1.0, corner_singular_function(1, kOmega, M_PI / 2.0));
    const GlobalDofs iu = interpolate_global(ops, psi);
    const double got = energy_norm(ops, iu.cell, iu.face);
    // |grad psi|^2 = alpha^2 r^(2 alpha - 2); integrate in polar coordinates
    // over the L-shape: (alpha/2) int R(theta)^(2 alpha) d theta
    const double alpha = 2.0 / 3.0;
    auto f = [&](double theta) {
      const double R = 1.0 / std::max(std::abs(std::cos(theta)), std::abs(std::sin(theta)));
      return 0.5 * alpha * std::pow(R, 2.0 * alpha);
    };
    const double want = std::sqrt(oracle::integrate_1d(f, M_PI / 2.0, 2.0 * M_PI, 1e-12));
    CHECK(got == doctest::Approx(want).epsilon(1e-7));
  }

  SUBCASE("absolute homogeneity") {
    DecomposedFn v;
    v.smooth = [](const Point2& x) { return std::sin(x.x()) + x.y() * x.y(); };
    v.smooth_grad = [](const Point2& x) { return Point2(std::cos(x.x()), 2.0 * x.y()); };
    GlobalDofs iu = interpolate_global(ops, v);
    const double base = energy_norm(ops, iu.cell, iu.face);
    for (VectorXd& c : iu.cell) c *= 2.0;
    for (VectorXd& f : iu.face) f *= 2.0;
    CHECK(energy_norm(ops, iu.cell, iu.face) == doctest::Approx(2.0 * base).epsilon(1e-12));
  }
}

TEST_CASE("Galerkin orthogonality on random test vectors") {
  const Problem p = lshape_corner();
  const Mesh mesh = generate_cartesian(Domain::LShape, 4);
  QuadSpec spec;
  spec.k = 1;
  const LocalOperatorsSet ops =
      build_operators(mesh, 1, corner_space(mesh, 0.3), StabVariant::L2, spec);
  const GlobalSystem sys = assemble(mesh, ops, p.source, &p.exact);
  const DiscreteSolution sol = solve(sys);

  std::mt19937 rng(41);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    // random discrete test vector, zero on boundary faces
    std::vector<VectorXd> vc(mesh.num_elements()), vf(mesh.num_faces());
    for (int e = 0; e < mesh.num_elements(); ++e) {
      vc[e] = VectorXd(ops.ops[e].n_cell);
      for (int i = 0; i < vc[e].size(); ++i) vc[e](i) = g(rng);
    }
    for (int f = 0; f < mesh.num_faces(); ++f) {
      vf[f] = VectorXd::Zero(ops.faces[f].dim());
      if (!mesh.faces[f].boundary)
        for (int i = 0; i < vf[f].size(); ++i) vf[f](i) = g(rng);
    }
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const VectorXd u = gather_local(ops, e, sol.cell, sol.face);
      const VectorXd v = gather_local(ops, e, vc, vf);
      lhs += v.dot(ops.ops[e].aT * u);
      rhs += vc[e].dot(sys.cell_rhs[e]);
      scale += std::abs(v.dot(ops.ops[e].aT * u));
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(scale, 1.0));
  }
}
