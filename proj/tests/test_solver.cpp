#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmk/solver.hpp"

#include <cmath>

using namespace gmk;

namespace {

Mesh default_mesh(int n_theta = 48, int n_r = 12) {
  return generate_mesh(DomainSpec{}, n_theta, n_r);
}

SourceField manufactured_source(const CoefficientSet& c, const VectorField& U) {
  return [&c, U](const Vec2& p) { return apply_operator(U, p, c); };
}

}  // namespace

TEST_CASE("normal equations are symmetric and the diagonal is positive") {
  const Mesh mesh = default_mesh(32, 8);
  const CoefficientSet c = CoefficientSet::preset("default");
  const DiscreteProblem prob =
      assemble(mesh, c, [](const Vec2&) { return Vec2(1, 0); }, BoundaryData{});

  CHECK(prob.gbound_failures == 0);
  CHECK(prob.lambda > 0.0);

  const Eigen::SparseMatrix<double> diff =
      Eigen::SparseMatrix<double>(prob.matrix.transpose()) - prob.matrix;
  double max_asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      max_asym = std::max(max_asym, std::abs(it.value()));
  CHECK(max_asym <= 1e-14);

  for (int i = 0; i < prob.matrix.rows(); ++i) CHECK(prob.matrix.coeff(i, i) > 0.0);
}

TEST_CASE("zero data gives the zero solution") {
  const Mesh mesh = default_mesh(32, 8);
  const CoefficientSet c = CoefficientSet::preset("default");
  const DiscreteProblem prob =
      assemble(mesh, c, [](const Vec2&) { return Vec2::Zero().eval(); }, BoundaryData{});
  const SolveResult sol = solve(prob, 1e-12);
  CHECK(sol.u.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(l2_norm(mesh, sol.u) <= 1e-10);
}

TEST_CASE("constant fields are reproduced exactly") {
  // U = (c1, 0) constants satisfy the tangential and first-component boundary
  // conditions only for c1 = 0; instead check the residual machinery: the
  // interpolant of a constant has zero gradient, so L U = B U pointwise and
  // the assembled objective matches the analytic least-squares functional.
  const Mesh mesh = default_mesh(32, 8);
  const CoefficientSet c = CoefficientSet::preset("default");
  const VectorField U = VectorField::constant(0.3, -0.2);
  const SourceField F = manufactured_source(c, U);

  // Inhomogeneous boundary data equal to the trace of U.
  const DiscreteProblem prob = assemble(mesh, c, F, [&U](const Vec2& p) { return U.value(p); });
  const SolveResult sol = solve(prob, 1e-12);
  const Eigen::VectorXd exact = interpolate(mesh, U);

  // The interpolant is in the trial space and zeroes every residual term up
  // to roundoff in the assembled quadratic.
  CHECK(std::abs(prob.objective(exact)) <= 1e-10);
  CHECK((sol.u - exact).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(l2_error(mesh, sol.u, U) <= 1e-8);
}

TEST_CASE("galerkin optimality: solver beats the interpolant in the objective") {
  const Mesh mesh = default_mesh(48, 12);
  const CoefficientSet c = CoefficientSet::preset("default");
  const VectorField U = VectorField::manufactured();
  const DiscreteProblem prob =
      assemble(mesh, c, manufactured_source(c, U), [&U](const Vec2& p) { return U.value(p); });
  const SolveResult sol = solve(prob, 1e-11);

  const double j_solver = prob.objective(sol.u);
  const double j_interp = prob.objective(interpolate(mesh, U));
  CHECK(j_solver <= j_interp + 1e-12);
}

TEST_CASE("residual history is monotone") {
  const Mesh mesh = default_mesh(48, 12);
  const CoefficientSet c = CoefficientSet::preset("default");
  const DiscreteProblem prob =
      assemble(mesh, c, [](const Vec2&) { return Vec2(1, 0); }, BoundaryData{});
  const SolveResult sol = solve(prob, 1e-10);

  REQUIRE(sol.residual_history.size() >= 2);
  for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
    CHECK(sol.residual_history[i] <= sol.residual_history[i - 1] + 1e-12);
  // History records the initial objective plus one entry per iteration.
  CHECK(sol.iterations + 1 == static_cast<int>(sol.residual_history.size()));
  CHECK(sol.l2_functional == doctest::Approx(prob.objective(sol.u)).epsilon(1e-9));
}

TEST_CASE("nonconvergence raises with the history attached") {
  const Mesh mesh = default_mesh(32, 8);
  const CoefficientSet c = CoefficientSet::preset("default");
  const DiscreteProblem prob =
      assemble(mesh, c, [](const Vec2&) { return Vec2(1, 0); }, BoundaryData{});
  try {
    solve(prob, 1e-14, 2);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual_history.size() == 3);  // initial value plus two iterations
  }
}

TEST_CASE("energy identity for analytic fields") {
  const Mesh mesh = default_mesh(96, 24);
  const CoefficientSet c = CoefficientSet::preset("default");

  SUBCASE("zero field: every term vanishes") {
    const EnergyReport er = energy_identity(VectorField::zero(), c, mesh);
    CHECK(er.volume_term == 0.0);
    CHECK(er.boundary_term == 0.0);
    CHECK(er.source_term == 0.0);
    CHECK(er.defect == 0.0);
  }

  SUBCASE("constant (1, 0): volume term is twice the area") {
    // U . Q U = q11 = x y Gamma2 + gamma1 = 2 for the default preset.
    const EnergyReport er = energy_identity(VectorField::constant(1.0, 0.0), c, mesh);
    CHECK(er.volume_term == doctest::Approx(2.0 * mesh.area()).epsilon(1e-10));
    CHECK(er.defect <= 5e-3);
  }

  SUBCASE("manufactured field: identity holds to quadrature error") {
    const EnergyReport er = energy_identity(VectorField::manufactured(), c, mesh);
    CHECK(er.defect <=
          5e-3 * (std::abs(er.volume_term) + std::abs(er.boundary_term) + 1.0));
  }
}

TEST_CASE("energy defect shrinks like h^2") {
  const CoefficientSet c = CoefficientSet::preset("default");
  const VectorField U = VectorField::manufactured();
  const double d1 = energy_identity(U, c, default_mesh(64, 16)).defect;
  const double d2 = energy_identity(U, c, default_mesh(128, 32)).defect;
  CHECK(d2 < d1);
  CHECK(d1 / d2 > 2.5);  // second order puts the ratio near 4
}

TEST_CASE("characteristic boundary edges carry no penalty") {
  // Remove all non-characteristic boundary edges: the boundary block of the
  // matrix must then be absent, i.e. assembling with lambda ~ 0 and with a
  // large lambda gives identical rows for characteristic-only meshes is hard
  // to isolate; instead check it indirectly through the assembled matrix:
  // doubling lambda must not change entries whose boundary vertices lie only
  // on characteristic edges.
  const Mesh mesh = default_mesh(48, 12);
  const CoefficientSet c = CoefficientSet::preset("default");
  auto F = [](const Vec2&) { return Vec2(1, 0); };
  const DiscreteProblem p1 = assemble(mesh, c, F, BoundaryData{}, 10.0);
  const DiscreteProblem p2 = assemble(mesh, c, F, BoundaryData{}, 20.0);

  std::vector<bool> only_characteristic(mesh.vertices.size(), true);
  std::vector<bool> on_boundary(mesh.vertices.size(), false);
  for (const auto& e : mesh.boundary) {
    on_boundary[e.a] = on_boundary[e.b] = true;
    if (e.sample.arc_class != ArcClass::Characteristic &&
        e.sample.arc_class != ArcClass::Degenerate) {
      only_characteristic[e.a] = only_characteristic[e.b] = false;
    }
  }

  int checked = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!on_boundary[v] || !only_characteristic[v]) continue;
    for (int d = 0; d < 2; ++d) {
      const int i = 2 * static_cast<int>(v) + d;
      CHECK(p1.matrix.coeff(i, i) == doctest::Approx(p2.matrix.coeff(i, i)).epsilon(1e-14));
    }
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("manufactured solve converges under refinement") {
  const CoefficientSet c = CoefficientSet::preset("default");
  const VectorField U = VectorField::manufactured();
  double prev = 0.0;
  int level = 0;
  for (const int n : {24, 48}) {
    const Mesh mesh = default_mesh(n, n / 4);
    const DiscreteProblem prob =
        assemble(mesh, c, manufactured_source(c, U), [&U](const Vec2& p) { return U.value(p); });
    const SolveResult sol = solve(prob, 1e-11);
    const double err = l2_error(mesh, sol.u, U);
    CHECK(err < 1.0);
    if (level > 0) CHECK(err < prev);
    prev = err;
    ++level;
  }
}

TEST_CASE("convergence study rows are well formed") {
  const CoefficientSet c = CoefficientSet::preset("default");
  const auto rows = convergence_study(DomainSpec{}, c, VectorField::manufactured(), 3, 16);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].n_theta == 16);
  CHECK(rows[1].n_theta == 32);
  CHECK(rows[2].n_theta == 64);
  CHECK(rows[1].h < rows[0].h);
  CHECK(rows[1].l2_error < rows[0].l2_error);
  for (const auto& r : rows) {
    CHECK(r.h > 0.0);
    CHECK(r.stability_ratio > 0.0);
    CHECK(std::isfinite(r.energy_defect));
  }
}
