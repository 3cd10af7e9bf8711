#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmk/system.hpp"

#include <random>

using namespace gmk;

namespace {

CoefficientSet coeffs_basic() { return CoefficientSet::constants(1.0, 0.0, 1.0, 1.0, 0.0); }

VectorField random_poly_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Monomial> t1, t2;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j + i <= 3; ++j) {
      t1.push_back({i, j, u(rng)});
      t2.push_back({i, j, u(rng)});
    }
  }
  return VectorField::from_polynomials(Polynomial2(t1), Polynomial2(t2));
}

}  // namespace

TEST_CASE("coefficient matrices at reference points") {
  const CoefficientSet c = coeffs_basic();

  const OperatorMatrices m0 = assemble_matrices(Vec2(0, 0), c);
  Mat2 a1, a2;
  a1 << 1, 0, 0, -1;
  a2 << 0, 1, 1, 0;
  CHECK((m0.A1 - a1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m0.A2 - a2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m0.B - Mat2::Identity()).cwiseAbs().maxCoeff() == 0.0);

  // A1 degenerates on the unit circle.
  const OperatorMatrices m1 = assemble_matrices(Vec2(1, 0), c);
  CHECK(m1.A1(0, 0) == 0.0);
  CHECK(m1.A1(1, 1) == -1.0);

  const OperatorMatrices m2 = assemble_matrices(Vec2(0.5, 0.5), c);
  CHECK(m2.A1(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m2.A1(1, 1) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(m2.A2(0, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(m2.A2(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m2.B(0, 0) == doctest::Approx(0.0));
  CHECK(m2.B(0, 1) == doctest::Approx(-1.25).epsilon(1e-15));
  CHECK(m2.B(1, 0) == 0.0);
  CHECK(m2.B(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("A1 and A2 are symmetric everywhere") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const CoefficientSet c = coeffs_basic();
  for (int k = 0; k < 1000; ++k) {
    const Vec2 p(u(rng), u(rng));
    const OperatorMatrices m = assemble_matrices(p, c);
    CHECK(m.A1(0, 1) == m.A1(1, 0));
    CHECK(m.A2(0, 1) == m.A2(1, 0));
  }
}

TEST_CASE("Q matrix closed form") {
  const CoefficientSet c = coeffs_basic();
  const QMatrix q0 = q_matrix(Vec2(0, 0), c);
  CHECK(q0.q11 == 1.0);
  CHECK(q0.q12 == 0.0);
  CHECK(q0.q22 == 1.0);

  const QMatrix q = q_matrix(Vec2(0.5, 0.5), c);
  CHECK(q.q11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.q12 == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(q.q22 == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(q.det() == doctest::Approx(0.734375).epsilon(1e-15));
}

TEST_CASE("Q agrees with B* minus half the divergence of (A1, A2)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Polynomial2 G1({{0, 0, 2.0}, {1, 1, 0.25}});
  Polynomial2 G2({{0, 1, 0.5}});
  Polynomial2 g1({{0, 0, 3.0}, {2, 0, -0.5}});
  CoefficientSet c = CoefficientSet::constants(1, 0, 1, 1, 0);
  c.Gamma1 = [G1](double x, double y) { return G1(x, y); };
  c.Gamma2 = [G2](double x, double y) { return G2(x, y); };
  c.gamma1 = [g1](double x, double y) { return g1(x, y); };

  for (int k = 0; k < 10000; ++k) {
    const Vec2 p(u(rng), u(rng));
    // q_matrix throws ConsistencyError if the two routes diverge past 1e-12.
    CHECK_NOTHROW(q_matrix(p, c));
    // Independent transcription of the second route.
    const OperatorMatrices m = assemble_matrices(p, c);
    Mat2 div;
    div << -4.0 * p.x(), -2.0 * p.y(), -2.0 * p.y(), 0.0;
    const Mat2 alt = symmetric_part(m.B) - 0.5 * div;
    CHECK((q_matrix(p, c).mat() - alt).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("coefficient bound report") {
  const CoefficientSet c = coeffs_basic();
  const GboundReport r = check_gbound(Vec2(0.5, 0.5), c);
  CHECK(r.bound == doctest::Approx(1.0 / 48.0).epsilon(1e-12));
  CHECK(r.margin == doctest::Approx(1.0 - 1.0 / 48.0).epsilon(1e-12));
  CHECK(r.pass);

  // gamma1 = 0 at the origin satisfies the weak inequality but Q is only
  // semidefinite; the operative positive-definiteness report fails.
  const CoefficientSet c0 = CoefficientSet::constants(1, 0, 0, 1, 0);
  const GboundReport r0 = check_gbound(Vec2(0, 0), c0);
  CHECK(r0.bound == 0.0);
  CHECK(r0.inequality_ok);
  CHECK(!r0.q_positive_definite);
  CHECK(!r0.pass);

  const CoefficientSet c9 = CoefficientSet::constants(1, 1, 10, 1, 0);
  const GboundReport r9 = check_gbound(Vec2(0.9, 0.9), c9);
  CHECK(r9.bound == doctest::Approx(0.25 * 0.62 * 0.62 / 0.19).epsilon(1e-12));
  CHECK(r9.margin == doctest::Approx(10.0 - 0.25 * 0.62 * 0.62 / 0.19).epsilon(1e-10));
  CHECK(r9.pass);

  CHECK_THROWS_AS(check_gbound(Vec2(0.3, 1.0), c), DegenerateLineError);
}

TEST_CASE("positivity chain: strict bound margin implies Q positive definite") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(-1.4, 1.4), uy(-0.95, 0.95);
  const CoefficientSet c = CoefficientSet::constants(1.0, 0.0, 2.0, 1.0, 0.0);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 p(ux(rng), uy(rng));
    const GboundReport r = check_gbound(p, c);
    if (r.margin > 0.0 && eval_field(c.gamma1, p) > 0.0) {
      CHECK(r.q_positive_definite);
    }
  }
}

TEST_CASE("type classification") {
  CHECK(classify_type(Vec2(0, 0)) == PointType::Elliptic);
  CHECK(classify_type(Vec2(1, 0)) == PointType::Parabolic);
  CHECK(classify_type(Vec2(-1.2, 0.1)) == PointType::Hyperbolic);
}

TEST_CASE("characteristic form") {
  CHECK(char_form(Vec2(0, 0), Vec2(1, 0)) == -1.0);
  // Points on y = x + sqrt2 with direction (1,1) are characteristic.
  const double s2 = std::numbers::sqrt2;
  CHECK(std::abs(char_form(Vec2(-s2, 0), Vec2(1, 1))) <= 1e-15);
  CHECK(std::abs(char_form(Vec2(-0.75 * s2, 0.25 * s2), Vec2(1, 1))) <= 1e-14);
  // Circle tangents are characteristic.
  CHECK(std::abs(char_form(Vec2(0.5 * s2, -0.5 * s2), Vec2(0.5 * s2, 0.5 * s2))) <= 1e-15);
  CHECK_THROWS_AS(char_form(Vec2(0, 0), Vec2(0, 0)), std::invalid_argument);
}

TEST_CASE("characteristic form is nonpositive on the closed disc") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 5000; ++k) {
    Vec2 p(u(rng), u(rng));
    if (p.squaredNorm() > 1.0) p /= p.norm();
    const double a = ang(rng);
    CHECK(char_form(p, Vec2(std::cos(a), std::sin(a))) <= 1e-12);
  }
}

TEST_CASE("type matches the root structure of the characteristic form") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.6, 1.6), ang(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 p(u(rng), u(rng));
    // Phi(d) = -(1-y^2)dx^2 - 2xy dxdy - (1-x^2)dy^2; discriminant of the
    // quadratic in dx/dy is 4(x^2 + y^2 - 1).
    const double disc = p.squaredNorm() - 1.0;
    const PointType t = classify_type(p, 1e-9);
    if (t == PointType::Hyperbolic) {
      CHECK(disc > 0.0);
    } else if (t == PointType::Elliptic) {
      CHECK(disc < 0.0);
      for (int d = 0; d < 16; ++d) {
        const double a = ang(rng);
        CHECK(char_form(p, Vec2(std::cos(a), std::sin(a))) < 0.0);
      }
    }
  }
}

TEST_CASE("operator application") {
  const CoefficientSet c = coeffs_basic();
  CHECK(apply_operator(Vec2(0, 0), Vec2(0, 0), Vec2(0, 0), Vec2(0.3, -0.2), c).norm() == 0.0);

  const Vec2 cc(0.7, -1.2);
  const OperatorMatrices m = assemble_matrices(Vec2(0.4, 0.1), c);
  const Vec2 lc = apply_operator(cc, Vec2(0, 0), Vec2(0, 0), Vec2(0.4, 0.1), c);
  CHECK((lc - m.B * cc).norm() <= 1e-15);

  // U = (x, y) at (0.5, 0.5).
  const Vec2 lu = apply_operator(Vec2(0.5, 0.5), Vec2(1, 0), Vec2(0, 1), Vec2(0.5, 0.5), c);
  CHECK(lu(0) == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(lu(1) == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("right-side transform") {
  CHECK((rhs_transform(Vec2(0.8, -0.3), Vec2(2.5, 0.0)) - Vec2(2.5, 0.0)).norm() == 0.0);
  const Vec2 t = rhs_transform(Vec2(0.5, 0.5), Vec2(0, 1));
  CHECK(t(0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(t(1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(rhs_transform(Vec2(0.2, -1.0), Vec2(1, 1)), DegenerateLineError);
}

TEST_CASE("symmetric system is the transformed original system") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(-0.95, 0.95);
  const CoefficientSet c = CoefficientSet::constants(1.3, 0.4, 2.0, 1.0, 0.5);
  const VectorField U = VectorField::manufactured();
  for (int k = 0; k < 100; ++k) {
    const Vec2 p(ux(rng), uy(rng));
    const Mat2 J = U.jacobian(p);
    const Vec2 lu = apply_operator(U.value(p), J.col(0), J.col(1), p, c);
    const Vec2 lhs = original_lhs(U.value(p), J.col(0), J.col(1), p, c);
    CHECK((lu - rhs_transform(p, lhs)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  for (int k = 0; k < 50; ++k) {
    const VectorField V = random_poly_field(rng);
    const Vec2 p(ux(rng), uy(rng));
    const Mat2 J = V.jacobian(p);
    const Vec2 lu = apply_operator(V.value(p), J.col(0), J.col(1), p, c);
    const Vec2 lhs = original_lhs(V.value(p), J.col(0), J.col(1), p, c);
    CHECK((lu - rhs_transform(p, lhs)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("original residual subtracts the source") {
  const CoefficientSet c = CoefficientSet::constants(1.0, 0.0, 2.0, 3.0, -1.0);
  const Vec2 p(0.2, 0.1);
  const Vec2 r =
      original_residual(Vec2(0, 0), Vec2(0, 0), Vec2(0, 0), p, c);
  CHECK((r - Vec2(-3.0, 1.0)).norm() == 0.0);
}

TEST_CASE("field evaluation failures surface as errors") {
  CoefficientSet c = coeffs_basic();
  c.Gamma1 = [](double, double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(assemble_matrices(Vec2(0, 0), c), FieldEvalError);
}
