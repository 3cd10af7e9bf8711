#include "gmk/system.hpp"

#include <cmath>

namespace gmk {

OperatorMatrices assemble_matrices(const Vec2& p, const CoefficientSet& c) {
  const double x = p.x(), y = p.y();
  const double G1 = eval_field(c.Gamma1, p);
  const double G2 = eval_field(c.Gamma2, p);
  const double g1 = eval_field(c.gamma1, p);

  OperatorMatrices m;
  m.A1 << 1.0 - x * x, 0.0,
      0.0, y * y - 1.0;
  m.A2 << -2.0 * x * y, 1.0 - y * y,
      1.0 - y * y, 0.0;
  m.B << x * y * G2 + g1 - 2.0 * x, -x * y * G1 - 2.0 * y,
      G2 * (y * y - 1.0), G1 * (1.0 - y * y);
  return m;
}

QMatrix q_matrix(const Vec2& p, const CoefficientSet& c) {
  const double x = p.x(), y = p.y();
  const double G1 = eval_field(c.Gamma1, p);
  const double G2 = eval_field(c.Gamma2, p);
  const double g1 = eval_field(c.gamma1, p);

  QMatrix q;
  q.q11 = x * y * G2 + g1;
  q.q12 = -0.5 * x * y * G1 + 0.5 * G2 * (y * y - 1.0);
  q.q22 = G1 * (1.0 - y * y);

  // Second route: B* - (A1_x + A2_y)/2 with analytic derivatives.
  const OperatorMatrices m = assemble_matrices(p, c);
  Mat2 dA1x, dA2y;
  dA1x << -2.0 * x, 0.0, 0.0, 0.0;
  dA2y << -2.0 * x, -2.0 * y, -2.0 * y, 0.0;
  const Mat2 q_alt = symmetric_part(m.B) - 0.5 * (dA1x + dA2y);

  const double diff = (q.mat() - q_alt).cwiseAbs().maxCoeff();
  if (diff > 1e-12) {
    throw ConsistencyError("Q closed form disagrees with B* - (A1_x + A2_y)/2 by " +
                           std::to_string(diff));
  }
  return q;
}

GboundReport check_gbound(const Vec2& p, const CoefficientSet& c) {
  const double x = p.x(), y = p.y();
  if (y * y == 1.0) {
    throw DegenerateLineError("coefficient bound undefined on the lines y^2 = 1");
  }
  const double G1 = eval_field(c.Gamma1, p);
  const double G2 = eval_field(c.Gamma2, p);
  const double g1 = eval_field(c.gamma1, p);

  GboundReport r;
  const double num = x * y * G1 + (y * y - 1.0) * G2;
  r.bound = 0.25 * num * num / std::abs(G1 * (1.0 - y * y));
  r.margin = std::abs(g1) - r.bound;
  r.inequality_ok = G1 > 0.0 && r.margin >= 0.0;
  r.q_positive_definite = q_matrix(p, c).positive_definite();
  r.pass = r.inequality_ok && r.q_positive_definite;
  return r;
}

PointType classify_type(const Vec2& p, double tol) {
  const double s = p.squaredNorm() - 1.0;
  if (s < -tol) return PointType::Elliptic;
  if (s > tol) return PointType::Hyperbolic;
  return PointType::Parabolic;
}

double char_form(const Vec2& p, const Vec2& d) {
  if (d.x() == 0.0 && d.y() == 0.0) {
    throw std::invalid_argument("char_form: zero direction");
  }
  const double x = p.x(), y = p.y();
  const double dx = d.x(), dy = d.y();
  return -(1.0 - y * y) * dx * dx - 2.0 * x * y * dx * dy - (1.0 - x * x) * dy * dy;
}

Vec2 apply_operator(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                    const CoefficientSet& c) {
  const OperatorMatrices m = assemble_matrices(p, c);
  return m.A1 * Ux + m.A2 * Uy + m.B * U;
}

Vec2 original_lhs(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                  const CoefficientSet& c) {
  const double x = p.x(), y = p.y();
  const double G1 = eval_field(c.Gamma1, p);
  const double G2 = eval_field(c.Gamma2, p);
  const double g1 = eval_field(c.gamma1, p);
  const double u1 = U(0), u2 = U(1);
  const double u1x = Ux(0), u2x = Ux(1), u1y = Uy(0), u2y = Uy(1);

  Vec2 lhs;
  lhs(0) = (1.0 - x * x) * u1x - x * y * (u1y + u2x) + (1.0 - y * y) * u2y -
           (2.0 * x - g1) * u1 - 2.0 * y * u2;
  lhs(1) = u1y - u2x - (u1 * G2 - u2 * G1);
  return lhs;
}

Vec2 original_residual(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                       const CoefficientSet& c) {
  return original_lhs(U, Ux, Uy, p, c) - Vec2(eval_field(c.f1, p), eval_field(c.f2, p));
}

Vec2 rhs_transform(const Vec2& p, const Vec2& F) {
  const double x = p.x(), y = p.y();
  if (y * y == 1.0) {
    throw DegenerateLineError("rhs transform singular on the lines y^2 = 1");
  }
  return Vec2(F(0) - x * y * F(1), (1.0 - y * y) * F(1));
}

}  // namespace gmk
