#pragma once

#include "gmk/fields.hpp"

namespace gmk {

struct DegenerateLineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coefficient matrices of the symmetric first-order system
/// L U = A1 U_x + A2 U_y + B U.
struct OperatorMatrices {
  Mat2 A1;  // symmetric, degenerates on x^2 = 1
  Mat2 A2;  // symmetric
  Mat2 B;
};

/// Symmetric 2x2 matrix Q = B* - (A1_x + A2_y)/2 controlling positivity.
struct QMatrix {
  double q11 = 0.0;
  double q12 = 0.0;
  double q22 = 0.0;

  Mat2 mat() const {
    Mat2 m;
    m << q11, q12, q12, q22;
    return m;
  }
  double det() const { return q11 * q22 - q12 * q12; }
  bool positive_definite() const { return q11 > 0.0 && det() > 0.0; }
};

enum class PointType { Elliptic, Parabolic, Hyperbolic };

/// Result of the coefficient-bound check. `pass` keys on direct positive
/// definiteness of Q; the inequality report is informational.
struct GboundReport {
  bool inequality_ok = false;  // Gamma1 > 0 and |gamma1| >= bound
  double bound = 0.0;
  double margin = 0.0;  // |gamma1| - bound
  bool q_positive_definite = false;
  bool pass = false;
};

OperatorMatrices assemble_matrices(const Vec2& p, const CoefficientSet& c);

inline Mat2 symmetric_part(const Mat2& m) { return 0.5 * (m + m.transpose()); }

/// Builds Q from the closed-form entries and cross-checks against
/// B* - (A1_x + A2_y)/2 with analytic derivatives; throws ConsistencyError
/// if the two routes disagree beyond 1e-12.
QMatrix q_matrix(const Vec2& p, const CoefficientSet& c);

/// Throws DegenerateLineError when y^2 = 1.
GboundReport check_gbound(const Vec2& p, const CoefficientSet& c);

PointType classify_type(const Vec2& p, double tol = 1e-12);

/// Quadratic characteristic form
/// Phi(p, d) = -(1-y^2) dx^2 - 2xy dx dy - (1-x^2) dy^2.
/// Phi = 0 picks out characteristic directions; Phi <= 0 on the closed disc.
double char_form(const Vec2& p, const Vec2& d);

/// L U at p given the field value and its partials.
Vec2 apply_operator(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                    const CoefficientSet& c);

inline Vec2 apply_operator(const VectorField& U, const Vec2& p, const CoefficientSet& c) {
  const Mat2 J = U.jacobian(p);
  return apply_operator(U.value(p), J.col(0), J.col(1), p, c);
}

/// Left sides of the original (non-symmetric) system minus (f1, f2).
Vec2 original_residual(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                       const CoefficientSet& c);

/// Left sides of the original system (no source subtraction).
Vec2 original_lhs(const Vec2& U, const Vec2& Ux, const Vec2& Uy, const Vec2& p,
                  const CoefficientSet& c);

/// Maps the original right side (f1, f2) to the right side of the symmetric
/// system: T = [[1, -xy], [0, 1-y^2]]. Throws DegenerateLineError on y^2 = 1.
Vec2 rhs_transform(const Vec2& p, const Vec2& F);

}  // namespace gmk
