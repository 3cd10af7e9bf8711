#pragma once

#include "gmk/geometry.hpp"
#include "gmk/system.hpp"

namespace gmk {

struct ClassificationMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-arc splitting beta = beta_plus + beta_minus with
/// mu_star = sym(beta_plus - beta_minus).
struct BetaDecomposition {
  Mat2 beta = Mat2::Zero();
  Mat2 beta_plus = Mat2::Zero();
  Mat2 beta_minus = Mat2::Zero();
  Mat2 mu_star = Mat2::Zero();
  ArcClass arc_class = ArcClass::Degenerate;
  double alpha = 0.0;  // Phi(p, tangent)/n1; zero where n1-division is degenerate
};

/// Boundary matrix n1 A1 + n2 A2 from the direct entries.
/// Throws on a non-unit normal.
Mat2 beta_matrix(const Vec2& p, const Vec2& n);

/// Same matrix assembled along the alpha route, with the 1/n1 terms
/// cancelled additively before any division; defined for all n1 including 0.
Mat2 beta_matrix_alternate(const Vec2& p, const Vec2& n);

/// Splitting for the given arc class. Tau1 requires n1 > 0, Tau2 requires
/// n1 < 0 (ClassificationMismatch otherwise). Characteristic and CornerFillet
/// use beta_minus = 0 (beta is singular psd on characteristics and strictly
/// positive definite across the fillet); Degenerate uses the triangular
/// split that needs no n1-division.
BetaDecomposition decompose(const Vec2& p, const Vec2& n, ArcClass cls);

/// Penalty rows r with the condition r . U = r . g on the arc:
/// Tau1 -> (-n2, n1) (tangential), Tau2 -> (1, 0),
/// CornerFillet -> (1-y^2) n2 (1, 0) (drops out at n2 = 0),
/// Characteristic and Degenerate -> none.
std::vector<Eigen::RowVector2d> boundary_condition_rows(const BetaDecomposition& d,
                                                        const Vec2& p, const Vec2& n);

struct AdmissibilityReport {
  double mu11 = 0.0;
  double det_mu = 0.0;
  bool mu11_ok = false;
  bool det_ok = false;
  bool range_ok = false;  // ranges of beta_plus/minus meet only in zero
  bool span_ok = false;   // kernels of beta_plus/minus jointly span
  bool pass() const { return mu11_ok && det_ok && range_ok && span_ok; }
};

AdmissibilityReport check_admissibility(const BetaDecomposition& d, double tol = 1e-10);

}  // namespace gmk
