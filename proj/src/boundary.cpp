#include "gmk/boundary.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace gmk {

namespace {

void require_unit(const Vec2& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("boundary normal must be a unit vector");
  }
}

/// Rank against an absolute singular-value threshold. The threshold is
/// derived from the scale of beta, not of the factor itself, so that a factor
/// that vanishes analytically (e.g. beta_plus on circle arcs, where alpha = 0)
/// is not promoted to full rank by roundoff.
int numeric_rank(const Eigen::MatrixXd& m, double thr) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

/// Orthonormal kernel basis columns of a 2x2 matrix.
Eigen::MatrixXd kernel_basis(const Mat2& m, double thr) {
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (int i = 0; i < 2; ++i)
    if (sv(i) <= thr) ++dim;
  return svd.matrixV().rightCols(dim);
}

}  // namespace

Mat2 beta_matrix(const Vec2& p, const Vec2& n) {
  require_unit(n);
  const double x = p.x(), y = p.y();
  const double n1 = n.x(), n2 = n.y();
  Mat2 b;
  b << (1.0 - x * x) * n1 - 2.0 * x * y * n2, (1.0 - y * y) * n2,
      (1.0 - y * y) * n2, (y * y - 1.0) * n1;
  return b;
}

Mat2 beta_matrix_alternate(const Vec2& p, const Vec2& n) {
  require_unit(n);
  const double x = p.x(), y = p.y();
  const double n1 = n.x(), n2 = n.y();

  // alpha = alpha_sing/n1 + alpha_reg with alpha_sing = -(1-y^2) n2^2.
  // The (1,1) entry is -alpha - (1-y^2) n2^2 / n1; the two singular terms
  // cancel additively, so they are summed in the numerator before dividing.
  const double sing = (1.0 - y * y) * n2 * n2;
  const double alpha_reg = 2.0 * x * y * n2 - (1.0 - x * x) * n1;
  const double numerator = sing - sing;  // exact cancellation
  const double b11 = -alpha_reg + (n1 != 0.0 ? numerator / n1 : 0.0);

  Mat2 b;
  b << b11, (1.0 - y * y) * n2,
      (1.0 - y * y) * n2, (y * y - 1.0) * n1;
  return b;
}

BetaDecomposition decompose(const Vec2& p, const Vec2& n, ArcClass cls) {
  BetaDecomposition d;
  d.arc_class = cls;
  d.beta = beta_matrix(p, n);
  const double n1 = n.x();
  const Vec2 tangent(-n.y(), n.x());
  const double phi = char_form(p, tangent);

  switch (cls) {
    case ArcClass::Tau1: {
      if (n1 <= 0.0) throw ClassificationMismatch("tau1 sample requires n1 > 0");
      d.alpha = phi / n1;
      d.beta_plus << -d.alpha, 0.0, 0.0, 0.0;
      d.beta_minus = d.beta - d.beta_plus;
      break;
    }
    case ArcClass::Tau2: {
      if (n1 >= 0.0) throw ClassificationMismatch("tau2 sample requires n1 < 0");
      d.alpha = phi / n1;
      d.beta_minus << -d.alpha, 0.0, 0.0, 0.0;
      d.beta_plus = d.beta - d.beta_minus;
      break;
    }
    case ArcClass::Characteristic: {
      d.alpha = n1 != 0.0 ? phi / n1 : 0.0;
      d.beta_plus = d.beta;
      d.beta_minus.setZero();
      break;
    }
    case ArcClass::CornerFillet: {
      // Inside the fillet the tangent is strictly non-characteristic in the
      // hyperbolic region, so det beta = (1-y^2) Phi > 0 and beta itself is
      // positive definite: take beta_plus = beta and impose nothing through
      // beta_minus. (The triangular split leaves beta_plus full rank against
      // a rank-one beta_minus, which breaks the range/span conditions.)
      d.alpha = n1 != 0.0 ? phi / n1 : 0.0;
      d.beta_plus = d.beta;
      d.beta_minus.setZero();
      break;
    }
    case ArcClass::Degenerate: {
      // Transitional points with n1 ~ 0; upper-triangular split needs no
      // n1-division.
      d.alpha = 0.0;
      d.beta_plus << d.beta(0, 0), d.beta(0, 1), 0.0, d.beta(1, 1);
      d.beta_minus << 0.0, 0.0, d.beta(1, 0), 0.0;
      break;
    }
  }
  d.mu_star = symmetric_part(d.beta_plus - d.beta_minus);
  return d;
}

std::vector<Eigen::RowVector2d> boundary_condition_rows(const BetaDecomposition& d,
                                                        const Vec2& p, const Vec2& n) {
  std::vector<Eigen::RowVector2d> rows;
  switch (d.arc_class) {
    case ArcClass::Tau1:
      rows.push_back(Eigen::RowVector2d(-n.y(), n.x()));
      break;
    case ArcClass::Tau2:
      rows.push_back(Eigen::RowVector2d(1.0, 0.0));
      break;
    case ArcClass::CornerFillet: {
      const double scale = (1.0 - p.y() * p.y()) * n.y();
      if (scale != 0.0) rows.push_back(Eigen::RowVector2d(scale, 0.0));
      break;
    }
    case ArcClass::Characteristic:
    case ArcClass::Degenerate:
      break;
  }
  return rows;
}

AdmissibilityReport check_admissibility(const BetaDecomposition& d, double tol) {
  AdmissibilityReport r;
  r.mu11 = d.mu_star(0, 0);
  r.det_mu = d.mu_star.determinant();
  r.mu11_ok = r.mu11 >= -tol;
  r.det_ok = r.det_mu >= -tol;

  const double thr = tol * std::max(d.beta.norm(), 1.0);
  const int rank_plus = numeric_rank(d.beta_plus, thr);
  const int rank_minus = numeric_rank(d.beta_minus, thr);
  Eigen::MatrixXd cat(2, 4);
  cat << d.beta_plus, d.beta_minus;
  r.range_ok = numeric_rank(cat, thr) == rank_plus + rank_minus;

  const Eigen::MatrixXd ker_plus = kernel_basis(d.beta_plus, thr);
  const Eigen::MatrixXd ker_minus = kernel_basis(d.beta_minus, thr);
  Eigen::MatrixXd kernels(2, ker_plus.cols() + ker_minus.cols());
  kernels << ker_plus, ker_minus;
  r.span_ok = numeric_rank(kernels, thr) == 2;
  return r;
}

}  // namespace gmk
