#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmk {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct FieldEvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar coefficient field over the plane.
using ScalarField = std::function<double(double, double)>;

/// Evaluates a field and rejects non-finite results.
inline double eval_field(const ScalarField& f, const Vec2& p) {
  const double v = f(p.x(), p.y());
  if (!std::isfinite(v)) {
    throw FieldEvalError("coefficient field evaluated to a non-finite value at (" +
                         std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
  }
  return v;
}

/// One monomial c * x^i * y^j.
struct Monomial {
  int i = 0;
  int j = 0;
  double c = 0.0;
};

/// Sparse bivariate polynomial, the user-facing coefficient format.
class Polynomial2 {
 public:
  Polynomial2() = default;
  explicit Polynomial2(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

  static Polynomial2 constant(double c) { return Polynomial2({{0, 0, c}}); }

  double operator()(double x, double y) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.c * ipow(x, t.i) * ipow(y, t.j);
    return s;
  }

  Polynomial2 dx() const {
    std::vector<Monomial> d;
    for (const auto& t : terms_)
      if (t.i > 0) d.push_back({t.i - 1, t.j, t.c * t.i});
    return Polynomial2(d);
  }

  Polynomial2 dy() const {
    std::vector<Monomial> d;
    for (const auto& t : terms_)
      if (t.j > 0) d.push_back({t.i, t.j - 1, t.c * t.j});
    return Polynomial2(d);
  }

  const std::vector<Monomial>& terms() const { return terms_; }

 private:
  static double ipow(double v, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= v;
    return r;
  }

  std::vector<Monomial> terms_;
};

/// Prescribed 1-forms Gamma = (Gamma1, Gamma2), scalar gamma1, and the source
/// F = (f1, f2). gamma2 is identically zero.
struct CoefficientSet {
  ScalarField Gamma1;
  ScalarField Gamma2;
  ScalarField gamma1;
  ScalarField f1;
  ScalarField f2;

  static CoefficientSet constants(double G1, double G2, double g1, double s1, double s2) {
    auto c = [](double v) { return ScalarField([v](double, double) { return v; }); };
    return CoefficientSet{c(G1), c(G2), c(g1), c(s1), c(s2)};
  }

  /// Named preset used throughout the verification pipeline:
  /// Gamma=(1,0), gamma1=2, f1=1, f2=0.
  static CoefficientSet preset(const std::string& name) {
    if (name == "default") return constants(1.0, 0.0, 2.0, 1.0, 0.0);
    if (name == "helical") return constants(1.0, 0.0, 2.0, 1.0, 1.0);
    if (name == "unit") return constants(1.0, 0.0, 1.0, 1.0, 0.0);
    throw std::invalid_argument("unknown coefficient preset: " + name);
  }
};

/// Smooth vector field with analytic partials, for manufactured solutions.
/// jacobian(i, j) = d u_i / d x_j.
struct VectorField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> jacobian;

  static VectorField zero() {
    return {[](const Vec2&) { return Vec2::Zero().eval(); },
            [](const Vec2&) { return Mat2::Zero().eval(); }};
  }

  static VectorField constant(double c1, double c2) {
    return {[c1, c2](const Vec2&) { return Vec2(c1, c2); },
            [](const Vec2&) { return Mat2::Zero().eval(); }};
  }

  /// Default manufactured field (sin x cos y, x^2 - y).
  static VectorField manufactured() {
    return {[](const Vec2& p) { return Vec2(std::sin(p.x()) * std::cos(p.y()), p.x() * p.x() - p.y()); },
            [](const Vec2& p) {
              Mat2 J;
              J << std::cos(p.x()) * std::cos(p.y()), -std::sin(p.x()) * std::sin(p.y()),
                  2.0 * p.x(), -1.0;
              return J;
            }};
  }

  static VectorField from_polynomials(const Polynomial2& u1, const Polynomial2& u2) {
    Polynomial2 u1x = u1.dx(), u1y = u1.dy(), u2x = u2.dx(), u2y = u2.dy();
    return {[u1, u2](const Vec2& p) { return Vec2(u1(p.x(), p.y()), u2(p.x(), p.y())); },
            [u1x, u1y, u2x, u2y](const Vec2& p) {
              Mat2 J;
              J << u1x(p.x(), p.y()), u1y(p.x(), p.y()),
                  u2x(p.x(), p.y()), u2y(p.x(), p.y());
              return J;
            }};
  }
};

}  // namespace gmk
