#pragma once

#include "gmk/fields.hpp"

#include <array>
#include <numbers>
#include <vector>

namespace gmk {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ArcClass { Tau1, Tau2, Characteristic, CornerFillet, Degenerate };

const char* arc_class_name(ArcClass c);

/// C2 bump flattening the poles: h(x) = eps (1 - 2x^2)^3 on |x| <= sqrt2/2,
/// zero outside. Vanishes with first and second derivatives at +-sqrt2/2.
double default_cap(double x, double eps);
double default_cap_d1(double x, double eps);
double default_cap_d2(double x, double eps);

/// Quartic C2 fillet x = g(y), y in [-delta, delta], joining the two
/// characteristic lines x = y - sqrt2 and x = -y - sqrt2 at the corner.
struct Fillet {
  double delta = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;  // g(y) = a + b y^2 + c y^4

  double g(double y) const { return a + b * y * y + c * y * y * y * y; }
  double dg(double y) const { return 2.0 * b * y + 4.0 * c * y * y * y; }
  double d2g(double y) const { return 2.0 * b + 12.0 * c * y * y; }

  static Fillet make(double delta);
};

/// Domain: unit disc truncated by polar caps, closed by the characteristic
/// polar lines tangent at (-sqrt2/2, +-sqrt2/2), corner fillet of half-width
/// delta at the lines' intersection (-sqrt2, 0). delta = 0 leaves the corner
/// sharp; that configuration is buildable but fails verification.
struct DomainSpec {
  double cap_amplitude = 0.05;    // eps in (0, 0.3]
  double fillet_halfwidth = 0.05; // delta in [0, 0.2]
  double class_tol = 1e-9;        // |n1| threshold for Degenerate

  void validate() const;

  /// Polar angle of the upper fillet endpoint (g(delta), delta); pi if delta=0.
  double theta_fillet_upper() const;
  double theta_fillet_lower() const { return 2.0 * std::numbers::pi - theta_fillet_upper(); }
};

struct BoundarySample {
  Vec2 point = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();  // unit, ccw (interior on the left)
  Vec2 normal = Vec2::Zero();   // unit outward, (n1, n2) = (dy, -dx)/ds
  ArcClass arc_class = ArcClass::Degenerate;
  double weight = 0.0;  // arclength weight
  double theta = 0.0;
};

/// Boundary radius rho(theta), theta measured from the origin.
/// Throws GeometryError if the cap fixed point fails to converge.
double boundary_radius(double theta, const DomainSpec& spec);

/// Point, unit tangent, unit outward normal, and arc class at angle theta.
/// The returned weight is zero; samplers fill it in.
BoundarySample boundary_sample(double theta, const DomainSpec& spec);

/// Classifies a point/normal pair lying on the boundary. Throws
/// GeometryError if the point is farther than tol from the boundary.
ArcClass classify_arc(const Vec2& point, const Vec2& normal, const DomainSpec& spec,
                      double tol = 1e-7);

/// n uniformly spaced (in theta) samples with arclength weights that sum to
/// the boundary perimeter.
std::vector<BoundarySample> boundary_samples(const DomainSpec& spec, int n);

/// Signed containment test: |p| <= rho(theta(p)) + tol.
bool contains(const DomainSpec& spec, const Vec2& p, double tol = 1e-12);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundarySample sample;  // at the parametric edge midpoint, weight = chord length
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // ccw
  std::vector<BoundaryEdge> boundary;         // single closed loop

  double area() const;
  double max_edge_length() const;
  Vec2 centroid(int t) const {
    return (vertices[triangles[t][0]] + vertices[triangles[t][1]] + vertices[triangles[t][2]]) / 3.0;
  }
  double triangle_area(int t) const;
};

/// Structured polar mesh: origin fan plus n_r rings over a theta grid that
/// contains the sector junctions exactly (so characteristic boundary edges
/// lie on the polar lines). Throws GeometryError on degenerate triangles.
Mesh generate_mesh(const DomainSpec& spec, int n_theta, int n_r);

void write_mesh_csv(const Mesh& mesh, const std::string& out_dir);

}  // namespace gmk
