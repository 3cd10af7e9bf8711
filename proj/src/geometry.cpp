#include "gmk/geometry.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace gmk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kThetaTangency = 0.75 * kPi;  // tangency points at 135 / 225 degrees

/// Wraps theta into the canonical range [-3pi/4, 5pi/4).
double wrap_theta(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < -kThetaTangency) t += 2.0 * kPi;
  if (t >= 2.0 * kPi - kThetaTangency) t -= 2.0 * kPi;
  return t;
}

/// Solves g(y) sin(theta) - y cos(theta) = 0 for y in [-delta, delta].
double fillet_ordinate(double theta, const Fillet& f) {
  auto F = [&](double y) { return f.g(y) * std::sin(theta) - y * std::cos(theta); };
  double lo = -f.delta, hi = f.delta;
  double Flo = F(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double Fm = F(mid);
    if (Fm == 0.0 || hi - lo < 1e-16) return mid;
    if ((Fm < 0.0) == (Flo < 0.0)) {
      lo = mid;
      Flo = Fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* arc_class_name(ArcClass c) {
  switch (c) {
    case ArcClass::Tau1: return "tau1";
    case ArcClass::Tau2: return "tau2";
    case ArcClass::Characteristic: return "characteristic";
    case ArcClass::CornerFillet: return "corner_fillet";
    case ArcClass::Degenerate: return "degenerate";
  }
  return "?";
}

double default_cap(double x, double eps) {
  const double s = 1.0 - 2.0 * x * x;
  if (s <= 0.0) return 0.0;
  return eps * s * s * s;
}

double default_cap_d1(double x, double eps) {
  const double s = 1.0 - 2.0 * x * x;
  if (s <= 0.0) return 0.0;
  return -12.0 * eps * x * s * s;
}

double default_cap_d2(double x, double eps) {
  const double s = 1.0 - 2.0 * x * x;
  if (s <= 0.0) return 0.0;
  return -12.0 * eps * s * s + 96.0 * eps * x * x * s;
}

Fillet Fillet::make(double delta) {
  if (delta < 0.0 || delta > 0.2) {
    throw GeometryError("fillet half-width must lie in [0, 0.2]");
  }
  Fillet f;
  f.delta = delta;
  if (delta > 0.0) {
    // C2 match to x = +-y - sqrt2 at y = +-delta.
    f.c = -1.0 / (8.0 * delta * delta * delta);
    f.b = 3.0 / (4.0 * delta);
    f.a = 0.375 * delta - kSqrt2;
  } else {
    f.a = -kSqrt2;
  }
  return f;
}

void DomainSpec::validate() const {
  if (!(cap_amplitude > 0.0 && cap_amplitude <= 0.3)) {
    throw GeometryError("cap amplitude must lie in (0, 0.3]");
  }
  if (fillet_halfwidth < 0.0 || fillet_halfwidth > 0.2) {
    throw GeometryError("fillet half-width must lie in [0, 0.2]");
  }
}

double DomainSpec::theta_fillet_upper() const {
  if (fillet_halfwidth == 0.0) return kPi;
  const Fillet f = Fillet::make(fillet_halfwidth);
  return std::atan2(fillet_halfwidth, f.g(fillet_halfwidth));
}

double boundary_radius(double theta, const DomainSpec& spec) {
  const double t = wrap_theta(theta);
  const double fu = spec.theta_fillet_upper();
  const double fl = spec.theta_fillet_lower();

  if (t > -kThetaTangency && t < kThetaTangency) {
    // Circle/cap sector: rho = sqrt(1 - h(rho cos theta)), fixed point.
    double rho = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double next = std::sqrt(1.0 - default_cap(rho * std::cos(t), spec.cap_amplitude));
      if (std::abs(next - rho) < 1e-15) return next;
      rho = next;
    }
    throw GeometryError("cap radius fixed point failed to converge");
  }
  if (t >= kThetaTangency && t <= fu) {
    return kSqrt2 / (std::sin(t) - std::cos(t));  // upper polar line y = x + sqrt2
  }
  if (t > fu && t < fl) {
    const Fillet f = Fillet::make(spec.fillet_halfwidth);
    const double y = fillet_ordinate(t, f);
    return std::hypot(f.g(y), y);
  }
  // Lower polar line y = -x - sqrt2 (also covers the wrapped tangency angle).
  return -kSqrt2 / (std::sin(t) + std::cos(t));
}

BoundarySample boundary_sample(double theta, const DomainSpec& spec) {
  const double t = wrap_theta(theta);
  const double fu = spec.theta_fillet_upper();
  const double fl = spec.theta_fillet_lower();

  BoundarySample s;
  s.theta = t;

  if (t > -kThetaTangency && t < kThetaTangency) {
    const double rho = boundary_radius(t, spec);
    const double ct = std::cos(t), st = std::sin(t);
    const double x = rho * ct;
    const double hp = default_cap_d1(x, spec.cap_amplitude);
    const double drho = hp * rho * st / (2.0 * rho + hp * ct);
    s.point = Vec2(x, rho * st);
    s.tangent = Vec2(drho * ct - rho * st, drho * st + rho * ct).normalized();
    s.normal = Vec2(s.tangent.y(), -s.tangent.x());
    const double n1 = s.normal.x();
    s.arc_class = n1 > spec.class_tol    ? ArcClass::Tau1
                  : n1 < -spec.class_tol ? ArcClass::Tau2
                                         : ArcClass::Degenerate;
    return s;
  }
  if (t >= kThetaTangency && t <= fu) {
    const double rho = kSqrt2 / (std::sin(t) - std::cos(t));
    s.point = Vec2(rho * std::cos(t), rho * std::sin(t));
    s.tangent = Vec2(-0.5 * kSqrt2, -0.5 * kSqrt2);
    s.normal = Vec2(-0.5 * kSqrt2, 0.5 * kSqrt2);
    s.arc_class = ArcClass::Characteristic;
    return s;
  }
  if (t > fu && t < fl) {
    const Fillet f = Fillet::make(spec.fillet_halfwidth);
    const double y = fillet_ordinate(t, f);
    const double gp = f.dg(y);
    const double norm = std::sqrt(1.0 + gp * gp);
    s.point = Vec2(f.g(y), y);
    s.tangent = Vec2(-gp, -1.0) / norm;  // traversed with y decreasing
    s.normal = Vec2(-1.0, gp) / norm;
    s.arc_class = ArcClass::CornerFillet;
    return s;
  }
  const double rho = -kSqrt2 / (std::sin(t) + std::cos(t));
  s.point = Vec2(rho * std::cos(t), rho * std::sin(t));
  s.tangent = Vec2(0.5 * kSqrt2, -0.5 * kSqrt2);
  s.normal = Vec2(-0.5 * kSqrt2, -0.5 * kSqrt2);
  s.arc_class = ArcClass::Characteristic;
  return s;
}

ArcClass classify_arc(const Vec2& point, const Vec2& normal, const DomainSpec& spec,
                      double tol) {
  const double t = wrap_theta(std::atan2(point.y(), point.x()));
  const double rho = boundary_radius(t, spec);
  if (std::abs(point.norm() - rho) > tol) {
    throw GeometryError("classify_arc: point is not on the boundary");
  }
  const double fu = spec.theta_fillet_upper();
  const double fl = spec.theta_fillet_lower();
  if (t >= kThetaTangency && t <= fu) return ArcClass::Characteristic;
  if (t > fu && t < fl) return ArcClass::CornerFillet;
  if (t >= fl || t <= -kThetaTangency) return ArcClass::Characteristic;
  const double n1 = normal.x();
  if (n1 > spec.class_tol) return ArcClass::Tau1;
  if (n1 < -spec.class_tol) return ArcClass::Tau2;
  return ArcClass::Degenerate;
}

std::vector<BoundarySample> boundary_samples(const DomainSpec& spec, int n) {
  std::vector<BoundarySample> out;
  out.reserve(n);
  const double dt = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const double t = -kThetaTangency + (i + 0.5) * dt;
    BoundarySample s = boundary_sample(t, spec);
    const BoundarySample lo = boundary_sample(t - 0.5 * dt, spec);
    const BoundarySample hi = boundary_sample(t + 0.5 * dt, spec);
    s.weight = (hi.point - lo.point).norm();
    out.push_back(s);
  }
  return out;
}

bool contains(const DomainSpec& spec, const Vec2& p, double tol) {
  const double r = p.norm();
  if (r == 0.0) return true;
  return r <= boundary_radius(std::atan2(p.y(), p.x()), spec) + tol;
}

double Mesh::triangle_area(int t) const {
  const Vec2& a = vertices[triangles[t][0]];
  const Vec2& b = vertices[triangles[t][1]];
  const Vec2& c = vertices[triangles[t][2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::area() const {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) s += triangle_area(t);
  return s;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      h = std::max(h, (vertices[tri[k]] - vertices[tri[(k + 1) % 3]]).norm());
    }
  }
  return h;
}

Mesh generate_mesh(const DomainSpec& spec, int n_theta, int n_r) {
  spec.validate();
  if (n_theta < 16 || n_r < 4) {
    throw GeometryError("mesh resolution too coarse: need n_theta >= 16, n_r >= 4");
  }

  // Theta grid containing the sector junctions exactly.
  const double fu = spec.theta_fillet_upper();
  const double fl = spec.theta_fillet_lower();
  std::vector<double> breaks = {-kThetaTangency, kThetaTangency};
  if (spec.fillet_halfwidth > 0.0) {
    breaks.push_back(fu);
    breaks.push_back(fl);
  } else {
    breaks.push_back(kPi);
  }
  breaks.push_back(2.0 * kPi - kThetaTangency);

  std::vector<double> thetas;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    int seg = std::max(1, static_cast<int>(std::lround(n_theta * (hi - lo) / (2.0 * kPi))));
    if (spec.fillet_halfwidth > 0.0 && lo == fu) {
      // The fillet subtends a tiny angle but its normal swings by ninety
      // degrees; tie its edge count to n_theta so refinement reaches it.
      seg = std::max(1, n_theta / 32);
    }
    for (int i = 0; i < seg; ++i) thetas.push_back(lo + (hi - lo) * i / seg);
  }
  const int N = static_cast<int>(thetas.size());

  Mesh mesh;
  mesh.vertices.push_back(Vec2::Zero());
  std::vector<double> rho(N);
  for (int i = 0; i < N; ++i) {
    rho[i] = boundary_radius(thetas[i], spec);
    if (!(std::isfinite(rho[i]) && rho[i] > 0.0 && rho[i] <= 2.0)) {
      throw GeometryError("star-shape violation: bad boundary radius");
    }
  }
  auto vid = [N](int j, int i) { return 1 + (j - 1) * N + ((i % N) + N) % N; };
  for (int j = 1; j <= n_r; ++j) {
    const double f = static_cast<double>(j) / n_r;
    for (int i = 0; i < N; ++i) {
      mesh.vertices.push_back(f * rho[i] * Vec2(std::cos(thetas[i]), std::sin(thetas[i])));
    }
  }

  for (int i = 0; i < N; ++i) {
    mesh.triangles.push_back({0, vid(1, i), vid(1, i + 1)});
  }
  for (int j = 1; j < n_r; ++j) {
    for (int i = 0; i < N; ++i) {
      const int a = vid(j, i), b = vid(j, i + 1), c = vid(j + 1, i + 1), d = vid(j + 1, i);
      mesh.triangles.push_back({a, d, c});
      mesh.triangles.push_back({a, c, b});
    }
  }
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (mesh.triangle_area(t) <= 0.0) {
      throw GeometryError("degenerate triangle in structured mesh");
    }
  }

  for (int i = 0; i < N; ++i) {
    BoundaryEdge e;
    e.a = vid(n_r, i);
    e.b = vid(n_r, i + 1);
    const double t0 = thetas[i];
    const double t1 = (i + 1 < N) ? thetas[i + 1] : thetas[0] + 2.0 * kPi;
    e.sample = boundary_sample(0.5 * (t0 + t1), spec);
    e.sample.weight = (mesh.vertices[e.b] - mesh.vertices[e.a]).norm();
    mesh.boundary.push_back(e);
  }
  return mesh;
}

void write_mesh_csv(const Mesh& mesh, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::ofstream vf(fs::path(out_dir) / "vertices.csv");
  vf << std::setprecision(17) << "id,x,y\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    vf << i << "," << mesh.vertices[i].x() << "," << mesh.vertices[i].y() << "\n";
  }

  std::ofstream tf(fs::path(out_dir) / "triangles.csv");
  tf << "v0,v1,v2\n";
  for (const auto& t : mesh.triangles) tf << t[0] << "," << t[1] << "," << t[2] << "\n";

  std::ofstream bf(fs::path(out_dir) / "boundary.csv");
  bf << std::setprecision(17) << "x,y,n1,n2,class,weight\n";
  for (const auto& e : mesh.boundary) {
    const auto& s = e.sample;
    bf << s.point.x() << "," << s.point.y() << "," << s.normal.x() << "," << s.normal.y()
       << "," << arc_class_name(s.arc_class) << "," << s.weight << "\n";
  }
}

}  // namespace gmk
