#include "gmk/solver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace gmk {

namespace {

struct P1Element {
  int v[3];
  double area;
  Vec2 centroid;
  double b[3];  // d phi_k / dx
  double c[3];  // d phi_k / dy
};

P1Element element(const Mesh& mesh, int t) {
  P1Element e;
  for (int k = 0; k < 3; ++k) e.v[k] = mesh.triangles[t][k];
  const Vec2& p0 = mesh.vertices[e.v[0]];
  const Vec2& p1 = mesh.vertices[e.v[1]];
  const Vec2& p2 = mesh.vertices[e.v[2]];
  e.area = mesh.triangle_area(t);
  e.centroid = (p0 + p1 + p2) / 3.0;
  const double inv = 1.0 / (2.0 * e.area);
  e.b[0] = (p1.y() - p2.y()) * inv;
  e.b[1] = (p2.y() - p0.y()) * inv;
  e.b[2] = (p0.y() - p1.y()) * inv;
  e.c[0] = (p2.x() - p1.x()) * inv;
  e.c[1] = (p0.x() - p2.x()) * inv;
  e.c[2] = (p1.x() - p0.x()) * inv;
  return e;
}

Vec2 discrete_value(const Eigen::VectorXd& u, int vertex) {
  return Vec2(u(2 * vertex), u(2 * vertex + 1));
}

}  // namespace

DiscreteProblem assemble(const Mesh& mesh, const CoefficientSet& c, const SourceField& F,
                         const BoundaryData& g, double lambda) {
  DiscreteProblem prob;
  prob.mesh = &mesh;
  prob.lambda = lambda > 0.0 ? lambda : 10.0 / mesh.max_edge_length();

  const int n = 2 * static_cast<int>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(64 * mesh.triangles.size());
  prob.rhs = Eigen::VectorXd::Zero(n);

  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    const OperatorMatrices m = assemble_matrices(e.centroid, c);
    if (!check_gbound(e.centroid, c).pass) ++prob.gbound_failures;

    Mat2 C[3];
    for (int k = 0; k < 3; ++k) C[k] = m.A1 * e.b[k] + m.A2 * e.c[k] + m.B / 3.0;
    const Vec2 f = F(e.centroid);

    for (int i = 0; i < 3; ++i) {
      const Mat2 Ci_t = C[i].transpose();
      const Vec2 load = e.area * (Ci_t * f);
      prob.rhs(2 * e.v[i]) += load(0);
      prob.rhs(2 * e.v[i] + 1) += load(1);
      for (int j = 0; j < 3; ++j) {
        const Mat2 block = e.area * (Ci_t * C[j]);
        for (int a = 0; a < 2; ++a)
          for (int bidx = 0; bidx < 2; ++bidx)
            trips.emplace_back(2 * e.v[i] + a, 2 * e.v[j] + bidx, block(a, bidx));
      }
    }
    prob.constant_term += e.area * f.squaredNorm();
  }

  for (const auto& edge : mesh.boundary) {
    const BoundarySample& s = edge.sample;
    const BetaDecomposition d = decompose(s.point, s.normal, s.arc_class);
    const double w = prob.lambda * s.weight;
    for (const auto& row : boundary_condition_rows(d, s.point, s.normal)) {
      const double gval = g ? row.dot(g(s.point)) : 0.0;
      // Constraint acts on the edge-midpoint value (u_a + u_b)/2.
      const int verts[2] = {edge.a, edge.b};
      for (int i = 0; i < 2; ++i) {
        for (int a = 0; a < 2; ++a) {
          prob.rhs(2 * verts[i] + a) += 0.5 * w * row(a) * gval;
          for (int j = 0; j < 2; ++j)
            for (int bidx = 0; bidx < 2; ++bidx)
              trips.emplace_back(2 * verts[i] + a, 2 * verts[j] + bidx,
                                 0.25 * w * row(a) * row(bidx));
        }
      }
      prob.constant_term += w * gval * gval;
    }
  }

  prob.matrix.resize(n, n);
  prob.matrix.setFromTriplets(trips.begin(), trips.end());
  return prob;
}

SolveResult solve(const DiscreteProblem& problem, double tol, int max_iter) {
  const int n = static_cast<int>(problem.rhs.size());
  if (max_iter <= 0) max_iter = static_cast<int>(500.0 * std::sqrt(static_cast<double>(n)));

  SolveResult res;
  res.u = Eigen::VectorXd::Zero(n);
  res.residual_history.push_back(problem.constant_term);

  const double bnorm = problem.rhs.norm();
  if (bnorm == 0.0) {
    res.l2_functional = problem.constant_term;
    return res;
  }

  Eigen::VectorXd diag = problem.matrix.diagonal();
  for (int i = 0; i < n; ++i)
    if (diag(i) <= 0.0) diag(i) = 1.0;

  Eigen::VectorXd r = problem.rhs;
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd Mp = problem.matrix * p;
    const double alpha = rz / p.dot(Mp);
    res.u += alpha * p;
    r -= alpha * Mp;
    res.iterations = it + 1;
    res.residual_history.push_back(problem.constant_term - res.u.dot(r) -
                                   problem.rhs.dot(res.u));
    if (r.norm() <= tol * bnorm) {
      res.l2_functional = res.residual_history.back();
      return res;
    }
    z = r.cwiseQuotient(diag);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolverError("conjugate gradients did not converge in " + std::to_string(max_iter) +
                        " iterations",
                    res.residual_history);
}

EnergyReport energy_identity(const VectorField& U, const CoefficientSet& c, const Mesh& mesh) {
  EnergyReport rep;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    const Vec2 u = U.value(e.centroid);
    const QMatrix q = q_matrix(e.centroid, c);
    rep.volume_term += e.area * u.dot(q.mat() * u);
    rep.source_term += e.area * u.dot(apply_operator(U, e.centroid, c));
  }
  for (const auto& edge : mesh.boundary) {
    // Chord midpoint, chord normal, chord length: the identity holds exactly
    // over the mesh polygon, so the boundary rule must match its geometry or
    // the defect stalls at the polygon/curve mismatch.
    const Vec2 a = mesh.vertices[edge.a], b = mesh.vertices[edge.b];
    const Vec2 chord = b - a;
    const double len = chord.norm();
    const Vec2 nrm(chord.y() / len, -chord.x() / len);
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 uval = U.value(mid);
    rep.boundary_term += 0.5 * len * uval.dot(beta_matrix(mid, nrm) * uval);
  }
  rep.defect = std::abs(rep.volume_term + rep.boundary_term - rep.source_term);
  return rep;
}

EnergyReport energy_identity(const Eigen::VectorXd& u, const CoefficientSet& c,
                             const Mesh& mesh) {
  EnergyReport rep;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    Vec2 val = Vec2::Zero(), ux = Vec2::Zero(), uy = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
      const Vec2 uk = discrete_value(u, e.v[k]);
      val += uk / 3.0;
      ux += uk * e.b[k];
      uy += uk * e.c[k];
    }
    const QMatrix q = q_matrix(e.centroid, c);
    rep.volume_term += e.area * val.dot(q.mat() * val);
    rep.source_term += e.area * val.dot(apply_operator(val, ux, uy, e.centroid, c));
  }
  for (const auto& edge : mesh.boundary) {
    const Vec2 a = mesh.vertices[edge.a], b = mesh.vertices[edge.b];
    const Vec2 chord = b - a;
    const double len = chord.norm();
    const Vec2 nrm(chord.y() / len, -chord.x() / len);
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 val = 0.5 * (discrete_value(u, edge.a) + discrete_value(u, edge.b));
    rep.boundary_term += 0.5 * len * val.dot(beta_matrix(mid, nrm) * val);
  }
  rep.defect = std::abs(rep.volume_term + rep.boundary_term - rep.source_term);
  return rep;
}

double l2_norm(const Mesh& mesh, const Eigen::VectorXd& u) {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    Vec2 val = Vec2::Zero();
    for (int k = 0; k < 3; ++k) val += discrete_value(u, e.v[k]) / 3.0;
    s += e.area * val.squaredNorm();
  }
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const SourceField& f) {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    s += e.area * f(e.centroid).squaredNorm();
  }
  return std::sqrt(s);
}

double l2_error(const Mesh& mesh, const Eigen::VectorXd& u, const VectorField& ref) {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const P1Element e = element(mesh, t);
    Vec2 val = Vec2::Zero();
    for (int k = 0; k < 3; ++k) val += discrete_value(u, e.v[k]) / 3.0;
    s += e.area * (val - ref.value(e.centroid)).squaredNorm();
  }
  return std::sqrt(s);
}

Eigen::VectorXd interpolate(const Mesh& mesh, const VectorField& f) {
  Eigen::VectorXd u(2 * mesh.vertices.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec2 val = f.value(mesh.vertices[v]);
    u(2 * v) = val(0);
    u(2 * v + 1) = val(1);
  }
  return u;
}

std::vector<ConvergenceRow> convergence_study(const DomainSpec& spec, const CoefficientSet& c,
                                              const VectorField& manufactured, int levels,
                                              int base_n_theta, double solver_tol) {
  if (levels < 3) throw std::invalid_argument("convergence study needs at least 3 levels");
  std::vector<ConvergenceRow> rows;
  SourceField F = [&](const Vec2& p) { return apply_operator(manufactured, p, c); };
  BoundaryData g = [&](const Vec2& p) { return manufactured.value(p); };

  for (int l = 0; l < levels; ++l) {
    const int n_theta = base_n_theta << l;
    const Mesh mesh = generate_mesh(spec, n_theta, std::max(4, n_theta / 4));
    const DiscreteProblem prob = assemble(mesh, c, F, g);
    const SolveResult sol = solve(prob, solver_tol);

    ConvergenceRow row;
    row.n_theta = n_theta;
    row.h = mesh.max_edge_length();
    row.l2_error = l2_error(mesh, sol.u, manufactured);
    row.functional = sol.l2_functional;
    row.energy_defect = energy_identity(manufactured, c, mesh).defect;
    const double fnorm = l2_norm(mesh, F);
    row.stability_ratio = fnorm > 0.0 ? l2_norm(mesh, sol.u) / fnorm : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_solution_csv(const Mesh& mesh, const Eigen::VectorXd& u, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / "solution.csv");
  f << std::setprecision(17) << "x,y,u1,u2\n";
  for (size_t v = 0; v < mesh.vertices.size(); ++v) {
    f << mesh.vertices[v].x() << "," << mesh.vertices[v].y() << "," << u(2 * v) << ","
      << u(2 * v + 1) << "\n";
  }
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / "convergence.csv");
  f << std::setprecision(17) << "h,l2_error,functional,energy_defect,stability_ratio\n";
  for (const auto& r : rows) {
    f << r.h << "," << r.l2_error << "," << r.functional << "," << r.energy_defect << ","
      << r.stability_ratio << "\n";
  }
}

}  // namespace gmk
