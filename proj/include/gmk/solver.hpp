#pragma once

#include "gmk/boundary.hpp"

#include <Eigen/Sparse>

namespace gmk {

struct SolverError : std::runtime_error {
  SolverError(const std::string& msg, std::vector<double> history)
      : std::runtime_error(msg), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Right side of the symmetric system as a point field.
using SourceField = std::function<Vec2(const Vec2&)>;
/// Boundary trace supplying inhomogeneous data; empty = homogeneous.
using BoundaryData = std::function<Vec2(const Vec2&)>;

/// Least-squares normal equations for L U = F with penalized boundary rows.
/// Unknown layout: vertex v -> (2v, 2v+1).
struct DiscreteProblem {
  const Mesh* mesh = nullptr;
  Eigen::SparseMatrix<double> matrix;  // symmetric positive (semi)definite
  Eigen::VectorXd rhs;
  double constant_term = 0.0;  // J(u) = u' M u - 2 rhs' u + constant_term
  double lambda = 0.0;
  int gbound_failures = 0;  // quadrature points where the positivity hypothesis failed

  double objective(const Eigen::VectorXd& u) const {
    return u.dot(matrix * u) - 2.0 * rhs.dot(u) + constant_term;
  }
};

struct EnergyReport {
  double volume_term = 0.0;    // integral of U . Q U
  double boundary_term = 0.0;  // half the boundary integral of U . beta U
  double source_term = 0.0;    // integral of U . L U
  double defect = 0.0;         // |volume + boundary - source|
};

struct SolveResult {
  Eigen::VectorXd u;  // (u1, u2) per vertex
  std::vector<double> residual_history;  // least-squares objective per iteration
  double l2_functional = 0.0;
  int iterations = 0;
};

/// Piecewise-linear least-squares assembly with centroid quadrature.
/// lambda <= 0 selects the default 10 / max_edge_length.
DiscreteProblem assemble(const Mesh& mesh, const CoefficientSet& c, const SourceField& F,
                         const BoundaryData& g, double lambda = 0.0);

/// Jacobi-preconditioned conjugate gradients on the normal equations.
/// max_iter <= 0 selects 500 sqrt(n). Throws SolverError on nonconvergence.
SolveResult solve(const DiscreteProblem& problem, double tol = 1e-10, int max_iter = 0);

/// Quadrature check of the integration-by-parts identity
/// int U.LU = int U.QU + (1/2) oint U.betaU for an analytic field.
EnergyReport energy_identity(const VectorField& U, const CoefficientSet& c, const Mesh& mesh);

/// Same identity for a discrete piecewise-linear field.
EnergyReport energy_identity(const Eigen::VectorXd& u, const CoefficientSet& c, const Mesh& mesh);

double l2_norm(const Mesh& mesh, const Eigen::VectorXd& u);
double l2_norm(const Mesh& mesh, const SourceField& f);
double l2_error(const Mesh& mesh, const Eigen::VectorXd& u, const VectorField& ref);

/// Nodal interpolant of an analytic field.
Eigen::VectorXd interpolate(const Mesh& mesh, const VectorField& f);

struct ConvergenceRow {
  int n_theta = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double functional = 0.0;
  double energy_defect = 0.0;
  double stability_ratio = 0.0;  // ||U_h|| / ||F||
};

/// Manufactured-solution refinement study at n_theta = base, 2 base, ...
std::vector<ConvergenceRow> convergence_study(const DomainSpec& spec, const CoefficientSet& c,
                                              const VectorField& manufactured, int levels,
                                              int base_n_theta = 32, double solver_tol = 1e-10);

void write_solution_csv(const Mesh& mesh, const Eigen::VectorXd& u, const std::string& out_dir);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& out_dir);

}  // namespace gmk
