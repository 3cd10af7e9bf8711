#include "gmk/config.hpp"
#include "gmk/solver.hpp"
#include "gmk/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;

void write_json(const nlohmann::json& j, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  f << j.dump(2) << "\n";
}

gmk::RunConfig make_config(const std::string& config_path, int samples, std::int64_t seed) {
  gmk::RunConfig cfg =
      config_path.empty() ? gmk::RunConfig{} : gmk::load_config(config_path);
  if (samples > 0) cfg.boundary_samples = samples;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  return cfg;
}

int cmd_verify(const gmk::RunConfig& cfg, const std::string& out) {
  const gmk::VerificationReport report = gmk::run_verification(cfg);
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  worst=" << c.worst
              << " at (" << c.location.x() << ", " << c.location.y() << ")\n";
  }
  write_json(gmk::report_to_json(report), fs::path(out) / "report.json");
  write_json(gmk::admissibility_records(cfg), fs::path(out) / "admissibility.json");
  std::cout << (report.pass() ? "overall: PASS" : "overall: FAIL") << "\n";
  return report.pass() ? 0 : 1;
}

int cmd_mesh(const gmk::RunConfig& cfg, const std::string& out) {
  const gmk::Mesh mesh = gmk::generate_mesh(cfg.domain, cfg.n_theta, cfg.n_r);
  gmk::write_mesh_csv(mesh, out);
  std::cout << "vertices: " << mesh.vertices.size() << "  triangles: " << mesh.triangles.size()
            << "  area: " << mesh.area() << "\n";
  return 0;
}

int cmd_solve(const gmk::RunConfig& cfg, const std::string& out) {
  const gmk::CoefficientSet coeffs = cfg.coefficients();
  const gmk::Mesh mesh = gmk::generate_mesh(cfg.domain, cfg.n_theta, cfg.n_r);

  // Original right side (f1, f2) mapped through the symmetrizing transform.
  gmk::SourceField F = [&](const gmk::Vec2& p) {
    return gmk::rhs_transform(
        p, gmk::Vec2(gmk::eval_field(coeffs.f1, p), gmk::eval_field(coeffs.f2, p)));
  };
  const gmk::DiscreteProblem prob =
      gmk::assemble(mesh, coeffs, F, gmk::BoundaryData{}, cfg.lambda);
  if (prob.gbound_failures > 0) {
    std::cerr << "warning: positivity hypothesis failed at " << prob.gbound_failures
              << " quadrature points\n";
  }
  const gmk::SolveResult sol = gmk::solve(prob, cfg.solver_tol, cfg.max_iter);
  gmk::write_solution_csv(mesh, sol.u, out);

  const gmk::EnergyReport er = gmk::energy_identity(sol.u, coeffs, mesh);
  std::cout << "iterations: " << sol.iterations << "  objective: " << sol.l2_functional
            << "\n"
            << "energy: volume=" << er.volume_term << " boundary=" << er.boundary_term
            << " source=" << er.source_term << " defect=" << er.defect << "\n"
            << "solution L2 norm: " << gmk::l2_norm(mesh, sol.u) << "\n";

  nlohmann::json j = {{"iterations", sol.iterations},
                      {"objective", sol.l2_functional},
                      {"l2_norm", gmk::l2_norm(mesh, sol.u)},
                      {"energy",
                       {{"volume", er.volume_term},
                        {"boundary", er.boundary_term},
                        {"source", er.source_term},
                        {"defect", er.defect}}}};
  write_json(j, fs::path(out) / "report.json");
  return 0;
}

int cmd_convergence(const gmk::RunConfig& cfg, const std::string& out) {
  const gmk::CoefficientSet coeffs = cfg.coefficients();
  const auto rows = gmk::convergence_study(cfg.domain, coeffs, gmk::VectorField::manufactured(),
                                           3, cfg.n_theta >= 16 ? std::min(cfg.n_theta, 32) : 32,
                                           cfg.solver_tol);
  gmk::write_convergence_csv(rows, out);
  std::cout << "h,l2_error,functional,energy_defect,stability_ratio\n";
  for (const auto& r : rows) {
    std::cout << r.h << "," << r.l2_error << "," << r.functional << "," << r.energy_defect
              << "," << r.stability_ratio << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-type first-order boundary value problem toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int samples = 0;
  std::int64_t seed = -1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--samples", samples, "boundary sample count override");
  app.add_option("--seed", seed, "random seed override");

  auto* verify = app.add_subcommand("verify", "run the hypothesis and admissibility checks");
  auto* mesh = app.add_subcommand("mesh", "generate and export the mesh");
  auto* solve = app.add_subcommand("solve", "assemble and solve the discrete problem");
  auto* conv = app.add_subcommand("convergence", "manufactured-solution refinement study");
  for (auto* sub : {verify, mesh, solve, conv}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const gmk::RunConfig cfg = make_config(config_path, samples, seed);
    if (verify->parsed()) return cmd_verify(cfg, out_dir);
    if (mesh->parsed()) return cmd_mesh(cfg, out_dir);
    if (solve->parsed()) return cmd_solve(cfg, out_dir);
    if (conv->parsed()) return cmd_convergence(cfg, out_dir);
  } catch (const gmk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
