#pragma once

#include "gmk/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>

namespace gmk {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full run configuration. Parsed strictly: unknown keys are rejected.
struct RunConfig {
  DomainSpec domain;
  std::string preset = "default";
  // Polynomial overrides; when set they replace the preset field.
  std::optional<Polynomial2> Gamma1, Gamma2, gamma1, f1, f2;

  int n_theta = 64;
  int n_r = 16;

  double lambda = 0.0;   // <= 0: default 10/h
  double solver_tol = 1e-10;
  int max_iter = 0;      // <= 0: default 500 sqrt(n)

  int boundary_samples = 2048;
  int interior_samples = 4096;
  std::uint64_t seed = 20240915;

  CoefficientSet coefficients() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

}  // namespace gmk
