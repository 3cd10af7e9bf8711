#include "gmk/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

namespace gmk {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

Polynomial2 parse_poly(const json& j, const std::string& name) {
  if (!j.is_array()) {
    throw ConfigError("coefficient '" + name + "' must be a list of [i, j, c] monomials");
  }
  std::vector<Monomial> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) {
      throw ConfigError("monomial in '" + name + "' must be [i, j, c]");
    }
    terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
  }
  return Polynomial2(terms);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

CoefficientSet RunConfig::coefficients() const {
  CoefficientSet c = CoefficientSet::preset(preset);
  auto wrap = [](const Polynomial2& p) {
    return ScalarField([p](double x, double y) { return p(x, y); });
  };
  if (Gamma1) c.Gamma1 = wrap(*Gamma1);
  if (Gamma2) c.Gamma2 = wrap(*Gamma2);
  if (gamma1) c.gamma1 = wrap(*gamma1);
  if (f1) c.f1 = wrap(*f1);
  if (f2) c.f2 = wrap(*f2);
  return c;
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  reject_unknown(j, {"domain", "coefficients", "mesh", "solver", "sampling", "seed"}, "config");

  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    reject_unknown(d, {"epsilon_cap", "delta_corner"}, "domain");
    cfg.domain.cap_amplitude = get_or(d, "epsilon_cap", cfg.domain.cap_amplitude);
    cfg.domain.fillet_halfwidth = get_or(d, "delta_corner", cfg.domain.fillet_halfwidth);
  }
  if (j.contains("coefficients")) {
    const auto& c = j.at("coefficients");
    reject_unknown(c, {"preset", "Gamma1", "Gamma2", "gamma1", "f1", "f2"}, "coefficients");
    cfg.preset = get_or<std::string>(c, "preset", cfg.preset);
    if (c.contains("Gamma1")) cfg.Gamma1 = parse_poly(c.at("Gamma1"), "Gamma1");
    if (c.contains("Gamma2")) cfg.Gamma2 = parse_poly(c.at("Gamma2"), "Gamma2");
    if (c.contains("gamma1")) cfg.gamma1 = parse_poly(c.at("gamma1"), "gamma1");
    if (c.contains("f1")) cfg.f1 = parse_poly(c.at("f1"), "f1");
    if (c.contains("f2")) cfg.f2 = parse_poly(c.at("f2"), "f2");
  }
  if (j.contains("mesh")) {
    const auto& m = j.at("mesh");
    reject_unknown(m, {"n_theta", "n_r"}, "mesh");
    cfg.n_theta = get_or(m, "n_theta", cfg.n_theta);
    cfg.n_r = get_or(m, "n_r", cfg.n_r);
    if (cfg.n_theta < 16 || cfg.n_r < 4) {
      throw ConfigError("mesh requires n_theta >= 16 and n_r >= 4");
    }
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s, {"lambda", "tol", "max_iter"}, "solver");
    cfg.lambda = get_or(s, "lambda", cfg.lambda);
    cfg.solver_tol = get_or(s, "tol", cfg.solver_tol);
    cfg.max_iter = get_or(s, "max_iter", cfg.max_iter);
    if (cfg.solver_tol <= 0.0) throw ConfigError("solver tol must be positive");
  }
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    reject_unknown(s, {"boundary_samples", "interior_samples"}, "sampling");
    cfg.boundary_samples = get_or(s, "boundary_samples", cfg.boundary_samples);
    cfg.interior_samples = get_or(s, "interior_samples", cfg.interior_samples);
    if (cfg.boundary_samples < 1 || cfg.interior_samples < 1) {
      throw ConfigError("sample counts must be positive");
    }
  }
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);

  try {
    // delta_corner = 0 is accepted here; it fails verification, not parsing.
    cfg.domain.validate();
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  }
  try {
    (void)CoefficientSet::preset(cfg.preset);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace gmk
