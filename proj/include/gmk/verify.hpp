#pragma once

#include "gmk/config.hpp"
#include "gmk/boundary.hpp"

#include <nlohmann/json_fwd.hpp>

namespace gmk {

struct CheckRecord {
  std::string name;
  std::string anchor;  // the condition this check implements
  bool pass = false;
  double worst = 0.0;
  Vec2 location = Vec2::Zero();
};

struct VerificationReport {
  std::vector<CheckRecord> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
  const CheckRecord* worst_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

nlohmann::json report_to_json(const VerificationReport& report);

/// Runs the whole hypothesis battery: Q positive definiteness, the
/// coefficient bound, the y^2 domain bound, characteristic identities,
/// the boundary admissibility sweep, singularity removability, and corner
/// regularity.
VerificationReport run_verification(const RunConfig& cfg);

/// Per-sample admissibility records plus a summary block, as written to
/// admissibility.json.
nlohmann::json admissibility_records(const RunConfig& cfg);

/// Uniformly sampled interior points (rejection from the bounding box).
std::vector<Vec2> interior_points(const DomainSpec& spec, int n, std::uint64_t seed);

}  // namespace gmk
