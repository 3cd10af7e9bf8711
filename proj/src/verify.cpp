#include "gmk/verify.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

namespace gmk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

struct Extremum {
  double value = 0.0;
  Vec2 where = Vec2::Zero();
  bool set = false;

  void min(double v, const Vec2& p) {
    if (!set || v < value) {
      value = v;
      where = p;
      set = true;
    }
  }
  void max(double v, const Vec2& p) {
    if (!set || v > value) {
      value = v;
      where = p;
      set = true;
    }
  }
};

}  // namespace

std::vector<Vec2> interior_points(const DomainSpec& spec, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-kSqrt2, 1.0), uy(-1.0, 1.0);
  std::vector<Vec2> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    const Vec2 p(ux(rng), uy(rng));
    if (contains(spec, p, -1e-9)) pts.push_back(p);
  }
  return pts;
}

VerificationReport run_verification(const RunConfig& cfg) {
  VerificationReport report;
  const CoefficientSet coeffs = cfg.coefficients();
  const DomainSpec& dom = cfg.domain;

  const std::vector<Vec2> interior = interior_points(dom, cfg.interior_samples, cfg.seed);
  const std::vector<BoundarySample> bsamples = boundary_samples(dom, cfg.boundary_samples);

  {
    Extremum worst;
    for (const Vec2& p : interior) {
      const QMatrix q = q_matrix(p, coeffs);
      worst.min(std::min(q.q11, q.det()), p);
    }
    report.checks.push_back({"q-positive-definite", "Q11 > 0 and det Q > 0 on the domain",
                             worst.value > 0.0, worst.value, worst.where});
  }
  {
    Extremum worst;
    bool gamma_pos = true;
    for (const Vec2& p : interior) {
      const GboundReport g = check_gbound(p, coeffs);
      worst.min(g.margin, p);
      gamma_pos = gamma_pos && eval_field(coeffs.Gamma1, p) > 0.0;
    }
    report.checks.push_back({"coefficient-bound",
                             "Gamma1 > 0 and |gamma1| >= [x y Gamma1 + (y^2-1) Gamma2]^2 / (4 |Gamma1 (1-y^2)|)",
                             gamma_pos && worst.value >= 0.0, worst.value, worst.where});
  }
  {
    Extremum worst;
    for (const auto& s : bsamples) worst.max(s.point.y() * s.point.y(), s.point);
    report.checks.push_back({"y-squared-bound", "sup y^2 < 1 on the closed domain",
                             worst.value < 1.0, worst.value, worst.where});
  }
  {
    // Characteristic identities: Phi = 0 along both polar lines and along
    // unit-circle tangents.
    Extremum worst;
    for (int i = 0; i <= 256; ++i) {
      const double x = -kSqrt2 + (kSqrt2 / 2.0) * i / 256.0;
      const Vec2 up(x, x + kSqrt2), dn(x, -x - kSqrt2);
      worst.max(std::abs(char_form(up, Vec2(1.0, 1.0).normalized())), up);
      worst.max(std::abs(char_form(dn, Vec2(1.0, -1.0).normalized())), dn);
      const double th = 2.0 * kPi * i / 257.0;
      const Vec2 c(std::cos(th), std::sin(th));
      worst.max(std::abs(char_form(c, Vec2(-c.y(), c.x()))), c);
    }
    report.checks.push_back({"characteristic-lines",
                             "alpha dy = 0 on the polar lines and on unit-circle tangents",
                             worst.value <= 1e-12, worst.value, worst.where});
  }
  {
    Extremum worst_mu11, worst_det, worst_det0;
    bool range_all = true, span_all = true;
    Vec2 range_loc = Vec2::Zero(), span_loc = Vec2::Zero();
    for (const auto& s : bsamples) {
      const BetaDecomposition d = decompose(s.point, s.normal, s.arc_class);
      const AdmissibilityReport a = check_admissibility(d);
      worst_mu11.min(a.mu11, s.point);
      worst_det.min(a.det_mu, s.point);
      if (!a.range_ok && range_all) {
        range_all = false;
        range_loc = s.point;
      }
      if (!a.span_ok && span_all) {
        span_all = false;
        span_loc = s.point;
      }
      const bool circle_arc = s.arc_class != ArcClass::Characteristic &&
                              s.arc_class != ArcClass::CornerFillet &&
                              std::abs(s.point.x()) >= 0.5 * kSqrt2;
      if (circle_arc || s.arc_class == ArcClass::Characteristic) {
        worst_det0.max(std::abs(a.det_mu), s.point);
      }
    }
    report.checks.push_back({"mu-star-11", "mu*_11 >= 0 on the boundary",
                             worst_mu11.value >= -1e-10, worst_mu11.value, worst_mu11.where});
    report.checks.push_back({"mu-star-det", "det mu* >= 0 on the boundary",
                             worst_det.value >= -1e-10, worst_det.value, worst_det.where});
    report.checks.push_back({"range-intersection",
                             "range(beta+) meets range(beta-) only in the zero vector",
                             range_all, range_all ? 1.0 : 0.0, range_loc});
    report.checks.push_back({"kernel-span",
                             "null spaces of beta+ and beta- jointly span the plane",
                             span_all, span_all ? 1.0 : 0.0, span_loc});
    report.checks.push_back({"mu-star-det-degenerate",
                             "det mu* = 0 on circle arcs and characteristic arcs",
                             worst_det0.value <= 1e-10, worst_det0.value, worst_det0.where});
  }
  {
    // Removability: direct beta equals the additive-cancellation form,
    // including synthetic normals with n1 down to 1e-8 and exactly 0.
    Extremum worst;
    for (const auto& s : bsamples) {
      const double diff =
          (beta_matrix(s.point, s.normal) - beta_matrix_alternate(s.point, s.normal))
              .cwiseAbs()
              .maxCoeff();
      worst.max(diff, s.point);
    }
    for (const double n1 : {0.0, 1e-8, -1e-8, 1e-4, -1e-4}) {
      const Vec2 n(n1, std::sqrt(1.0 - n1 * n1));
      for (int i = 0; i < 64; ++i) {
        const Vec2 p = bsamples[(i * 37) % bsamples.size()].point;
        const double diff =
            (beta_matrix(p, n) - beta_matrix_alternate(p, n)).cwiseAbs().maxCoeff();
        worst.max(diff, p);
      }
    }
    report.checks.push_back({"beta-removability",
                             "the 1/n1 singularity in the alternate beta form cancels",
                             worst.value <= 1e-12, worst.value, worst.where});
  }
  {
    // Corner regularity: across the smoothing curve mu* must be strictly
    // positive definite. A sharp corner (delta = 0) sits on the
    // characteristics, where det mu* = 0, and fails.
    const double fu = dom.theta_fillet_upper();
    const double fl = dom.theta_fillet_lower();
    Extremum worst;
    for (int i = 0; i < 33; ++i) {
      const double t = fu + (fl - fu) * (i + 0.5) / 33.0;  // strictly inside the sector
      const BoundarySample s = boundary_sample(t, dom);
      const BetaDecomposition d = decompose(s.point, s.normal, s.arc_class);
      const AdmissibilityReport a = check_admissibility(d);
      worst.min(std::min(a.mu11, a.det_mu), s.point);
    }
    report.checks.push_back({"corner-regularity",
                             "mu* strictly positive definite across the smoothed corner",
                             worst.value > 1e-12, worst.value, worst.where});
  }
  return report;
}

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["pass"] = report.pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"anchor", c.anchor},
                           {"pass", c.pass},
                           {"worst", c.worst},
                           {"location", {c.location.x(), c.location.y()}}});
  }
  return j;
}

nlohmann::json admissibility_records(const RunConfig& cfg) {
  const std::vector<BoundarySample> samples =
      boundary_samples(cfg.domain, cfg.boundary_samples);

  nlohmann::json arr = nlohmann::json::array();
  double min_mu11 = 0.0, min_det = 0.0;
  bool all_ok = true, first = true;
  for (const auto& s : samples) {
    const BetaDecomposition d = decompose(s.point, s.normal, s.arc_class);
    const AdmissibilityReport a = check_admissibility(d);
    arr.push_back({{"theta", s.theta},
                   {"x", s.point.x()},
                   {"y", s.point.y()},
                   {"class", arc_class_name(s.arc_class)},
                   {"mu11", a.mu11},
                   {"det_mu", a.det_mu},
                   {"range_ok", a.range_ok},
                   {"span_ok", a.span_ok}});
    if (first) {
      min_mu11 = a.mu11;
      min_det = a.det_mu;
      first = false;
    }
    min_mu11 = std::min(min_mu11, a.mu11);
    min_det = std::min(min_det, a.det_mu);
    all_ok = all_ok && a.pass();
  }
  nlohmann::json j;
  j["samples"] = std::move(arr);
  j["summary"] = {{"min_mu11", min_mu11},
                  {"min_det_mu", min_det},
                  {"pass", all_ok && min_mu11 >= -1e-10 && min_det >= -1e-10}};
  return j;
}

}  // namespace gmk
