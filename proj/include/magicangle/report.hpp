#pragma once

#include "magicangle/envelope.hpp"
#include "magicangle/gap.hpp"

#include <json.hpp>

#include <fstream>

namespace magicangle {

inline constexpr const char* kVersion = "1.0.0";

// Machine-readable record of the full certification: both sign certificates,
// the gap certificate, the verified subspace constants, and the magic-angle
// bracket.  Exact rationals are serialized as "p/q" strings so certified
// quantities never pass through floats.
struct CertificationReport {
  std::string version = kVersion;
  int series_order = 8;
  bool mu_verified = false;
  MuReport mu;
  Rational h1_psi8_norm_sq;
  long long lipschitz = 0;
  std::optional<SignCertificate> worst_negative;
  std::optional<SignCertificate> best_positive;
  std::optional<GapCertificate> gap;
  Rational bracket_lo{57, 100};
  Rational bracket_hi{61, 100};
  std::vector<double> roots;            // non-rigorous: base, worst, best
  double root_high_order = 0;           // non-rigorous order-40 zero, when computed
  double wall_seconds = 0;
  std::string timestamp;                // RFC3339; excluded from determinism checks

  bool verdict() const {
    return mu_verified && worst_negative && worst_negative->certified_sign == -1 &&
           best_positive && best_positive->certified_sign == +1 && gap && gap->verdict;
  }
};

inline nlohmann::ordered_json to_json(const SignCertificate& c) {
  return nlohmann::ordered_json{
      {"alpha", c.alpha.str()},
      {"certified_sign", c.certified_sign},
      {"value", c.value},
      {"round_off_bound", c.bound},
      {"value_cleared_degree18", c.value_cleared},
      {"bound_cleared_degree18", c.bound_cleared},
      {"sup_cleared_coefficient", c.sup_coefficient},
      {"value_direct_expression", c.value_direct},
      {"bound_direct_expression", c.bound_direct},
      {"degree", c.degree},
      {"eps", c.eps},
      {"eps_eff", c.eps_eff},
  };
}

inline nlohmann::ordered_json to_json(const GapCertificate& g) {
  return nlohmann::ordered_json{
      {"grid_points", g.grid_points},
      {"spacing", g.spacing.str()},
      {"survey", g.survey},
      {"verdict", g.verdict},
      {"lipschitz_constant", g.lipschitz},
      {"threshold", "1/388831"},
      {"grid_min_first_positive", g.grid_min_first_positive},
      {"grid_min_certified_lower_bound", g.grid_min_certified_bound},
      {"max_enclosure_radius", g.max_radius},
      {"max_symmetry_defect", g.max_symmetry_defect},
      {"max_orthonormality_defect", g.max_ortho_defect},
      {"max_residual_inf", g.max_residual_inf},
      {"note", g.failure.empty() ? "certified" : g.failure},
  };
}

inline nlohmann::ordered_json to_json(const CertificationReport& r) {
  nlohmann::ordered_json j{
      {"tool", "magicangle"},
      {"version", r.version},
      {"verdict",
       r.verdict() ? "first magic angle certified in (0.57, 0.61)" : "not certified"},
      {"certified", r.verdict()},
      {"series_order", r.series_order},
      {"bracket", {r.bracket_lo.str(), r.bracket_hi.str()}},
      {"ingredients",
       {
           {"mu", r.mu.mu},
           {"mu_sq", r.mu.mu_sq},
           {"h1_boundary_norm", r.mu.h1_boundary_norm},
           {"max_boundary_degree", r.mu.max_boundary_degree},
           {"h1_psi8_norm_sq", r.h1_psi8_norm_sq.str()},
           {"lipschitz_constant", r.lipschitz},
           {"eps_eff", kEpsEff},
       }},
  };
  j["sign_certificates"] = nlohmann::ordered_json::object();
  if (r.worst_negative) j["sign_certificates"]["worst_at_0.61"] = to_json(*r.worst_negative);
  if (r.best_positive) j["sign_certificates"]["best_at_0.57"] = to_json(*r.best_positive);
  if (r.gap) j["gap_certificate"] = to_json(*r.gap);
  j["approximate_roots"] = {
      {"rigorous", false},
      {"expansion_order8", r.roots.size() > 0 ? r.roots[0] : 0.0},
      {"worst_envelope", r.roots.size() > 1 ? r.roots[1] : 0.0},
      {"best_envelope", r.roots.size() > 2 ? r.roots[2] : 0.0},
  };
  if (r.root_high_order != 0) j["approximate_roots"]["expansion_order40"] = r.root_high_order;
  j["wall_seconds"] = r.wall_seconds;
  j["timestamp"] = r.timestamp;
  return j;
}

inline void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << "\n";
}

}  // namespace magicangle
