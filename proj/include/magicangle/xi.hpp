#pragma once

#include "magicangle/series.hpp"

#include <algorithm>
#include <set>

namespace magicangle {

struct CountMismatch : std::logic_error {
  explicit CountMismatch(size_t got)
      : std::logic_error("build_xi: expected 81 basis functions, got " + std::to_string(got)) {}
};
struct MuViolation : std::logic_error {
  explicit MuViolation(const std::string& m) : std::logic_error("MuViolation: " + m) {}
};
struct BoundaryDegreeViolation : std::logic_error {
  explicit BoundaryDegreeViolation(const std::string& m)
      : std::logic_error("BoundaryDegreeViolation: " + m) {}
};
struct SupportEscape : std::logic_error {
  explicit SupportEscape(const std::string& m) : std::logic_error("SupportEscape: " + m) {}
};

// Deliberate-failure hooks for the verification tests.
enum class XiTamper { none, add_crossed, drop_4b2 };

// The 81 chiral basis functions spanning the projection subspace: the origin
// mode, every orbit with |site|^2 <= 48 in both chiralities, and the two
// norm-49 orbits through q1 - 4b1 + b2 and q1 - 4b1 + 4b2.  The third
// norm-49 orbit (through q1 - 2b1 - 2b2) is left out so that every included
// orbit has at most one hop neighbor outside.
struct XiBasis {
  std::vector<OrbitIndex> indices;       // origin, then chirality +1, then -1
  std::set<LatticeSite> orbits;          // canonical representatives

  bool contains_orbit(const LatticeSite& rep) const { return orbits.count(rep) > 0; }
  bool contains(const OrbitIndex& k) const {
    return k.is_origin() || orbits.count(k.rep) > 0;
  }
  int position(const OrbitIndex& k) const {
    auto it = std::find(indices.begin(), indices.end(), k);
    if (it == indices.end()) throw std::out_of_range("XiBasis::position");
    return static_cast<int>(it - indices.begin());
  }
  size_t size() const { return indices.size(); }
};

inline XiBasis build_xi(XiTamper tamper = XiTamper::none) {
  std::set<LatticeSite> orbits;
  for (int m = -9; m <= 9; ++m)
    for (int n = -9; n <= 9; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite s{sub, m, n};
        if (!is_origin(s) && norm_sq(s) <= 48) orbits.insert(orbit_rep(s));
      }
  orbits.insert(orbit_rep(site_b(-4, 1)));  // q1 - 4b1 + b2
  orbits.insert(orbit_rep(site_b(-4, 4)));  // q1 - 4b1 + 4b2
  if (tamper == XiTamper::add_crossed) orbits.insert(orbit_rep(site_b(-2, -2)));
  if (tamper == XiTamper::drop_4b2) orbits.erase(orbit_rep(site_a(0, -4)));

  XiBasis xi;
  xi.orbits = orbits;
  xi.indices.push_back(origin_index());
  // sort by unperturbed eigenvalue, then representative, for a stable layout
  std::vector<LatticeSite> sorted(orbits.begin(), orbits.end());
  std::sort(sorted.begin(), sorted.end(), [](const LatticeSite& a, const LatticeSite& b) {
    return std::make_tuple(norm_sq(a), a) < std::make_tuple(norm_sq(b), b);
  });
  for (const auto& rep : sorted) xi.indices.push_back(OrbitIndex{rep, +1});
  for (const auto& rep : sorted) xi.indices.push_back(OrbitIndex{rep, -1});
  if (tamper == XiTamper::none && xi.indices.size() != 81) throw CountMismatch(xi.indices.size());
  return xi;
}

// The three hop-neighbor orbits of an orbit (deduplicated; the origin orbit
// neighbors only the q1 orbit).
inline std::set<LatticeSite> neighbor_orbits(const LatticeSite& rep) {
  std::set<LatticeSite> out;
  for (const auto& t : hop_targets(rep)) out.insert(orbit_rep(t));
  return out;
}

struct MuReport {
  std::int64_t mu_sq = 0;            // min |site|^2 over orbits outside Xi
  int mu = 0;                        // exact when mu_sq is a perfect square
  int max_boundary_degree = 0;       // outgoing hop edges leaving Xi, per orbit
  int boundary_edges = 0;
  int h1_boundary_norm = 1;          // ||P_Xi H^1 P_Xi^perp||
};

// Checks the three properties that the projection subspace must satisfy:
// the spectral floor outside is 7, the boundary hopping is a partial
// matching (norm exactly 1), and the truncated zero mode lives inside.
inline MuReport verify_mu_choice(const XiBasis& xi, const PerturbationSeries& series) {
  MuReport rep;
  // support containment of Psi^0..Psi^8
  for (int n = 0; n <= std::min(series.order, 8); ++n)
    for (const auto& [k, c] : series.term(n))
      if (!xi.contains(k))
        throw SupportEscape("Psi^" + std::to_string(n) + " has weight on " + to_string(k));

  // boundary degrees on both sides of the cut
  std::map<LatticeSite, int> outside_degree;
  for (const auto& o : xi.orbits) {
    int out = 0;
    for (const auto& t : neighbor_orbits(o))
      if (!is_origin(t) && !xi.contains_orbit(t)) {
        ++out;
        ++outside_degree[t];
      }
    rep.max_boundary_degree = std::max(rep.max_boundary_degree, out);
    if (out > 1)
      throw BoundaryDegreeViolation("orbit " + to_string(o) + " has " + std::to_string(out) +
                                    " neighbors outside Xi");
    rep.boundary_edges += out;
  }
  for (const auto& [t, deg] : outside_degree)
    if (deg > 1)
      throw BoundaryDegreeViolation("outside orbit " + to_string(t) + " has " +
                                    std::to_string(deg) + " neighbors inside Xi");
  // every crossing amplitude is a unit phase (no sqrt3 origin factors at the
  // boundary), so a partial matching has operator norm exactly 1
  for (const auto& o : xi.orbits) {
    ChiralVector img = apply_h1(ChiralVector{{OrbitIndex{o, +1}, RadicalComplex::rational(1)}});
    for (const auto& [k, c] : img)
      if (!xi.contains(k) && c.abs_sq() != RadicalComplex::rational(1))
        throw BoundaryDegreeViolation("boundary amplitude of " + to_string(o) +
                                      " is not a unit phase");
  }
  rep.h1_boundary_norm = rep.boundary_edges > 0 ? 1 : 0;

  // spectral floor outside Xi: scan a window comfortably containing every
  // orbit with |site|^2 <= 80; anything farther out only grows
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int m = -12; m <= 12; ++m)
    for (int n = -12; n <= 12; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite s{sub, m, n};
        if (is_origin(s) || xi.contains_orbit(orbit_rep(s))) continue;
        best = std::min(best, norm_sq(s));
      }
  rep.mu_sq = best;
  if (best != 49)
    throw MuViolation("spectral floor outside Xi is not 49, got " + std::to_string(best));
  rep.mu = 7;
  return rep;
}

// Text listing of the basis for reports, one orbit per line.
inline std::string xi_listing(const XiBasis& xi) {
  std::ostringstream os;
  for (const auto& k : xi.indices) {
    if (k.is_origin()) {
      os << to_string(k) << "  norm^2 = 0\n";
    } else if (k.chi == +1) {
      os << "chi[" << to_string(k.rep) << ",+-1]  norm^2 = " << norm_sq(k.rep) << "\n";
    }
  }
  return os.str();
}

}  // namespace magicangle
