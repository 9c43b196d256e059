#pragma once

#include "magicangle/radical.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>

namespace magicangle {

// Momentum-space honeycomb lattice.  A sites are the reciprocal lattice
// m*b1 + n*b2, B sites sit at q1 + m*b1 + n*b2, with
//   b1 = (sqrt3/2, 3/2),  b2 = (-sqrt3/2, 3/2),  q1 = (0, -1).
enum class Sublattice : std::uint8_t { A, B };

struct LatticeSite {
  Sublattice sub;
  int m, n;

  friend auto operator<=>(const LatticeSite&, const LatticeSite&) = default;
};

inline LatticeSite site_a(int m, int n) { return {Sublattice::A, m, n}; }
inline LatticeSite site_b(int m, int n) { return {Sublattice::B, m, n}; }

inline bool is_origin(const LatticeSite& s) {
  return s.sub == Sublattice::A && s.m == 0 && s.n == 0;
}

struct OriginHasNoPhase : std::domain_error {
  OriginHasNoPhase() : std::domain_error("z_hat: the origin has no phase") {}
};

// |site|^2, always a nonnegative integer on this lattice.
inline std::int64_t norm_sq(const LatticeSite& s) {
  std::int64_t m = s.m, n = s.n;
  std::int64_t k = 3 * (m * m + m * n + n * n);
  return s.sub == Sublattice::A ? k : k - 3 * (m + n) + 1;
}

// The rotation R_phi^* by -2pi/3 in integer coordinates:
//   A(m,n) -> A(n, -m-n),   B(m,n) -> B(n, 1-m-n)   (q1 -> q1 + b2).
inline LatticeSite rotate(const LatticeSite& s) {
  if (s.sub == Sublattice::A) return site_a(s.n, -s.m - s.n);
  return site_b(s.n, 1 - s.m - s.n);
}

// Exact unit complex (v1 + i v2)/|v| of the site vector.
inline RadicalComplex z_hat(const LatticeSite& s) {
  if (is_origin(s)) throw OriginHasNoPhase{};
  std::int64_t ns = norm_sq(s);
  // v = (sqrt3*(m-n)/2, y) with y = 3(m+n)/2 on A and (3(m+n)-2)/2 on B;
  // divide by |v| as multiplication by sqrt(ns)/ns.
  Rational x_coef(s.m - s.n, 2);
  Rational y = s.sub == Sublattice::A ? Rational(3 * (s.m + s.n), 2)
                                      : Rational(3 * (s.m + s.n) - 2, 2);
  RadicalComplex v = RadicalComplex::rational(x_coef) * RadicalComplex::sqrt_of(3) +
                     RadicalComplex::i_times(y);
  return v * RadicalComplex::sqrt_of(ns).scaled(Rational(1, ns));
}

// Index of a chiral basis function: the canonical representative of the
// <=3-element rotation orbit plus a chirality sign.  The origin orbit has no
// chirality split and is flagged with chi = 0.
struct OrbitIndex {
  LatticeSite rep;
  std::int8_t chi;  // +1, -1, or 0 for the origin

  bool is_origin() const { return chi == 0; }

  friend auto operator<=>(const OrbitIndex&, const OrbitIndex&) = default;
};

inline LatticeSite orbit_rep(const LatticeSite& s) {
  LatticeSite r1 = rotate(s), r2 = rotate(r1);
  LatticeSite rep = s;
  if (r1 < rep) rep = r1;
  if (r2 < rep) rep = r2;
  return rep;
}

inline OrbitIndex canonicalize(const LatticeSite& s, int chirality) {
  if (is_origin(s)) return {s, 0};
  return {orbit_rep(s), static_cast<std::int8_t>(chirality)};
}

inline OrbitIndex origin_index() { return {site_a(0, 0), 0}; }

inline std::string to_string(const LatticeSite& s) {
  std::ostringstream os;
  os << (s.sub == Sublattice::A ? 'A' : 'B') << '(' << s.m << ',' << s.n << ')';
  return os.str();
}

inline std::string to_string(const OrbitIndex& k) {
  if (k.is_origin()) return "chi[origin]";
  std::ostringstream os;
  os << "chi[" << to_string(k.rep) << ',' << (k.chi > 0 ? "+1" : "-1") << ']';
  return os.str();
}

// Nearest-neighbor hop targets in the honeycomb: A(m,n) reaches the B sites
// at +q1, +q2, +q3; B(m,n) reaches the A sites at -q1, -q2, -q3.  The order
// matches the phase conventions of the H^1 hopping rules.
inline std::array<LatticeSite, 3> hop_targets(const LatticeSite& s) {
  if (s.sub == Sublattice::A)
    return {site_b(s.m, s.n), site_b(s.m + 1, s.n), site_b(s.m, s.n + 1)};
  return {site_a(s.m, s.n), site_a(s.m - 1, s.n), site_a(s.m, s.n - 1)};
}

}  // namespace magicangle
