#pragma once

#include "magicangle/lattice.hpp"

#include <map>
#include <sstream>

namespace magicangle {

struct WrongChirality : std::domain_error {
  WrongChirality()
      : std::domain_error("conj_reflect: vector must be supported on chirality +1") {}
};

// Element of L^2_{K,1} in the chiral basis: sparse map from orbit indices to
// exact coefficients.  No zero coefficients are stored.
using ChiralVector = std::map<OrbitIndex, RadicalComplex>;

inline void accumulate(ChiralVector& v, const OrbitIndex& k, const RadicalComplex& c) {
  if (c.is_zero()) return;
  auto it = v.find(k);
  if (it == v.end()) {
    v.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) v.erase(it);
}

inline ChiralVector operator+(const ChiralVector& a, const ChiralVector& b) {
  ChiralVector out = a;
  for (const auto& [k, c] : b) accumulate(out, k, c);
  return out;
}

inline ChiralVector scaled(const ChiralVector& v, const RadicalComplex& f) {
  ChiralVector out;
  for (const auto& [k, c] : v) accumulate(out, k, c * f);
  return out;
}

inline ChiralVector scaled(const ChiralVector& v, const Rational& q) {
  ChiralVector out;
  if (q == 0) return out;
  for (const auto& [k, c] : v) out.emplace(k, c.scaled(q));
  return out;
}

namespace detail {
inline const RadicalComplex& e_i_phi() {  // e^{i 2pi/3}
  static const RadicalComplex v = RadicalComplex::rational(Rational(-1, 2)) +
                                  RadicalComplex::i_times(Rational(1, 2)) *
                                      RadicalComplex::sqrt_of(3);
  return v;
}
inline const RadicalComplex& e_mi_phi() {
  static const RadicalComplex v = e_i_phi().conj();
  return v;
}
}  // namespace detail

// H^0: chi{s,+-1} -> |s| chi{s,-+1}; the origin mode is annihilated.
inline ChiralVector apply_h0(const ChiralVector& v) {
  ChiralVector out;
  for (const auto& [k, c] : v) {
    if (k.is_origin()) continue;
    accumulate(out, OrbitIndex{k.rep, static_cast<std::int8_t>(-k.chi)},
               c * RadicalComplex::sqrt_of(norm_sq(k.rep)));
  }
  return out;
}

// P^perp (H^0)^{-1} P^perp: chi{s,+-1} -> chi{s,-+1}/|s|; origin dropped.
inline ChiralVector apply_h0_inv_perp(const ChiralVector& v) {
  ChiralVector out;
  for (const auto& [k, c] : v) {
    if (k.is_origin()) continue;
    std::int64_t ns = norm_sq(k.rep);
    RadicalComplex inv = RadicalComplex::sqrt_of(ns).scaled(Rational(1, ns));
    accumulate(out, OrbitIndex{k.rep, static_cast<std::int8_t>(-k.chi)}, c * inv);
  }
  return out;
}

// H^1: nearest-neighbor hopping on the momentum honeycomb, flipping
// chirality and swapping the momentum sublattice.  From chirality +1 the
// amplitude on target t is phase_j * conj(z_hat(t)); from -1 it is
// conj(phase_j) * z_hat(source).  Hops touching the origin orbit carry the
// sqrt(3) normalization mismatch of the single-plane-wave origin mode, and
// the hop from a +1 mode onto the origin vanishes (the origin has no -1
// partner).  The result does not depend on which orbit member represents
// the source.
inline ChiralVector apply_h1(const ChiralVector& v) {
  const RadicalComplex sqrt3 = RadicalComplex::sqrt_of(3);
  ChiralVector out;
  for (const auto& [k, c] : v) {
    if (k.is_origin()) {
      // H^1 chi0 = sqrt3 * conj(z_hat(q1)) * chi{q1,-1}, and conj(z_hat(q1)) = i
      accumulate(out, canonicalize(site_b(0, 0), -1),
                 c * sqrt3 * RadicalComplex::i_times(1));
      continue;
    }
    const std::array<LatticeSite, 3> targets = hop_targets(k.rep);
    if (k.chi == +1) {
      const RadicalComplex phase[3] = {RadicalComplex::rational(1), detail::e_i_phi(),
                                       detail::e_mi_phi()};
      for (int j = 0; j < 3; ++j) {
        if (is_origin(targets[j])) continue;
        accumulate(out, canonicalize(targets[j], -1),
                   c * phase[j] * z_hat(targets[j]).conj());
      }
    } else {
      const RadicalComplex phase[3] = {RadicalComplex::rational(1), detail::e_mi_phi(),
                                       detail::e_i_phi()};
      const RadicalComplex zs = z_hat(k.rep);
      for (int j = 0; j < 3; ++j) {
        if (is_origin(targets[j])) {
          accumulate(out, origin_index(), c * sqrt3 * zs);
        } else {
          accumulate(out, canonicalize(targets[j], +1), c * phase[j] * zs);
        }
      }
    }
  }
  return out;
}

// One recursion step of the zero-mode expansion: -P^perp (H^0)^{-1} P^perp H^1.
inline ChiralVector apply_step(const ChiralVector& v) {
  ChiralVector out;
  for (auto& [k, c] : apply_h0_inv_perp(apply_h1(v))) out.emplace(k, -c);
  return out;
}

inline RadicalComplex inner(const ChiralVector& u, const ChiralVector& v) {
  RadicalComplex out;
  auto iu = u.begin();
  auto iv = v.begin();
  while (iu != u.end() && iv != v.end()) {
    if (iu->first < iv->first) ++iu;
    else if (iv->first < iu->first) ++iv;
    else { out = out + iu->second.conj() * iv->second; ++iu; ++iv; }
  }
  return out;
}

// Unconjugated pairing sum_i u_i v_i; equals <u*(-r), v(r)> for chirality +1
// supports since those basis functions satisfy chi*(-r) = chi(r).
inline RadicalComplex pair_unconjugated(const ChiralVector& u, const ChiralVector& v) {
  RadicalComplex out;
  auto iu = u.begin();
  auto iv = v.begin();
  while (iu != u.end() && iv != v.end()) {
    if (iu->first < iv->first) ++iu;
    else if (iv->first < iu->first) ++iv;
    else { out = out + iu->second * iv->second; ++iu; ++iv; }
  }
  return out;
}

// f(r) -> f*(-r) on chirality +1 supports: coefficient-wise conjugation.
inline ChiralVector conj_reflect(const ChiralVector& v) {
  ChiralVector out;
  for (const auto& [k, c] : v) {
    if (k.chi == -1) throw WrongChirality{};
    out.emplace(k, c.conj());
  }
  return out;
}

inline std::string dump(const ChiralVector& v) {
  std::ostringstream os;
  for (const auto& [k, c] : v) os << to_string(c) << " * " << to_string(k) << "\n";
  return os.str();
}

}  // namespace magicangle
