#pragma once

// Independent full-lattice model of H^1: literal nearest-neighbor hopping on
// raw (unsymmetrized) plane-wave modes, built directly from the three Fourier
// modes of the coupling potential.  Used only to validate the orbit-level
// hopping rules; kept free of any dependence on them.

#include "magicangle/chiral.hpp"

#include <map>

namespace oracle {

using namespace magicangle;

// flavor +1: modes on components 1 (A sites) / 2 (B sites);
// flavor -1: modes on components 3 (A sites) / 4 (B sites).
using RawVector = std::map<std::pair<LatticeSite, int>, RadicalComplex>;

inline void raw_accumulate(RawVector& v, const LatticeSite& s, int flavor,
                           const RadicalComplex& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(s, flavor);
  auto it = v.find(key);
  if (it == v.end()) v.emplace(key, c);
  else {
    it->second = it->second + c;
    if (it->second.is_zero()) v.erase(it);
  }
}

// U(r) = e^{-i q1 r} + e^{i phi} e^{-i q2 r} + e^{-i phi} e^{-i q3 r}.
// Multiplication by the three Fourier modes moves a plane wave at momentum k
// to k + q_j with coefficient c_j (or conj(c_j) for the adjoint factors).
inline RadicalComplex u_coeff(int j, bool conjugated) {
  const RadicalComplex phi = RadicalComplex::rational(Rational(-1, 2)) +
                             RadicalComplex::i_times(Rational(1, 2)) * RadicalComplex::sqrt_of(3);
  RadicalComplex c = j == 0 ? RadicalComplex::rational(1) : (j == 1 ? phi : phi.conj());
  return conjugated ? c.conj() : c;
}

// Literal H^1 on raw modes.  A(+1) modes hop to B(-1) with coefficients c_j;
// B(+1) to A(-1) with c_j; A(-1) to B(+1) and B(-1) to A(+1) with conj(c_j).
inline RawVector raw_h1(const RawVector& v) {
  RawVector out;
  for (const auto& [key, c] : v) {
    const auto& [s, flavor] = key;
    for (int j = 0; j < 3; ++j) {
      LatticeSite t = hop_targets(s)[j];
      raw_accumulate(out, t, -flavor, c * u_coeff(j, flavor == -1));
    }
  }
  return out;
}

// Expansion of a chiral basis function into raw modes: +1 functions put
// 1/sqrt3 on each orbit member, -1 functions put z_hat(member)/sqrt3, and the
// origin is the single raw mode itself.
inline RawVector expand_chiral(const OrbitIndex& k) {
  RawVector out;
  if (k.is_origin()) {
    raw_accumulate(out, site_a(0, 0), +1, RadicalComplex::rational(1));
    return out;
  }
  const RadicalComplex third = RadicalComplex::sqrt_of(3).scaled(Rational(1, 3));  // 1/sqrt3
  LatticeSite s = k.rep;
  for (int i = 0; i < 3; ++i) {
    if (k.chi == +1) raw_accumulate(out, s, +1, third);
    else raw_accumulate(out, s, -1, third * z_hat(s));
    s = rotate(s);
  }
  return out;
}

// Projection of a raw vector onto the chiral basis function indexed by k.
inline RadicalComplex project_chiral(const RawVector& v, const OrbitIndex& k) {
  RawVector basis = expand_chiral(k);
  RadicalComplex out;
  for (const auto& [key, c] : basis) {
    auto it = v.find(key);
    if (it != v.end()) out = out + c.conj() * it->second;
  }
  return out;
}

}  // namespace oracle
