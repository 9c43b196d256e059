#pragma once

// Reference eigensolver at 128-bit precision, independent of the library's
// Jacobi implementation.  Plain threshold Jacobi with naive bookkeeping, for
// test matrices of modest size only.

#include "magicangle/rational.hpp"

#include <complex>
#include <vector>
#include <algorithm>

namespace oracle {

using magicangle::Float128;
using C128 = std::complex<Float128>;

inline std::vector<Float128> eigvals128(int n, std::vector<C128> a) {
  auto at = [&](int r, int c) -> C128& { return a[size_t(r) * size_t(n) + size_t(c)]; };
  for (int pass = 0; pass < 200; ++pass) {
    Float128 off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += norm(at(p, q));
    if (off < Float128(1e-60)) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        Float128 mag = abs(at(p, q));
        if (mag < Float128(1e-40)) continue;
        Float128 tau = (at(q, q).real() - at(p, p).real()) / (2 * mag);
        Float128 t = (tau >= 0 ? Float128(1) : Float128(-1)) / (abs(tau) + sqrt(1 + tau * tau));
        Float128 c = 1 / sqrt(1 + t * t);
        Float128 s = t * c;
        C128 phase = at(p, q) / mag;
        C128 sp = C128{s, 0} * phase;
        for (int i = 0; i < n; ++i) {
          C128 aip = at(i, p), aiq = at(i, q);
          at(i, p) = C128{c, 0} * aip - conj(sp) * aiq;
          at(i, q) = sp * aip + C128{c, 0} * aiq;
        }
        for (int i = 0; i < n; ++i) {
          C128 api = at(p, i), aqi = at(q, i);
          at(p, i) = C128{c, 0} * api - sp * aqi;
          at(q, i) = conj(sp) * api + C128{c, 0} * aqi;
        }
        at(p, q) = C128{0, 0};
        at(q, p) = C128{0, 0};
      }
  }
  std::vector<Float128> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[size_t(i)] = at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace oracle
