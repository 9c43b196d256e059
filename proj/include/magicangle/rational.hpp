#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/float128.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace magicangle {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Float128 = boost::multiprecision::float128;

// 2^-52, the working machine epsilon of the round-off model.
inline constexpr double kEps = 2.220446049250313e-16;

// Declared relative error bound for radical-to-double conversion.
// Conversions that cannot meet it fall back to higher precision internally.
inline constexpr double kEpsEff = 16 * kEps;

// n = square * squarefree with squarefree positive; trial division.
struct SquarefreeSplit {
  std::int64_t root;       // the extracted square root factor
  std::int64_t squarefree;
};

inline SquarefreeSplit squarefree_split(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("squarefree_split: need positive integer");
  std::int64_t root = 1, sf = 1, m = n;
  for (std::int64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (m % p == 0) { m /= p; ++e; }
    for (int i = 0; i < e / 2; ++i) root *= p;
    if (e % 2) sf *= p;
  }
  sf *= m;
  return {root, sf};
}

inline std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  while (b) { std::int64_t t = a % b; a = b; b = t; }
  return a < 0 ? -a : a;
}

// Correctly rounded double from an exact rational (single rounding via MPFR
// would also work; mpq_get_d truncates toward zero, error < 1 ulp).
double to_double(const Rational& q);

inline Float128 to_float128(const Rational& q) {
  return Float128(boost::multiprecision::mpf_float_100(q));
}

inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational pow_rational(const Rational& q, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= q;
  return r;
}

}  // namespace magicangle
