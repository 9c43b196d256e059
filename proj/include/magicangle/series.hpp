#pragma once

#include "magicangle/chiral.hpp"
#include "magicangle/poly.hpp"

#include <ostream>

namespace magicangle {

// Zero-mode expansion psi^alpha = sum alpha^n Psi^n with Psi^0 the origin
// mode and Psi^n = -P^perp (H^0)^{-1} P^perp H^1 Psi^{n-1}.
struct PerturbationSeries {
  int order = 0;
  std::vector<ChiralVector> terms;  // Psi^0 ... Psi^order

  const ChiralVector& term(int n) const {
    if (n < 0 || n > order) throw std::out_of_range("PerturbationSeries::term");
    return terms[static_cast<size_t>(n)];
  }
};

inline PerturbationSeries compute_series(int order) {
  if (order < 0) throw std::invalid_argument("compute_series: order must be >= 0");
  PerturbationSeries s;
  s.order = order;
  s.terms.reserve(static_cast<size_t>(order) + 1);
  ChiralVector psi{{origin_index(), RadicalComplex::rational(1)}};
  s.terms.push_back(psi);
  for (int n = 1; n <= order; ++n) {
    psi = apply_step(psi);
    s.terms.push_back(psi);
  }
  return s;
}

// ||Psi^n||^2, exact.
inline Rational norm_sq_of_term(const PerturbationSeries& s, int n) {
  const ChiralVector& v = s.term(n);
  return rational_of(inner(v, v), "norm_sq_of_term");
}

// ||H^1 Psi^n||^2, exact.
inline Rational h1_norm_sq_of_term(const PerturbationSeries& s, int n) {
  ChiralVector w = apply_h1(s.term(n));
  return rational_of(inner(w, w), "h1_norm_sq_of_term");
}

// <sum alpha^m Psi^m*(-r), sum alpha^n Psi^n(r)> as an exact polynomial:
// coefficient of alpha^k is sum over m+n=k of the unconjugated pairings.
inline RationalPoly numerator_series(const PerturbationSeries& s, int order) {
  if (order > s.order) throw std::out_of_range("numerator_series: order exceeds series");
  std::vector<Rational> c(static_cast<size_t>(2 * order) + 1, Rational(0));
  for (int m = 0; m <= order; ++m)
    for (int n = 0; n <= order; ++n)
      c[static_cast<size_t>(m + n)] +=
          rational_of(pair_unconjugated(s.term(m), s.term(n)), "numerator_series");
  return RationalPoly(std::move(c));
}

inline RationalPoly numerator_series(int order) {
  return numerator_series(compute_series(order), order);
}

// <sum alpha^n Psi^n, sum alpha^n Psi^n> as an exact polynomial.
inline RationalPoly denominator_series(const PerturbationSeries& s, int order) {
  if (order > s.order) throw std::out_of_range("denominator_series: order exceeds series");
  std::vector<Rational> c(static_cast<size_t>(2 * order) + 1, Rational(0));
  for (int m = 0; m <= order; ++m)
    for (int n = 0; n <= order; ++n) {
      RadicalComplex ip = inner(s.term(m), s.term(n));
      if (m == n) {
        c[static_cast<size_t>(2 * m)] += rational_of(ip, "denominator_series");
      } else if (m < n) {
        // <m,n> + <n,m> = 2 Re<m,n>, rational; accumulate the pair at once
        RadicalComplex sym = ip + ip.conj();
        c[static_cast<size_t>(m + n)] += rational_of(sym, "denominator_series");
      }
    }
  return RationalPoly(std::move(c));
}

inline RationalPoly denominator_series(int order) {
  return denominator_series(compute_series(order), order);
}

// psi^{N,alpha} evaluated exactly at a rational alpha.
inline ChiralVector evaluate_series(const PerturbationSeries& s, const Rational& alpha) {
  ChiralVector out;
  Rational p = 1;
  for (int n = 0; n <= s.order; ++n) {
    for (const auto& [k, c] : s.term(n)) accumulate(out, k, c.scaled(p));
    p *= alpha;
  }
  return out;
}

// CSV rows (power, numerator coefficient, denominator coefficient), exact.
inline void write_series_csv(std::ostream& os, const RationalPoly& num, const RationalPoly& den) {
  os << "power,numerator,denominator\n";
  int deg = std::max(num.degree(), den.degree());
  for (int k = 0; k <= deg; ++k)
    os << k << ',' << num.coefficient(static_cast<size_t>(k)).str() << ','
       << den.coefficient(static_cast<size_t>(k)).str() << '\n';
}

}  // namespace magicangle
