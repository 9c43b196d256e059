#pragma once

#include "magicangle/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <vector>

namespace magicangle {

inline double to_double(const Rational& q) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, q.backend().data(), MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

struct MultiTermInverse : std::domain_error {
  MultiTermInverse() : std::domain_error("rc_invert: value has more than one radicand term") {}
};
struct ZeroInverse : std::domain_error {
  ZeroInverse() : std::domain_error("rc_invert: zero has no inverse") {}
};
struct Overflow : std::overflow_error {
  Overflow() : std::overflow_error("rc_to_float: magnitude exceeds double range") {}
};

// Exact element of Q(i, sqrt(d1), sqrt(d2), ...): a finite sum of Gaussian
// rationals times square roots of squarefree positive integers.  Radicand 1
// carries the rational part.  Canonical form: terms sorted by radicand, no
// zero coefficients; equality is structural.
class RadicalComplex {
 public:
  struct Term {
    std::int64_t radicand;  // squarefree, positive
    Rational re, im;
  };

  RadicalComplex() = default;

  static RadicalComplex rational(const Rational& re, const Rational& im = 0) {
    RadicalComplex x;
    if (re != 0 || im != 0) x.push(1, re, im);
    return x;
  }
  static RadicalComplex i_times(const Rational& q) { return rational(0, q); }

  // sqrt(n) for a positive integer n, reduced to canonical q*sqrt(squarefree).
  static RadicalComplex sqrt_of(std::int64_t n) {
    auto [root, sf] = squarefree_split(n);
    RadicalComplex x;
    x.push(sf, root, 0);
    return x;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].radicand == 1 && terms_[0].im == 0);
  }
  Rational rational_value() const {
    if (terms_.empty()) return 0;
    if (!is_rational()) throw std::domain_error("RadicalComplex: not a rational value");
    return terms_[0].re;
  }

  bool is_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.im == 0; });
  }

  friend bool operator==(const RadicalComplex& a, const RadicalComplex& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t k = 0; k < a.terms_.size(); ++k)
      if (a.terms_[k].radicand != b.terms_[k].radicand || a.terms_[k].re != b.terms_[k].re ||
          a.terms_[k].im != b.terms_[k].im)
        return false;
    return true;
  }
  friend bool operator!=(const RadicalComplex& a, const RadicalComplex& b) { return !(a == b); }

  RadicalComplex operator-() const {
    RadicalComplex x;
    x.terms_ = terms_;
    for (auto& t : x.terms_) { t.re = -t.re; t.im = -t.im; }
    return x;
  }

  friend RadicalComplex operator+(const RadicalComplex& a, const RadicalComplex& b) {
    RadicalComplex out;
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && a.terms_[i].radicand < b.terms_[j].radicand)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].radicand < a.terms_[i].radicand) {
        out.terms_.push_back(b.terms_[j++]);
      } else {
        Term t{a.terms_[i].radicand, a.terms_[i].re + b.terms_[j].re,
               a.terms_[i].im + b.terms_[j].im};
        if (t.re != 0 || t.im != 0) out.terms_.push_back(std::move(t));
        ++i; ++j;
      }
    }
    return out;
  }
  friend RadicalComplex operator-(const RadicalComplex& a, const RadicalComplex& b) {
    return a + (-b);
  }

  // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)(d2/g)) with g = gcd; the product of two
  // coprime squarefree numbers is squarefree, so no factorization is needed.
  friend RadicalComplex operator*(const RadicalComplex& a, const RadicalComplex& b) {
    std::map<std::int64_t, std::pair<Rational, Rational>> acc;
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        std::int64_t g = gcd_i64(s.radicand, t.radicand);
        std::int64_t d = (s.radicand / g) * (t.radicand / g);
        Rational re = (s.re * t.re - s.im * t.im) * g;
        Rational im = (s.re * t.im + s.im * t.re) * g;
        auto& slot = acc[d];
        slot.first += re;
        slot.second += im;
      }
    }
    RadicalComplex out;
    for (auto& [d, v] : acc)
      if (v.first != 0 || v.second != 0) out.push(d, std::move(v.first), std::move(v.second));
    return out;
  }

  RadicalComplex conj() const {
    RadicalComplex x;
    x.terms_ = terms_;
    for (auto& t : x.terms_) t.im = -t.im;
    return x;
  }

  RadicalComplex scaled(const Rational& q) const {
    if (q == 0) return {};
    RadicalComplex x;
    x.terms_ = terms_;
    for (auto& t : x.terms_) { t.re *= q; t.im *= q; }
    return x;
  }

  // |x|^2 as an exact value (real, but not rational in general).
  RadicalComplex abs_sq() const { return *this * conj(); }

 private:
  void push(std::int64_t d, Rational re, Rational im) {
    terms_.push_back({d, std::move(re), std::move(im)});
  }
  std::vector<Term> terms_;  // sorted by radicand
};

inline Rational rational_of(const RadicalComplex& x, const char* what) {
  if (!x.is_rational()) throw std::logic_error(std::string(what) + ": expected a rational value");
  return x.rational_value();
}

// 1/x for a single-term value q*sqrt(d): conj(q)/(|q|^2 d) * sqrt(d).
inline RadicalComplex rc_invert(const RadicalComplex& x) {
  if (x.is_zero()) throw ZeroInverse{};
  if (x.terms().size() != 1) throw MultiTermInverse{};
  const auto& t = x.terms()[0];
  Rational nrm = (t.re * t.re + t.im * t.im) * t.radicand;
  RadicalComplex out;
  out = RadicalComplex::rational(t.re / nrm, -t.im / nrm) * RadicalComplex::sqrt_of(t.radicand);
  return out;
}

namespace detail {

// Double value with a certified absolute error bound, used to audit the
// float image of exact quantities.
struct TrackedDouble {
  double v = 0, e = 0;
};

inline TrackedDouble tracked_add(TrackedDouble a, TrackedDouble b) {
  if (a.v == 0 && a.e == 0) return b;
  if (b.v == 0 && b.e == 0) return a;
  double v = a.v + b.v;
  return {v, (a.e + b.e + 0.5 * kEps * std::abs(v)) * (1 + 8 * kEps)};
}
inline TrackedDouble tracked_mul(TrackedDouble a, TrackedDouble b) {
  if (a.v == 1 && a.e == 0) return b;
  if (b.v == 1 && b.e == 0) return a;
  double v = a.v * b.v;
  double e = a.e * std::abs(b.v) + b.e * std::abs(a.v) + a.e * b.e + 0.5 * kEps * std::abs(v);
  return {v, e * (1 + 8 * kEps)};
}

}  // namespace detail

struct FloatImage {
  std::complex<double> value;
  double rel_bound;   // |exact - value| <= rel_bound * |exact|, when abs_fallback is false
  double abs_bound;   // certified absolute bound, always valid
  bool abs_fallback;  // set when the relative form could not be certified (near-cancellation)
};

namespace detail {

inline TrackedDouble sqrt_tracked(std::int64_t d) {
  double r = std::sqrt(static_cast<double>(d));  // exact operand, correctly rounded result
  if (r * r == static_cast<double>(d) && static_cast<std::int64_t>(r) * static_cast<std::int64_t>(r) == d)
    return {r, 0};
  return {r, 0.5 * kEps * r};
}

inline TrackedDouble rational_tracked(const Rational& q) {
  double v = to_double(q);
  if (!std::isinf(v) && Rational(v) == q) return {v, 0};  // exactly representable
  if (v == 0) return {v, 1e-323};  // underflow: |q| below half the smallest subnormal
  return {v, 0.5 * kEps * std::abs(v)};
}

// sqrt of a tracked nonnegative value; exact at an exact zero, and bounded by
// sqrt(e) when the value itself has rounded to zero.
inline TrackedDouble sqrt_nonneg_tracked(TrackedDouble x) {
  double r = std::sqrt(x.v);
  if (x.v > 0) return {r, 0.5 * kEps * r + x.e / (2 * r) * 1.0000001};
  return {r, std::sqrt(x.e)};
}

// High-precision re/im evaluation with MPFR at the given precision.  The
// error bound scales with the sum of term magnitudes, so it stays valid
// under cancellation.
inline void mpfr_eval(const RadicalComplex& x, mpfr_prec_t prec, double& re, double& im,
                      double& err) {
  mpfr_t rs, is, abss, t, s;
  mpfr_inits2(prec, rs, is, abss, t, s, (mpfr_ptr) nullptr);
  mpfr_set_zero(rs, 1);
  mpfr_set_zero(is, 1);
  mpfr_set_zero(abss, 1);
  for (const auto& term : x.terms()) {
    mpfr_set_si(s, term.radicand, MPFR_RNDN);
    mpfr_sqrt(s, s, MPFR_RNDN);
    mpfr_set_q(t, term.re.backend().data(), MPFR_RNDN);
    mpfr_mul(t, t, s, MPFR_RNDN);
    mpfr_add(rs, rs, t, MPFR_RNDN);
    mpfr_abs(t, t, MPFR_RNDN);
    mpfr_add(abss, abss, t, MPFR_RNDN);
    mpfr_set_q(t, term.im.backend().data(), MPFR_RNDN);
    mpfr_mul(t, t, s, MPFR_RNDN);
    mpfr_add(is, is, t, MPFR_RNDN);
    mpfr_abs(t, t, MPFR_RNDN);
    mpfr_add(abss, abss, t, MPFR_RNDN);
  }
  re = mpfr_get_d(rs, MPFR_RNDN);
  im = mpfr_get_d(is, MPFR_RNDN);
  double scale = mpfr_get_d(abss, MPFR_RNDU);
  err = scale * std::ldexp(1.0, -static_cast<int>(prec - 16)) +
        0.5 * kEps * (std::abs(re) + std::abs(im));
  mpfr_clears(rs, is, abss, t, s, (mpfr_ptr) nullptr);
}

}  // namespace detail

// Nearest-double image of an exact value together with a certified error
// bound.  The fast path tracks rounding through the term sum; if cancellation
// pushes the relative bound past kEpsEff the value is recomputed with MPFR,
// which restores correct rounding (bound ~kEps) unless the value is exactly
// zero, in which case abs_fallback reports a tiny absolute enclosure instead.
inline FloatImage rc_to_float(const RadicalComplex& x) {
  detail::TrackedDouble re{0, 0}, im{0, 0};
  for (const auto& t : x.terms()) {
    detail::TrackedDouble s = detail::sqrt_tracked(t.radicand);
    re = detail::tracked_add(re, detail::tracked_mul(detail::rational_tracked(t.re), s));
    im = detail::tracked_add(im, detail::tracked_mul(detail::rational_tracked(t.im), s));
  }
  double mag = std::hypot(re.v, im.v);
  double abs_err = re.e + im.e;
  if (std::isinf(re.v) || std::isinf(im.v)) throw Overflow{};
  if (abs_err <= kEpsEff * (mag - abs_err)) {
    return {{re.v, im.v}, abs_err / std::max(mag - abs_err, 1e-300), abs_err, false};
  }
  // cancellation: re-evaluate at increasing precision
  for (mpfr_prec_t prec = 192; prec <= 1024; prec *= 2) {
    double r, i, err;
    detail::mpfr_eval(x, prec, r, i, err);
    double m = std::hypot(r, i);
    if (err <= kEpsEff * 0.5 * m) {
      if (std::isinf(r) || std::isinf(i)) throw Overflow{};
      return {{r, i}, err / std::max(m - err, 1e-300), err, false};
    }
  }
  double r, i, err;
  detail::mpfr_eval(x, 1024, r, i, err);
  return {{r, i}, 1.0, err, true};
}

inline std::complex<double> rc_to_complex(const RadicalComplex& x) { return rc_to_float(x).value; }

inline std::complex<Float128> rc_to_float128(const RadicalComplex& x) {
  Float128 re = 0, im = 0;
  for (const auto& t : x.terms()) {
    Float128 s = sqrt(Float128(t.radicand));
    re += to_float128(t.re) * s;
    im += to_float128(t.im) * s;
  }
  return {re, im};
}

// Text form "(p/q + r/s i)*sqrt(d) + ..."; round-trips exactly.
inline std::string to_string(const RadicalComplex& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : x.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.re.str() << " + " << t.im.str() << " i)*sqrt(" << t.radicand << ")";
  }
  return os.str();
}

inline RadicalComplex parse_radical(const std::string& s) {
  RadicalComplex out;
  if (s == "0") return out;
  size_t pos = 0;
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c) throw std::invalid_argument("parse_radical: bad syntax");
    ++pos;
  };
  auto read_rational = [&]() {
    size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '-' ||
                              s[pos] == '/'))
      ++pos;
    return Rational(s.substr(start, pos - start));
  };
  while (pos < s.size()) {
    expect('(');
    Rational re = read_rational();
    expect(' '); expect('+'); expect(' ');
    Rational im = read_rational();
    expect(' '); expect('i'); expect(')');
    expect('*');
    if (s.compare(pos, 5, "sqrt(") != 0) throw std::invalid_argument("parse_radical: bad syntax");
    pos += 5;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    std::int64_t d = std::stoll(s.substr(start, pos - start));
    expect(')');
    out = out + RadicalComplex::rational(re, im) * RadicalComplex::sqrt_of(d);
    if (pos < s.size()) { expect(' '); expect('+'); expect(' '); }
  }
  return out;
}

}  // namespace magicangle
