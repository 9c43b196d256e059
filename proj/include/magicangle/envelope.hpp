#pragma once

#include "magicangle/series.hpp"

#include <cmath>
#include <optional>

namespace magicangle {

struct WrongOrder : std::invalid_argument {
  WrongOrder() : std::invalid_argument("build_envelopes: series order must be 8") {}
};
struct Inconclusive : std::runtime_error {
  explicit Inconclusive(const std::string& m) : std::runtime_error("Inconclusive: " + m) {}
};
struct SignMismatch : std::runtime_error {
  explicit SignMismatch(const std::string& m) : std::runtime_error("SignMismatch: " + m) {}
};

// Exact value of the form  rat + sum_k mult_k * sqrt(radicand_k)  with
// rational radicands > 0.  Rich enough for the cleared envelope coefficients,
// whose radical parts are products of two norm values.
struct SurdSum {
  Rational rat;
  std::vector<std::pair<Rational, Rational>> surds;  // (multiplier, radicand)

  void add_surd(const Rational& mult, const Rational& radicand) {
    if (mult == 0) return;
    for (auto& [m, r] : surds)
      if (r == radicand) { m += mult; return; }
    surds.emplace_back(mult, radicand);
  }

  Float128 value128() const {
    Float128 v = to_float128(rat);
    for (const auto& [m, r] : surds) v += to_float128(m) * sqrt(to_float128(r));
    return v;
  }

  // Double image with a certified absolute bound.  Falls back to MPFR when
  // term cancellation defeats the tracked fast path.
  detail::TrackedDouble tracked() const {
    detail::TrackedDouble acc = detail::rational_tracked(rat);
    for (const auto& [m, r] : surds) {
      detail::TrackedDouble s = detail::sqrt_nonneg_tracked(detail::rational_tracked(r));
      acc = detail::tracked_add(acc, detail::tracked_mul(detail::rational_tracked(m), s));
    }
    if (acc.e <= kEpsEff * std::abs(acc.v)) return acc;
    for (mpfr_prec_t prec = 256; prec <= 1024; prec *= 2) {
      detail::TrackedDouble hi = eval_mpfr(prec);
      if (hi.e <= kEpsEff * std::abs(hi.v)) return hi;
    }
    return eval_mpfr(1024);
  }

  detail::TrackedDouble eval_mpfr(mpfr_prec_t prec) const {
    mpfr_t acc, abss, t;
    mpfr_inits2(prec, acc, abss, t, (mpfr_ptr) nullptr);
    mpfr_set_q(acc, rat.backend().data(), MPFR_RNDN);
    mpfr_abs(abss, acc, MPFR_RNDN);
    for (const auto& [m, r] : surds) {
      mpfr_set_q(t, r.backend().data(), MPFR_RNDN);
      mpfr_sqrt(t, t, MPFR_RNDN);
      mpfr_t mm;
      mpfr_init2(mm, prec);
      mpfr_set_q(mm, m.backend().data(), MPFR_RNDN);
      mpfr_mul(t, t, mm, MPFR_RNDN);
      mpfr_clear(mm);
      mpfr_add(acc, acc, t, MPFR_RNDN);
      mpfr_abs(t, t, MPFR_RNDN);
      mpfr_add(abss, abss, t, MPFR_RNDN);
    }
    double v = mpfr_get_d(acc, MPFR_RNDN);
    double scale = mpfr_get_d(abss, MPFR_RNDU);
    double err = scale * std::ldexp(1.0, -static_cast<int>(prec - 16)) + 0.5 * kEps * std::abs(v);
    mpfr_clears(acc, abss, t, (mpfr_ptr) nullptr);
    return {v, err};
  }
};

// Which eta bound the envelope carries: the exact ||H^1 Psi^8|| residual
// coefficient, or the stated 3/20 that the displayed closed form rounds it
// up to.  Both are rigorous; the exact one is tighter.
enum class EtaBound { exact_h1_psi8, stated_three_twentieths };

// v_N(alpha) enclosed between base - E and base + E where, with
// eta(alpha) = c * alpha^9 / (3/4 - alpha),
//   E(alpha) = 2 eta(alpha) sum_n ||Psi^n|| alpha^n + eta(alpha)^2.
// The cleared form is (base +- E) * (15 - 20 alpha)^2, a degree-18 polynomial
// with coefficients in SurdSum form.
struct EnvelopePolynomial {
  RationalPoly base;                  // numerator_series(8), degree 16
  std::array<Rational, 9> norms_sq;   // ||Psi^n||^2
  Rational eta_coeff_sq;              // c^2
  int sign;                           // +1: worst (upper), -1: best (lower)
  std::vector<SurdSum> cleared;       // 19 coefficients, degree exactly 18

  // E(alpha) * (15-20 alpha)^2 at 128-bit precision
  Float128 envelope_cleared128(const Float128& a) const {
    Float128 c = sqrt(to_float128(eta_coeff_sq));
    Float128 s = 0;
    for (int n = 8; n >= 0; --n) s = s * a + sqrt(to_float128(norms_sq[static_cast<size_t>(n)]));
    Float128 a9 = 1;
    for (int i = 0; i < 9; ++i) a9 *= a;
    return 40 * c * a9 * (15 - 20 * a) * s + 400 * to_float128(eta_coeff_sq) * a9 * a9;
  }

  Float128 cleared128(const Float128& a) const {
    Float128 y = 0;
    for (size_t k = cleared.size(); k-- > 0;) y = y * a + cleared[k].value128();
    return y;
  }
};

inline std::pair<EnvelopePolynomial, EnvelopePolynomial> build_envelopes(
    const PerturbationSeries& series, EtaBound which = EtaBound::exact_h1_psi8) {
  if (series.order != 8) throw WrongOrder{};
  EnvelopePolynomial env;
  env.base = numerator_series(series, 8);
  for (int n = 0; n <= 8; ++n)
    env.norms_sq[static_cast<size_t>(n)] = norm_sq_of_term(series, n);
  Rational h1sq = h1_norm_sq_of_term(series, 8);
  if (!(h1sq <= Rational(9, 400)))
    throw std::logic_error("build_envelopes: ||H1 Psi8|| exceeds 3/20");
  env.eta_coeff_sq = which == EtaBound::exact_h1_psi8 ? h1sq : Rational(9, 400);

  auto make = [&](int sign) {
    EnvelopePolynomial e = env;
    e.sign = sign;
    e.cleared.assign(19, SurdSum{});
    // base * (225 - 600 a + 400 a^2)
    for (int k = 0; k <= 16; ++k) {
      const Rational& b = e.base.coefficient(static_cast<size_t>(k));
      e.cleared[static_cast<size_t>(k)].rat += 225 * b;
      e.cleared[static_cast<size_t>(k) + 1].rat += -600 * b;
      e.cleared[static_cast<size_t>(k) + 2].rat += 400 * b;
    }
    // sign * [ 40 c a^9 (15 - 20 a) sum ||Psi^n|| a^n + 400 c^2 a^18 ]
    for (int n = 0; n <= 8; ++n) {
      Rational rad = e.eta_coeff_sq * e.norms_sq[static_cast<size_t>(n)];
      e.cleared[static_cast<size_t>(9 + n)].add_surd(sign * Rational(600), rad);
      if (10 + n <= 18) e.cleared[static_cast<size_t>(10 + n)].add_surd(sign * Rational(-800), rad);
    }
    e.cleared[18].rat += sign * 400 * e.eta_coeff_sq;
    return e;
  };
  return {make(+1), make(-1)};
}

// Certificate that a cleared envelope polynomial has a definite sign at an
// exact rational evaluation point, under the worst-case round-off model
// (n+1)[e^{(2n+1)eps} - 1] sup|p_j| for degree-n Horner evaluation on [-1,1],
// plus coefficient-conversion and evaluation-point terms.
struct SignCertificate {
  Rational alpha;
  int certified_sign = 0;            // +1 or -1
  double value = 0;                  // on the scale of the uncleared expression
  double bound = 0;
  double value_cleared = 0;          // degree-18 cleared polynomial value
  double bound_cleared = 0;
  double sup_coefficient = 0;        // sup_j |p_j| of the cleared float coefficients
  int degree = 18;
  double eps = kEps;
  double eps_eff = kEpsEff;
  double value_direct = 0;           // tracked direct evaluation of base + sign*E
  double bound_direct = 0;
};

namespace detail {

// base(alpha) + sign*E(alpha) evaluated directly in tracked doubles.
inline TrackedDouble direct_expression(const EnvelopePolynomial& p, const Rational& alpha) {
  TrackedDouble a = rational_tracked(alpha);
  TrackedDouble acc{0, 0};
  for (size_t k = p.base.coefficients().size(); k-- > 0;)
    acc = tracked_add(tracked_mul(acc, a), rational_tracked(p.base.coefficient(k)));
  TrackedDouble s{0, 0};
  for (int n = 8; n >= 0; --n) {
    TrackedDouble nrm = sqrt_nonneg_tracked(rational_tracked(p.norms_sq[static_cast<size_t>(n)]));
    s = tracked_add(tracked_mul(s, a), nrm);
  }
  TrackedDouble c = sqrt_nonneg_tracked(rational_tracked(p.eta_coeff_sq));
  TrackedDouble a9{1, 0};
  for (int i = 0; i < 9; ++i) a9 = tracked_mul(a9, a);
  // eta = 20 c a^9 / (15 - 20 alpha)
  TrackedDouble denom = rational_tracked(15 - 20 * alpha);
  TrackedDouble inv{1.0 / denom.v, kEps / std::abs(denom.v) +
                                       denom.e / (denom.v * denom.v) * 1.0000001};
  TrackedDouble eta = tracked_mul(tracked_mul(TrackedDouble{20, 0}, tracked_mul(c, a9)), inv);
  TrackedDouble e_val = tracked_add(tracked_mul(tracked_mul(TrackedDouble{2, 0}, eta), s),
                                    tracked_mul(eta, eta));
  if (p.sign < 0) e_val.v = -e_val.v;
  return tracked_add(acc, e_val);
}

}  // namespace detail

inline SignCertificate certify_sign(const EnvelopePolynomial& p, const Rational& alpha,
                                    int expected_sign) {
  if (alpha < -1 || alpha > 1)
    throw std::invalid_argument("certify_sign: alpha must lie in [-1, 1]");
  const int n = 18;
  if (static_cast<int>(p.cleared.size()) != n + 1)
    throw std::logic_error("certify_sign: cleared form must have degree 18");

  // float coefficients with certified conversion bounds
  std::array<double, 19> pf{};
  double sup = 0, conv_rel = 0;
  for (int j = 0; j <= n; ++j) {
    detail::TrackedDouble t = p.cleared[static_cast<size_t>(j)].tracked();
    pf[static_cast<size_t>(j)] = t.v;
    sup = std::max(sup, std::abs(t.v));
    if (t.v != 0) conv_rel = std::max(conv_rel, t.e / std::abs(t.v));
    if (t.e > kEpsEff * std::abs(t.v))
      throw std::logic_error("certify_sign: coefficient conversion exceeded eps_eff");
  }
  (void)conv_rel;
  sup *= 1 + 2 * kEpsEff;

  // blanket sanity bound on the expression-form constants (base
  // coefficients, norms, and the small integer factors); the cleared-form
  // coefficients run larger and get their measured supremum instead
  for (int k = 0; k <= 16; ++k)
    if (!(abs(p.base.coefficient(static_cast<size_t>(k))) <= 1000))
      throw std::logic_error("certify_sign: expression coefficient above 1000");

  double a = to_double(alpha);
  double y = pf[18];
  for (int j = 17; j >= 0; --j) y = y * a + pf[static_cast<size_t>(j)];

  // Horner round-off (Oliver), coefficient conversion, and |alpha - fl(alpha)|
  double oliver = (n + 1) * std::expm1((2 * n + 1) * kEps) * sup;
  double conversion = (n + 1) * kEpsEff * sup;
  double alpha_term = 0.25 * n * (n + 1) * kEps * sup;
  double bound_cleared = (oliver + conversion + alpha_term) * (1 + 1e-9);

  SignCertificate cert;
  cert.alpha = alpha;
  cert.value_cleared = y;
  cert.bound_cleared = bound_cleared;
  cert.sup_coefficient = sup;

  // report on the scale of the uncleared expression as well
  Rational denom_exact = (15 - 20 * alpha) * (15 - 20 * alpha);
  double denom = to_double(denom_exact);
  cert.value = y / denom;
  cert.bound = (bound_cleared + 3 * kEps * std::abs(y)) / denom * (1 + 8 * kEps);

  detail::TrackedDouble direct = detail::direct_expression(p, alpha);
  cert.value_direct = direct.v;
  cert.bound_direct = direct.e;

  if (!std::isfinite(y) || !std::isfinite(bound_cleared) || !std::isfinite(direct.v) ||
      !std::isfinite(direct.e))
    throw Inconclusive("evaluation produced a non-finite value or bound");
  if (std::abs(y) <= bound_cleared)
    throw Inconclusive("cleared-form value does not dominate the round-off bound");
  if (std::abs(direct.v) <= direct.e)
    throw Inconclusive("direct expression value does not dominate its error bound");
  int sign_cleared = y > 0 ? +1 : -1;
  int sign_direct = direct.v > 0 ? +1 : -1;
  if (sign_cleared != sign_direct)
    throw Inconclusive("cleared and direct evaluations disagree in sign");
  Float128 recheck = p.cleared128(to_float128(alpha));
  if ((recheck > 0 ? +1 : -1) != sign_cleared)
    throw Inconclusive("128-bit re-evaluation disagrees in sign");
  if (sign_cleared != expected_sign) throw SignMismatch("certified sign differs from expected");
  cert.certified_sign = sign_cleared;
  return cert;
}

struct MagicAngleBracket {
  Rational lo, hi;
  SignCertificate best_positive;   // at lo
  SignCertificate worst_negative;  // at hi
};

// Certified bracket for the first magic angle: worst-case envelope negative
// at 61/100, best-case positive at 57/100.
inline MagicAngleBracket bracket_magic_angle(const EnvelopePolynomial& worst,
                                             const EnvelopePolynomial& best) {
  MagicAngleBracket out{Rational(57, 100), Rational(61, 100),
                        certify_sign(best, Rational(57, 100), +1),
                        certify_sign(worst, Rational(61, 100), -1)};
  return out;
}

// Non-rigorous root location by scan + bisection, for report output only.
inline std::vector<double> approximate_roots(const std::vector<double>& coeffs, double lo,
                                             double hi) {
  auto eval = [&](double x) {
    double y = 0;
    for (size_t k = coeffs.size(); k-- > 0;) y = y * x + coeffs[k];
    return y;
  };
  std::vector<double> roots;
  const int steps = 4096;
  double prev = eval(lo);
  for (int i = 1; i <= steps; ++i) {
    double x = lo + (hi - lo) * i / steps;
    double cur = eval(x);
    if (prev == 0) roots.push_back(lo + (hi - lo) * (i - 1) / steps);
    else if ((prev < 0) != (cur < 0)) {
      double a = lo + (hi - lo) * (i - 1) / steps, b = x, fa = prev;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b), fm = eval(m);
        if ((fm < 0) == (fa < 0)) { a = m; fa = fm; }
        else b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  return roots;
}

inline std::vector<double> poly_to_doubles(const RationalPoly& p) {
  std::vector<double> c;
  c.reserve(p.coefficients().size());
  for (const auto& q : p.coefficients()) c.push_back(to_double(q));
  return c;
}

inline std::vector<double> cleared_to_doubles(const EnvelopePolynomial& p) {
  std::vector<double> c;
  c.reserve(p.cleared.size());
  for (const auto& s : p.cleared) c.push_back(s.tracked().v);
  return c;
}

}  // namespace magicangle
