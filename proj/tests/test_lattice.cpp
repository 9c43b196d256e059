#include <catch2/catch_amalgamated.hpp>

#include "magicangle/lattice.hpp"

#include <cmath>
#include <complex>

using namespace magicangle;

namespace {
// Float geometry oracle: literal vectors b1 = (sqrt3/2,3/2), b2 = (-sqrt3/2,3/2),
// q1 = (0,-1).
std::complex<double> site_vector(const LatticeSite& s) {
  const double r3 = std::sqrt(3.0);
  std::complex<double> b1{r3 / 2, 1.5}, b2{-r3 / 2, 1.5}, q1{0, -1};
  std::complex<double> v = double(s.m) * b1 + double(s.n) * b2;
  if (s.sub == Sublattice::B) v += q1;
  return v;
}
}  // namespace

TEST_CASE("norm_sq closed form against float geometry") {
  CHECK(norm_sq(site_b(0, 0)) == 1);   // |q1|^2
  CHECK(norm_sq(site_a(0, 0)) == 0);
  CHECK(norm_sq(site_a(1, 0)) == 3);
  CHECK(norm_sq(site_b(-2, 0)) == 19);
  for (int m = -10; m <= 10; ++m)
    for (int n = -10; n <= 10; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite s{sub, m, n};
        double want = std::norm(site_vector(s));
        CHECK(std::abs(double(norm_sq(s)) - want) <= 1e-12 * std::max(want, 1.0));
      }
}

TEST_CASE("rotation in integer coordinates matches rotation by -2pi/3") {
  CHECK(rotate(site_b(0, 0)) == site_b(0, 1));       // q1 -> q1 + b2 = q3
  CHECK(rotate(site_a(0, 0)) == site_a(0, 0));
  // the 3-cycle realizing chi^{-b1} = chi^{b2} = chi^{b1-b2}
  CHECK(rotate(site_a(-1, 0)) == site_a(0, 1));
  CHECK(rotate(site_a(0, 1)) == site_a(1, -1));
  CHECK(rotate(site_a(1, -1)) == site_a(-1, 0));
  const double c = std::cos(-2 * M_PI / 3), s = std::sin(-2 * M_PI / 3);
  for (int m = -10; m <= 10; ++m)
    for (int n = -10; n <= 10; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite site{sub, m, n};
        auto v = site_vector(site);
        std::complex<double> want{c * v.real() - s * v.imag(), s * v.real() + c * v.imag()};
        CHECK(std::abs(site_vector(rotate(site)) - want) < 1e-9);
        CHECK(norm_sq(rotate(site)) == norm_sq(site));
        CHECK(rotate(rotate(rotate(site))) == site);
      }
}

TEST_CASE("z_hat exact unit phases") {
  CHECK(z_hat(site_b(0, 0)) == RadicalComplex::i_times(-1));  // q1 = (0,-1)
  // q2 = (sqrt3+i)/2
  CHECK(z_hat(site_b(1, 0)) ==
        RadicalComplex::sqrt_of(3).scaled(Rational(1, 2)) + RadicalComplex::i_times(Rational(1, 2)));
  // b1 normalized = (1 + i sqrt3)/2
  CHECK(z_hat(site_a(1, 0)) ==
        RadicalComplex::rational(Rational(1, 2)) +
            RadicalComplex::i_times(Rational(1, 2)) * RadicalComplex::sqrt_of(3));
  CHECK_THROWS_AS(z_hat(site_a(0, 0)), OriginHasNoPhase);

  const RadicalComplex e_mi_phi =
      RadicalComplex::rational(Rational(-1, 2)) -
      RadicalComplex::i_times(Rational(1, 2)) * RadicalComplex::sqrt_of(3);
  for (int m = -6; m <= 6; ++m)
    for (int n = -6; n <= 6; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite s{sub, m, n};
        if (is_origin(s)) continue;
        // |z_hat|^2 = 1 exactly
        CHECK(z_hat(s).abs_sq() == RadicalComplex::rational(1));
        // z_hat(rotate(s)) = e^{-i phi} z_hat(s) exactly
        CHECK(z_hat(rotate(s)) == e_mi_phi * z_hat(s));
        // float check
        auto v = site_vector(s);
        CHECK(std::abs(rc_to_complex(z_hat(s)) - v / std::abs(v)) < 1e-12);
      }
}

TEST_CASE("orbit canonicalization") {
  CHECK(canonicalize(site_b(1, 0), -1) == (OrbitIndex{site_b(0, 0), -1}));
  CHECK(canonicalize(site_a(0, 0), +1).is_origin());
  CHECK(canonicalize(site_a(0, 0), -1).is_origin());
  CHECK(canonicalize(site_a(1, -1), +1).rep == site_a(-1, 0));
  // constructing from any orbit member yields the identical index
  for (int m = -6; m <= 6; ++m)
    for (int n = -6; n <= 6; ++n)
      for (auto sub : {Sublattice::A, Sublattice::B}) {
        LatticeSite s{sub, m, n};
        auto k = canonicalize(s, +1);
        CHECK(canonicalize(rotate(s), +1) == k);
        CHECK(canonicalize(rotate(rotate(s)), +1) == k);
        // orbit sizes: 1 for origin, 3 otherwise
        if (is_origin(s)) {
          CHECK(rotate(s) == s);
        } else {
          CHECK(rotate(s) != s);
          CHECK(rotate(rotate(s)) != s);
        }
      }
}

TEST_CASE("site rendering") {
  CHECK(to_string(site_a(2, -1)) == "A(2,-1)");
  CHECK(to_string(site_b(0, 3)) == "B(0,3)");
}
