#pragma once

#include "magicangle/rational.hpp"

#include <vector>

namespace magicangle {

// Univariate polynomial in alpha with exact rational coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static RationalPoly constant(const Rational& q) { return RationalPoly({q}); }

  const std::vector<Rational>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial

  Rational coefficient(size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational operator()(const Rational& alpha) const {
    Rational y = 0;
    for (size_t k = c_.size(); k-- > 0;) y = y * alpha + c_[k];
    return y;
  }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    return a + b.scaled(-1);
  }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(c));
  }

  RationalPoly scaled(const Rational& q) const {
    std::vector<Rational> c = c_;
    for (auto& x : c) x *= q;
    return RationalPoly(std::move(c));
  }

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

}  // namespace magicangle
