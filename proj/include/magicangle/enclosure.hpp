#pragma once

#include "magicangle/jacobi.hpp"
#include "magicangle/rational.hpp"

#include <complex>
#include <vector>

namespace magicangle {

struct MuTooLarge : std::runtime_error {
  explicit MuTooLarge(double mmu)
      : std::runtime_error("enclose: m*mu = " + std::to_string(mmu) + " is not below 1/2") {}
};

// Rigorous per-eigenvalue enclosures from computed eigenpairs.  The
// orthonormality defect mu promotes the computed vectors to an exactly
// orthonormal set; the residual bound then encloses every eigenvalue of the
// exact matrix within radius 2 m sup||r_j||:
//   ||r_hat_j|| <= 2^{-1/2} n (||A||_2 + sup|l_j|) mu + n^{1/2} sup||r_comp||_inf
//                  + 1.01 n^{5/2} eps (||A~||_max + sup|l_j|) sup||v||_inf
//                  + n eps ||A||_max sup||v||_inf.
// All epsilon terms use the inflated eps_eff of the conversion model.
struct EigenEnclosure {
  std::vector<double> lambda;     // ascending computed eigenvalues
  double radius = 0;              // uniform enclosure radius
  double mu = 0;                  // orthonormality defect bound
  double residual_bound = 0;      // sup_j ||r_hat_j||_2 bound
  double max_residual_inf = 0;    // measured sup_j ||r_comp_j||_inf
  double max_vector_inf = 0;      // measured sup_j ||v_j||_inf
  double max_abs_lambda = 0;
  double ortho_defect = 0;        // measured Gram deviation
  double min_positive_lower_bound = 0;  // certified: lambda[m/2+1] - radius
  double symmetry_defect = 0;     // max |lambda_j + lambda_{n-1-j}|
};

struct EnclosureInput {
  int n = 0;
  const std::complex<double>* a = nullptr;  // row-major Hermitian
  double norm2_bound = 0;                   // certified ||A||_2
  double max_bound = 0;                     // certified ||A||_max
  double entry_eps = 0;                     // entrywise relative bound of a vs exact
  double entry_abs_extra = 0;               // absolute slack from exact-zero fallbacks
};

inline EigenEnclosure enclose(const EnclosureInput& in, const EigResult& eig) {
  const int n = in.n;
  const size_t N = static_cast<size_t>(n);
  const double eps = std::max(in.entry_eps, kEpsEff);
  EigenEnclosure out;
  out.lambda = eig.lambda;

  // measured quantities
  for (double l : eig.lambda) out.max_abs_lambda = std::max(out.max_abs_lambda, std::abs(l));
  for (const auto& z : eig.vectors) out.max_vector_inf = std::max(out.max_vector_inf, std::abs(z));

  // Gram deviations
  double diag_dev = 0, off_dev = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::complex<double> g{0, 0};
      for (int k = 0; k < n; ++k)
        g += std::conj(eig.vectors[static_cast<size_t>(k) * N + static_cast<size_t>(i)]) *
             eig.vectors[static_cast<size_t>(k) * N + static_cast<size_t>(j)];
      if (i == j) diag_dev = std::max(diag_dev, std::abs(g.real() - 1) + std::abs(g.imag()));
      else off_dev = std::max(off_dev, std::abs(g));
    }
  }
  out.ortho_defect = std::max(diag_dev, off_dev);
  out.mu = 1.01 * double(n) * double(n) * eps * out.max_vector_inf * out.max_vector_inf +
           diag_dev + off_dev;
  if (double(n) * out.mu >= 0.5) throw MuTooLarge(double(n) * out.mu);

  // computed residuals (A - lambda I) v
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      std::complex<double> r{0, 0};
      for (int k = 0; k < n; ++k)
        r += in.a[static_cast<size_t>(i) * N + static_cast<size_t>(k)] *
             eig.vectors[static_cast<size_t>(k) * N + static_cast<size_t>(j)];
      r -= eig.lambda[static_cast<size_t>(j)] *
           eig.vectors[static_cast<size_t>(i) * N + static_cast<size_t>(j)];
      out.max_residual_inf = std::max(out.max_residual_inf, std::abs(r));
    }
  }

  double nn = double(n);
  out.residual_bound =
      (1 / std::sqrt(2.0)) * nn * (in.norm2_bound + out.max_abs_lambda) * out.mu +
      std::sqrt(nn) * out.max_residual_inf +
      1.01 * std::pow(nn, 2.5) * eps * (in.max_bound * (1 + eps) + out.max_abs_lambda) *
          out.max_vector_inf +
      nn * eps * in.max_bound * out.max_vector_inf +
      std::pow(nn, 1.5) * in.entry_abs_extra * out.max_vector_inf;
  out.radius = 2 * nn * out.residual_bound * (1 + 1e-9);

  for (int j = 0; j < n; ++j)
    out.symmetry_defect =
        std::max(out.symmetry_defect,
                 std::abs(eig.lambda[static_cast<size_t>(j)] +
                          eig.lambda[static_cast<size_t>(n - 1 - j)]));

  // Certified lower bound on the smallest positive eigenvalue, for matrices
  // whose exact spectrum is symmetric about an exact zero eigenvalue (the
  // chiral block structure plus the exact kernel vector guarantee both
  // here).  The one-to-one enclosure matching allows at most (n+1)/2 exact
  // eigenvalues below lambda[(n-1)/2 + 1] - radius, while symmetry puts at
  // least (n+1)/2 exact eigenvalues at or below zero, so the first positive
  // one cannot sit below that line.
  if (n >= 2) {
    double next = eig.lambda[static_cast<size_t>((n - 1) / 2 + 1)];
    out.min_positive_lower_bound = next - out.radius;
  }
  return out;
}

}  // namespace magicangle
