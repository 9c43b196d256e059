#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace magicangle {

struct NoConvergence : std::runtime_error {
  NoConvergence() : std::runtime_error("jacobi: sweep cap reached before convergence") {}
};

struct EigResult {
  std::vector<double> lambda;                 // ascending
  std::vector<std::complex<double>> vectors;  // column-major, column j pairs with lambda[j]
  int sweeps = 0;
};

// Cyclic complex Jacobi for Hermitian matrices with a fixed row-major sweep
// schedule.  Deterministic; accuracy only affects enclosure tightness, never
// soundness, since certification re-derives everything from residuals.
// An optional warm start pre-rotates by a unitary V0 (column-major).
inline EigResult hermitian_jacobi(int n, std::vector<std::complex<double>> a,
                                  const std::vector<std::complex<double>>* v0 = nullptr,
                                  int max_sweeps = 40, double tol = 1e-28) {
  using C = std::complex<double>;
  const size_t N = static_cast<size_t>(n);
  auto at = [&](std::vector<C>& m, int r, int c) -> C& {
    return m[static_cast<size_t>(r) * N + static_cast<size_t>(c)];
  };

  std::vector<C> v(N * N, C{0, 0});
  for (int i = 0; i < n; ++i) at(v, i, i) = 1;
  if (v0) {
    // a <- V0^dag a V0, v <- V0
    std::vector<C> tmp(N * N, C{0, 0});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        C aik = at(a, i, k);
        if (aik == C{0, 0}) continue;
        for (int j = 0; j < n; ++j) tmp[static_cast<size_t>(i) * N + static_cast<size_t>(j)] += aik * (*v0)[static_cast<size_t>(k) * N + static_cast<size_t>(j)];
      }
    std::vector<C> tmp2(N * N, C{0, 0});
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        C vki = std::conj((*v0)[static_cast<size_t>(k) * N + static_cast<size_t>(i)]);
        if (vki == C{0, 0}) continue;
        for (int j = 0; j < n; ++j) tmp2[static_cast<size_t>(i) * N + static_cast<size_t>(j)] += vki * tmp[static_cast<size_t>(k) * N + static_cast<size_t>(j)];
      }
    a = std::move(tmp2);
    v = *v0;
    // re-symmetrize the warm-started matrix against transform round-off
    for (int i = 0; i < n; ++i) {
      at(a, i, i) = C{at(a, i, i).real(), 0};
      for (int j = i + 1; j < n; ++j) {
        C m = 0.5 * (at(a, i, j) + std::conj(at(a, j, i)));
        at(a, i, j) = m;
        at(a, j, i) = std::conj(m);
      }
    }
  }

  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale += std::norm(at(a, i, j));
  scale = std::sqrt(scale);
  if (scale == 0) {
    EigResult r;
    r.lambda.assign(N, 0.0);
    r.vectors = std::move(v);
    return r;
  }

  auto offdiag = [&]() {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(at(a, p, q));
    return off;
  };
  int sweep = 0;
  bool converged = false;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag() <= tol * scale * scale) { converged = true; break; }

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        C apq = at(a, p, q);
        double mag = std::abs(apq);
        if (mag <= 1e-300 || mag * mag <= 0.01 * tol * scale * scale / (double(n) * double(n)))
          continue;
        double app = at(a, p, p).real(), aqq = at(a, q, q).real();
        // diagonalize the 2x2 block [app, apq; conj(apq), aqq]
        double tau = (aqq - app) / (2 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        double c = 1 / std::sqrt(1 + t * t);
        double s = t * c;
        C phase = apq / mag;
        C sp = s * phase;
        // columns: [p q] <- [p q] * [c, sp; -conj(sp), c]
        for (int i = 0; i < n; ++i) {
          C aip = at(a, i, p), aiq = at(a, i, q);
          at(a, i, p) = c * aip - std::conj(sp) * aiq;
          at(a, i, q) = sp * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          C api = at(a, p, i), aqi = at(a, q, i);
          at(a, p, i) = c * api - sp * aqi;
          at(a, q, i) = std::conj(sp) * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          C vip = at(v, i, p), viq = at(v, i, q);
          at(v, i, p) = c * vip - std::conj(sp) * viq;
          at(v, i, q) = sp * vip + c * viq;
        }
        at(a, p, q) = C{0, 0};
        at(a, q, p) = C{0, 0};
      }
    }
  }
  if (!converged && offdiag() > tol * scale * scale) throw NoConvergence{};

  EigResult r;
  r.sweeps = sweep;
  std::vector<int> order(N);
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::vector<double> diag(N);
  for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = at(a, i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[static_cast<size_t>(x)] < diag[static_cast<size_t>(y)]; });
  r.lambda.resize(N);
  r.vectors.assign(N * N, C{0, 0});
  for (int j = 0; j < n; ++j) {
    int src = order[static_cast<size_t>(j)];
    r.lambda[static_cast<size_t>(j)] = diag[static_cast<size_t>(src)];
    for (int i = 0; i < n; ++i)
      r.vectors[static_cast<size_t>(i) * N + static_cast<size_t>(j)] = at(v, i, src);
  }
  return r;
}

}  // namespace magicangle
