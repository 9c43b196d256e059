#include <catch2/catch_amalgamated.hpp>

#include "magicangle/projected.hpp"

using namespace magicangle;

namespace {
struct Fixture {
  PerturbationSeries series = compute_series(8);
  XiBasis xi = build_xi();
  ProjectedWorkspace w = make_projected_workspace(series, xi);
};
const Fixture& fixture() {
  static const Fixture f;
  return f;
}
}  // namespace

TEST_CASE("exact Hermitian structure") {
  const auto& f = fixture();
  ProjectedMatrix m = build_projected(f.w, Rational(1, 2));
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c <= r; ++c) CHECK(m.at(r, c) == m.at(c, r).conj());
  // chiral block structure: no matrix elements within a chirality sector
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) {
      const OrbitIndex& kr = f.xi.indices[size_t(r)];
      const OrbitIndex& kc = f.xi.indices[size_t(c)];
      int sr = kr.is_origin() ? +1 : kr.chi;
      int sc = kc.is_origin() ? +1 : kc.chi;
      if (sr == sc) CHECK(m.at(r, c).is_zero());
    }
}

TEST_CASE("alpha = 0 reduces to the unperturbed operator") {
  const auto& f = fixture();
  ProjectedMatrix m = build_projected(f.w, Rational(0));
  // row and column of the origin vanish
  for (int c = 0; c < m.n; ++c) {
    CHECK(m.at(0, c).is_zero());
    CHECK(m.at(c, 0).is_zero());
  }
  // each orbit pairs with itself through |site|
  for (int c = 1; c < m.n; ++c) {
    const OrbitIndex& k = f.xi.indices[size_t(c)];
    OrbitIndex flip{k.rep, static_cast<std::int8_t>(-k.chi)};
    CHECK(m.at(f.xi.position(flip), c) == RadicalComplex::sqrt_of(norm_sq(k.rep)));
  }
}

TEST_CASE("the truncated zero mode is annihilated exactly") {
  const auto& f = fixture();
  for (const Rational& alpha : {Rational(1, 2), Rational(7, 10)}) {
    ProjectedMatrix m = build_projected(f.w, alpha);
    CHECK(exact_kernel_residual(f.w, m).empty());
  }
}

TEST_CASE("entry bounds at the right endpoint") {
  const auto& f = fixture();
  ProjectedMatrix m = build_projected(f.w, Rational(7, 10));
  CHECK(m.max_abs_entry <= 7 * (1 + kEpsEff));
  CHECK(m.entry_rel_bound <= kEpsEff * (1 + 1e-9));
  CHECK(m.entry_abs_extra == 0);
  // float image matches an independent 128-bit evaluation of the exact entries
  double worst = 0;
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) {
      auto hi = rc_to_float128(m.at(r, c));
      double dr = std::abs(m.fat(r, c).real() - hi.real().convert_to<double>());
      double di = std::abs(m.fat(r, c).imag() - hi.imag().convert_to<double>());
      double mag = abs(hi.real()).convert_to<double>() + abs(hi.imag()).convert_to<double>();
      if (mag > 0) worst = std::max(worst, (dr + di) / mag);
    }
  CHECK(worst <= kEpsEff);
}

TEST_CASE("collapsed conjugation equals the literal projector sandwich") {
  // build M - QM - MQ + QMQ naively in exact arithmetic and compare with the
  // rank-one collapsed form used by build_projected
  const auto& f = fixture();
  const Rational alpha(1, 2);
  const int n = int(f.xi.size());
  auto idx = [&](int r, int c) { return size_t(r) * size_t(n) + size_t(c); };

  // M = P_Xi (H0 + alpha H1) P_Xi, column by column
  std::vector<RadicalComplex> M(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    ChiralVector col{{f.xi.indices[size_t(c)], RadicalComplex::rational(1)}};
    ChiralVector img = apply_h0(col) + scaled(apply_h1(col), alpha);
    for (const auto& [k, coeff] : img) {
      if (!f.xi.contains(k)) continue;
      M[idx(f.xi.position(k), c)] = coeff;
    }
  }
  // v and Q = v v^dag / <v,v>
  ChiralVector vvec = evaluate_series(f.series, alpha);
  std::vector<RadicalComplex> v(static_cast<size_t>(n));
  for (const auto& [k, coeff] : vvec) v[size_t(f.xi.position(k))] = coeff;
  Rational nv = rational_of(inner(vvec, vvec), "nv");
  std::vector<RadicalComplex> Q(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) Q[idx(r, c)] = (v[size_t(r)] * v[size_t(c)].conj()).scaled(Rational(1) / nv);
  auto matmul = [&](const std::vector<RadicalComplex>& A, const std::vector<RadicalComplex>& B) {
    std::vector<RadicalComplex> out(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) {
        if (A[idx(r, k)].is_zero()) continue;
        for (int c = 0; c < n; ++c) {
          if (B[idx(k, c)].is_zero()) continue;
          out[idx(r, c)] = out[idx(r, c)] + A[idx(r, k)] * B[idx(k, c)];
        }
      }
    return out;
  };
  std::vector<RadicalComplex> QM = matmul(Q, M), MQ = matmul(M, Q), QMQ = matmul(QM, Q);

  ProjectedMatrix m = build_projected(f.w, alpha);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      RadicalComplex literal = M[idx(r, c)] - QM[idx(r, c)] - MQ[idx(r, c)] + QMQ[idx(r, c)];
      CHECK(literal == m.at(r, c));
    }
}

TEST_CASE("float image is exactly Hermitian as stored") {
  // conjugate exact entries convert to exact mirror images, so the double
  // matrix fed to the eigensolver is Hermitian without re-symmetrization
  const auto& f = fixture();
  for (const Rational& alpha : {Rational(7, 10), Rational(123456, 2721820)}) {
    ProjectedMatrix m = build_projected(f.w, alpha);
    for (int r = 0; r < m.n; ++r)
      for (int c = 0; c <= r; ++c) {
        CHECK(m.fat(r, c).real() == m.fat(c, r).real());
        CHECK(m.fat(r, c).imag() == -m.fat(c, r).imag());
      }
  }
}

TEST_CASE("support escape is detected") {
  const auto& f = fixture();
  XiBasis bad = build_xi(XiTamper::drop_4b2);
  CHECK_THROWS_AS(make_projected_workspace(f.series, bad), SupportEscape);
}
