#pragma once

#include "magicangle/xi.hpp"

#include <complex>

namespace magicangle {

// H^alpha_Xi = Q^{alpha,perp} P_Xi H^alpha P_Xi Q^{alpha,perp} at an exact
// rational alpha.  With M = P_Xi (H^0 + alpha H^1) P_Xi, v the truncated zero
// mode and u = P_Xi H^1 Psi^8, the exact identity M v = alpha^9 u collapses
// the conjugation to
//   A = M - (alpha^9 / <v,v>) (v u^dag + u v^dag),
// so A v = 0 holds exactly and A inherits the chiral block structure.
struct ProjectedMatrix {
  Rational alpha;
  int n = 0;
  std::vector<RadicalComplex> exact;        // row-major, Hermitian
  std::vector<std::complex<double>> flt;    // nearest-double image
  double entry_rel_bound = 0;               // certified entrywise relative bound
  double entry_abs_extra = 0;               // absolute slack from exact-zero fallbacks
  double max_abs_entry = 0;

  const RadicalComplex& at(int r, int c) const {
    return exact[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)];
  }
  std::complex<double> fat(int r, int c) const {
    return flt[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)];
  }
};

// alpha-independent ingredients of the projected matrix, built once per run.
struct ProjectedWorkspace {
  XiBasis xi;
  PerturbationSeries series;                     // order 8
  std::vector<std::pair<int, RadicalComplex>> h0_entries;   // (row, value) per column
  std::vector<std::vector<std::pair<int, RadicalComplex>>> h1_columns;
  std::vector<std::array<RadicalComplex, 9>> psi_columns;   // Psi^n coefficient per index
  std::vector<RadicalComplex> u;                 // P_Xi H^1 Psi^8
  RationalPoly denom;                            // <psi^{8,alpha}, psi^{8,alpha}>
};

inline ProjectedWorkspace make_projected_workspace(const PerturbationSeries& series,
                                                   const XiBasis& xi) {
  if (series.order < 8) throw std::invalid_argument("projected workspace needs series order 8");
  ProjectedWorkspace w{xi, series, {}, {}, {}, {}, denominator_series(series, 8)};
  const int n = static_cast<int>(xi.size());
  w.h1_columns.resize(static_cast<size_t>(n));
  w.psi_columns.assign(static_cast<size_t>(n), {});
  std::map<OrbitIndex, int> pos;
  for (int i = 0; i < n; ++i) pos[xi.indices[static_cast<size_t>(i)]] = i;

  for (int col = 0; col < n; ++col) {
    const OrbitIndex& k = xi.indices[static_cast<size_t>(col)];
    if (!k.is_origin()) {
      OrbitIndex flip{k.rep, static_cast<std::int8_t>(-k.chi)};
      w.h0_entries.emplace_back(pos.at(flip), RadicalComplex::sqrt_of(norm_sq(k.rep)));
    } else {
      w.h0_entries.emplace_back(col, RadicalComplex{});  // placeholder, zero column
    }
    ChiralVector img = apply_h1(ChiralVector{{k, RadicalComplex::rational(1)}});
    for (const auto& [tk, c] : img) {
      auto it = pos.find(tk);
      if (it != pos.end()) w.h1_columns[static_cast<size_t>(col)].emplace_back(it->second, c);
    }
  }
  for (int nn = 0; nn <= 8; ++nn)
    for (const auto& [k, c] : series.term(nn)) {
      auto it = pos.find(k);
      if (it == pos.end()) throw SupportEscape("Psi^" + std::to_string(nn) + " leaks outside Xi");
      w.psi_columns[static_cast<size_t>(it->second)][static_cast<size_t>(nn)] = c;
    }
  w.u.assign(static_cast<size_t>(n), {});
  for (const auto& [k, c] : apply_h1(series.term(8))) {
    auto it = pos.find(k);
    if (it != pos.end()) w.u[static_cast<size_t>(it->second)] = c;
  }
  return w;
}

inline ProjectedMatrix build_projected(const ProjectedWorkspace& w, const Rational& alpha) {
  const int n = static_cast<int>(w.xi.size());
  ProjectedMatrix m;
  m.alpha = alpha;
  m.n = n;
  m.exact.assign(static_cast<size_t>(n) * static_cast<size_t>(n), RadicalComplex{});
  auto slot = [&](int r, int c) -> RadicalComplex& {
    return m.exact[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)];
  };

  // M = P_Xi (H^0 + alpha H^1) P_Xi
  for (int col = 0; col < n; ++col) {
    const auto& [h0row, h0val] = w.h0_entries[static_cast<size_t>(col)];
    if (!h0val.is_zero()) slot(h0row, col) = slot(h0row, col) + h0val;
    for (const auto& [row, val] : w.h1_columns[static_cast<size_t>(col)])
      slot(row, col) = slot(row, col) + val.scaled(alpha);
  }

  // rank-one conjugation terms
  std::vector<RadicalComplex> v(static_cast<size_t>(n));
  std::vector<Rational> apow(9);
  apow[0] = 1;
  for (int k = 1; k <= 8; ++k) apow[static_cast<size_t>(k)] = apow[static_cast<size_t>(k) - 1] * alpha;
  for (int i = 0; i < n; ++i) {
    RadicalComplex acc;
    for (int k = 0; k <= 8; ++k) {
      const RadicalComplex& c = w.psi_columns[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (!c.is_zero()) acc = acc + c.scaled(apow[static_cast<size_t>(k)]);
    }
    v[static_cast<size_t>(i)] = acc;
  }
  Rational scale = apow[8] * alpha / w.denom(alpha);  // alpha^9 / <v,v>
  for (int i = 0; i < n; ++i) {
    if (v[static_cast<size_t>(i)].is_zero()) continue;
    for (int o = 0; o < n; ++o) {
      if (w.u[static_cast<size_t>(o)].is_zero()) continue;
      RadicalComplex t = (v[static_cast<size_t>(i)] * w.u[static_cast<size_t>(o)].conj()).scaled(scale);
      // -(v u^dag): row i, col o; -(u v^dag): row o, col i
      slot(i, o) = slot(i, o) - t;
      slot(o, i) = slot(o, i) - t.conj();
    }
  }

  // nearest-double image with certified entrywise bound
  m.flt.assign(m.exact.size(), {});
  double rel = 0, abs_extra = 0, maxabs = 0;
  for (size_t idx = 0; idx < m.exact.size(); ++idx) {
    if (m.exact[idx].is_zero()) continue;
    FloatImage f = rc_to_float(m.exact[idx]);
    m.flt[idx] = f.value;
    maxabs = std::max(maxabs, std::abs(f.value));
    if (f.abs_fallback) abs_extra = std::max(abs_extra, f.abs_bound);
    else rel = std::max(rel, f.rel_bound);
  }
  m.entry_rel_bound = std::max(rel, kEpsEff);
  m.entry_abs_extra = abs_extra;
  m.max_abs_entry = maxabs;
  if (m.entry_rel_bound > kEpsEff * (1 + 1e-9))
    throw std::logic_error("build_projected: entry conversion exceeded eps_eff");
  return m;
}

inline ProjectedMatrix build_projected(const Rational& alpha, const PerturbationSeries& series,
                                       const XiBasis& xi) {
  return build_projected(make_projected_workspace(series, xi), alpha);
}

// Exact matrix-vector product of the projected matrix with the truncated
// zero mode; vanishes identically by construction.
inline ChiralVector exact_kernel_residual(const ProjectedWorkspace& w, const ProjectedMatrix& m) {
  const int n = m.n;
  std::vector<RadicalComplex> v(static_cast<size_t>(n));
  Rational p = 1;
  std::vector<Rational> apow(9);
  for (int k = 0; k <= 8; ++k) { apow[static_cast<size_t>(k)] = p; p *= m.alpha; }
  for (int i = 0; i < n; ++i) {
    RadicalComplex acc;
    for (int k = 0; k <= 8; ++k) {
      const RadicalComplex& c = w.psi_columns[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (!c.is_zero()) acc = acc + c.scaled(apow[static_cast<size_t>(k)]);
    }
    v[static_cast<size_t>(i)] = acc;
  }
  ChiralVector out;
  for (int r = 0; r < n; ++r) {
    RadicalComplex acc;
    for (int c = 0; c < n; ++c) {
      const RadicalComplex& a = m.at(r, c);
      if (!a.is_zero() && !v[static_cast<size_t>(c)].is_zero())
        acc = acc + a * v[static_cast<size_t>(c)];
    }
    if (!acc.is_zero()) out.emplace(w.xi.indices[static_cast<size_t>(r)], acc);
  }
  return out;
}

}  // namespace magicangle
