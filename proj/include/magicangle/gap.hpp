#pragma once

#include "magicangle/enclosure.hpp"
#include "magicangle/projected.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

namespace magicangle {

struct GridTooCoarse : std::runtime_error {
  explicit GridTooCoarse(const std::string& m) : std::runtime_error("GridTooCoarse: " + m) {}
};
struct PointFailure : std::runtime_error {
  Rational alpha;
  explicit PointFailure(const Rational& a, const std::string& m)
      : std::runtime_error("PointFailure at alpha = " + a.str() + ": " + m), alpha(a) {}
};
struct IngredientViolation : std::logic_error {
  explicit IngredientViolation(const std::string& m)
      : std::logic_error("IngredientViolation: " + m) {}
};

// Certified constants of the projected family (Prop-level facts re-verified
// at runtime where the data allows).
inline constexpr double kNorm2Bound = 10.0;  // ||H^alpha_Xi||_2 over [0, 7/10]
inline constexpr double kMaxBound = 7.0;     // ||H^alpha_Xi||_max over [0, 7/10]

// Recomputes the Lipschitz bound on ||d/dalpha H^alpha_Xi|| from its
// ingredients: max_n ||Psi^n|| <= sqrt3, 3 * sum_{m,n<=8} (m+n) = 1944 for
// the projector derivative, ||P_Xi H^alpha P_Xi|| <= 10 and ||H^1|| <= 3.
inline long long lipschitz_constant(const PerturbationSeries& series, const XiBasis& xi) {
  for (int n = 0; n <= 8; ++n)
    if (!(norm_sq_of_term(series, n) <= 3))
      throw IngredientViolation("||Psi^" + std::to_string(n) + "||^2 exceeds 3");
  long long pair_sum = 0;
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) pair_sum += m + n;
  if (pair_sum != 648) throw IngredientViolation("projector index sum is not 648");
  long long dq_bound = 3 * pair_sum;  // 1944
  // ||P_Xi H^0 P_Xi|| = max |site| over Xi = 7, plus alpha ||H^1|| <= 2.1
  std::int64_t max_norm_sq = 0;
  for (const auto& rep : xi.orbits) max_norm_sq = std::max(max_norm_sq, norm_sq(rep));
  if (max_norm_sq != 49) throw IngredientViolation("max |site|^2 over Xi is not 49");
  long long h_bound = 10;
  long long h1_bound = 3;
  return 2 * h_bound * dq_bound + h1_bound;  // 38883
}

struct GapPoint {
  long long index = 0;
  double alpha = 0;
  double first_positive = 0;        // computed lambda just above the kernel
  double certified_lower_bound = 0; // first_positive - enclosure radius
  double radius = 0;
  double symmetry_defect = 0;
  double ortho_defect = 0;
  double residual_inf = 0;
};

struct GapCertificate {
  long long grid_points = 0;        // N; the grid is {7n/(10N) : 0 <= n <= N}
  Rational spacing;                 // h = 7/(10N)
  bool survey = false;
  bool verdict = false;
  long long lipschitz = 38883;
  double grid_min_first_positive = 0;
  double grid_min_certified_bound = 0;
  double max_radius = 0;
  double max_symmetry_defect = 0;
  double max_ortho_defect = 0;
  double max_residual_inf = 0;
  std::string failure;              // first failing stage when not certified
};

// Per-point hook for curve output; called in grid order after the sweep.
using CurveSink = std::function<void(const GapPoint&, const std::vector<double>&)>;

// Sweeps the grid {7n/(10N)}, certifying at every point that the smallest
// positive eigenvalue of the projected matrix is at least 8/10, then closes
// the gaps between grid points with the Lipschitz bound:
//   38883 * h / 2 < 8/10 - 3/4  requires  h < 1/388830;
// the stricter published threshold h < 1/388831 is enforced.  Points are
// processed in fixed blocks (warm-started within a block) so results are
// bit-identical for every thread count.
inline GapCertificate sweep_and_certify(const PerturbationSeries& series, const XiBasis& xi,
                                        long long grid_n, int threads, bool survey,
                                        const CurveSink& sink = {}) {
  if (grid_n < 1) throw std::invalid_argument("sweep_and_certify: need a positive grid size");
  if (sink && grid_n > 100000)
    throw std::invalid_argument("sweep_and_certify: curve output is for survey-sized grids");
  GapCertificate cert;
  cert.grid_points = grid_n;
  cert.spacing = Rational(7, 10 * grid_n);
  cert.survey = survey;
  cert.lipschitz = lipschitz_constant(series, xi);
  if (!survey && !(cert.spacing < Rational(1, 388831)))
    throw GridTooCoarse("spacing " + cert.spacing.str() + " is not below 1/388831");

  const ProjectedWorkspace w = make_projected_workspace(series, xi);
  const long long npts = grid_n + 1;
  const long long block = 512;
  const long long nblocks = (npts + block - 1) / block;

  std::vector<GapPoint> points(static_cast<size_t>(npts));
  std::vector<std::vector<double>> curves;
  if (sink) curves.resize(static_cast<size_t>(npts));
  std::atomic<long long> next_block{0};
  std::atomic<bool> failed{false};
  std::string failure_msg;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      long long b = next_block.fetch_add(1);
      if (b >= nblocks || failed.load()) return;
      std::vector<std::complex<double>> warm;
      for (long long i = b * block; i < std::min(npts, (b + 1) * block); ++i) {
        Rational alpha(7 * i, 10 * grid_n);
        try {
          ProjectedMatrix m = build_projected(w, alpha);
          if (m.max_abs_entry > kMaxBound * (1 + kEpsEff))
            throw PointFailure(alpha, "entry magnitude exceeds the certified max bound");
          EigResult eig =
              hermitian_jacobi(m.n, m.flt, warm.empty() ? nullptr : &warm);
          warm = eig.vectors;
          EnclosureInput in{m.n, m.flt.data(), kNorm2Bound, kMaxBound, m.entry_rel_bound,
                            m.entry_abs_extra};
          EigenEnclosure enc = enclose(in, eig);
          if (enc.max_abs_lambda > kNorm2Bound)
            throw PointFailure(alpha, "computed spectral radius exceeds the certified bound");
          GapPoint& p = points[static_cast<size_t>(i)];
          p.index = i;
          p.alpha = to_double(alpha);
          p.first_positive = enc.lambda[static_cast<size_t>((m.n - 1) / 2 + 1)];
          p.certified_lower_bound = enc.min_positive_lower_bound;
          p.radius = enc.radius;
          p.symmetry_defect = enc.symmetry_defect;
          p.ortho_defect = enc.ortho_defect;
          p.residual_inf = enc.max_residual_inf;
          if (sink) curves[static_cast<size_t>(i)] = enc.lambda;
          if (!(p.certified_lower_bound >= 0.8))
            throw PointFailure(alpha, "certified lower bound " +
                                          std::to_string(p.certified_lower_bound) +
                                          " is below 8/10");
        } catch (const std::exception& e) {
          bool expected = false;
          if (failed.compare_exchange_strong(expected, true)) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failure_msg = e.what();
          }
          return;
        }
      }
    }
  };

  int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (failed.load()) {
    cert.verdict = false;
    cert.failure = failure_msg;
    throw PointFailure(Rational(-1), failure_msg);
  }

  cert.grid_min_first_positive = points[0].first_positive;
  cert.grid_min_certified_bound = points[0].certified_lower_bound;
  for (const auto& p : points) {
    cert.grid_min_first_positive = std::min(cert.grid_min_first_positive, p.first_positive);
    cert.grid_min_certified_bound = std::min(cert.grid_min_certified_bound, p.certified_lower_bound);
    cert.max_radius = std::max(cert.max_radius, p.radius);
    cert.max_symmetry_defect = std::max(cert.max_symmetry_defect, p.symmetry_defect);
    cert.max_ortho_defect = std::max(cert.max_ortho_defect, p.ortho_defect);
    cert.max_residual_inf = std::max(cert.max_residual_inf, p.residual_inf);
  }
  if (sink)
    for (const auto& p : points) sink(p, curves[static_cast<size_t>(p.index)]);

  if (survey) {
    cert.verdict = false;
    cert.failure = "not certified (survey mode)";
  } else {
    // 38883 h / 2 < 8/10 - 3/4, exactly
    bool continuation = Rational(cert.lipschitz) * cert.spacing / 2 < Rational(1, 20);
    cert.verdict = continuation;
    if (!continuation) cert.failure = "Lipschitz continuation inequality failed";
  }
  return cert;
}

}  // namespace magicangle
