#include <catch2/catch_amalgamated.hpp>

#include "magicangle/gap.hpp"

using namespace magicangle;

namespace {
struct Fixture {
  PerturbationSeries series = compute_series(8);
  XiBasis xi = build_xi();
};
const Fixture& fx() {
  static const Fixture f;
  return f;
}
}  // namespace

TEST_CASE("lipschitz constant from its ingredients") {
  CHECK(lipschitz_constant(fx().series, fx().xi) == 38883);
}

TEST_CASE("grid spacing gate") {
  // h = 1/388830 exactly: the strict threshold rejects it
  CHECK_THROWS_AS(sweep_and_certify(fx().series, fx().xi, 272181, 1, false), GridTooCoarse);
  CHECK(Rational(7, 10 * 272181LL) == Rational(1, 388830));
  // N = 272182 clears the published threshold
  CHECK(Rational(7, 10 * 272182LL) < Rational(1, 388831));
}

TEST_CASE("survey sweep on a small grid") {
  std::vector<std::pair<double, std::vector<double>>> rows;
  GapCertificate cert = sweep_and_certify(
      fx().series, fx().xi, 64, 2, true,
      [&](const GapPoint& p, const std::vector<double>& lambda) {
        rows.emplace_back(p.alpha, lambda);
      });
  CHECK(cert.survey);
  CHECK(!cert.verdict);
  CHECK(cert.failure == "not certified (survey mode)");
  CHECK(cert.grid_min_certified_bound >= 0.8);
  CHECK(std::abs(cert.grid_min_first_positive - 0.8147191261445436) < 1e-9);
  CHECK(cert.max_radius < 1e-4);
  CHECK(cert.max_symmetry_defect <= 2 * cert.max_radius);
  REQUIRE(rows.size() == 65);
  // curves are emitted in grid order with sorted eigenvalue lists
  CHECK(rows.front().first == 0.0);
  CHECK(std::abs(rows.back().first - 0.7) < 1e-15);
  const auto& at0 = rows.front().second;
  REQUIRE(at0.size() == 81);
  CHECK(std::abs(at0[41] - 1.0) < 1e-12);
  CHECK(std::abs(at0[42] - std::sqrt(3.0)) < 1e-12);
}

TEST_CASE("sweep results are identical across thread counts") {
  auto run = [&](int threads) {
    std::vector<double> bounds;
    sweep_and_certify(fx().series, fx().xi, 40, threads, true,
                      [&](const GapPoint& p, const std::vector<double>&) {
                        bounds.push_back(p.certified_lower_bound);
                      });
    return bounds;
  };
  std::vector<double> one = run(1), two = run(2), three = run(3);
  CHECK(one == two);
  CHECK(one == three);
}

TEST_CASE("full-mode spacing accepted only below the threshold") {
  // a full run on a tiny grid is refused before any eigensolve
  CHECK_THROWS_AS(sweep_and_certify(fx().series, fx().xi, 100, 1, false), GridTooCoarse);
}
