#include <catch2/catch_amalgamated.hpp>

#include "magicangle/xi.hpp"

using namespace magicangle;

TEST_CASE("Xi has 81 basis functions") {
  XiBasis xi = build_xi();
  CHECK(xi.size() == 81);
  CHECK(xi.indices[0].is_origin());
  // origin and the q1 orbit are in
  CHECK(xi.contains(canonicalize(site_b(0, 0), +1)));
  CHECK(xi.contains(canonicalize(site_b(0, 0), -1)));
  // the crossed-out norm-49 orbit is not
  CHECK(!xi.contains(canonicalize(site_b(-2, -2), +1)));
  CHECK(norm_sq(site_b(-2, -2)) == 49);
  // the two augmenting norm-49 orbits are
  CHECK(xi.contains(canonicalize(site_b(-4, 1), +1)));
  CHECK(xi.contains(canonicalize(site_b(-4, 4), -1)));
  // block layout: origin, then 40 chirality +1, then 40 chirality -1
  for (int i = 1; i <= 40; ++i) CHECK(xi.indices[size_t(i)].chi == +1);
  for (int i = 41; i <= 80; ++i) CHECK(xi.indices[size_t(i)].chi == -1);
}

TEST_CASE("Xi matches the published orbit listing") {
  // one representative per listed orbit line, with the eigenvalue magnitudes
  struct Row { LatticeSite site; long long nsq; };
  const Row rows[] = {
      {site_b(0, 0), 1},    {site_a(-1, 0), 3},   {site_a(0, -1), 3},
      {site_b(1, 1), 4},    {site_b(-1, 0), 7},   {site_b(0, -1), 7},
      {site_a(1, 1), 9},    {site_a(-1, -1), 9},  {site_a(-2, 0), 12},  {site_a(0, -2), 12},
      {site_b(1, -2), 13},  {site_b(-2, 1), 13},  {site_b(-1, -1), 16},
      {site_b(-2, 0), 19},  {site_b(0, -2), 19},
      {site_a(-3, 1), 21},  {site_a(-3, 2), 21},  {site_a(-1, -2), 21}, {site_a(-2, -1), 21},
      {site_b(2, 2), 25},   {site_a(-3, 0), 27},  {site_a(0, -3), 27},
      {site_b(-3, 1), 28},  {site_b(-3, 3), 28},
      {site_b(-2, -1), 31}, {site_b(-1, -2), 31},
      {site_a(2, 2), 36},   {site_a(-2, -2), 36},
      {site_b(-3, 0), 37},  {site_b(0, -3), 37},
      {site_a(-4, 1), 39},  {site_a(-4, 3), 39},  {site_a(-3, -1), 39}, {site_a(-1, -3), 39},
      {site_b(-4, 2), 43},  {site_b(-4, 3), 43},
      {site_a(-4, 0), 48},  {site_a(-4, 4), 48},
      {site_b(-4, 1), 49},  {site_b(-4, 4), 49},
  };
  XiBasis xi = build_xi();
  std::set<LatticeSite> expected;
  for (const auto& r : rows) {
    CHECK(norm_sq(r.site) == r.nsq);
    expected.insert(orbit_rep(r.site));
  }
  CHECK(expected.size() == 40);
  CHECK(xi.orbits == expected);
}

TEST_CASE("mu choice verification") {
  XiBasis xi = build_xi();
  auto series = compute_series(8);
  MuReport rep = verify_mu_choice(xi, series);
  CHECK(rep.mu_sq == 49);
  CHECK(rep.mu == 7);
  CHECK(rep.max_boundary_degree <= 1);
  CHECK(rep.h1_boundary_norm == 1);
  CHECK(rep.boundary_edges > 0);
}

TEST_CASE("tampered Xi fails verification") {
  auto series = compute_series(8);
  CHECK_THROWS_AS(verify_mu_choice(build_xi(XiTamper::add_crossed), series),
                  BoundaryDegreeViolation);
  CHECK_THROWS_AS(verify_mu_choice(build_xi(XiTamper::drop_4b2), series), SupportEscape);
}

TEST_CASE("Xi listing text") {
  std::string listing = xi_listing(build_xi());
  CHECK(listing.find("chi[origin]") != std::string::npos);
  CHECK(listing.find("norm^2 = 49") != std::string::npos);
  CHECK(std::count(listing.begin(), listing.end(), '\n') == 41);  // origin + 40 orbit pairs
}
