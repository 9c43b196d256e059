// Command-line driver for the magic-angle certification pipeline.

#include "magicangle/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace magicangle;
namespace fs = std::filesystem;

namespace {

std::string now_rfc3339() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

int cmd_series(int order, const std::string& out_dir) {
  fs::create_directories(out_dir);
  PerturbationSeries s = compute_series(order);
  {
    std::ofstream os(fs::path(out_dir) / "series_coefficients.csv");
    write_series_csv(os, numerator_series(s, order), denominator_series(s, order));
  }
  {
    std::ofstream os(fs::path(out_dir) / "psi_terms.txt");
    for (int n = 0; n <= std::min(order, 8); ++n) {
      os << "# Psi^" << n << "  (|.|^2 = " << norm_sq_of_term(s, n).str() << ")\n";
      os << dump(s.term(n)) << "\n";
    }
  }
  std::cout << "series order " << order << " written to " << out_dir << "\n";
  return 0;
}

int cmd_certify_zero(const std::string& out) {
  PerturbationSeries s = compute_series(8);
  auto [worst, best] = build_envelopes(s);
  MagicAngleBracket br = bracket_magic_angle(worst, best);
  std::cout << "worst-case envelope at 0.61: " << br.worst_negative.value
            << "  (round-off bound " << br.worst_negative.bound << ")\n"
            << "best-case envelope at 0.57: " << br.best_positive.value
            << "  (round-off bound " << br.best_positive.bound << ")\n"
            << "certified bracket: (" << br.lo.str() << ", " << br.hi.str() << ")\n";
  if (!out.empty()) {
    nlohmann::ordered_json j{{"worst_at_0.61", to_json(br.worst_negative)},
                             {"best_at_0.57", to_json(br.best_positive)},
                             {"bracket", {br.lo.str(), br.hi.str()}}};
    write_json(out, j);
  }
  return 0;
}

void write_curves_csv(const std::string& path, std::vector<std::string>& rows) {
  std::ofstream os(path);
  os << "alpha";
  for (int j = 1; j <= 81; ++j) os << ",lambda_" << j;
  os << ",enclosure_radius\n";
  for (const auto& r : rows) os << r;
}

int cmd_certify_gap(long long grid, int threads, bool survey, const std::string& out,
                    const std::string& curves) {
  PerturbationSeries s = compute_series(8);
  XiBasis xi = build_xi();
  verify_mu_choice(xi, s);
  std::vector<std::string> rows;
  CurveSink sink;
  if (!curves.empty()) {
    sink = [&](const GapPoint& p, const std::vector<double>& lambda) {
      std::ostringstream os;
      os.precision(17);
      os << p.alpha;
      for (double l : lambda) os << ',' << l;
      os << ',' << p.radius << '\n';
      rows.push_back(os.str());
    };
  }
  auto t0 = std::chrono::steady_clock::now();
  GapCertificate cert = sweep_and_certify(s, xi, grid, threads, survey, sink);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!curves.empty()) write_curves_csv(curves, rows);
  if (!out.empty()) {
    nlohmann::ordered_json j = to_json(cert);
    j["wall_seconds"] = secs;
    write_json(out, j);
  }
  std::cout << "grid " << cert.grid_points << " (+1), spacing " << cert.spacing.str()
            << ", min first positive " << cert.grid_min_first_positive
            << ", min certified bound " << cert.grid_min_certified_bound << "\n"
            << (cert.verdict ? "gap certified: g >= 3/4 on [0, 7/10]" : cert.failure) << "\n";
  return cert.verdict ? 0 : 3;
}

int cmd_certify_all(long long grid, int threads, bool survey, const std::string& out,
                    XiTamper tamper) {
  auto t0 = std::chrono::steady_clock::now();
  CertificationReport rep;
  rep.timestamp = now_rfc3339();
  PerturbationSeries s = compute_series(8);
  rep.h1_psi8_norm_sq = h1_norm_sq_of_term(s, 8);

  std::string stage = "verify_mu_choice";
  try {
    XiBasis xi = build_xi(tamper);
    rep.mu = verify_mu_choice(xi, s);
    rep.mu_verified = true;
    rep.lipschitz = lipschitz_constant(s, xi);

    stage = "sweep_and_certify";
    rep.gap = sweep_and_certify(s, xi, grid, threads, survey);

    stage = "build_envelopes";
    auto [worst, best] = build_envelopes(s);

    stage = "certify_sign";
    rep.worst_negative = certify_sign(worst, Rational(61, 100), -1);
    rep.best_positive = certify_sign(best, Rational(57, 100), +1);

    auto [worst_fig, best_fig] = build_envelopes(s, EtaBound::stated_three_twentieths);
    rep.roots = {approximate_roots(poly_to_doubles(worst.base), 0.5, 0.7).at(0),
                 approximate_roots(cleared_to_doubles(worst_fig), 0.5, 0.7).at(0),
                 approximate_roots(cleared_to_doubles(best_fig), 0.5, 0.7).at(0)};
  } catch (const std::exception& e) {
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.empty()) write_json(out, to_json(rep));
    std::cerr << "stage " << stage << " failed: " << e.what() << "\n";
    return 1;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.empty()) write_json(out, to_json(rep));
  if (rep.verdict()) {
    std::cout << "first magic angle certified in (0.57, 0.61)\n";
    return 0;
  }
  std::cout << "not certified" << (rep.gap ? " (" + rep.gap->failure + ")" : "") << "\n";
  return 3;
}

int cmd_figures(const std::string& out_dir, int points, long long gap_grid, int threads) {
  fs::create_directories(out_dir);
  PerturbationSeries s = compute_series(8);
  auto [worst, best] = build_envelopes(s, EtaBound::stated_three_twentieths);
  {
    std::ofstream os(fs::path(out_dir) / "check_zero.csv");
    os.precision(17);
    os << "alpha,worst,base,best\n";
    std::vector<double> wb = cleared_to_doubles(worst), bb = cleared_to_doubles(best),
                        base = poly_to_doubles(worst.base);
    auto horner = [](const std::vector<double>& c, double x) {
      double y = 0;
      for (size_t k = c.size(); k-- > 0;) y = y * x + c[k];
      return y;
    };
    for (int i = 0; i <= points; ++i) {
      double a = 0.7 * i / points;
      double d = (15 - 20 * a) * (15 - 20 * a);
      os << a << ',' << horner(wb, a) / d << ',' << horner(base, a) << ','
         << horner(bb, a) / d << '\n';
    }
  }
  XiBasis xi = build_xi();
  std::vector<std::string> rows;
  sweep_and_certify(s, xi, gap_grid, threads, true,
                    [&](const GapPoint& p, const std::vector<double>& lambda) {
                      std::ostringstream os;
                      os.precision(17);
                      os << p.alpha;
                      for (double l : lambda) os << ',' << l;
                      os << ',' << p.radius << '\n';
                      rows.push_back(os.str());
                    });
  write_curves_csv((fs::path(out_dir) / "curves.csv").string(), rows);
  std::cout << "figure data written to " << out_dir << "\n";
  return 0;
}

int cmd_xi_check(XiTamper tamper) {
  PerturbationSeries s = compute_series(8);
  XiBasis xi = build_xi(tamper);
  std::cout << xi_listing(xi);
  MuReport rep = verify_mu_choice(xi, s);
  std::cout << "count = " << xi.size() << ", mu = " << rep.mu
            << ", boundary degree <= " << rep.max_boundary_degree
            << ", ||P H1 Pperp|| = " << rep.h1_boundary_norm
            << ", support of psi^{8,alpha} contained\n";
  return 0;
}

XiTamper parse_tamper(const std::string& s) {
  if (s.empty() || s == "none") return XiTamper::none;
  if (s == "add-crossed") return XiTamper::add_crossed;
  if (s == "drop-4b2") return XiTamper::drop_4b2;
  throw CLI::ValidationError("--tamper", "unknown tamper mode " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified first magic angle of the chiral bilayer graphene model"};
  app.require_subcommand(1);
  int default_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* series = app.add_subcommand("series", "exact expansion coefficients to a given order");
  int order = 8;
  std::string series_out = ".";
  series->add_option("--order", order, "expansion order")->check(CLI::NonNegativeNumber);
  series->add_option("--out", series_out, "output directory");

  auto* zero = app.add_subcommand("certify-zero", "certified signs of the envelope polynomials");
  std::string zero_out;
  zero->add_option("--out", zero_out, "JSON output path");

  auto* gap = app.add_subcommand("certify-gap", "certified spectral gap over [0, 7/10]");
  long long grid = 272182;
  int threads = default_threads;
  bool survey = false;
  std::string gap_out, gap_curves;
  gap->add_option("--grid", grid, "number of grid intervals N; points are 7n/(10N)");
  gap->add_option("--threads", threads, "worker threads");
  gap->add_flag("--survey", survey, "coarse survey producing no certificate");
  gap->add_option("--out", gap_out, "JSON output path");
  gap->add_option("--curves", gap_curves, "CSV eigenvalue curves (survey-sized grids)");

  auto* all = app.add_subcommand("certify-all", "full proof pipeline and report");
  long long all_grid = 272182;
  int all_threads = default_threads;
  bool all_survey = false;
  std::string all_out = "report.json", all_tamper;
  all->add_option("--grid", all_grid, "gap grid intervals");
  all->add_option("--threads", all_threads, "worker threads");
  all->add_flag("--survey", all_survey, "coarse gap survey (no certificate)");
  all->add_option("--out", all_out, "report path");
  all->add_option("--xi-tamper", all_tamper, "deliberate-failure hook: add-crossed | drop-4b2");

  auto* figures = app.add_subcommand("figures", "CSV data behind the two figures");
  std::string fig_out = "figures";
  int fig_points = 1400;
  long long fig_grid = 700;
  int fig_threads = default_threads;
  figures->add_option("--out", fig_out, "output directory");
  figures->add_option("--points", fig_points, "envelope grid points");
  figures->add_option("--grid", fig_grid, "eigenvalue survey grid");
  figures->add_option("--threads", fig_threads, "worker threads");

  auto* xi = app.add_subcommand("xi", "the 81-element projection basis");
  bool xi_check = false;
  std::string xi_tamper;
  xi->add_flag("--check", xi_check, "verify mu, boundary degree, and support containment");
  xi->add_option("--tamper", xi_tamper, "deliberate-failure hook: add-crossed | drop-4b2");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*series) return cmd_series(order, series_out);
    if (*zero) return cmd_certify_zero(zero_out);
    if (*gap) return cmd_certify_gap(grid, threads, survey, gap_out, gap_curves);
    if (*all)
      return cmd_certify_all(all_grid, all_threads, all_survey, all_out,
                             parse_tamper(all_tamper));
    if (*figures) return cmd_figures(fig_out, fig_points, fig_grid, fig_threads);
    if (*xi) {
      if (!xi_check) {
        std::cout << xi_listing(build_xi());
        return 0;
      }
      return cmd_xi_check(parse_tamper(xi_tamper));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
