// Copyright 2026 The TangentLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail N]...
//
// Exits 0 when every criterion passes except those named with --expect-fail,
// which must fail. Any other outcome exits 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdarg>
#include <cstring>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tangentlab/experiments.hpp"
#include "tangentlab/geodesic.hpp"
#include "tangentlab/spaces.hpp"
#include "tangentlab/tangent.hpp"
#include "tangentlab/weight_field.hpp"

namespace tl = tangentlab;
using tl::Point2;

namespace {

// Pinned tolerances.
constexpr double kRuntimePerK = 300.0;          // seconds, criterion 1
constexpr double kSmoothTolerance = 0.02;       // criterion 3, relative
constexpr double kConeTolerance = 0.02;         // criterion 5, relative to int|f|
constexpr double kConeDensity = 0.125;          // criterion 5 target density
constexpr double kHilbertTolerance = 1e-12;     // criterion 6
constexpr double kAhlforsLower = 0.1;           // criterion 8, c1
constexpr double kAhlforsUpper = 2.0;           // criterion 8
constexpr double kCantorDefect = 0.05;          // criterion 8
constexpr double kSupportLowerBound = 1.0 / 16.0;  // criterion 7: delta^2/4 with delta = 1/2

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::shared_ptr<const tl::CalibrationSchedule> schedule() {
  static const auto s = std::make_shared<tl::CalibrationSchedule>(tl::CalibrationSchedule::a_priori(8));
  return s;
}

// 1. Solver estimate within the l1 bracket, budget and runtime.
Outcome skeleton_bracket() {
  const auto rho = tl::WeightField::rho_final(schedule());
  Outcome out{true, ""};
  for (int k = 2; k <= 4; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const double h = tl::auto_spacing(k);
    const auto graph = tl::GridGraph::build(tl::Rect::box(k), h, tl::Stencil::k16, rho);
    const double budget = std::pow(4.0, -(k + 1));
    std::mt19937_64 rng(7 + k);
    std::uniform_real_distribution<double> u(-tl::box_radius(k), tl::box_radius(k));
    double worst = -INFINITY, tau = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
      const auto d = tl::distance(graph, a, b);
      tau = std::max(tau, d.tolerance);
      worst = std::max(worst, std::abs(d.estimate - tl::norm1(a - b)) - (std::pow(4.0, -k) + d.tolerance));
    }
    const double t = seconds_since(t0);
    const bool ok = worst <= 0.0 && tau <= budget && t <= kRuntimePerK;
    out.pass = out.pass && ok;
    out.detail += fmt("k=%d excess=%.3g tau=%.3g<=%.3g t=%.1fs; ", k, worst, tau, budget, t);
  }
  return out;
}

std::vector<tl::BlowupResult> blowups() {
  static std::vector<tl::BlowupResult> cache;
  if (cache.empty()) {
    const auto rho = tl::WeightField::rho_final(schedule());
    for (int k = 2; k <= 6; ++k) cache.push_back(tl::blowup_at_scale(k, rho));
  }
  return cache;
}

// 2. Blow-up distortion against l1.
Outcome blowup_distortion() {
  Outcome out{true, ""};
  double prev = INFINITY;
  for (const auto& b : blowups()) {
    const bool ok = b.epsilon <= b.epsilon_bound + b.tolerance && b.epsilon <= prev;
    out.pass = out.pass && ok;
    out.detail += fmt("k=%d eps=%.4f<=%.4f; ", b.k, b.epsilon, b.epsilon_bound + b.tolerance);
    prev = b.epsilon;
  }
  return out;
}

// 3. Smooth weight: d(rv, 0)/r -> rho(0).
Outcome smooth_weight_limit() {
  const auto field = tl::WeightField::analytic(
      "3/2 + sin(x)sin(y)/2", [](Point2 p) { return 1.5 + 0.5 * std::sin(p.x) * std::sin(p.y); }, 1.0, 2.0);
  const double r = std::ldexp(1.0, -10);
  const auto graph = tl::GridGraph::build(tl::Rect::centered({0, 0}, 2 * r), r / 64, tl::Stencil::k16, field);
  const auto table = tl::node_distances(graph, {0.0, 0.0});
  double worst = 0.0;
  for (const auto& v : tl::unit_directions(16)) {
    worst = std::max(worst, std::abs(tl::distance_from_table(graph, table, v * r) / r - 1.5) / 1.5);
  }
  return {worst <= kSmoothTolerance,
          fmt("max relative deviation %.5f <= %.2f (kappa16 = %.5f)", worst, kSmoothTolerance,
              tl::stencil_distortion(tl::Stencil::k16))};
}

// 4. Grid ball measures against edge enumeration.
Outcome grid_counts() {
  int mismatches = 0;
  for (std::int64_t L = 1; L <= 100; ++L) {
    const auto count = [](std::int64_t n) {
      std::int64_t edges = 0;
      for (std::int64_t m = -n + 1; m <= n - 1; ++m) {
        for (std::int64_t i = -n; i < n; ++i) edges += 2;
      }
      return edges;
    };
    const auto g = tl::grid_ball_measure(L);
    mismatches += (g.open_ball != count(L)) + (g.open_ball_next != count(L + 1));
  }
  return {mismatches == 0, fmt("%d mismatches for L <= 100", mismatches)};
}

// 5. Asymptotic cone of the grid.
Outcome asymptotic_cone() {
  std::vector<double> ladder;
  for (int k = 0; k <= 10; ++k) ladder.push_back(std::ldexp(1.0, k));
  const std::vector<tl::TestFunction> tests = {tl::tent_function(2.0), tl::quadratic_bump(2.0)};
  const auto rep = tl::asymptotic_cone_report(ladder, tests, 2.0, kConeDensity);
  bool geometry = true;
  for (const auto& row : rep.rows) geometry = geometry && row.distortion == 0.0 && row.coverage_gap <= 1.0 / row.Rk;
  const auto& last = rep.rows.back();
  double rel = 0.0, implied = 0.0;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    rel = std::max(rel, last.discrepancy[i] / last.abs_integral[i]);
    implied = std::max(implied, last.functional[i] / tl::integrate(tests[i]));
  }
  return {geometry && rel <= kConeTolerance,
          fmt("distortion 0 and coverage <= 2^-k: %s; |mu_k(f) - int f/8| / int|f| = %.4f > %.2f at k=10; "
              "mu_k(f) / int f = %.5f, i.e. the limit density is 1/4, not 1/8",
              geometry ? "yes" : "no", rel, kConeTolerance, implied)};
}

// 6. Parallelogram verdicts.
Outcome hilbertianity() {
  bool ok = true;
  std::string detail;
  for (const double p : {1.0, 1.5, 2.0, 3.0, static_cast<double>(INFINITY)}) {
    const auto v = tl::hilbertianity_verdict(tl::lp_norm(p), kHilbertTolerance);
    ok = ok && v.hilbert == (p == 2.0);
    detail += fmt("p=%g:%s ", p, v.hilbert ? "H" : "-");
    if (p == 2.0) ok = ok && v.defect <= kHilbertTolerance;
  }
  const auto l1 = tl::l1_norm();
  const double s = l1({1, 1}), d = l1({1, -1});
  const double e12 = std::abs(s * s + d * d - 4.0);
  ok = ok && e12 == 4.0;
  return {ok, detail + fmt("defect(l1; e1, e2) = %g", e12)};
}

// 7. Mass bounds of the blow-ups.
Outcome mass_bounds() {
  const double pi = std::acos(-1.0);
  Outcome out{true, ""};
  double support = INFINITY;
  for (const auto& b : blowups()) {
    out.pass = out.pass && b.cube_mass_upper <= 32.0 / pi && b.disc_mass_upper <= 8.0;
    support = std::min(support, b.small_disc_mass_lower);
    out.detail += fmt("k=%d cube<=%.3f disc<=%.3f; ", b.k, b.cube_mass_upper, b.disc_mass_upper);
  }
  out.pass = out.pass && support >= kSupportLowerBound;
  out.detail += fmt("min mu_k(B_1/2) >= %.4f >= %.4f", support, kSupportLowerBound);
  return out;
}

// 8. Fat Cantor square.
Outcome cantor_square() {
  const tl::CantorSquareSpace space(12);
  const auto& set = space.set();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  std::vector<Point2> centers;
  for (int i = 0; i < 100; ++i) {
    centers.push_back(i % 2 == 0 ? Point2{set.lo(pick(rng)), set.hi(pick(rng))}
                                 : Point2{set.midpoint(pick(rng)), set.midpoint(pick(rng))});
  }
  std::vector<double> radii;
  for (int e = 4; e <= 10; ++e) radii.push_back(std::ldexp(1.0, -e));
  const auto ahl = tl::ahlfors_report(
      [&](Point2 a, double r) { return tl::cantor_ball_measure(space, a, r); }, centers, radii, 2.0);

  const double radius = std::ldexp(1.0, -10);
  const tl::PointDistance dist = [&](Point2 a, Point2 b) { return space.distance(a, b); };
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double defect = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Point2 x{set.midpoint(pick(rng)), set.midpoint(pick(rng))};
    std::vector<Point2> pts{x};
    while (pts.size() < 33) {
      const Point2 d{u(rng), u(rng)};
      if (tl::norm1(d) <= 1.0 && space.contains(x + d * radius)) pts.push_back(x + d * radius);
    }
    defect = std::max(defect, tl::first_order_defect(dist, pts, tl::l1_norm()));
  }
  const auto verdict = tl::hilbertianity_verdict(tl::l1_norm(), kHilbertTolerance);
  const bool ok = ahl.min_ratio >= kAhlforsLower && ahl.max_ratio <= kAhlforsUpper && defect <= kCantorDefect &&
                  !verdict.hilbert;
  return {ok, fmt("Ahlfors ratios in [%.4f, %.4f] within [%.1f, %.0f]; defect vs l1 %.3g <= %.2f; tangent %s",
                  ahl.min_ratio, ahl.max_ratio, kAhlforsLower, kAhlforsUpper, defect, kCantorDefect,
                  verdict.hilbert ? "Hilbert" : "non-Hilbert")};
}

// 9. Constant weight against the stencil constant, plus property suites.
Outcome geodesic_sanity() {
  const double c = 1.5, kappa = tl::stencil_distortion(tl::Stencil::k16);
  const tl::Rect unit{0, 0, 1, 1};
  const auto graph = tl::GridGraph::build(unit, 1.0 / 128.0, tl::Stencil::k16, tl::WeightField::constant(c));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const auto d = tl::distance(graph, a, b);
    const double e = c * tl::norm2(a - b);
    bad += d.estimate < e * (1 - 1e-12) || d.estimate > (1 + kappa) * e + d.tolerance;
  }
  const auto props = tl::run_experiment("geodesic", tl::ExperimentConfig::parse("pairs = 10\nsamples = 10000"));
  int prop_fail = 0;
  for (const auto& chk : props.checks) {
    if (chk.claim.find("monotonicity") != std::string::npos || chk.claim.find("triangle") != std::string::npos) {
      prop_fail += !chk.pass;
    }
  }
  return {bad == 0 && prop_fail == 0,
          fmt("%d of 1000 pairs outside [c|a-b|, c(1+kappa)|a-b| + tau], kappa=%.6f; "
              "monotonicity/triangle suites on 10^4 samples: %d failures",
              bad, kappa, prop_fail)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
      expect_fail.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail N]...\n");
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"skeleton distance bracket, k = 2,3,4", skeleton_bracket},
      {"blow-up distortion vs l1, k = 2..6", blowup_distortion},
      {"smooth weight tangent norm", smooth_weight_limit},
      {"grid ball measures, L <= 100", grid_counts},
      {"grid asymptotic cone with density 1/8", asymptotic_cone},
      {"parallelogram verdicts", hilbertianity},
      {"blow-up measure bounds, k = 2..6", mass_bounds},
      {"fat Cantor square, depth 12", cantor_square},
      {"geodesic solver sanity", geodesic_sanity},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected_failure = expect_fail.count(id) != 0;
    if (o.pass == expected_failure) ++unexpected;
    std::printf("criterion %d %s%s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL",
                expected_failure ? " (expected)" : "", criteria[i].first.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d unexpected outcome(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
