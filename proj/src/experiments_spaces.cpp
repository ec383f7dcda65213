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

// Experiments on the grid space and the fat Cantor square.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tangentlab/errors.hpp"
#include "tangentlab/experiments.hpp"
#include "tangentlab/spaces.hpp"
#include "tangentlab/tangent.hpp"

namespace tangentlab {
namespace {

std::string at_scale(const std::string& base, double Rk) {
  std::ostringstream os;
  os << base << "[Rk=" << Rk << "]";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// asymptotic

Report run_asymptotic(const ExperimentConfig& cfg) {
  Report rep;
  const auto ladder = cfg.get_doubles("Rk");
  const double R = cfg.get_double("R");
  const double width = cfg.get_double("width");
  const double density = cfg.get_double("density");
  const double tol = cfg.get_double("tol");
  const auto samples = static_cast<std::size_t>(cfg.get_int("samples"));
  if (ladder.empty() || !(R > 1.0) || !(width > 0.0) || width > R) {
    throw ConfigError("asymptotic: need a non-empty Rk ladder, R > 1 and 0 < width <= R");
  }
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] >= 1.0) || (i > 0 && ladder[i] <= ladder[i - 1])) {
      throw ConfigError("asymptotic: Rk must be >= 1 and strictly increasing");
    }
  }
  std::vector<TestFunction> tests;
  for (const auto& name : cfg.get_list("f")) {
    if (name == "tent") {
      tests.push_back(tent_function(width));
    } else if (name == "bump") {
      tests.push_back(quadratic_bump(width));
    } else {
      throw ConfigError("asymptotic: unknown test function '" + name + "' (tent, bump)");
    }
  }
  if (tests.empty()) throw ConfigError("asymptotic: no test functions");

  const auto cone = asymptotic_cone_report(ladder, tests, R, density, samples);
  double prev_a = INFINITY, prev_b = INFINITY;
  for (const auto& row : cone.rows) {
    rep.add(CheckRecord::at_most(at_scale("grid distortion vs sup norm", row.Rk), -1, row.distortion, 0.0));
    rep.add(CheckRecord::at_most(at_scale("grid coverage gap <= 1/Rk", row.Rk), -1, row.coverage_gap, 1.0 / row.Rk));
    const auto e = grid_error_terms(row.Rk, R);
    const double a_ratio = e.a / e.c;
    rep.metrics[at_scale("error a/c", row.Rk)] = a_ratio;
    rep.metrics[at_scale("error b", row.Rk)] = e.b;
    if (std::isfinite(prev_a)) {
      rep.add(CheckRecord::at_most(at_scale("grid error a/c nonincreasing", row.Rk), -1, a_ratio, prev_a));
      rep.add(CheckRecord::at_most(at_scale("grid error b nonincreasing", row.Rk), -1, e.b, prev_b));
    }
    prev_a = a_ratio;
    prev_b = e.b;
    for (std::size_t i = 0; i < row.functions.size(); ++i) {
      const std::string name = row.functions[i];
      rep.metrics[at_scale("functional " + name, row.Rk)] = row.functional[i];
      rep.metrics[at_scale("implied density " + name, row.Rk)] = row.functional[i] / integrate(tests[i]);
    }
  }
  const auto& last = cone.rows.back();
  for (std::size_t i = 0; i < last.functions.size(); ++i) {
    rep.add(CheckRecord::at_most(at_scale("grid measure -> density L^2: |F - density int f| / int|f| (" +
                                              last.functions[i] + ")",
                                          last.Rk),
                                 -1, last.discrepancy[i] / last.abs_integral[i], tol));
  }
  rep.add(CheckRecord::at_least("sup norm parallelogram defect = 4", -1, cone.verdict.defect, 4.0 - 1e-12));
  rep.metrics["density"] = density;
  rep.notes.push_back(
      "each unit cell carries a cross of length 2 and mu_k(B_1) -> 1 forces the limit density 1/4; "
      "density = 0.25 reproduces the limit");
  return rep;
}

// ---------------------------------------------------------------------------
// cantor

Report run_cantor(const ExperimentConfig& cfg) {
  Report rep;
  const int depth = static_cast<int>(cfg.get_int("depth"));
  const auto ncenters = cfg.get_int("centers");
  const double rmin = cfg.get_double("rmin");
  const double rmax = cfg.get_double("rmax");
  const double c1 = cfg.get_double("c1");
  const auto npoints = cfg.get_int("points");
  const double radius = cfg.get_double("radius");
  const auto neighbors = cfg.get_int("neighbors");
  const double defect_tol = cfg.get_double("defect_tol");
  if (depth < 1 || depth > FatCantorSet::kMaxDepth) throw ConfigError("cantor: depth must lie in [1, 25]");
  if (!(rmin > 0.0) || !(rmax >= rmin) || rmax > 0.5) throw ConfigError("cantor: need 0 < rmin <= rmax <= 1/2");
  if (ncenters < 1 || npoints < 1 || neighbors < 2 || !(radius > 0.0)) {
    throw ConfigError("cantor: centers, points >= 1, neighbors >= 2, radius > 0");
  }
  std::mt19937_64 rng(cfg.seed());
  const CantorSquareSpace space(depth);
  const auto& set = space.set();

  // Kept length against 1 - sum_n 2^(n-1) 4^-n = 1/2 + 2^-(D+1).
  const double expected = 0.5 + std::ldexp(1.0, -(depth + 1));
  rep.add(CheckRecord::at_most("cantor kept length = 1/2 + 2^-(D+1)", depth, std::abs(set.kept_length() - expected),
                               0.0));
  rep.metrics["kept length"] = set.kept_length();

  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  std::vector<Point2> centers;
  for (long long i = 0; i < ncenters; ++i) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (i % 2 == 0) {
      centers.push_back({i % 4 == 0 ? set.lo(a) : set.hi(a), set.lo(b)});
    } else {
      std::uniform_real_distribution<double> ux(set.lo(a), set.hi(a)), uy(set.lo(b), set.hi(b));
      const double x = ux(rng);
      centers.push_back({x, uy(rng)});
    }
  }
  centers.push_back({0.0, 0.0});
  std::vector<double> radii;
  for (double r = rmax; r >= rmin * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
  const auto ahl = ahlfors_report([&](Point2 a, double r) { return cantor_ball_measure(space, a, r); }, centers,
                                  radii, 2.0);
  rep.add(CheckRecord::at_least("cantor Ahlfors lower: mu(B(a,r)) >= c1 r^2", depth, ahl.min_ratio, c1));
  rep.add(CheckRecord::at_most("cantor Ahlfors upper: mu(B(a,r)) <= 2 r^2", depth, ahl.max_ratio, 2.0));
  rep.metrics["ahlfors min ratio"] = ahl.min_ratio;
  rep.metrics["ahlfors max ratio"] = ahl.max_ratio;
  rep.metrics["ahlfors evaluations"] = static_cast<double>(ahl.evaluations);

  // Density points: interval midpoints, with neighbours drawn from the set.
  const PointDistance dist = [&](Point2 a, Point2 b) { return space.distance(a, b); };
  double l1_defect = 0.0, l2_defect = INFINITY;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (long long i = 0; i < npoints; ++i) {
    const Point2 x{set.midpoint(pick(rng)), set.midpoint(pick(rng))};
    std::vector<Point2> pts{x};
    std::size_t attempts = 0;
    while (static_cast<long long>(pts.size()) <= neighbors && attempts < 1000000) {
      ++attempts;
      const Point2 d{unit(rng), unit(rng)};
      if (norm1(d) > 1.0) continue;
      const Point2 p = x + d * radius;
      if (space.contains(p)) pts.push_back(p);
    }
    if (pts.size() < 3) throw SupportError("cantor: too few set points near a density point");
    l1_defect = std::max(l1_defect, first_order_defect(dist, pts, l1_norm()));
    l2_defect = std::min(l2_defect, first_order_defect(dist, pts, l2_norm()));
  }
  rep.add(CheckRecord::at_most("cantor tangent at density points is l1: first-order defect", depth, l1_defect,
                               defect_tol));
  rep.metrics["l2 first-order defect (min over points)"] = l2_defect;

  const auto dirs = unit_directions(16);
  const auto est = estimate_pointwise_norm([](Point2 a, Point2 b) { return norm1(a - b); }, {0.5, 0.5}, dirs,
                                           radius_ladder(radius, 4));
  const auto verdict = hilbertianity_verdict(est, 1e-6);
  rep.add(CheckRecord::at_least("cantor tangent norm is not Hilbert (0 = Hilbert)", depth, verdict.hilbert ? 0 : 1, 1));
  rep.metrics["tangent parallelogram defect"] = verdict.defect;

  if (const auto path = cfg.get("csv_intervals"); !path.empty()) {
    std::ostringstream os;
    set.write_csv(os);
    write_text_atomic(path, os.str());
  }
  return rep;
}

}  // namespace tangentlab
