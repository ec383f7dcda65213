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

// Experiments on the weight fields, the graph solver and pointwise norms.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "tangentlab/errors.hpp"
#include "tangentlab/experiments.hpp"
#include "tangentlab/tangent.hpp"

namespace tangentlab {
namespace {

std::string tag(const std::string& base, int k) { return base + "[k=" + std::to_string(k) + "]"; }

Point2 random_in(std::mt19937_64& rng, const Rect& r) {
  std::uniform_real_distribution<double> ux(r.x0, r.x1), uy(r.y0, r.y1);
  const double x = ux(rng);
  return {x, uy(rng)};
}

}  // namespace

// ---------------------------------------------------------------------------
// weights

Report run_weights(const ExperimentConfig& cfg) {
  Report rep;
  const int kmax = static_cast<int>(cfg.get_int("kmax"));
  const int nmax = static_cast<int>(cfg.get_int("nmax"));
  const auto samples = cfg.get_int("samples");
  if (kmax < 0 || nmax < 1 || samples < 1) throw ConfigError("weights: kmax >= 0, nmax >= 1, samples >= 1");
  std::mt19937_64 rng(cfg.seed());

  double centre = 0.0, edge = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    centre = std::max(centre, std::abs(psi(n, {0.5, 0.5}) - 2.0));
    edge = std::max(edge, std::abs(psi(n, {0.0, 0.5}) - 1.0));
  }
  rep.add(CheckRecord::at_most("weights: psi_n(1/2,1/2) = 2", -1, centre, 0.0));
  rep.add(CheckRecord::at_most("weights: psi_n(0,1/2) = 1", -1, edge, 0.0));
  rep.add(CheckRecord::at_most("weights: psi_0(1/4,1/2) = 2", 0, std::abs(psi(0, {0.25, 0.5}) - 2.0), 0.0));

  // psi_n <= psi_(n+1) on a 256 x 256 grid of the unit square.
  double psi_violation = 0.0;
  for (int n = 0; n < std::min(nmax, 12); ++n) {
    for (int i = 0; i <= 256; ++i) {
      for (int j = 0; j <= 256; ++j) {
        const Point2 u{i / 256.0, j / 256.0};
        psi_violation = std::max(psi_violation, psi(n, u) - psi(n + 1, u));
      }
    }
  }
  rep.add(CheckRecord::at_most("weights: psi_n <= psi_(n+1)", -1, psi_violation, 0.0));

  const auto schedule = std::make_shared<CalibrationSchedule>(CalibrationSchedule::a_priori(kmax + 4));
  const auto rho = WeightField::rho_final(schedule);
  const auto rho_inf = WeightField::rho_infinity();
  const auto constant = WeightField::constant(1.5);
  double lo = 2.0, hi = 1.0;
  const Rect plane{-2.0, -2.0, 2.0, 2.0};
  for (long long s = 0; s < samples; ++s) {
    // Half the samples concentrate near the origin where squares are small.
    const Point2 p = s % 2 == 0 ? random_in(rng, plane) : random_in(rng, Rect::box(kmax)) * 0.5;
    for (const auto* f : {&rho, &rho_inf, &constant}) {
      const double v = (*f)(p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  rep.add(CheckRecord::at_least("weights: weights >= 1", -1, lo, 1.0));
  rep.add(CheckRecord::at_most("weights: weights <= 2", -1, hi, 2.0));
  rep.add(CheckRecord::at_most("weights: final weight = 1 at the origin", -1, std::abs(rho({0.0, 0.0}) - 1.0), 0.0));

  for (int k = 0; k <= kmax; ++k) {
    const Rect box = Rect::box(k);
    double mono = 0.0, below_final = 0.0, kn_lo = 2.0, kn_hi = 1.0;
    const auto kn_final = WeightField::rho_kn(k, schedule->order_for_shell(k));
    const long long per_k = std::max<long long>(1, samples / (kmax + 1));
    for (long long s = 0; s < per_k; ++s) {
      const Point2 p = random_in(rng, box);
      double prev = 0.0;
      for (int n = 0; n <= nmax; ++n) {
        const double v = WeightField::rho_kn(k, n)(p);
        mono = std::max(mono, prev - v);
        kn_lo = std::min(kn_lo, v);
        kn_hi = std::max(kn_hi, v);
        prev = v;
      }
      mono = std::max(mono, prev - rho_inf(p));
      below_final = std::max(below_final, kn_final(p) - rho(p));
    }
    rep.add(CheckRecord::at_most(tag("weights: rho^k_n nondecreasing in n, below rho_inf", k), k, mono, 0.0));
    rep.add(CheckRecord::at_most(tag("weights: rho >= rho^k_n(k) on N_k", k), k, below_final, 0.0));
    rep.add(CheckRecord::at_least(tag("weights: rho^k_n >= 1", k), k, kn_lo, 1.0));
    rep.add(CheckRecord::at_most(tag("weights: rho^k_n <= 2", k), k, kn_hi, 2.0));
  }

  auto active = *schedule;
  if (cfg.get_bool("calibrate")) {
    const GridSolver solver(static_cast<std::size_t>(cfg.get_int("cells")));
    CalibrationOptions opt;
    opt.seed = cfg.seed();
    opt.targets = static_cast<std::size_t>(cfg.get_int("pairs"));
    active = calibrate_schedule(kmax, solver, opt);
    for (const auto& rec : active.records()) {
      rep.add(CheckRecord::at_least(tag("weights: calibration slack d_rho_k - d_rho_inf + margin", rec.k), rec.k,
                                    rec.worst_slack, 0.0));
      rep.metrics[tag("n", rec.k)] = rec.n;
      rep.metrics[tag("calibration margin", rec.k)] = rec.margin;
      rep.metrics[tag("calibration spacing", rec.k)] = rec.grid_spacing;
    }
    rep.notes.push_back("calibration is sampled; the graph cannot resolve bump margins finer than its spacing");
  } else {
    rep.notes.push_back("schedule: a priori n(k) = 2k + 3 (set calibrate = true to calibrate on the graph)");
  }
  int increasing = 1;
  for (std::size_t i = 1; i < active.orders().size(); ++i) increasing &= active.orders()[i] > active.orders()[i - 1];
  rep.add(CheckRecord::at_least("weights: schedule strictly increasing", -1, increasing, 1.0));
  for (std::size_t i = 0; i < active.orders().size(); ++i) {
    rep.metrics[tag("schedule n", static_cast<int>(i))] = active.orders()[i];
  }
  if (const auto out = cfg.get("schedule_out"); !out.empty()) write_text_atomic(out, active.to_json());
  return rep;
}

// ---------------------------------------------------------------------------
// geodesic

Report run_geodesic(const ExperimentConfig& cfg) {
  Report rep;
  const auto pairs = cfg.get_int("pairs");
  const auto samples = cfg.get_int("samples");
  const double c = cfg.get_double("c");
  const double h = cfg.get_double("h");
  const Stencil stencil = cfg.get_int("stencil") == 8 ? Stencil::k8 : Stencil::k16;
  if (cfg.get_int("stencil") != 8 && cfg.get_int("stencil") != 16) throw ConfigError("geodesic: stencil is 8 or 16");
  if (!(c >= 1.0 && c <= 2.0)) throw ConfigError("geodesic: c must lie in [1, 2]");
  if (pairs < 1 || samples < 1) throw ConfigError("geodesic: pairs and samples must be positive");
  std::mt19937_64 rng(cfg.seed());
  const double kappa = stencil_distortion(stencil);
  rep.metrics["kappa"] = kappa;

  // Constant weight against c times the Euclidean distance.
  {
    const Rect unit{0.0, 0.0, 1.0, 1.0};
    const auto graph = GridGraph::build(unit, h, stencil, WeightField::constant(c));
    double over = -INFINITY, under = INFINITY;
    for (long long i = 0; i < pairs; ++i) {
      const Point2 a = random_in(rng, unit), b = random_in(rng, unit);
      const auto d = distance(graph, a, b);
      const double e = c * norm2(a - b);
      over = std::max(over, d.estimate - ((1.0 + kappa) * e + d.tolerance));
      under = std::min(under, d.estimate - e * (1.0 - 1e-12));
    }
    rep.add(CheckRecord::at_most("geodesic constant weight: d <= c(1+kappa)|a-b| + tau (excess)", -1, over, 0.0));
    rep.add(CheckRecord::at_least("geodesic constant weight: d >= c|a-b| (margin)", -1, under, 0.0));
    if (const auto path = cfg.get("graph_csv"); !path.empty()) {
      std::ostringstream os;
      GridGraph::build(unit, std::max(h, 1.0 / 16.0), stencil, WeightField::constant(c)).write_csv(os);
      write_text_atomic(path, os.str());
    }
  }

  // rho_inf: (1,0) to (0,1) along the skeleton.
  {
    const auto graph = GridGraph::build({-0.5, -0.5, 2.0, 2.0}, 1.0 / 64.0, stencil, WeightField::rho_infinity());
    const auto d = distance(graph, {1.0, 0.0}, {0.0, 1.0});
    rep.add(CheckRecord::at_most("skeleton distance: rho_inf d((1,0),(0,1)) = 2", -1, std::abs(d.estimate - 2.0), 1e-12));
    const Polyline skeleton = {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    rep.add(CheckRecord::at_most("skeleton distance: skeleton curve length = 2", -1,
                                 std::abs(curve_length(skeleton, WeightField::rho_infinity(), 1e-3) - 2.0), 0.0));
  }

  // Weight monotonicity and the triangle inequality from source tables.
  {
    const int level = 1;
    const Rect box = Rect::box(level);
    const auto schedule = std::make_shared<CalibrationSchedule>(CalibrationSchedule::a_priori(8));
    const std::vector<WeightField> chain = {WeightField::constant(1.0), WeightField::rho_kn(level, 2),
                                            WeightField::rho_kn(level, 5), WeightField::rho_infinity(),
                                            WeightField::constant(2.0)};
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
    std::vector<Point2> sources, targets;
    for (std::size_t i = 0; i < side; ++i) sources.push_back(random_in(rng, box));
    for (std::size_t i = 0; i < side; ++i) targets.push_back(random_in(rng, box));

    std::vector<std::vector<double>> prev;
    double mono = 0.0;
    for (const auto& field : chain) {
      const auto graph = GridGraph::build(box, h, stencil, field);
      std::vector<std::vector<double>> cur;
      for (const auto& s : sources) {
        const auto table = node_distances(graph, s);
        std::vector<double> row;
        for (const auto& t : targets) row.push_back(distance_from_table(graph, table, t));
        cur.push_back(std::move(row));
      }
      if (!prev.empty()) {
        for (std::size_t i = 0; i < side; ++i) {
          for (std::size_t j = 0; j < side; ++j) mono = std::max(mono, prev[i][j] - cur[i][j]);
        }
      }
      prev = std::move(cur);
    }
    rep.add(CheckRecord::at_most("geodesic weight monotonicity: rho <= rho' => d <= d' (violation)", -1, mono, 1e-12));

    const auto rho = WeightField::rho_final(schedule);
    const auto graph = GridGraph::build(box, h, stencil, rho);
    std::vector<std::vector<double>> tables;
    for (const auto& s : sources) tables.push_back(node_distances(graph, s));
    const double tau = 2.0 * graph.attachment_slack();
    std::uniform_int_distribution<std::size_t> pick(0, side - 1);
    double excess = -INFINITY, asym = 0.0;
    for (long long t = 0; t < samples; ++t) {
      const std::size_t ia = pick(rng), ib = pick(rng), ic = pick(rng);
      const double ac = distance_from_table(graph, tables[ia], targets[ic]);
      const double ab = distance_from_table(graph, tables[ia], sources[ib]);
      const double bc = distance_from_table(graph, tables[ib], targets[ic]);
      excess = std::max(excess, ac - (ab + bc + 3.0 * tau));
      const double ba = distance_from_table(graph, tables[ib], sources[ia]);
      asym = std::max(asym, std::abs(ab - ba));
    }
    rep.add(CheckRecord::at_most("geodesic triangle inequality d(a,c) <= d(a,b) + d(b,c) + 3 tau (excess)", -1,
                                 excess, 0.0));
    rep.add(CheckRecord::at_most("geodesic symmetry |d(a,b) - d(b,a)| <= 2 tau", -1, asym, 2.0 * tau));
    rep.metrics["tau"] = tau;
    rep.metrics["monotonicity pairs"] = static_cast<double>(side * side);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// norms

Report run_norms(const ExperimentConfig& cfg) {
  Report rep;
  const auto ndir = static_cast<std::size_t>(cfg.get_int("directions"));
  const double r = cfg.get_double("r");
  const double tol = cfg.get_double("tol");
  const auto ladder_size = static_cast<std::size_t>(cfg.get_int("ladder"));
  const auto grid = static_cast<std::size_t>(cfg.get_int("grid"));
  const double htol = cfg.get_double("hilbert_tol");
  const auto hdirs = static_cast<std::size_t>(cfg.get_int("hdirections"));
  if (ndir < 3 || !(r > 0.0) || ladder_size < 1) throw ConfigError("norms: directions >= 3, r > 0, ladder >= 1");

  // Smooth weight 3/2 + sin(x) sin(y) / 2 at the origin.
  const auto field =
      WeightField::analytic("3/2 + sin(x)sin(y)/2", [](Point2 p) { return 1.5 + 0.5 * std::sin(p.x) * std::sin(p.y); },
                            1.0, 2.0);
  const double rho0 = field({0.0, 0.0});
  std::map<double, std::pair<GridGraph, std::vector<double>>> cache;
  const PointDistance dist = [&](Point2 p, Point2 x) {
    const double s = norm2(p - x);
    auto it = cache.find(s);
    if (it == cache.end()) {
      // Lattice of 256 cells on [x - 2s, x + 2s]^2: spacing s / 64.
      auto g = GridGraph::build(Rect::centered(x, 2.0 * s), s / 64.0, Stencil::k16, field);
      auto table = node_distances(g, x);
      it = cache.emplace(s, std::make_pair(std::move(g), std::move(table))).first;
    }
    return distance_from_table(it->second.first, it->second.second, p);
  };
  const auto dirs = unit_directions(ndir);
  double worst = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double q = dist(dirs[i] * r, {0.0, 0.0}) / r;
    const double dev = std::abs(q - rho0);
    worst = std::max(worst, dev / rho0);
    rep.add(CheckRecord::at_most("smooth weight: |d(rv,0)/r - rho(0)| <= tol rho(0) [dir=" + std::to_string(i) + "]",
                                 static_cast<int>(i), dev, tol * rho0));
  }
  rep.metrics["smooth weight: worst relative deviation"] = worst;
  rep.metrics["kappa16"] = stencil_distortion(Stencil::k16);

  const auto radii = radius_ladder(r * std::ldexp(1.0, static_cast<int>(ladder_size) - 1), ladder_size);
  const auto est = estimate_pointwise_norm(dist, {0.0, 0.0}, dirs, radii);
  double reg = 0.0;
  for (const double v : est.values) reg = std::max(reg, std::abs(v - rho0) / rho0);
  rep.add(CheckRecord::at_most("smooth weight: regression intercept within tol of rho(0)|v|", -1, reg, tol));
  rep.metrics["smooth weight: regression max uncertainty"] = est.max_uncertainty();

  // Seminorm distances on the Euclidean circle.
  const auto d12 = seminorm_distance(l1_norm(), l2_norm(), grid);
  const auto dinf2 = seminorm_distance(linf_norm(), l2_norm(), grid);
  const auto d11 = seminorm_distance(l1_norm(), l1_norm(), grid);
  rep.add(CheckRecord::at_most("seminorm: D(l1,l2) = sqrt2 - 1", -1, std::abs(d12.value - (std::sqrt(2.0) - 1.0)),
                               d12.modulus_bound));
  rep.add(CheckRecord::at_most("seminorm: D(linf,l2) = 1 - 1/sqrt2", -1,
                               std::abs(dinf2.value - (1.0 - 1.0 / std::sqrt(2.0))), dinf2.modulus_bound));
  rep.add(CheckRecord::at_most("seminorm: D(l1,l1) = 0", -1, d11.value, 0.0));

  // Parallelogram verdicts.
  for (const double p : {1.0, 1.5, 2.0, 3.0, static_cast<double>(INFINITY)}) {
    const auto v = hilbertianity_verdict(lp_norm(p), htol, hdirs);
    std::ostringstream label;
    label << 'l' << p;
    const std::string name = std::isinf(p) ? "linf" : label.str();
    if (p == 2.0) {
      rep.add(CheckRecord::at_most("hilbert verdict " + name + " is Hilbert: defect", -1, v.defect, htol));
    } else {
      rep.add(CheckRecord::at_least("hilbert verdict " + name + " is not Hilbert: defect", -1, v.defect,
                                    std::nextafter(htol, INFINITY)));
    }
    rep.metrics["parallelogram defect " + name] = v.defect;
  }
  const auto l1 = l1_norm();
  const auto linf = linf_norm();
  const auto pd = [](const Norm& n, Point2 u, Point2 v) {
    const double s = n(u + v), d = n(u - v);
    return std::abs(s * s + d * d - 4.0);
  };
  rep.add(CheckRecord::at_most("hilbert defect(l1; e1, e2) = 4", -1, std::abs(pd(l1, {1, 0}, {0, 1}) - 4.0), 0.0));
  rep.add(
      CheckRecord::at_most("hilbert defect(linf; (1,1), (1,-1)) = 4", -1, std::abs(pd(linf, {1, 1}, {1, -1}) - 4.0), 0.0));
  return rep;
}

}  // namespace tangentlab
