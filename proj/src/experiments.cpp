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

#include "tangentlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"
#include "tangentlab/errors.hpp"
#include "tangentlab/tangent.hpp"

namespace tangentlab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string tag(const std::string& base, int k) { return base + "[k=" + std::to_string(k) + "]"; }

Stencil parse_stencil(long long s) {
  if (s == 8) return Stencil::k8;
  if (s == 16) return Stencil::k16;
  throw ConfigError("config: stencil must be 8 or 16");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = {
      {"verify-lemma52",
       "graph distances of the final weight against ||a-b||_1 -+ 4^-k on random pairs in N_k",
       {{"k", "2,3,4"}, {"pairs", "100"}, {"h", "auto"}, {"seed", "7"}, {"stencil", "16"}, {"kmax", "8"},
        {"schedule", ""}, {"route", "true"}}},
      {"blowup",
       "distortion, coverage and measure bounds of the blow-up at the origin, r_k = 1/(k 2^k), R_k = k",
       {{"k", "2,3,4,5,6"}, {"cells", "512"}, {"sources", "16"}, {"samples", "256"}, {"delta", "0.5"},
        {"seed", "1"}, {"kmax", "8"}, {"schedule", ""}}},
      {"asymptotic",
       "rescaled grid against (R^2, sup norm, density * L^2)",
       {{"Rk", "1,2,4,8,16,32,64,128,256,512,1024"}, {"f", "tent,bump"}, {"R", "2"}, {"width", "2"},
        {"density", "0.125"}, {"tol", "0.02"}, {"samples", "256"}, {"seed", "1"}}},
      {"cantor",
       "Ahlfors regularity, first-order defect and tangent norm of the fat Cantor square",
       {{"depth", "12"}, {"centers", "100"}, {"rmin", "2^-10"}, {"rmax", "2^-4"}, {"c1", "0.1"},
        {"points", "20"}, {"radius", "2^-10"}, {"neighbors", "32"}, {"defect_tol", "0.05"}, {"seed", "1"},
        {"csv_intervals", ""}}},
      {"weights",
       "bump profiles, weight bounds, monotonicity and the calibration schedule",
       {{"kmax", "4"}, {"nmax", "16"}, {"samples", "100000"}, {"seed", "1"}, {"calibrate", "false"},
        {"cells", "128"}, {"pairs", "48"}, {"schedule_out", ""}}},
      {"geodesic",
       "constant-weight accuracy, weight monotonicity and triangle inequality of the graph solver",
       {{"pairs", "1000"}, {"c", "1.5"}, {"samples", "10000"}, {"seed", "1"}, {"h", "2^-7"}, {"stencil", "16"},
        {"graph_csv", ""}}},
      {"norms",
       "pointwise norm of a smooth weight, seminorm distances and parallelogram verdicts",
       {{"directions", "16"}, {"r", "2^-10"}, {"tol", "0.02"}, {"ladder", "8"}, {"grid", "4096"},
        {"hilbert_tol", "1e-9"}, {"hdirections", "64"}, {"seed", "1"}}},
  };
  return catalog;
}

const ExperimentInfo& experiment_info(const std::string& name) {
  for (const auto& e : experiment_catalog()) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

Report run_experiment(const std::string& name, ExperimentConfig config) {
  const auto& info = experiment_info(name);
  config.apply_defaults(info.defaults);
  config.validate_tolerances();
  const auto t0 = Clock::now();
  Report r;
  if (name == "verify-lemma52") r = run_verify_lemma52(config);
  if (name == "blowup") r = run_blowup(config);
  if (name == "asymptotic") r = run_asymptotic(config);
  if (name == "cantor") r = run_cantor(config);
  if (name == "weights") r = run_weights(config);
  if (name == "geodesic") r = run_geodesic(config);
  if (name == "norms") r = run_norms(config);
  r.experiment = name;
  r.config = config.values();
  r.wall_clock["total"] = seconds_since(t0);
  return r;
}

WeightField final_weight(const std::string& schedule_path, int k_max) {
  if (schedule_path.empty()) {
    return WeightField::rho_final(std::make_shared<CalibrationSchedule>(CalibrationSchedule::a_priori(k_max)));
  }
  return WeightField::rho_final(
      std::make_shared<CalibrationSchedule>(CalibrationSchedule::from_json(read_file(schedule_path))));
}

// ---------------------------------------------------------------------------
// verify-lemma52

Report run_verify_lemma52(const ExperimentConfig& cfg) {
  Report rep;
  const auto rho = final_weight(cfg.get("schedule"), static_cast<int>(cfg.get_int("kmax")));
  const auto pairs = cfg.get_int("pairs");
  const auto stencil = parse_stencil(cfg.get_int("stencil"));
  const bool route = cfg.get_bool("route");
  rep.notes.push_back("weight: " + rho.describe());
  rep.notes.push_back(
      "h = auto picks the largest power of two with 4 sqrt(2) h <= 4^-(k+1): two endpoint attachments of "
      "sqrt(2) h rho_max each, so tau <= 4^-(k+1), at most one eighth of the bracket width 2 * 4^-k");
  rep.notes.push_back("pairs are uniform in N_k; tau is the per-query attachment tolerance");

  for (const auto kk : cfg.get_ints("k")) {
    const int k = static_cast<int>(kk);
    if (k < 2) throw ConfigError("verify-lemma52: k must be >= 2");
    const auto t0 = Clock::now();
    const double h = cfg.get("h") == "auto" ? auto_spacing(k) : cfg.get_double("h");
    const auto graph = GridGraph::build(Rect::box(k), h, stencil, rho);
    std::mt19937_64 rng(cfg.seed() + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> coord(-box_radius(k), box_radius(k));
    const double slack = std::pow(4.0, -k);
    double worst = 0.0, worst_tau = 0.0;
    std::size_t inside = 0;
    for (long long i = 0; i < pairs; ++i) {
      const Point2 a{coord(rng), coord(rng)};
      const Point2 b{coord(rng), coord(rng)};
      const auto d = distance(graph, a, b);
      const double dev = std::abs(d.estimate - norm1(a - b));
      worst = std::max(worst, dev - d.tolerance);
      worst_tau = std::max(worst_tau, d.tolerance);
      const auto rec = CheckRecord::at_most(tag("skeleton distance: |d-|a-b|_1| <= 4^-k + tau", k), k, dev, slack + d.tolerance);
      inside += rec.pass ? 1 : 0;
      rep.add(rec);
      if (route) {
        try {
          const double len = route_length(skeleton_route(a, b), rho);
          rep.add(CheckRecord::at_most(tag("skeleton distance: skeleton route <= |a-b|_1 + 4^-k", k), k, len,
                                       norm1(a - b) + slack));
        } catch (const ResourceError&) {
          rep.notes.push_back(tag("skeleton route skipped (lattice over budget) for one pair", k));
        }
      }
    }
    rep.add(CheckRecord::at_most(tag("solver budget tau <= 4^-(k+1)", k), k, worst_tau, std::pow(4.0, -(k + 1))));
    rep.metrics[tag("h", k)] = h;
    rep.metrics[tag("nodes", k)] = static_cast<double>(graph.node_count());
    rep.metrics[tag("max |d-|a-b|_1| - tau", k)] = worst;
    rep.metrics[tag("pairs inside bracket", k)] = static_cast<double>(inside);
    rep.metrics[tag("stencil distortion", k)] = stencil_distortion(stencil);
    rep.wall_clock[tag("k", k)] = seconds_since(t0);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// blowup

BlowupResult blowup_at_scale(int k, const WeightField& rho, const BlowupOptions& options) {
  if (k < 2) throw DomainError("blowup_at_scale: k must be >= 2");
  if (options.sources < 1) throw DomainError("blowup_at_scale: need at least one source");
  BlowupResult out;
  out.k = k;
  out.r = 1.0 / (static_cast<double>(k) * std::ldexp(1.0, k));
  out.R = static_cast<double>(k);
  out.epsilon_bound = static_cast<double>(k) / std::ldexp(1.0, k);
  out.delta = options.delta;
  const double window = out.R * out.r;  // = 2^-k

  const Rect rect = Rect::box(k);
  const double h = 2.0 * box_radius(k) / static_cast<double>(options.cells);
  out.spacing = h;
  const auto graph = GridGraph::build(rect, h, Stencil::k16, rho);
  const auto origin_table = node_distances(graph, {0.0, 0.0});

  std::vector<std::size_t> window_ids;
  for (std::size_t id = 0; id < graph.node_count(); ++id) {
    if (origin_table[id] < window) window_ids.push_back(id);
  }
  const auto origin_id = graph.id(graph.nx() / 2, graph.ny() / 2);

  std::unordered_map<std::size_t, std::vector<double>> tables;
  tables.emplace(origin_id, origin_table);
  std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(k));
  std::uniform_int_distribution<std::size_t> pick(0, window_ids.size() - 1);
  while (tables.size() < std::min(options.sources, window_ids.size())) {
    const auto id = window_ids[pick(rng)];
    if (tables.count(id) == 0) tables.emplace(id, node_distances(graph, graph.node(id)));
  }

  PointedSampledSpace space;
  std::unordered_map<std::size_t, std::size_t> index_of;
  for (const auto id : window_ids) {
    index_of[id] = space.points.size();
    space.points.push_back(graph.node(id));
  }
  space.weights.assign(space.points.size(), 1.0);
  space.base = index_of.at(origin_id);
  const auto node_id = [&](Point2 p) {
    return graph.id(static_cast<std::size_t>(std::llround((p.x - rect.x0) / h)),
                    static_cast<std::size_t>(std::llround((p.y - rect.y0) / h)));
  };
  space.distance = [&](Point2 a, Point2 b) {
    const auto ia = node_id(a), ib = node_id(b);
    if (const auto it = tables.find(ia); it != tables.end()) return it->second[ib];
    if (const auto it = tables.find(ib); it != tables.end()) return it->second[ia];
    throw Error("blowup: pair without a source");
  };
  DistortionOptions dopt;
  for (const auto& [id, table] : tables) dopt.anchors.push_back(index_of.at(id));
  std::sort(dopt.anchors.begin(), dopt.anchors.end());
  dopt.coverage_pitch = out.R / 128.0;
  dopt.seed = options.seed;
  const auto rep = distortion_vs_norm(space, out.r, out.R, l1_norm(), dopt);
  out.epsilon = rep.epsilon;
  out.tolerance = rep.tolerance;
  out.coverage_gap = rep.coverage_gap.value_or(0.0);
  out.coverage_pitch = rep.coverage_pitch;
  out.window_size = rep.window_size;
  out.pair_count = rep.pair_count;

  // Measures m = rho^2 L^2 on a shifted sample grid over [-r, r]^2. Ball
  // membership uses certified distance bounds: the graph value is a curve
  // length (upper bound) and max(|.|_2, |.|_1 - 4^-k) is a lower bound.
  const std::size_t n = options.measure_samples;
  const double pitch = 2.0 * out.r / static_cast<double>(n);
  const double cell = pitch * pitch;
  const double lemma = std::pow(4.0, -k);
  double cube = 0.0, disc = 0.0, small_disc = 0.0, ball_lower = 0.0, ball_upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Point2 p{-out.r + (static_cast<double>(i) + 0.6180339887498949) * pitch,
                     -out.r + (static_cast<double>(j) + 0.4142135623730950) * pitch};
      const double mass = rho(p) * rho(p) * cell;
      const double d_lo = std::max(norm2(p), norm1(p) - lemma);
      const double d_hi = distance_from_table(graph, origin_table, p);
      const double e = norm2(p) / out.r;
      cube += mass;  // the sample grid is exactly r [-1,1]^2, inside the window
      if (e < 1.0) disc += mass;
      if (e < options.delta && d_hi < window) small_disc += mass;
      if (d_hi < out.r) ball_lower += mass;
      if (d_lo < out.r) ball_upper += mass;
    }
  }
  if (!(ball_lower > 0.0)) throw SupportError("blowup: B_r(0) has no sampled mass");
  out.cube_mass_upper = cube / ball_lower;
  out.disc_mass_upper = disc / ball_lower;
  out.small_disc_mass_lower = small_disc / ball_upper;
  return out;
}

Report run_blowup(const ExperimentConfig& cfg) {
  Report rep;
  const auto rho = final_weight(cfg.get("schedule"), static_cast<int>(cfg.get_int("kmax")));
  BlowupOptions opt;
  opt.cells = static_cast<std::size_t>(cfg.get_int("cells"));
  opt.sources = static_cast<std::size_t>(cfg.get_int("sources"));
  opt.measure_samples = static_cast<std::size_t>(cfg.get_int("samples"));
  opt.delta = cfg.get_double("delta");
  opt.seed = cfg.seed();
  if (opt.cells < 8 || opt.measure_samples < 8) throw ConfigError("blowup: cells and samples must be >= 8");
  rep.notes.push_back("weight: " + rho.describe());
  rep.notes.push_back("pairs: every window node against " + std::to_string(opt.sources) +
                      " sources (origin included); node pairs carry no attachment tolerance");
  rep.notes.push_back("measure m = rho^2 L^2; mu_k(B_delta) >= delta^2/4 follows from 1 <= rho <= 2 and d >= |.|_2");

  double previous = INFINITY;
  const double pi = std::acos(-1.0);
  for (const auto kk : cfg.get_ints("k")) {
    const int k = static_cast<int>(kk);
    const auto t0 = Clock::now();
    const auto b = blowup_at_scale(k, rho, opt);
    rep.add(CheckRecord::at_most(tag("blowup: distortion eps <= k/2^k + tau", k), k, b.epsilon,
                                 b.epsilon_bound + b.tolerance));
    if (std::isfinite(previous)) {
      rep.add(CheckRecord::at_most(tag("blowup: distortion decreasing in k", k), k, b.epsilon, previous));
    }
    previous = b.epsilon;
    rep.add(CheckRecord::at_most(tag("blowup: coverage gap <= eps_k + pitch", k), k, b.coverage_gap,
                                 b.epsilon_bound + b.coverage_pitch));
    rep.add(CheckRecord::at_most(tag("blowup: mass mu_k([-1,1]^2) <= 8 L^2/pi", k), k, b.cube_mass_upper, 32.0 / pi));
    rep.add(CheckRecord::at_most(tag("blowup: mass mu_k(B_1) <= 8 L^2/pi", k), k, b.disc_mass_upper, 8.0));
    rep.add(CheckRecord::at_least(tag("blowup: support mu_k(B_delta) >= delta^2/4", k), k, b.small_disc_mass_lower,
                                  b.delta * b.delta / 4.0));
    rep.metrics[tag("r", k)] = b.r;
    rep.metrics[tag("epsilon", k)] = b.epsilon;
    rep.metrics[tag("window nodes", k)] = static_cast<double>(b.window_size);
    rep.metrics[tag("pairs", k)] = static_cast<double>(b.pair_count);
    rep.metrics[tag("h", k)] = b.spacing;
    rep.wall_clock[tag("k", k)] = seconds_since(t0);
  }
  return rep;
}

}  // namespace tangentlab
