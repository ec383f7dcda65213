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

#include "tangentlab/weight_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

double bump_generator(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }

double edge_profile(double t, double s) { return smooth_step(t / s) * smooth_step((1.0 - t) / s); }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.5) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump_generator(2.0 * x - 1.0);
  const double b = bump_generator(2.0 - 2.0 * x);
  return a / (a + b);
}

double bump_margin(int n) { return std::ldexp(1.0, -(n + 2)); }

double psi(int n, Point2 u) {
  if (n == kInfiniteOrder) {
    if (!(u.x >= 0.0 && u.x <= 1.0 && u.y >= 0.0 && u.y <= 1.0)) {
      throw DomainError("psi_inf: argument outside [0,1]^2");
    }
    const bool interior = u.x > 0.0 && u.x < 1.0 && u.y > 0.0 && u.y < 1.0;
    return interior ? 2.0 : 1.0;
  }
  if (n < 0) throw DomainError("psi: negative order");
  if (!(u.x > -1.0 && u.x < 2.0 && u.y > -1.0 && u.y < 2.0)) {
    throw DomainError("psi: argument outside (-1,2)^2");
  }
  const double s = bump_margin(n);
  return 1.0 + edge_profile(u.x, s) * edge_profile(u.y, s);
}

// ---------------------------------------------------------------------------
// CalibrationSchedule

CalibrationSchedule::CalibrationSchedule(std::vector<int> orders) : orders_(std::move(orders)) {
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (orders_[i] < 0) throw DomainError("calibration schedule: negative order");
    if (i > 0 && orders_[i] <= orders_[i - 1]) {
      throw DomainError("calibration schedule must be strictly increasing");
    }
  }
}

CalibrationSchedule CalibrationSchedule::a_priori(int k_max) {
  std::vector<int> orders;
  for (int k = 0; k <= k_max; ++k) orders.push_back(2 * k + 3);
  return CalibrationSchedule(std::move(orders));
}

int CalibrationSchedule::order_for_shell(int level) const {
  if (orders_.empty()) throw DomainError("calibration schedule is empty");
  if (level < 0) throw DomainError("shell level must be non-negative");
  const auto last = static_cast<int>(orders_.size()) - 1;
  if (level <= last) return orders_[static_cast<std::size_t>(level)];
  return orders_.back() + (level - last);
}

int CalibrationSchedule::order_for(const DyadicIndex& q) const {
  const auto level = shell_index(q);
  return level ? order_for_shell(*level) : 0;
}

void CalibrationSchedule::append(const CalibrationRecord& record) {
  if (record.k != static_cast<int>(orders_.size())) {
    throw DomainError("calibration records must be appended in order of k");
  }
  if (!orders_.empty() && record.n <= orders_.back()) {
    throw DomainError("calibration schedule must be strictly increasing");
  }
  orders_.push_back(record.n);
  records_.push_back(record);
}

std::string CalibrationSchedule::to_json() const {
  nlohmann::json doc;
  doc["orders"] = orders_;
  auto& recs = doc["records"] = nlohmann::json::array();
  for (const auto& r : records_) {
    recs.push_back({{"k", r.k},
                    {"n", r.n},
                    {"margin", r.margin},
                    {"sample_pairs", r.sample_pairs},
                    {"worst_slack", r.worst_slack},
                    {"solver_tolerance", r.solver_tolerance},
                    {"grid_spacing", r.grid_spacing}});
  }
  return doc.dump(2);
}

CalibrationSchedule CalibrationSchedule::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration schedule: ") + e.what());
  }
  if (!doc.contains("orders")) throw ConfigError("calibration schedule: missing 'orders'");
  CalibrationSchedule out(doc.at("orders").get<std::vector<int>>());
  if (doc.contains("records")) {
    for (const auto& r : doc.at("records")) {
      CalibrationRecord rec;
      rec.k = r.at("k").get<int>();
      rec.n = r.at("n").get<int>();
      rec.margin = r.at("margin").get<double>();
      rec.sample_pairs = r.at("sample_pairs").get<std::size_t>();
      rec.worst_slack = r.at("worst_slack").get<double>();
      rec.solver_tolerance = r.at("solver_tolerance").get<double>();
      rec.grid_spacing = r.at("grid_spacing").get<double>();
      out.records_.push_back(rec);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// WeightField

WeightField WeightField::constant(double c) {
  if (!(c >= 1.0 && c <= 2.0)) throw DomainError("constant weight must lie in [1,2]");
  WeightField f;
  f.kind_ = Kind::kConstant;
  f.c_ = c;
  f.lo_ = f.hi_ = c;
  return f;
}

WeightField WeightField::rho_infinity() {
  WeightField f;
  f.kind_ = Kind::kRhoInfinity;
  return f;
}

WeightField WeightField::rho_kn(int k, int n) {
  if (k < 0 || n < 0) throw DomainError("rho_kn: k and n must be non-negative");
  WeightField f;
  f.kind_ = Kind::kRhoKN;
  f.k_ = k;
  f.n_ = n;
  return f;
}

WeightField WeightField::rho_final(std::shared_ptr<const CalibrationSchedule> schedule) {
  if (!schedule || schedule->empty()) throw DomainError("rho_final: empty calibration schedule");
  WeightField f;
  f.kind_ = Kind::kRhoFinal;
  f.schedule_ = std::move(schedule);
  return f;
}

WeightField WeightField::analytic(std::string name, std::function<double(Point2)> fn, double lo, double hi) {
  if (!fn) throw DomainError("analytic weight: empty callable");
  if (!(lo > 0.0 && hi >= lo)) throw DomainError("analytic weight: need 0 < lo <= hi");
  WeightField f;
  f.kind_ = Kind::kAnalytic;
  f.lo_ = lo;
  f.hi_ = hi;
  f.name_ = std::move(name);
  f.fn_ = std::make_shared<const std::function<double(Point2)>>(std::move(fn));
  return f;
}

double WeightField::operator()(Point2 p) const {
  switch (kind_) {
    case Kind::kConstant:
      return c_;
    case Kind::kAnalytic:
      return (*fn_)(p);
    default:
      return at(p, locate(p));
  }
}

double WeightField::at(Point2 p, const Locus& locus) const {
  switch (kind_) {
    case Kind::kConstant:
      return c_;
    case Kind::kAnalytic:
      return (*fn_)(p);
    case Kind::kRhoInfinity:
      return locus.in_square() ? 2.0 : 1.0;
    case Kind::kRhoKN:
      if (!in_box(p, k_)) throw DomainError("rho_kn evaluated outside N_k");
      return locus.in_square() ? psi(n_, locus.local) : 1.0;
    case Kind::kRhoFinal:
      return locus.in_square() ? psi(schedule_->order_for(locus.square), locus.local) : 1.0;
  }
  return 1.0;
}

std::string WeightField::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kConstant:
      os << "constant(" << c_ << ")";
      break;
    case Kind::kRhoInfinity:
      os << "rho_inf";
      break;
    case Kind::kRhoKN:
      os << "rho_kn(k=" << k_ << ",n=" << n_ << ")";
      break;
    case Kind::kRhoFinal:
      os << "rho_final(levels=" << schedule_->orders().size() << ")";
      break;
    case Kind::kAnalytic:
      os << "analytic(" << name_ << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Calibration

std::vector<Point2> FieldDistanceSolver::snap(int /*level*/, std::span<const Point2> points) const {
  return {points.begin(), points.end()};
}

std::vector<Point2> skeleton_corners(int k) {
  std::set<std::pair<double, double>> seen;
  const double r = box_radius(k);
  for (double sx : {-r, r}) {
    for (double sy : {-r, r}) seen.insert({sx, sy});
  }
  for (int depth = 1; depth <= 3; ++depth) {
    for (const auto& q : whitney_family(-k - depth)) {
      for (double x : {q.x_lo(), q.x_hi()}) {
        for (double y : {q.y_lo(), q.y_hi()}) seen.insert({x, y});
      }
    }
  }
  std::vector<Point2> out;
  out.reserve(seen.size());
  for (const auto& [x, y] : seen) out.push_back({x, y});
  return out;
}

CalibrationRecord calibrate(int k, int previous_order, const FieldDistanceSolver& solver,
                            const CalibrationOptions& options) {
  if (k < 0) throw DomainError("calibrate: k must be non-negative");
  const double margin = options.margin > 0.0 ? options.margin : std::pow(4.0, -(k + 2));
  std::function<WeightField(int, int)> candidate = options.candidate;
  if (!candidate) candidate = [](int kk, int nn) { return WeightField::rho_kn(kk, nn); };

  // Sample pool: skeleton corners interleaved with seeded uniform points.
  std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1)));
  const double r = box_radius(k);
  std::uniform_real_distribution<double> coord(-r, r);
  const auto corners = skeleton_corners(k);
  auto draw = [&](std::size_t count, std::size_t corner_offset) {
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < count; ++i) {
      if (i % 2 == 0 && !corners.empty()) {
        pts.push_back(corners[(corner_offset + i * 7) % corners.size()]);
      } else {
        pts.push_back({coord(rng), coord(rng)});
      }
    }
    return solver.snap(k, pts);
  };
  const auto sources = draw(options.sources, 0);
  const auto targets = draw(options.targets, 3);

  const auto reference = solver.all_pairs(WeightField::rho_infinity(), k, sources, targets);

  int n = previous_order < 0 ? 0 : previous_order + 1;
  for (; n <= options.max_order; ++n) {
    const auto batch = solver.all_pairs(candidate(k, n), k, sources, targets);
    const double tol = std::max(batch.tolerance, reference.tolerance);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < batch.distances.size(); ++i) {
      const double slack = batch.distances[i] - reference.distances[i] + margin - 2.0 * tol;
      if (slack < worst) {
        worst = slack;
        worst_index = i;
      }
    }
    if (worst >= 0.0) {
      CalibrationRecord rec;
      rec.k = k;
      rec.n = n;
      rec.margin = margin;
      rec.sample_pairs = batch.distances.size();
      rec.worst_slack = worst;
      rec.solver_tolerance = tol;
      rec.grid_spacing = batch.spacing;
      return rec;
    }
    if (n == options.max_order) {
      const auto& a = sources[worst_index / targets.size()];
      const auto& b = targets[worst_index % targets.size()];
      std::ostringstream os;
      os << "calibrate: k=" << k << " not satisfied up to n=" << n << "; worst pair (" << a.x << "," << a.y
         << ")-(" << b.x << "," << b.y << ") slack " << worst;
      throw CalibrationError(os.str());
    }
  }
  throw CalibrationError("calibrate: empty order range");
}

CalibrationSchedule calibrate_schedule(int k_max, const FieldDistanceSolver& solver,
                                       const CalibrationOptions& options) {
  CalibrationSchedule schedule;
  int previous = -1;
  for (int k = 0; k <= k_max; ++k) {
    const auto rec = calibrate(k, previous, solver, options);
    schedule.append(rec);
    previous = rec.n;
  }
  return schedule;
}

}  // namespace tangentlab
