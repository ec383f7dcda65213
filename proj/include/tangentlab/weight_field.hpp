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

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tangentlab/dyadic.hpp"

namespace tangentlab {

/// Order value selecting the discontinuous limit profile psi_inf.
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

/// C-infinity step: 0 on (-inf, 1/2], 1 on [1, inf), built from exp(-1/z).
double smooth_step(double x);

/// Inner margin s = 2^-(n+2) of the bump of order n, in unit-square units.
double bump_margin(int n);

/// Bump of order n on (-1,2)^2: 1 + g(u) g(v) with g(t) = step(t/s) step((1-t)/s).
/// Equal to 1 within s/2 of the unit-square boundary, 2 on [s, 1-s]^2, and
/// non-decreasing in n. With n == kInfiniteOrder evaluates the limit profile
/// (1 on the boundary of [0,1]^2, 2 inside); that profile is only defined on
/// the closed unit square.
double psi(int n, Point2 u);

struct CalibrationRecord {
  int k = 0;
  int n = 0;
  double margin = 0.0;
  std::size_t sample_pairs = 0;
  double worst_slack = 0.0;
  double solver_tolerance = 0.0;
  double grid_spacing = 0.0;
};

/// Strictly increasing bump orders n(0) < n(1) < ... indexed by shell level.
class CalibrationSchedule {
 public:
  CalibrationSchedule() = default;
  explicit CalibrationSchedule(std::vector<int> orders);

  /// n(k) = 2k + 3 for k <= k_max. Not verified by sampling; calibrate()
  /// produces the checked schedule.
  static CalibrationSchedule a_priori(int k_max);

  /// n(level). Past the last stored level the schedule continues with slope
  /// one so it stays strictly increasing.
  int order_for_shell(int level) const;

  /// m(Q): n(shell) for squares inside N_0, 0 for the rest.
  int order_for(const DyadicIndex& q) const;

  void append(const CalibrationRecord& record);

  const std::vector<int>& orders() const { return orders_; }
  const std::vector<CalibrationRecord>& records() const { return records_; }
  bool empty() const { return orders_.empty(); }

  std::string to_json() const;
  static CalibrationSchedule from_json(const std::string& text);

 private:
  std::vector<int> orders_;
  std::vector<CalibrationRecord> records_;
};

/// An evaluatable conformal weight. Values of every variant lie in
/// [lower_bound(), upper_bound()], which is [1,2] for the dyadic variants.
class WeightField {
 public:
  enum class Kind { kConstant, kRhoInfinity, kRhoKN, kRhoFinal, kAnalytic };

  static WeightField constant(double c);
  static WeightField rho_infinity();
  /// rho^k_n, defined on N_k only.
  static WeightField rho_kn(int k, int n);
  static WeightField rho_final(std::shared_ptr<const CalibrationSchedule> schedule);
  /// A caller-supplied continuous weight with known range [lo, hi], lo > 0.
  static WeightField analytic(std::string name, std::function<double(Point2)> fn, double lo, double hi);

  /// Throws DomainError for rho^k_n outside N_k.
  double operator()(Point2 p) const;

  /// Same as operator() for a point whose locus is already known.
  double at(Point2 p, const Locus& locus) const;

  Kind kind() const { return kind_; }
  bool dyadic() const { return kind_ == Kind::kRhoInfinity || kind_ == Kind::kRhoKN || kind_ == Kind::kRhoFinal; }
  double lower_bound() const { return lo_; }
  double upper_bound() const { return hi_; }
  int level() const { return k_; }
  int order() const { return n_; }
  const CalibrationSchedule* schedule() const { return schedule_.get(); }
  std::string describe() const;

 private:
  WeightField() = default;

  Kind kind_ = Kind::kConstant;
  double c_ = 1.0;
  double lo_ = 1.0;
  double hi_ = 2.0;
  int k_ = 0;
  int n_ = 0;
  std::shared_ptr<const CalibrationSchedule> schedule_;
  std::shared_ptr<const std::function<double(Point2)>> fn_;
  std::string name_;
};

/// Distances restricted to N_level, as computed by some numerical solver.
class FieldDistanceSolver {
 public:
  struct Batch {
    std::vector<double> distances;  // row-major, sources x targets
    double tolerance = 0.0;
    double spacing = 0.0;
  };

  virtual ~FieldDistanceSolver() = default;

  virtual Batch all_pairs(const WeightField& field, int level, std::span<const Point2> sources,
                          std::span<const Point2> targets) const = 0;

  /// Moves sample points onto solver nodes so node-to-node distances carry no
  /// snapping error. Identity by default.
  virtual std::vector<Point2> snap(int level, std::span<const Point2> points) const;
};

struct CalibrationOptions {
  /// <= 0 selects the default 4^-(k+2).
  double margin = 0.0;
  std::size_t sources = 6;
  std::size_t targets = 48;
  std::uint64_t seed = 1;
  int max_order = 40;
  /// Field family tested against rho_inf; rho_kn when empty.
  std::function<WeightField(int k, int n)> candidate;
};

/// Smallest n > previous_order (or n >= 0 when previous_order < 0) for which
/// d_{candidate(k,n)} >= d_{rho_inf} - margin holds on the sampled pairs of
/// N_k with twice the solver tolerance subtracted from the slack. Throws
/// CalibrationError naming the worst pair when max_order is reached.
CalibrationRecord calibrate(int k, int previous_order, const FieldDistanceSolver& solver,
                            const CalibrationOptions& options);

/// calibrate() for k = 0..k_max in order.
CalibrationSchedule calibrate_schedule(int k_max, const FieldDistanceSolver& solver,
                                       const CalibrationOptions& options);

/// Skeleton vertices used as calibration samples: corners of the Whitney
/// squares in the three outermost annuli of N_k plus the corners of N_k.
std::vector<Point2> skeleton_corners(int k);

}  // namespace tangentlab
