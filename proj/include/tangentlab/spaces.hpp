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

// The concrete spaces: fat Cantor square, weighted plane measure, grid.
#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangentlab/dyadic.hpp"
#include "tangentlab/geodesic.hpp"
#include "tangentlab/tangent.hpp"

namespace tangentlab {

/// Depth-D fat Cantor set: step n removes the centred open interval of length
/// 4^-n from each of the 2^(n-1) current intervals. Endpoints are stored as
/// integers over 2^(2D+1), so every value is exact.
class FatCantorSet {
 public:
  static constexpr int kMaxDepth = 25;

  explicit FatCantorSet(int depth);

  int depth() const { return depth_; }
  std::int64_t denominator() const { return denominator_; }
  /// Closed kept intervals as integer numerator pairs, sorted.
  const std::vector<std::pair<std::int64_t, std::int64_t>>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  double lo(std::size_t i) const;
  double hi(std::size_t i) const;

  /// Kept length as numerator over denominator().
  std::int64_t kept_numerator() const;
  double kept_length() const;
  /// Fraction of every depth-D interval that later steps remove: 1/(2^D + 1).
  double future_fraction() const;

  bool contains(double x) const;
  /// |[a,b] ∩ C_D|.
  double measure_in(double a, double b) const;
  /// Upper bound on |[a,b] ∩ (C_D \ C_inf)|.
  double future_removed_in(double a, double b) const;
  /// Midpoint of interval i (a density point of the limit set).
  double midpoint(std::size_t i) const;

  void write_csv(std::ostream& out) const;

 private:
  int depth_;
  std::int64_t denominator_;
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals_;
  std::vector<double> prefix_;  // prefix_[i] = kept length of intervals [0, i)
};

/// X = C x C with the ell^1 distance and Lebesgue measure.
class CantorSquareSpace {
 public:
  explicit CantorSquareSpace(int depth) : set_(depth) {}
  const FatCantorSet& set() const { return set_; }
  int depth() const { return set_.depth(); }
  bool contains(Point2 p) const { return set_.contains(p.x) && set_.contains(p.y); }
  double distance(Point2 a, Point2 b) const { return norm1(a - b); }
  double total_measure() const { return set_.kept_length() * set_.kept_length(); }

 private:
  FatCantorSet set_;
};

struct MeasureBracket {
  double value = 0.0;  // depth-D measure
  double lower = 0.0;  // lower bound for the limit set
  double upper = 0.0;  // upper bound for the limit set (= value)
};

/// L^2(X_D ∩ B_r^{ell^1}(a)) by exact section integration, with a bracket for
/// the limit set.
MeasureBracket cantor_ball_measure(const CantorSquareSpace& space, Point2 a, double r);

struct AhlforsReport {
  double min_ratio = 0.0;  // min of lower bound / r^Q
  double max_ratio = 0.0;  // max of upper bound / r^Q
  std::size_t evaluations = 0;
  Point2 argmin;
  double argmin_radius = 0.0;
};

using BallMeasure = std::function<MeasureBracket(Point2, double)>;

AhlforsReport ahlfors_report(const BallMeasure& measure, std::span<const Point2> centers,
                             std::span<const double> radii, double exponent);

/// X = (Z x R) ∪ (R x Z) with the sup distance and length measure.
struct GridSpace {
  static bool contains(Point2 p) { return p.x == std::floor(p.x) || p.y == std::floor(p.y); }
  static double distance(Point2 a, Point2 b) { return norm_inf(a - b); }
  /// Length of X in the open sup-ball of radius rho about 0.
  static double ball_measure(double rho);
  /// Sup distance from q to X scaled by 1/s, i.e. to the lines of spacing 1/s.
  static double distance_to_scaled(Point2 q, double s);
};

struct GridBallCounts {
  std::int64_t open_ball = 0;       // m(B_L(0)) = 8L^2 - 4L
  std::int64_t open_ball_next = 0;  // m(B_{L+1}(0)) = 8L^2 + 12L + 4
};

GridBallCounts grid_ball_measure(std::int64_t L);

struct GridErrorTerms {
  double a = 0.0;  // m(B_{floor(R Rk)+1} \ S_k) = 20 floor(R Rk) - 18
  double b = 0.0;  // 8R((2Rk)^-1 + R - floor(R Rk)/Rk)
  double c = 0.0;  // 8 floor(Rk)^2 - 4 floor(Rk)
};

GridErrorTerms grid_error_terms(double Rk, double R);

/// m(B_Rk)^-1 int_{B_{R Rk}(0)} f(a / Rk) dm(a), by line integrals along every
/// grid line meeting the window.
struct GridFunctional {
  double value = 0.0;
  double quadrature_error = 0.0;
  double normalizing_mass = 0.0;
  std::size_t lines = 0;
};

GridFunctional grid_asymptotic_functional(const TestFunction& f, double Rk, double R);

struct ConeRow {
  double Rk = 0.0;
  double distortion = 0.0;
  double coverage_gap = 0.0;
  double coverage_bound = 0.0;
  GridErrorTerms terms;
  std::vector<std::string> functions;
  std::vector<double> functional;
  std::vector<double> limit_integral;  // density * int f
  std::vector<double> discrepancy;
  std::vector<double> abs_integral;    // int |f| dL^2
};

struct ConeReport {
  double density = 0.125;
  double R = 2.0;
  std::vector<ConeRow> rows;
  HilbertVerdict verdict;
};

/// Per-Rk comparison of the rescaled grid with (R^2, sup norm, density L^2).
ConeReport asymptotic_cone_report(std::span<const double> ladder, std::span<const TestFunction> tests, double R = 2.0,
                                  double density = 0.125, std::size_t distortion_samples = 256);

void write_grid_counts_csv(std::ostream& out, std::int64_t max_L);

}  // namespace tangentlab
