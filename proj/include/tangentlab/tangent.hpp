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

// Blow-up diagnostics: rescaling, distortion and coverage against a normed
// plane, measure comparison, pointwise norms and the parallelogram test.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangentlab/dyadic.hpp"

namespace tangentlab {

/// A norm (or seminorm) on the plane.
struct Norm {
  std::string name;
  std::function<double(Point2)> eval;
  double operator()(Point2 v) const { return eval(v); }
};

Norm l1_norm();
Norm l2_norm();
Norm linf_norm();
/// ell^p for p >= 1; p = +inf gives ell^inf.
Norm lp_norm(double p);
Norm scaled_norm(const Norm& base, double factor);

using PointDistance = std::function<double(Point2, Point2)>;

/// Finite sample of a pointed metric measure space, in chart coordinates.
struct PointedSampledSpace {
  std::vector<Point2> points;
  std::vector<double> weights;  // measure carried by each point
  std::size_t base = 0;
  PointDistance distance;
  double tolerance = 0.0;       // absolute accuracy of `distance`
  double distance_scale = 1.0;  // reported distances are distance / distance_scale

  double dist(std::size_t i, std::size_t j) const;
  /// Total weight of points at (scaled) distance < radius from point i.
  double ball_mass(std::size_t i, double radius) const;
};

/// Distances divided by r, measure normalized by the mass of B_r(x).
PointedSampledSpace rescale(const PointedSampledSpace& space, std::size_t x, double r);

struct DistortionReport {
  double scale = 0.0;
  double window = 0.0;
  double epsilon = 0.0;  // sup |d(y,z) - |y-z|| / r over sampled pairs
  std::size_t pair_count = 0;
  std::size_t window_size = 0;
  double worst_pair_separation = 0.0;
  double tolerance = 0.0;  // oracle tolerance divided by r
  std::optional<double> coverage_gap;
  double coverage_pitch = 0.0;
  std::vector<std::pair<std::string, double>> measure_discrepancies;
  std::uint64_t seed = 0;
};

struct DistortionOptions {
  /// When non-empty, only pairs with one end among these indices are used.
  std::vector<std::size_t> anchors;
  /// Probe pitch (target units) for the coverage gap; <= 0 skips it.
  double coverage_pitch = 0.0;
  std::uint64_t seed = 0;
};

/// Compares the space near its basepoint x with (R^2, target) under the chart
/// a -> (a - x) / r, on the window B_{R r}(x).
DistortionReport distortion_vs_norm(const PointedSampledSpace& space, double r, double R, const Norm& target,
                                    const DistortionOptions& options = {});

/// Smallest eps such that every probe q with |q| < R - eps lies within eps of
/// the image, taken over probes of the given pitch in [-R, R]^2. Closed form:
/// max over probes of min(dist(q, image), R - |q|).
double coverage_gap(std::span<const Point2> image, double R, const Norm& target, double pitch);
/// Same, with the distance to the image supplied as an oracle.
double coverage_gap(const std::function<double(Point2)>& distance_to_image, double R, const Norm& target,
                    double pitch);

/// Bounded continuous test function supported in the sup-norm ball of radius
/// `support`. Separable functions f(x, y) = g(x) g(y) expose g and its
/// integral so line integrals can be taken in closed form.
struct TestFunction {
  std::string name;
  std::function<double(Point2)> eval;
  double support = 0.0;
  double sup_bound = 0.0;
  std::function<double(double)> profile;
  std::function<double(double, double)> profile_integral;  // int_a^b g
};

/// (1 - |x|/w)_+ (1 - |y|/w)_+.
TestFunction tent_function(double w);
/// (1 - x^2/w^2)_+ (1 - y^2/w^2)_+.
TestFunction quadratic_bump(double w);

/// int f * density over the plane by nested adaptive Simpson; density
/// defaults to 1.
double integrate(const TestFunction& f, const std::function<double(Point2)>& density = {}, double tol = 1e-10);
/// int_a^b g by adaptive Simpson.
double integrate_line(const std::function<double(double)>& g, double a, double b, double tol = 1e-10);
/// int |f| dL^2.
double integrate_abs(const TestFunction& f, double tol = 1e-10);

/// |sum_i w_i f(p_i) - int f density| for each test function.
std::vector<double> measure_compare(std::span<const Point2> points, std::span<const double> weights,
                                    const std::function<double(Point2)>& density,
                                    std::span<const TestFunction> tests);

struct NormEstimate {
  std::vector<Point2> directions;  // Euclidean unit vectors
  std::vector<double> values;
  std::vector<double> uncertainty;
  std::vector<double> radii;
  /// Evaluates the estimate at any vector by linear interpolation in angle.
  double operator()(Point2 v) const;
  Norm as_norm() const;
  double max_uncertainty() const;
};

/// `count` Euclidean unit vectors at equal angles starting from (1, 0).
std::vector<Point2> unit_directions(std::size_t count);
/// r0, r0/2, ..., count radii.
std::vector<double> radius_ladder(double r0, std::size_t count, double ratio = 0.5);

/// For each direction v fits d(x + r v, x) / r = a + b r over the radii and
/// reports the intercept a.
NormEstimate estimate_pointwise_norm(const PointDistance& distance, Point2 x, std::span<const Point2> directions,
                                     std::span<const double> radii, double tolerance = 0.0, double resolution = 0.0);

/// sup over pairs of |d(y,z) - |y - z|_candidate| / d(y,z).
double first_order_defect(const PointDistance& distance, std::span<const Point2> points, const Norm& candidate);

struct SeminormDistance {
  double value = 0.0;          // sup over the grid
  double modulus_bound = 0.0;  // value <= true distance <= value + modulus_bound
};

/// sup_{|v|_2 = 1} |n1(v) - n2(v)| on a uniform angular grid.
SeminormDistance seminorm_distance(const Norm& n1, const Norm& n2, std::size_t grid = 4096);

struct HilbertVerdict {
  bool hilbert = false;
  double defect = 0.0;
  double threshold = 0.0;
  Point2 u;
  Point2 v;
};

/// max |N(u+v)^2 + N(u-v)^2 - 4| over N-unit u, v at `directions` angles;
/// Hilbert iff the defect is at most tol plus `uncertainty`.
HilbertVerdict hilbertianity_verdict(const Norm& norm, double tol, std::size_t directions = 64,
                                     double uncertainty = 0.0);
/// Same for an estimated norm, with its uncertainty propagated.
HilbertVerdict hilbertianity_verdict(const NormEstimate& estimate, double tol, std::size_t directions = 64);

std::string to_json(const DistortionReport& report);
std::string to_json(const NormEstimate& estimate);

}  // namespace tangentlab
