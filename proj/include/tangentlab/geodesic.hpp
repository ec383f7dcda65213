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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tangentlab/dyadic.hpp"
#include "tangentlab/weight_field.hpp"

namespace tangentlab {

enum class Stencil { k8 = 8, k16 = 16 };

/// Half of the neighbour offsets of a stencil; the other half are their negatives.
std::span<const std::array<int, 2>> forward_offsets(Stencil stencil);

/// Worst-case relative excess of the cheapest stencil path over the straight
/// segment under a constant weight: for each angular sector spanned by two
/// consecutive stencil vectors u, w the excess is |c| - 1 where c solves
/// c.u = |u|, c.w = |w|.
double stencil_distortion(Stencil stencil);

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  static Rect box(int level) {
    const double r = box_radius(level);
    return {-r, -r, r, r};
  }
  static Rect centered(Point2 c, double half) { return {c.x - half, c.y - half, c.x + half, c.y + half}; }
  bool contains(Point2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

using Polyline = std::vector<Point2>;

/// Weighted length of a polyline by composite midpoint quadrature with
/// sub-segments no longer than quadrature_step.
double curve_length(std::span<const Point2> polyline, const WeightField& field, double quadrature_step);

inline constexpr std::size_t kDefaultNodeBudget = std::size_t{1} << 21;

/// Uniform lattice over a rectangle with stencil edges weighted by the
/// quadrature of the field along each straight segment. Immutable after build.
///
/// With a power-of-two spacing every skeleton line of a square of side >= h is
/// a lattice line, so the ell^1 skeleton routes are representable exactly.
/// Squares smaller than h are unresolved: quadrature samples inside them count
/// as the field's upper bound, and skeleton samples on slanted segments (a
/// crossing of measure zero) do the same. Both only increase weights.
class GridGraph {
 public:
  static GridGraph build(const Rect& rect, double h, Stencil stencil, WeightField field,
                         std::size_t node_budget = kDefaultNodeBudget);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t node_count() const { return nx_ * ny_; }
  std::size_t edge_count() const;
  double spacing() const { return h_; }
  double quadrature_step() const { return h_ / 4.0; }
  const Rect& rect() const { return rect_; }
  Stencil stencil() const { return stencil_; }
  const WeightField& field() const { return field_; }

  std::size_t id(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }
  Point2 node(std::size_t id) const;

  /// Weight of the forward edge `offset` leaving `id`; +inf when the
  /// neighbour is outside the lattice.
  double edge_weight(std::size_t id, std::size_t offset) const { return weights_[offset * node_count() + id]; }

  /// Quadrature of the field along [a,b] under the graph's sampling policy.
  double segment_weight(Point2 a, Point2 b) const;

  /// Nodes of the 4x4 block around p that query points attach to.
  std::vector<std::size_t> attachment_nodes(Point2 p) const;

  /// Slack from attaching off-lattice query points: each endpoint lies within
  /// h/sqrt2 of a node and the weight is at most upper_bound().
  double attachment_slack() const;

  bool is_node(Point2 p) const;
  Point2 snap(Point2 p) const;

  /// One line per undirected edge: x0,y0,x1,y1,weight.
  void write_csv(std::ostream& out) const;

 private:
  GridGraph() = default;
  double sample(Point2 p, bool axis) const;

  Rect rect_;
  double h_ = 0.0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  Stencil stencil_ = Stencil::k16;
  WeightField field_ = WeightField::constant(1.0);
  std::vector<double> weights_;
};

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct DistanceResult {
  double estimate = 0.0;
  double lower_certificate = 0.0;
  double upper_certificate = 0.0;
  double tolerance = 0.0;
  double spacing = 0.0;
  double quadrature_step = 0.0;
  double stencil_distortion = 0.0;
  Stencil stencil = Stencil::k16;
  std::size_t node_count = 0;
  /// ||a-b||_1 -+ 4^-k for the final weight when both points lie in N_k, k >= 2.
  std::optional<Bracket> l1_bracket;
  int l1_level = -1;
};

/// Graph-optimal path length between two points of the rectangle. Off-lattice
/// endpoints are joined to their attachment nodes by straight segments, so the
/// estimate is the weighted length of an actual curve from a to b.
DistanceResult distance(const GridGraph& graph, Point2 a, Point2 b);

/// Single-source distances from an attached point to every node.
std::vector<double> node_distances(const GridGraph& graph, Point2 source);

/// Distance from the source of `table` to an arbitrary point, via attachment.
double distance_from_table(const GridGraph& graph, std::span<const double> table, Point2 target);

/// Largest power-of-two spacing for which the two-endpoint attachment
/// tolerance under a weight <= 2 is at most 4^-(k+1).
double auto_spacing(int k);

struct SolverOptions {
  double spacing = 0.0;  // <= 0 selects auto_spacing(k)
  Stencil stencil = Stencil::k16;
  std::size_t node_budget = kDefaultNodeBudget;
};

/// Distance computed on N_k only; for a, b in N_(k+2) this equals the
/// unrestricted distance for any weight with values in [1,2].
DistanceResult localized_distance(const WeightField& field, Point2 a, Point2 b, int k,
                                  const SolverOptions& options = {});

/// Explicit curve through the skeleton: an axis-parallel exit from the square
/// of a, a shortest path on the skeleton lattice, and the entry into the
/// square of b. A single-vertex polyline when a == b. Throws DomainError for
/// points outside N_2 and ResourceError when the skeleton lattice needed to
/// resolve the endpoints exceeds node_budget.
Polyline skeleton_route(Point2 a, Point2 b, std::size_t node_budget = kDefaultNodeBudget);

/// Length of a route; zero for fewer than two vertices.
double route_length(const Polyline& route, const WeightField& field);

struct BracketResult {
  Bracket lemma;      // ||a-b||_1 -+ 4^-k
  Bracket certified;  // tightened by the Euclidean bound, the graph, and the route
  double estimate = 0.0;
  double tolerance = 0.0;
  std::optional<double> route_length;
};

/// Two-sided bracket of d_rho(a,b) for the final weight carried by `graph`,
/// which must cover N_k. Throws DomainError for k < 2 or points outside N_k.
BracketResult bracket_distance(const GridGraph& graph, Point2 a, Point2 b, int k);

/// FieldDistanceSolver backed by a GridGraph on N_level with a fixed number
/// of nodes per side.
class GridSolver : public FieldDistanceSolver {
 public:
  explicit GridSolver(std::size_t nodes_per_side = 256, Stencil stencil = Stencil::k16);

  double spacing(int level) const;
  Batch all_pairs(const WeightField& field, int level, std::span<const Point2> sources,
                  std::span<const Point2> targets) const override;
  std::vector<Point2> snap(int level, std::span<const Point2> points) const override;

 private:
  std::size_t nodes_per_side_;
  Stencil stencil_;
};

}  // namespace tangentlab
