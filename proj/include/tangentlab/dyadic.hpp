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
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace tangentlab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
};

inline double norm1(Point2 p) { return std::abs(p.x) + std::abs(p.y); }
inline double norm2(Point2 p) { return std::hypot(p.x, p.y); }
inline double norm_inf(Point2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }

/// True when both coordinates are dyadic rationals, i.e. finite doubles.
/// Every finite double is a dyadic rational; the flag exists for callers
/// that want to assert exact classification rather than float rounding.
inline bool is_exact_dyadic(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// The open square (i 2^k, (i+1) 2^k) x (j 2^k, (j+1) 2^k).
struct DyadicIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;
  int k = 0;

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;

  double side() const { return std::ldexp(1.0, k); }
  double x_lo() const { return std::ldexp(static_cast<double>(i), k); }
  double x_hi() const { return std::ldexp(static_cast<double>(i + 1), k); }
  double y_lo() const { return std::ldexp(static_cast<double>(j), k); }
  double y_hi() const { return std::ldexp(static_cast<double>(j + 1), k); }
  Point2 center() const { return {std::ldexp(static_cast<double>(2 * i + 1), k - 1),
                                  std::ldexp(static_cast<double>(2 * j + 1), k - 1)}; }
};

/// Offsets (i, j) of the twelve Whitney squares at every scale. At scale k
/// they tile the sup-norm annulus 2^k <= |p|_inf <= 2^(k+1).
inline constexpr std::array<std::array<int, 2>, 12> kWhitneyOffsets = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-2, 1}, {-2, 0},
    {-2, -1}, {-2, -2}, {-1, -2}, {0, -2}, {1, -2}, {1, -1},
}};

std::array<DyadicIndex, 12> whitney_family(int k);

bool is_whitney(const DyadicIndex& q);

/// Members of the refined family S: a Whitney square itself when its scale is
/// non-negative, otherwise one of its 4^(-k) children of side 4^k.
bool is_refined(const DyadicIndex& q);

/// Throws DomainError when q is not a Whitney square.
std::vector<DyadicIndex> subdivide(const DyadicIndex& q);

/// The Whitney square a refined square belongs to.
DyadicIndex whitney_parent(const DyadicIndex& q);

struct Locus {
  enum class Kind { kInSquare, kSkeleton, kOrigin };

  Kind kind = Kind::kOrigin;
  DyadicIndex square;  // valid for kInSquare
  Point2 local;        // theta_inv(square, p), valid for kInSquare

  bool in_square() const { return kind == Kind::kInSquare; }
};

/// Classifies p against the refined family: the unique open square of S
/// containing it, the boundary grid R, or the origin. Exact for every finite
/// double input.
Locus locate(Point2 p);

/// True iff the closed square of q lies inside N_level = [-2^-level, 2^-level]^2.
bool inside_box(const DyadicIndex& q, int level);

/// The unique level >= 0 with q inside N_level but not inside N_(level+1), or
/// nullopt when q is not inside N_0. Accepts Whitney squares as well as
/// squares of S; throws DomainError for any other square.
std::optional<int> shell_index(const DyadicIndex& q);

/// Affine chart of the closed unit square onto the closure of q.
/// Throws DomainError for u outside [0,1]^2.
Point2 theta_map(const DyadicIndex& q, Point2 u);
Point2 theta_inv(const DyadicIndex& q, Point2 p);

/// Half-width 2^-level of the box N_level.
inline double box_radius(int level) { return std::ldexp(1.0, -level); }

inline bool in_box(Point2 p, int level) { return norm_inf(p) <= box_radius(level); }

}  // namespace tangentlab
