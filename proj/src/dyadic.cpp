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

#include "tangentlab/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

bool offset_in_family(std::int64_t i, std::int64_t j) {
  return std::any_of(kWhitneyOffsets.begin(), kWhitneyOffsets.end(),
                     [&](const auto& o) { return o[0] == i && o[1] == j; });
}

// Beyond this depth every finite double on the dominant coordinate already
// lies on a line of the refined grid: ulp(2^k) = 2^(k-52) is a multiple of
// the child side 4^k as soon as k <= -52.
constexpr int kFinestResolvedScale = -52;

// Largest child count subdivide() will materialise.
constexpr int kMaxSubdivisionDepth = 12;

}  // namespace

std::array<DyadicIndex, 12> whitney_family(int k) {
  std::array<DyadicIndex, 12> out;
  for (std::size_t n = 0; n < kWhitneyOffsets.size(); ++n) {
    out[n] = DyadicIndex{kWhitneyOffsets[n][0], kWhitneyOffsets[n][1], k};
  }
  return out;
}

bool is_whitney(const DyadicIndex& q) { return offset_in_family(q.i, q.j); }

DyadicIndex whitney_parent(const DyadicIndex& q) {
  if (q.k >= 0) return q;
  if (q.k % 2 != 0) {
    throw DomainError("square of odd negative scale has no Whitney parent");
  }
  const int shift = -q.k / 2;
  // Arithmetic shift is floor division by 2^shift for negative indices too.
  return DyadicIndex{q.i >> shift, q.j >> shift, q.k / 2};
}

bool is_refined(const DyadicIndex& q) {
  if (q.k >= 0) return is_whitney(q);
  if (q.k % 2 != 0) return false;
  return is_whitney(whitney_parent(q));
}

std::vector<DyadicIndex> subdivide(const DyadicIndex& q) {
  if (!is_whitney(q)) {
    throw DomainError("subdivide: square is not a Whitney square");
  }
  if (q.k >= 0) return {q};
  if (-q.k > kMaxSubdivisionDepth) {
    throw ResourceError("subdivide: scale " + std::to_string(q.k) + " yields more than 4^" +
                        std::to_string(kMaxSubdivisionDepth) + " children");
  }
  const int per_side_log = -q.k;  // 2^(-k) children per side
  const std::int64_t per_side = std::int64_t{1} << per_side_log;
  std::vector<DyadicIndex> out;
  out.reserve(static_cast<std::size_t>(per_side * per_side));
  for (std::int64_t a = 0; a < per_side; ++a) {
    for (std::int64_t b = 0; b < per_side; ++b) {
      out.push_back(DyadicIndex{q.i * per_side + a, q.j * per_side + b, 2 * q.k});
    }
  }
  return out;
}

Locus locate(Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw DomainError("locate: non-finite point");
  }
  Locus out;
  const double t = norm_inf(p);
  if (t == 0.0) {
    out.kind = Locus::Kind::kOrigin;
    return out;
  }
  out.kind = Locus::Kind::kSkeleton;

  int e = 0;
  const double mant = std::frexp(t, &e);
  if (mant == 0.5) return out;  // on the boundary of two Whitney annuli
  const int kw = e - 1;         // 2^kw < t < 2^(kw+1)

  const double wx = std::ldexp(p.x, -kw);
  const double wy = std::ldexp(p.y, -kw);
  if (wx == std::floor(wx) || wy == std::floor(wy)) return out;
  const auto wi = static_cast<std::int64_t>(std::floor(wx));
  const auto wj = static_cast<std::int64_t>(std::floor(wy));

  if (kw >= 0) {
    out.kind = Locus::Kind::kInSquare;
    out.square = DyadicIndex{wi, wj, kw};
    out.local = {wx - static_cast<double>(wi), wy - static_cast<double>(wj)};
    return out;
  }
  if (kw <= kFinestResolvedScale) return out;

  const int ks = 2 * kw;
  const double sx = std::ldexp(p.x, -ks);
  const double sy = std::ldexp(p.y, -ks);
  const double fx = std::floor(sx);
  const double fy = std::floor(sy);
  if (sx == fx || sy == fy) return out;
  out.kind = Locus::Kind::kInSquare;
  out.square = DyadicIndex{static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy), ks};
  out.local = {sx - fx, sy - fy};
  return out;
}

bool inside_box(const DyadicIndex& q, int level) {
  const std::int64_t m = std::max({std::abs(q.i), std::abs(q.i + 1), std::abs(q.j), std::abs(q.j + 1)});
  const int e = -level - q.k;  // need m * 2^k <= 2^-level, i.e. m <= 2^e
  if (e < 0) return false;     // m >= 1 > 2^e
  if (e >= 62) return true;
  return m <= (std::int64_t{1} << e);
}

std::optional<int> shell_index(const DyadicIndex& q) {
  if (!is_refined(q) && !is_whitney(q)) {
    throw DomainError("shell_index: square is neither a Whitney nor a refined square");
  }
  const std::int64_t m = std::max({std::abs(q.i), std::abs(q.i + 1), std::abs(q.j), std::abs(q.j + 1)});
  const int ceil_log2 = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(m - 1)));
  const int level = -q.k - ceil_log2;
  if (level < 0) return std::nullopt;
  return level;
}

Point2 theta_map(const DyadicIndex& q, Point2 u) {
  if (!(u.x >= 0.0 && u.x <= 1.0 && u.y >= 0.0 && u.y <= 1.0)) {
    throw DomainError("theta_map: local coordinates outside [0,1]^2");
  }
  return {std::ldexp(static_cast<double>(q.i) + u.x, q.k), std::ldexp(static_cast<double>(q.j) + u.y, q.k)};
}

Point2 theta_inv(const DyadicIndex& q, Point2 p) {
  return {std::ldexp(p.x, -q.k) - static_cast<double>(q.i), std::ldexp(p.y, -q.k) - static_cast<double>(q.j)};
}

}  // namespace tangentlab
