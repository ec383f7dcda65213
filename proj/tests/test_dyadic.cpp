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

#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <random>
#include <set>

#include "tangentlab/dyadic.hpp"
#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

// Brute-force classification: scan every scale and every Whitney offset, then
// the children of side 4^k, testing strict containment directly.
std::optional<DyadicIndex> containing_square(Point2 p) {
  for (int k = -40; k <= 40; ++k) {
    for (const auto& [a, b] : kWhitneyOffsets) {
      const double s = std::ldexp(1.0, k);
      const double x0 = a * s, y0 = b * s;
      if (!(p.x > x0 && p.x < x0 + s && p.y > y0 && p.y < y0 + s)) continue;
      if (k >= 0) return DyadicIndex{a, b, k};
      const double c = std::ldexp(1.0, 2 * k);
      const auto i = static_cast<std::int64_t>(std::floor(p.x / c));
      const auto j = static_cast<std::int64_t>(std::floor(p.y / c));
      if (p.x > i * c && p.x < (i + 1) * c && p.y > j * c && p.y < (j + 1) * c) return DyadicIndex{i, j, 2 * k};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

TEST(WhitneyFamily, HasTwelveDisjointSquares) {
  for (int k = -8; k <= 8; ++k) {
    const auto f = whitney_family(k);
    ASSERT_EQ(f.size(), 12u);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& q : f) {
      EXPECT_EQ(q.k, k);
      EXPECT_TRUE(seen.emplace(q.i, q.j).second);
      EXPECT_TRUE(is_whitney(q));
    }
  }
}

TEST(WhitneyFamily, ContainsDefiningExamples) {
  const auto f0 = whitney_family(0);
  EXPECT_NE(std::find(f0.begin(), f0.end(), DyadicIndex{1, 0, 0}), f0.end());
  EXPECT_DOUBLE_EQ(DyadicIndex({1, 0, 0}).x_lo(), 1.0);
  EXPECT_DOUBLE_EQ(DyadicIndex({1, 0, 0}).x_hi(), 2.0);
  const auto f3 = whitney_family(-3);
  EXPECT_NE(std::find(f3.begin(), f3.end(), DyadicIndex{1, 1, -3}), f3.end());
  EXPECT_EQ(DyadicIndex({1, 1, -3}).x_lo(), 0.125);
  EXPECT_EQ(DyadicIndex({1, 1, -3}).y_hi(), 0.25);
}

TEST(WhitneyFamily, TilesTheAnnulus) {
  // Cell centres of the 4 x 4 grid at scale k with 1 <= |index|_inf-ish <= 2
  // are covered exactly once; the two inner cells are not.
  for (int k = -3; k <= 3; ++k) {
    const auto f = whitney_family(k);
    for (int i = -2; i < 2; ++i) {
      for (int j = -2; j < 2; ++j) {
        const bool inner = i >= -1 && i <= 0 && j >= -1 && j <= 0;
        int count = 0;
        for (const auto& q : f) count += (q.i == i && q.j == j);
        EXPECT_EQ(count, inner ? 0 : 1) << i << "," << j << " k=" << k;
      }
    }
  }
}

TEST(Subdivide, CountsAndSides) {
  const auto s0 = subdivide({1, 0, 0});
  ASSERT_EQ(s0.size(), 1u);
  EXPECT_EQ(s0.front(), (DyadicIndex{1, 0, 0}));
  const auto s1 = subdivide({1, 0, -1});
  ASSERT_EQ(s1.size(), 4u);
  for (const auto& q : s1) EXPECT_EQ(q.side(), 0.25);
  const auto s2 = subdivide({1, 1, -2});
  ASSERT_EQ(s2.size(), 16u);
  for (const auto& q : s2) EXPECT_EQ(q.side(), 1.0 / 16.0);
  EXPECT_THROW(subdivide({0, 0, 0}), DomainError);
}

TEST(Subdivide, ChildrenPartitionTheParent) {
  for (int k = -8; k <= 8; ++k) {
    for (const auto& q : whitney_family(k)) {
      const auto kids = subdivide(q);
      ASSERT_EQ(kids.size(), k >= 0 ? 1u : static_cast<std::size_t>(std::llround(std::ldexp(1.0, -2 * k))));
      double area = 0.0;
      std::set<std::pair<std::int64_t, std::int64_t>> seen;
      for (const auto& c : kids) {
        EXPECT_GE(c.x_lo(), q.x_lo());
        EXPECT_LE(c.x_hi(), q.x_hi());
        EXPECT_GE(c.y_lo(), q.y_lo());
        EXPECT_LE(c.y_hi(), q.y_hi());
        EXPECT_TRUE(seen.emplace(c.i, c.j).second);
        EXPECT_TRUE(is_refined(c));
        EXPECT_EQ(whitney_parent(c), q);
        area += c.side() * c.side();
      }
      EXPECT_EQ(area, q.side() * q.side());
    }
  }
}

TEST(Locate, Examples) {
  const auto a = locate({1.5, 0.5});
  ASSERT_TRUE(a.in_square());
  EXPECT_EQ(a.square, (DyadicIndex{1, 0, 0}));
  EXPECT_EQ(a.local, (Point2{0.5, 0.5}));
  EXPECT_EQ(locate({1.0, 0.5}).kind, Locus::Kind::kSkeleton);
  EXPECT_EQ(locate({0.0, 0.0}).kind, Locus::Kind::kOrigin);
  const auto b = locate({0.15, 0.15});
  ASSERT_TRUE(b.in_square());
  EXPECT_EQ(b.square, (DyadicIndex{9, 9, -6}));
  EXPECT_NEAR(b.local.x, 0.6, 1e-12);
  EXPECT_NEAR(b.local.y, 0.6, 1e-12);
}

TEST(Locate, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-14, 3);
  for (int t = 0; t < 200000; ++t) {
    Point2 p{std::ldexp(mant(rng), expo(rng)), std::ldexp(mant(rng), expo(rng))};
    if (t % 5 == 0) p.x = std::ldexp(std::round(std::ldexp(p.x, 12)), -12);  // dyadic, often on the grid
    const auto l = locate(p);
    const auto oracle = containing_square(p);
    if (p.x == 0.0 && p.y == 0.0) {
      EXPECT_EQ(l.kind, Locus::Kind::kOrigin);
    } else if (oracle) {
      ASSERT_TRUE(l.in_square()) << p.x << "," << p.y;
      EXPECT_EQ(l.square, *oracle);
      EXPECT_GT(p.x, l.square.x_lo());
      EXPECT_LT(p.x, l.square.x_hi());
      EXPECT_GT(p.y, l.square.y_lo());
      EXPECT_LT(p.y, l.square.y_hi());
    } else {
      EXPECT_EQ(l.kind, Locus::Kind::kSkeleton) << p.x << "," << p.y;
    }
  }
}

TEST(Locate, WhitneyScaleWithinAnnulusWindow) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100000; ++t) {
    const Point2 p{u(rng) * 0.01, u(rng) * 0.01};
    const auto l = locate(p);
    if (!l.in_square()) continue;
    const int m = static_cast<int>(std::floor(-std::log2(norm_inf(p))));
    const int k = whitney_parent(l.square).k;
    EXPECT_GE(k, -m - 2);
    EXPECT_LE(k, -m);
  }
}

TEST(ShellIndex, Examples) {
  EXPECT_EQ(shell_index({1, 0, 0}), std::nullopt);
  EXPECT_EQ(shell_index({1, 1, -2}), std::optional<int>(1));
  EXPECT_EQ(shell_index(subdivide({1, 1, -2}).front()), std::optional<int>(1));
  EXPECT_THROW(shell_index({0, 0, -2}), DomainError);
  EXPECT_EQ(shell_index({9, 9, -6}), std::optional<int>(2));
}

TEST(ShellIndex, SquaresInShellAreSmall) {
  // Every refined square inside N_k has side at most 4^-(k+1).
  for (int k = -8; k <= -1; ++k) {
    for (const auto& q : whitney_family(k)) {
      for (const auto& c : subdivide(q)) {
        const auto s = shell_index(c);
        if (!s) continue;
        EXPECT_TRUE(inside_box(c, *s));
        EXPECT_FALSE(inside_box(c, *s + 1));
        EXPECT_LE(c.side(), std::pow(4.0, -(*s + 1)));
      }
    }
  }
}

TEST(ThetaMap, CornersCentresAndInverse) {
  EXPECT_EQ(theta_map({1, 0, 0}, {0.0, 0.0}), (Point2{1.0, 0.0}));
  EXPECT_EQ(theta_map({9, 9, -6}, {0.5, 0.5}), (Point2{9.5 / 64.0, 9.5 / 64.0}));
  const DyadicIndex q{-7, 3, -5};
  EXPECT_EQ(theta_inv(q, theta_map(q, {0.25, 0.75})), (Point2{0.25, 0.75}));
  EXPECT_THROW(theta_map(q, {1.5, 0.0}), DomainError);
}

}  // namespace
}  // namespace tangentlab
