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
#include <numeric>
#include <random>
#include <sstream>

#include "tangentlab/errors.hpp"
#include "tangentlab/spaces.hpp"

namespace tangentlab {
namespace {

TEST(FatCantor, KeptLengths) {
  EXPECT_EQ(FatCantorSet(0).size(), 1u);
  EXPECT_EQ(FatCantorSet(0).kept_length(), 1.0);
  EXPECT_EQ(FatCantorSet(1).size(), 2u);
  EXPECT_EQ(FatCantorSet(1).kept_length(), 0.75);
  for (int d = 0; d <= 20; ++d) {
    // 1 - sum_{n<=d} 2^(n-1) 4^-n, accumulated in exact binary fractions.
    double removed = 0.0;
    for (int n = 1; n <= d; ++n) removed += std::ldexp(1.0, -n - 1);
    EXPECT_EQ(FatCantorSet(d).kept_length(), 1.0 - removed) << d;
  }
  EXPECT_NEAR(FatCantorSet(25).kept_length(), 0.5, 1e-7);
  EXPECT_THROW(FatCantorSet(26), DomainError);
  EXPECT_THROW(FatCantorSet(-1), DomainError);
}

TEST(FatCantor, IntervalsAreOrderedDisjointAndNested) {
  const FatCantorSet coarse(5), fine(8);
  for (std::size_t i = 1; i < fine.size(); ++i) EXPECT_LT(fine.hi(i - 1), fine.lo(i));
  for (std::size_t i = 0; i < fine.size(); ++i) {
    EXPECT_TRUE(coarse.contains(fine.midpoint(i)));
    EXPECT_TRUE(fine.contains(fine.lo(i)));
    EXPECT_TRUE(fine.contains(fine.hi(i)));
  }
  EXPECT_FALSE(fine.contains(0.5));  // first removed gap is centred
}

TEST(FatCantor, MeasureInMatchesIntervalSum) {
  const FatCantorSet s(9);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int t = 0; t < 2000; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    double oracle = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) oracle += std::max(0.0, std::min(b, s.hi(i)) - std::max(a, s.lo(i)));
    EXPECT_NEAR(s.measure_in(a, b), oracle, 1e-13);
  }
}

TEST(CantorBall, InsideAKeptSquareIsTheFullL1Ball) {
  const CantorSquareSpace space(3);
  const auto& set = space.set();
  const Point2 c{set.midpoint(2), set.midpoint(5)};
  const double r = 0.01;
  const auto m = cantor_ball_measure(space, c, r);
  EXPECT_NEAR(m.value, 2.0 * r * r, 1e-15);
  EXPECT_LE(m.lower, m.value);
}

TEST(CantorBall, BracketContainsMonteCarlo) {
  const CantorSquareSpace space(6);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.0, 1.0);
  const int samples = 1000000;
  for (int t = 0; t < 4; ++t) {
    const double r = std::ldexp(1.0, -2 - t);
    Point2 a{pos(rng), pos(rng)};
    while (!space.contains(a)) a = {pos(rng), pos(rng)};
    int hits = 0, drawn = 0;
    while (drawn < samples) {
      const Point2 d{u(rng), u(rng)};
      if (norm1(d) > 1.0) continue;
      ++drawn;
      hits += space.contains(a + d * r);
    }
    const double estimate = 2.0 * r * r * hits / samples;
    // Hoeffding at confidence 1 - 1e-9.
    const double band = 2.0 * r * r * std::sqrt(std::log(2e9) / (2.0 * samples));
    const auto m = cantor_ball_measure(space, a, r);
    EXPECT_NEAR(m.value, estimate, band) << "r=" << r;
    EXPECT_LE(m.value, 2.0 * r * r);
    EXPECT_LE(m.lower, m.value);
  }
}

TEST(Ahlfors, DepthTwelveWindow) {
  const CantorSquareSpace space(12);
  const auto& set = space.set();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  std::vector<Point2> centers = {{0.0, 0.0}, {1.0, 1.0}};
  for (int i = 0; i < 40; ++i) centers.push_back({set.midpoint(pick(rng)), set.lo(pick(rng))});
  std::vector<double> radii;
  for (int e = 4; e <= 10; ++e) radii.push_back(std::ldexp(1.0, -e));
  const auto rep = ahlfors_report([&](Point2 a, double r) { return cantor_ball_measure(space, a, r); }, centers,
                                  radii, 2.0);
  EXPECT_EQ(rep.evaluations, centers.size() * radii.size());
  EXPECT_GE(rep.min_ratio, 0.1);
  EXPECT_LE(rep.max_ratio, 2.0);
}

TEST(CantorCsv, OneRowPerInterval) {
  const FatCantorSet s(4);
  std::ostringstream os;
  s.write_csv(os);
  const std::string text = os.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(lines), s.size() + 1);
}

// Unit edges of Z x R u R x Z lying in the open sup-norm ball of radius L.
std::int64_t count_unit_edges(std::int64_t L) {
  std::int64_t n = 0;
  for (std::int64_t m = -L; m <= L; ++m) {
    if (std::abs(m) >= L) continue;  // the line itself must meet the open ball
    for (std::int64_t i = -L; i < L; ++i) n += 2;  // [i, i+1] x {m} and {m} x [i, i+1]
  }
  return n;
}

TEST(GridBall, FormulasMatchEnumeration) {
  for (std::int64_t L = 1; L <= 100; ++L) {
    const auto g = grid_ball_measure(L);
    EXPECT_EQ(g.open_ball, count_unit_edges(L)) << L;
    EXPECT_EQ(g.open_ball_next, count_unit_edges(L + 1)) << L;
    EXPECT_EQ(g.open_ball, 8 * L * L - 4 * L);
    EXPECT_EQ(g.open_ball_next, 8 * L * L + 12 * L + 4);
  }
  EXPECT_THROW(grid_ball_measure(0), DomainError);
}

TEST(GridSpace, BallMeasureAtFractionalRadius) {
  for (const double rho : {0.5, 1.0, 1.25, 2.75, 10.0}) {
    double len = 0.0;
    for (int m = -20; m <= 20; ++m) {
      if (std::abs(m) < rho) len += 2.0 * (2.0 * rho);
    }
    EXPECT_DOUBLE_EQ(GridSpace::ball_measure(rho), len) << rho;
  }
  EXPECT_TRUE(GridSpace::contains({3.0, 0.4}));
  EXPECT_FALSE(GridSpace::contains({3.5, 0.4}));
  EXPECT_EQ(GridSpace::distance({0.0, 0.0}, {3.0, -4.0}), 4.0);
}

TEST(GridErrorTerms, Values) {
  const auto e = grid_error_terms(4.0, 2.0);
  EXPECT_EQ(e.a, 20.0 * 8 - 18);
  EXPECT_EQ(e.c, 8.0 * 16 - 4 * 4);
  EXPECT_DOUBLE_EQ(e.b, 8.0 * 2.0 * (1.0 / 8.0 + 2.0 - 8.0 / 4.0));
  double prev = INFINITY;
  for (int k = 0; k <= 10; ++k) {
    const auto t = grid_error_terms(std::ldexp(1.0, k), 2.0);
    EXPECT_LE(t.a / t.c, prev);
    prev = t.a / t.c;
  }
}

// Sum over every unit edge in the window of the edge integral of f(a / Rk),
// with Simpson's rule on each edge (exact for piecewise quadratics whose kinks
// sit on lattice points).
double edge_sum_functional(const TestFunction& f, int Rk, double R) {
  const int reach = static_cast<int>(std::ceil(R * Rk));
  double total = 0.0;
  for (int m = -reach; m <= reach; ++m) {
    if (std::abs(m) >= R * Rk) continue;
    for (int i = -reach; i < reach; ++i) {
      const auto simpson = [&](auto point) {
        return (f.eval(point(i)) + 4.0 * f.eval(point(i + 0.5)) + f.eval(point(i + 1.0))) / 6.0;
      };
      total += simpson([&](double t) { return Point2{t / Rk, m / static_cast<double>(Rk)}; });
      total += simpson([&](double t) { return Point2{m / static_cast<double>(Rk), t / Rk}; });
    }
  }
  return total / GridSpace::ball_measure(Rk);
}

TEST(GridFunctional, MatchesEdgeSum) {
  for (const auto& f : {tent_function(2.0), quadratic_bump(2.0)}) {
    for (const int Rk : {1, 2, 4, 8}) {
      const auto g = grid_asymptotic_functional(f, Rk, 2.0);
      EXPECT_NEAR(g.value, edge_sum_functional(f, Rk, 2.0), 1e-12) << f.name << " Rk=" << Rk;
    }
  }
}

TEST(GridFunctional, GenericPathAgreesWithSeparable) {
  auto generic = tent_function(1.5);
  generic.profile = {};
  generic.profile_integral = {};
  const auto a = grid_asymptotic_functional(tent_function(1.5), 16, 2.0);
  const auto b = grid_asymptotic_functional(generic, 16, 2.0);
  EXPECT_NEAR(a.value, b.value, 1e-8 + b.quadrature_error);
  EXPECT_THROW(grid_asymptotic_functional(tent_function(1.0), 4, 1.0), DomainError);
}

TEST(AsymptoticCone, DistortionZeroCoverageAndDensity) {
  const std::vector<double> ladder = {1, 4, 16, 64, 256, 1024};
  const std::vector<TestFunction> tests = {tent_function(2.0), quadratic_bump(2.0)};
  const auto rep = asymptotic_cone_report(ladder, tests, 2.0, 0.25, 64);
  ASSERT_EQ(rep.rows.size(), ladder.size());
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.distortion, 0.0);
    EXPECT_LE(row.coverage_gap, 1.0 / row.Rk);
  }
  // Limit density of the normalized grid measure.
  const auto& last = rep.rows.back();
  for (std::size_t i = 0; i < tests.size(); ++i) {
    EXPECT_LT(last.discrepancy[i] / last.abs_integral[i], 0.001);
  }
  EXPECT_FALSE(rep.verdict.hilbert);
}

}  // namespace
}  // namespace tangentlab
