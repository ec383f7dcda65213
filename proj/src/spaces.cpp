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

#include "tangentlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tangentlab/errors.hpp"

namespace tangentlab {

// ---------------------------------------------------------------------------
// FatCantorSet

FatCantorSet::FatCantorSet(int depth) : depth_(depth) {
  if (depth < 0 || depth > kMaxDepth) throw DomainError("FatCantorSet: depth must lie in [0, 25]");
  denominator_ = std::int64_t{1} << (2 * depth + 1);
  intervals_ = {{0, denominator_}};
  for (int n = 1; n <= depth; ++n) {
    const std::int64_t gap = std::int64_t{1} << (2 * depth + 1 - 2 * n);
    std::vector<std::pair<std::int64_t, std::int64_t>> next;
    next.reserve(2 * intervals_.size());
    for (const auto& [a, b] : intervals_) {
      const std::int64_t half = (b - a - gap) / 2;
      next.emplace_back(a, a + half);
      next.emplace_back(b - half, b);
    }
    intervals_ = std::move(next);
  }
  prefix_.assign(intervals_.size() + 1, 0.0);
  for (std::size_t i = 0; i < intervals_.size(); ++i) prefix_[i + 1] = prefix_[i] + (hi(i) - lo(i));
}

double FatCantorSet::lo(std::size_t i) const {
  return static_cast<double>(intervals_[i].first) / static_cast<double>(denominator_);
}

double FatCantorSet::hi(std::size_t i) const {
  return static_cast<double>(intervals_[i].second) / static_cast<double>(denominator_);
}

std::int64_t FatCantorSet::kept_numerator() const {
  std::int64_t total = 0;
  for (const auto& [a, b] : intervals_) total += b - a;
  return total;
}

double FatCantorSet::kept_length() const {
  return static_cast<double>(kept_numerator()) / static_cast<double>(denominator_);
}

double FatCantorSet::future_fraction() const { return 1.0 / (std::ldexp(1.0, depth_) + 1.0); }

bool FatCantorSet::contains(double x) const {
  const auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x, [&](double v, const auto& iv) {
    return v < static_cast<double>(iv.first) / static_cast<double>(denominator_);
  });
  if (it == intervals_.begin()) return false;
  const auto i = static_cast<std::size_t>(it - intervals_.begin()) - 1;
  return x <= hi(i);
}

namespace {

// Index range of intervals meeting the open interval (a, b).
std::pair<std::size_t, std::size_t> meeting(const FatCantorSet& s, double a, double b) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi) {  // first interval with hi > a
    const std::size_t mid = (lo + hi) / 2;
    if (s.hi(mid) > a) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::size_t first = lo;
  lo = 0;
  hi = s.size();
  while (lo < hi) {  // first interval with lo >= b
    const std::size_t mid = (lo + hi) / 2;
    if (s.lo(mid) >= b) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {first, lo};  // half-open
}

}  // namespace

double FatCantorSet::measure_in(double a, double b) const {
  if (!(b > a)) return 0.0;
  const auto [i0, i1] = meeting(*this, a, b);
  if (i0 >= i1) return 0.0;
  if (i1 - i0 == 1) return std::max(0.0, std::min(hi(i0), b) - std::max(lo(i0), a));
  return (hi(i0) - std::max(lo(i0), a)) + (std::min(hi(i1 - 1), b) - lo(i1 - 1)) + (prefix_[i1 - 1] - prefix_[i0 + 1]);
}

double FatCantorSet::future_removed_in(double a, double b) const {
  if (!(b > a)) return 0.0;
  const auto [i0, i1] = meeting(*this, a, b);
  if (i0 >= i1) return 0.0;
  // Each depth-D interval loses exactly 2^-(2D+1) in later steps.
  const double per = 1.0 / static_cast<double>(denominator_);
  const auto clip = [&](std::size_t i) { return std::max(0.0, std::min(hi(i), b) - std::max(lo(i), a)); };
  if (i1 - i0 == 1) return std::min(clip(i0), per);
  return std::min(clip(i0), per) + std::min(clip(i1 - 1), per) + static_cast<double>(i1 - i0 - 2) * per;
}

double FatCantorSet::midpoint(std::size_t i) const {
  return static_cast<double>(intervals_[i].first + intervals_[i].second) / (2.0 * static_cast<double>(denominator_));
}

void FatCantorSet::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "index,lo,hi,lo_numerator,hi_numerator,denominator\n";
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    out << i << ',' << lo(i) << ',' << hi(i) << ',' << intervals_[i].first << ',' << intervals_[i].second << ','
        << denominator_ << '\n';
  }
  out.precision(old);
}

// ---------------------------------------------------------------------------
// Cantor square measures

MeasureBracket cantor_ball_measure(const CantorSquareSpace& space, Point2 a, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cantor_ball_measure: radius must be positive");
  if (!space.contains(a)) throw DomainError("cantor_ball_measure: centre not in X_D");
  const auto& s = space.set();
  const auto section = [&](double x) {
    const double w = r - std::abs(x - a.x);
    return w > 0.0 ? s.measure_in(a.y - w, a.y + w) : 0.0;
  };

  // Between consecutive breakpoints x is either in C_D or not, and the
  // section length is linear in x, so the trapezoid rule is exact.
  std::vector<double> breaks = {a.x - r, a.x, a.x + r};
  {
    const auto [i0, i1] = meeting(s, a.x - r, a.x + r);
    for (std::size_t i = i0; i < i1; ++i) {
      for (const double e : {s.lo(i), s.hi(i)}) {
        if (e > a.x - r && e < a.x + r) breaks.push_back(e);
      }
    }
  }
  {
    const auto [i0, i1] = meeting(s, a.y - r, a.y + r);
    for (std::size_t i = i0; i < i1; ++i) {
      for (const double e : {s.lo(i), s.hi(i)}) {
        const double w = std::abs(e - a.y);
        if (w < r) {
          breaks.push_back(a.x - (r - w));
          breaks.push_back(a.x + (r - w));
        }
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  MeasureBracket out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double x0 = breaks[i], x1 = breaks[i + 1];
    if (!s.contains(0.5 * (x0 + x1))) continue;
    out.value += 0.5 * (x1 - x0) * (section(x0) + section(x1));
  }
  const double ux = s.future_removed_in(a.x - r, a.x + r);
  const double uy = s.future_removed_in(a.y - r, a.y + r);
  out.upper = out.value;
  out.lower = std::max(0.0, out.value - 2.0 * r * (ux + uy));
  return out;
}

AhlforsReport ahlfors_report(const BallMeasure& measure, std::span<const Point2> centers,
                             std::span<const double> radii, double exponent) {
  AhlforsReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) {
    for (const double r : radii) {
      const auto m = measure(c, r);
      const double scale = std::pow(r, exponent);
      const double lo = m.lower / scale;
      if (lo < rep.min_ratio) {
        rep.min_ratio = lo;
        rep.argmin = c;
        rep.argmin_radius = r;
      }
      rep.max_ratio = std::max(rep.max_ratio, m.upper / scale);
      ++rep.evaluations;
    }
  }
  if (rep.evaluations == 0) rep.min_ratio = 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Grid space

double GridSpace::ball_measure(double rho) {
  if (!(rho > 0.0)) return 0.0;
  const double lines = 2.0 * std::ceil(rho) - 1.0;  // integers m with |m| < rho
  return 2.0 * lines * 2.0 * rho;
}

double GridSpace::distance_to_scaled(Point2 q, double s) {
  const double dx = std::abs(q.x - std::round(q.x * s) / s);
  const double dy = std::abs(q.y - std::round(q.y * s) / s);
  return std::min(dx, dy);
}

GridBallCounts grid_ball_measure(std::int64_t L) {
  if (L < 1) throw DomainError("grid_ball_measure: L must be >= 1");
  if (L > (std::int64_t{1} << 29)) throw DomainError("grid_ball_measure: L too large for exact integers");
  return {8 * L * L - 4 * L, 8 * L * L + 12 * L + 4};
}

GridErrorTerms grid_error_terms(double Rk, double R) {
  if (!(Rk > 0.0) || !(R > 0.0)) throw DomainError("grid_error_terms: radii must be positive");
  const double F = std::floor(R * Rk);
  const double f = std::floor(Rk);
  return {20.0 * F - 18.0, 8.0 * R * (1.0 / (2.0 * Rk) + R - F / Rk), 8.0 * f * f - 4.0 * f};
}

GridFunctional grid_asymptotic_functional(const TestFunction& f, double Rk, double R) {
  if (!(Rk > 0.0)) throw DomainError("grid_asymptotic_functional: Rk must be positive");
  if (!(R > 1.0)) throw DomainError("grid_asymptotic_functional: R must exceed 1");
  if (!std::isfinite(f.sup_bound) || !std::isfinite(f.support) || !(f.support > 0.0)) {
    throw DomainError("grid_asymptotic_functional: test function must be bounded with bounded support");
  }
  const double s = std::min(R, f.support);
  const auto m_max = static_cast<long long>(std::ceil(R * Rk)) - 1;  // |m| < R Rk
  GridFunctional out;
  out.normalizing_mass = GridSpace::ball_measure(Rk);
  double total = 0.0;
  const bool separable = f.profile && f.profile_integral;
  const double g_total = separable ? f.profile_integral(-s, s) : 0.0;
  constexpr double kTol = 1e-10;
  for (long long m = -m_max; m <= m_max; ++m) {
    const double c = static_cast<double>(m) / Rk;
    if (std::abs(c) >= f.support) continue;
    ++out.lines;
    if (separable) {
      total += 2.0 * Rk * f.profile(c) * g_total;  // vertical and horizontal line
      continue;
    }
    const double v = integrate_line([&](double t) { return f.eval({c, t}); }, -s, s, kTol);
    const double h = integrate_line([&](double t) { return f.eval({t, c}); }, -s, s, kTol);
    total += Rk * (v + h);
    out.quadrature_error += 2.0 * Rk * kTol;
  }
  out.value = total / out.normalizing_mass;
  out.quadrature_error = out.quadrature_error / out.normalizing_mass +
                         static_cast<double>(out.lines) * std::abs(out.value) *
                             std::numeric_limits<double>::epsilon();
  return out;
}

ConeReport asymptotic_cone_report(std::span<const double> ladder, std::span<const TestFunction> tests, double R,
                                  double density, std::size_t distortion_samples) {
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] > ladder[i - 1])) throw DomainError("asymptotic_cone_report: ladder must be increasing");
  }
  ConeReport rep;
  rep.density = density;
  rep.R = R;
  std::mt19937_64 rng(0x5eed);
  for (const double Rk : ladder) {
    ConeRow row;
    row.Rk = Rk;
    row.terms = grid_error_terms(Rk, R);

    // Distortion of a -> a / Rk on sampled points of X in the window.
    PointedSampledSpace space;
    space.points.push_back({0.0, 0.0});
    const auto m_max = static_cast<long long>(std::ceil(R * Rk)) - 1;
    std::uniform_int_distribution<long long> line(-m_max, m_max);
    std::uniform_real_distribution<double> along(-R * Rk, R * Rk);
    for (std::size_t i = 0; i < distortion_samples; ++i) {
      const double c = static_cast<double>(line(rng));
      const double t = along(rng);
      space.points.push_back(i % 2 == 0 ? Point2{c, t} : Point2{t, c});
    }
    space.weights.assign(space.points.size(), 1.0);
    space.distance = [](Point2 a, Point2 b) { return GridSpace::distance(a, b); };
    row.distortion = distortion_vs_norm(space, Rk, R, linf_norm()).epsilon;

    // Coverage by the rescaled lines inside the window; probes at pitch
    // 1/(2 Rk) include every cell centre, where the gap is attained.
    const auto inside = [&](double c) { return std::abs(c) < R; };
    const auto dist_to_image = [&](Point2 q) {
      double best = std::numeric_limits<double>::infinity();
      for (const double c : {std::floor(q.x * Rk) / Rk, std::ceil(q.x * Rk) / Rk}) {
        if (inside(c)) best = std::min(best, std::abs(q.x - c));
      }
      for (const double c : {std::floor(q.y * Rk) / Rk, std::ceil(q.y * Rk) / Rk}) {
        if (inside(c)) best = std::min(best, std::abs(q.y - c));
      }
      return best;
    };
    row.coverage_gap = coverage_gap(dist_to_image, R, linf_norm(), 1.0 / (2.0 * Rk));
    row.coverage_bound = 1.0 / Rk;

    for (const auto& f : tests) {
      row.functions.push_back(f.name);
      const double value = grid_asymptotic_functional(f, Rk, R).value;
      const double limit = density * integrate(f);
      row.functional.push_back(value);
      row.limit_integral.push_back(limit);
      row.discrepancy.push_back(std::abs(value - limit));
      row.abs_integral.push_back(integrate_abs(f));
    }
    rep.rows.push_back(std::move(row));
  }
  rep.verdict = hilbertianity_verdict(linf_norm(), 1e-9);
  return rep;
}

void write_grid_counts_csv(std::ostream& out, std::int64_t max_L) {
  out << "L,open_ball,open_ball_next\n";
  for (std::int64_t L = 1; L <= max_L; ++L) {
    const auto c = grid_ball_measure(L);
    out << L << ',' << c.open_ball << ',' << c.open_ball_next << '\n';
  }
}

}  // namespace tangentlab
