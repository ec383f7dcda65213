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

#include "tangentlab/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "json_util.hpp"
#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Adaptive Simpson on [a, b], split at 0 so tent kinks sit on a node.
double adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  const auto piece = [&](double lo, double hi, double t) {
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    return simpson(f, lo, hi, fa, fm, fb, (hi - lo) / 6.0 * (fa + 4.0 * fm + fb), t, 40);
  };
  if (a < 0.0 && b > 0.0) return piece(a, 0.0, tol / 2.0) + piece(0.0, b, tol / 2.0);
  return piece(a, b, tol);
}

double angle_of(Point2 v) {
  const double t = std::atan2(v.y, v.x);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

// Nearest-image search on a uniform bucket grid.
class BucketIndex {
 public:
  BucketIndex(std::span<const Point2> pts, double cell) : cell_(cell) {
    for (const auto& p : pts) {
      cells_[key(cx(p.x), cx(p.y))].push_back(p);
      lo_x_ = std::min(lo_x_, cx(p.x));
      hi_x_ = std::max(hi_x_, cx(p.x));
      lo_y_ = std::min(lo_y_, cx(p.y));
      hi_y_ = std::max(hi_y_, cx(p.y));
    }
  }

  // Distance to the nearest point, capped at `cap`; `lower` is a constant with
  // norm(v) >= lower * |v|_inf.
  double nearest(Point2 q, const Norm& norm, double lower, double cap) const {
    const long long qx = cx(q.x), qy = cx(q.y);
    const long long reach = std::max({std::abs(qx - lo_x_), std::abs(qx - hi_x_), std::abs(qy - lo_y_),
                                      std::abs(qy - hi_y_)});
    double best = kInf;
    for (long long t = 0; t <= reach; ++t) {
      for (long long ix = qx - t; ix <= qx + t; ++ix) {
        for (long long iy = qy - t; iy <= qy + t; ++iy) {
          if (std::max(std::abs(ix - qx), std::abs(iy - qy)) != t) continue;
          const auto it = cells_.find(key(ix, iy));
          if (it == cells_.end()) continue;
          for (const auto& p : it->second) best = std::min(best, norm(p - q));
        }
      }
      const double unseen = lower * static_cast<double>(t) * cell_;
      if (unseen >= best || unseen >= cap) break;
    }
    return std::min(best, cap);
  }

 private:
  long long cx(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
  static long long key(long long ix, long long iy) { return ix * 2654435761LL ^ (iy + (1LL << 40)); }

  double cell_;
  std::unordered_map<long long, std::vector<Point2>> cells_;
  long long lo_x_ = std::numeric_limits<long long>::max(), hi_x_ = std::numeric_limits<long long>::min();
  long long lo_y_ = std::numeric_limits<long long>::max(), hi_y_ = std::numeric_limits<long long>::min();
};

// min of norm over the sup-norm unit sphere, slightly deflated.
double sup_norm_lower_constant(const Norm& norm) {
  double m = kInf;
  for (int i = 0; i < 256; ++i) {
    const double t = -1.0 + 2.0 * i / 256.0;
    m = std::min({m, norm({1.0, t}), norm({-1.0, -t}), norm({t, 1.0}), norm({-t, -1.0})});
  }
  return 0.99 * m;
}

template <typename Distance>
double coverage_from(const Distance& dist_to_image, double R, const Norm& target, double pitch) {
  if (!(R > 0.0)) throw DomainError("coverage_gap: R must be positive");
  if (!(pitch > 0.0)) throw DomainError("coverage_gap: pitch must be positive");
  const auto steps = static_cast<long long>(std::ceil(2.0 * R / pitch));
  double gap = 0.0;
  for (long long i = 0; i <= steps; ++i) {
    for (long long j = 0; j <= steps; ++j) {
      const Point2 q{-R + static_cast<double>(i) * pitch, -R + static_cast<double>(j) * pitch};
      const double room = R - target(q);
      if (room <= gap) continue;
      gap = std::max(gap, std::min(dist_to_image(q, room), room));
    }
  }
  return gap;
}

}  // namespace

// ---------------------------------------------------------------------------
// Norms

Norm l1_norm() { return {"l1", [](Point2 v) { return norm1(v); }}; }
Norm l2_norm() { return {"l2", [](Point2 v) { return norm2(v); }}; }
Norm linf_norm() { return {"linf", [](Point2 v) { return norm_inf(v); }}; }

Norm lp_norm(double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return linf_norm();
  if (p == 1.0) return l1_norm();
  if (p == 2.0) return l2_norm();
  return {"l" + detail::format17(p), [p](Point2 v) {
            const double m = norm_inf(v);
            if (m == 0.0) return 0.0;
            return m * std::pow(std::pow(std::abs(v.x) / m, p) + std::pow(std::abs(v.y) / m, p), 1.0 / p);
          }};
}

Norm scaled_norm(const Norm& base, double factor) {
  if (!(factor > 0.0)) throw DomainError("scaled_norm: factor must be positive");
  return {detail::format17(factor) + "*" + base.name, [base, factor](Point2 v) { return factor * base(v); }};
}

// ---------------------------------------------------------------------------
// Sampled spaces

double PointedSampledSpace::dist(std::size_t i, std::size_t j) const {
  if (!distance) throw DomainError("PointedSampledSpace: no distance oracle");
  return distance(points.at(i), points.at(j)) / distance_scale;
}

double PointedSampledSpace::ball_mass(std::size_t i, double radius) const {
  double mass = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (dist(i, j) < radius) mass += weights.at(j);
  }
  return mass;
}

PointedSampledSpace rescale(const PointedSampledSpace& space, std::size_t x, double r) {
  if (!(r > 0.0)) throw DomainError("rescale: r must be positive");
  if (x >= space.points.size()) throw DomainError("rescale: basepoint not in the sample");
  const double mass = space.ball_mass(x, r);
  if (!(mass > 0.0)) throw SupportError("rescale: B_r(x) carries no mass");
  PointedSampledSpace out = space;
  out.base = x;
  out.distance_scale = space.distance_scale * r;
  for (auto& w : out.weights) w /= mass;
  return out;
}

DistortionReport distortion_vs_norm(const PointedSampledSpace& space, double r, double R, const Norm& target,
                                    const DistortionOptions& options) {
  if (!(r > 0.0) || !(R > 0.0)) throw DomainError("distortion_vs_norm: r and R must be positive");
  const std::size_t n = space.points.size();
  if (space.base >= n) throw DomainError("distortion_vs_norm: basepoint not in the sample");

  std::vector<std::size_t> window;
  std::vector<char> in_window(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (space.dist(space.base, i) < R * r) {
      window.push_back(i);
      in_window[i] = 1;
    }
  }
  if (window.size() < 2) throw DomainError("distortion_vs_norm: window holds fewer than two points");

  DistortionReport rep;
  rep.scale = r;
  rep.window = R;
  rep.window_size = window.size();
  rep.tolerance = space.tolerance / (space.distance_scale * r);
  rep.seed = options.seed;
  const Point2 x = space.points[space.base];
  const auto chart_gap = [&](std::size_t i, std::size_t j) {
    return target(space.points[j] - space.points[i]) / space.distance_scale;
  };
  const auto visit = [&](std::size_t i, std::size_t j) {
    const double e = std::abs(space.dist(i, j) - chart_gap(i, j)) / r;
    ++rep.pair_count;
    if (e > rep.epsilon) {
      rep.epsilon = e;
      rep.worst_pair_separation = chart_gap(i, j) / r;
    }
  };
  if (options.anchors.empty()) {
    for (std::size_t a = 0; a < window.size(); ++a) {
      for (std::size_t b = a + 1; b < window.size(); ++b) visit(window[a], window[b]);
    }
  } else {
    for (const auto i : options.anchors) {
      if (i >= n || !in_window[i]) continue;
      for (const auto j : window) {
        if (j != i) visit(i, j);
      }
    }
  }

  if (options.coverage_pitch > 0.0) {
    std::vector<Point2> image;
    image.reserve(window.size());
    for (const auto i : window) image.push_back((space.points[i] - x) * (1.0 / (space.distance_scale * r)));
    rep.coverage_gap = coverage_gap(image, R, target, options.coverage_pitch);
    rep.coverage_pitch = options.coverage_pitch;
  }
  return rep;
}

double coverage_gap(std::span<const Point2> image, double R, const Norm& target, double pitch) {
  if (image.empty()) throw DomainError("coverage_gap: empty image");
  const double cell = std::max(pitch, R / 128.0);
  const BucketIndex index(image, cell);
  const double lower = sup_norm_lower_constant(target);
  return coverage_from([&](Point2 q, double cap) { return index.nearest(q, target, lower, cap); }, R, target, pitch);
}

double coverage_gap(const std::function<double(Point2)>& distance_to_image, double R, const Norm& target,
                    double pitch) {
  return coverage_from([&](Point2 q, double) { return distance_to_image(q); }, R, target, pitch);
}

// ---------------------------------------------------------------------------
// Test functions and measures

TestFunction tent_function(double w) {
  if (!(w > 0.0)) throw DomainError("tent_function: width must be positive");
  TestFunction f;
  f.name = "tent";
  f.support = w;
  f.sup_bound = 1.0;
  f.profile = [w](double t) { return std::max(0.0, 1.0 - std::abs(t) / w); };
  const auto anti = [w](double t) {
    t = std::clamp(t, -w, w);
    return t <= 0.0 ? (t + w) * (t + w) / (2.0 * w) : w / 2.0 + t - t * t / (2.0 * w);
  };
  f.profile_integral = [anti](double a, double b) { return anti(b) - anti(a); };
  f.eval = [g = f.profile](Point2 p) { return g(p.x) * g(p.y); };
  return f;
}

TestFunction quadratic_bump(double w) {
  if (!(w > 0.0)) throw DomainError("quadratic_bump: width must be positive");
  TestFunction f;
  f.name = "bump";
  f.support = w;
  f.sup_bound = 1.0;
  f.profile = [w](double t) { return std::max(0.0, 1.0 - t * t / (w * w)); };
  const auto anti = [w](double t) {
    t = std::clamp(t, -w, w);
    return t - t * t * t / (3.0 * w * w) + 2.0 * w / 3.0;
  };
  f.profile_integral = [anti](double a, double b) { return anti(b) - anti(a); };
  f.eval = [g = f.profile](Point2 p) { return g(p.x) * g(p.y); };
  return f;
}

double integrate(const TestFunction& f, const std::function<double(Point2)>& density, double tol) {
  if (!std::isfinite(f.sup_bound) || !std::isfinite(f.support) || f.support <= 0.0) {
    throw DomainError("integrate: test function must be bounded with bounded support");
  }
  const double s = f.support;
  if (!density && f.profile_integral) {
    const double g = f.profile_integral(-s, s);
    return g * g;
  }
  const auto integrand = [&](Point2 p) { return density ? f.eval(p) * density(p) : f.eval(p); };
  const auto inner = [&](double x) {
    return adaptive([&](double y) { return integrand({x, y}); }, -s, s, tol / (4.0 * s));
  };
  return adaptive(inner, -s, s, tol);
}

double integrate_line(const std::function<double(double)>& g, double a, double b, double tol) {
  if (!(b >= a)) throw DomainError("integrate_line: empty interval");
  if (b == a) return 0.0;
  return adaptive(g, a, b, tol);
}

double integrate_abs(const TestFunction& f, double tol) {
  TestFunction g = f;
  g.eval = [e = f.eval](Point2 p) { return std::abs(e(p)); };
  if (f.profile) {
    g.profile_integral = [h = f.profile, tol](double a, double b) {
      return adaptive([&](double t) { return std::abs(h(t)); }, a, b, tol);
    };
  }
  return integrate(g, {}, tol);
}

std::vector<double> measure_compare(std::span<const Point2> points, std::span<const double> weights,
                                    const std::function<double(Point2)>& density,
                                    std::span<const TestFunction> tests) {
  if (points.size() != weights.size()) throw DomainError("measure_compare: points and weights differ in length");
  std::vector<double> out;
  out.reserve(tests.size());
  for (const auto& f : tests) {
    const double target = integrate(f, density);
    double empirical = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) empirical += weights[i] * f.eval(points[i]);
    out.push_back(std::abs(empirical - target));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise norms

double NormEstimate::operator()(Point2 v) const {
  const std::size_t n = directions.size();
  if (n < 3) throw DomainError("NormEstimate: need at least three directions");
  const double len = norm2(v);
  if (len == 0.0) return 0.0;
  std::vector<std::pair<double, double>> table(n);
  for (std::size_t i = 0; i < n; ++i) table[i] = {angle_of(directions[i]), values[i]};
  std::sort(table.begin(), table.end());
  const double t = angle_of(v);
  std::size_t hi = 0;
  while (hi < n && table[hi].first < t) ++hi;
  const auto& b = table[hi % n];
  const auto& a = table[(hi + n - 1) % n];
  double ta = a.first, tb = b.first;
  double tt = t;
  if (hi == 0 || hi == n) {  // wrap-around sector
    if (tb < ta) tb += 2.0 * kPi;
    if (tt < ta) tt += 2.0 * kPi;
  }
  if (tb == ta) return len * a.second;
  const double w = (tt - ta) / (tb - ta);
  return len * ((1.0 - w) * a.second + w * b.second);
}

Norm NormEstimate::as_norm() const {
  return {"estimate", [self = *this](Point2 v) { return self(v); }};
}

double NormEstimate::max_uncertainty() const {
  return uncertainty.empty() ? 0.0 : *std::max_element(uncertainty.begin(), uncertainty.end());
}

std::vector<Point2> unit_directions(std::size_t count) {
  std::vector<Point2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if ((4 * i) % count == 0) {
      static constexpr Point2 kAxes[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      out.push_back(kAxes[4 * i / count]);
      continue;
    }
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(count);
    out.push_back({std::cos(t), std::sin(t)});
  }
  return out;
}

std::vector<double> radius_ladder(double r0, std::size_t count, double ratio) {
  std::vector<double> out;
  double r = r0;
  for (std::size_t i = 0; i < count; ++i, r *= ratio) out.push_back(r);
  return out;
}

NormEstimate estimate_pointwise_norm(const PointDistance& distance, Point2 x, std::span<const Point2> directions,
                                     std::span<const double> radii, double tolerance, double resolution) {
  if (radii.empty()) throw DomainError("estimate_pointwise_norm: no radii");
  for (const double r : radii) {
    if (!(r > 0.0)) throw DomainError("estimate_pointwise_norm: radii must be positive");
    if (r < resolution) throw ResolutionError("estimate_pointwise_norm: radius below the oracle resolution");
  }
  const double r_min = *std::min_element(radii.begin(), radii.end());
  NormEstimate est;
  est.radii.assign(radii.begin(), radii.end());
  for (const auto& v0 : directions) {
    const double len = norm2(v0);
    if (!(len > 0.0)) throw DomainError("estimate_pointwise_norm: zero direction");
    const Point2 v = len == 1.0 ? v0 : v0 * (1.0 / len);
    std::vector<double> q;
    q.reserve(radii.size());
    for (const double r : radii) q.push_back(distance(x + v * r, x) / r);

    double a = q.front(), b = 0.0;
    const bool flat = std::all_of(q.begin(), q.end(), [&](double t) { return t == q.front(); });
    if (!flat && radii.size() >= 2) {
      const double rm = std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(radii.size());
      const double qm = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
      double sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < radii.size(); ++i) {
        sxx += (radii[i] - rm) * (radii[i] - rm);
        sxy += (radii[i] - rm) * (q[i] - qm);
      }
      b = sxx > 0.0 ? sxy / sxx : 0.0;
      a = qm - b * rm;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) residual = std::max(residual, std::abs(q[i] - (a + b * radii[i])));
    est.directions.push_back(v);
    est.values.push_back(std::max(a, 0.0));
    est.uncertainty.push_back(residual + tolerance / r_min);
  }
  return est;
}

double first_order_defect(const PointDistance& distance, std::span<const Point2> points, const Norm& candidate) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d == 0.0) continue;
      ++pairs;
      worst = std::max(worst, std::abs(d - candidate(points[j] - points[i])) / d);
    }
  }
  if (pairs == 0) throw DomainError("first_order_defect: no distinct pairs");
  return worst;
}

SeminormDistance seminorm_distance(const Norm& n1, const Norm& n2, std::size_t grid) {
  grid = std::max<std::size_t>(grid, 8);
  SeminormDistance out;
  double m1 = 0.0, m2 = 0.0;
  for (const auto& v : unit_directions(grid)) {
    const double a = n1(v), b = n2(v);
    m1 = std::max(m1, a);
    m2 = std::max(m2, b);
    out.value = std::max(out.value, std::abs(a - b));
  }
  // Any unit vector is within pi/grid of a grid vector; each seminorm is
  // Lipschitz with its maximum on the circle.
  const double step = kPi / static_cast<double>(grid);
  out.modulus_bound = (m1 + m2) / (1.0 - step) * step;
  return out;
}

HilbertVerdict hilbertianity_verdict(const Norm& norm, double tol, std::size_t directions, double uncertainty) {
  if (directions < 4) throw DomainError("hilbertianity_verdict: need at least four directions");
  if (!(tol >= 0.0)) throw DomainError("hilbertianity_verdict: tolerance must be non-negative");
  std::vector<Point2> unit;
  for (const auto& e : unit_directions(directions)) {
    const double n = norm(e);
    if (!(n > 0.0)) throw DomainError("hilbertianity_verdict: norm vanishes on a direction");
    unit.push_back(n == 1.0 ? e : e * (1.0 / n));
  }
  HilbertVerdict out;
  out.threshold = tol + uncertainty;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    for (std::size_t j = i + 1; j < unit.size(); ++j) {
      const double s = norm(unit[i] + unit[j]);
      const double d = norm(unit[i] - unit[j]);
      const double defect = std::abs(s * s + d * d - 4.0);
      if (defect > out.defect) {
        out.defect = defect;
        out.u = unit[i];
        out.v = unit[j];
      }
    }
  }
  out.hilbert = out.defect <= out.threshold;
  return out;
}

HilbertVerdict hilbertianity_verdict(const NormEstimate& estimate, double tol, std::size_t directions) {
  if (estimate.directions.size() < 3) throw DomainError("hilbertianity_verdict: need at least three directions");
  const double lo = *std::min_element(estimate.values.begin(), estimate.values.end());
  if (!(lo > 0.0)) throw DomainError("hilbertianity_verdict: estimated norm vanishes on a direction");
  // Relative error eta on every value moves each squared term by at most
  // 4((1+eta)^2 - 1) after renormalization.
  const double eta = estimate.max_uncertainty() / lo;
  return hilbertianity_verdict(estimate.as_norm(), tol, directions, 16.0 * eta + 8.0 * eta * eta);
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_json(const DistortionReport& r) {
  nlohmann::json j;
  j["scale"] = r.scale;
  j["window"] = r.window;
  j["epsilon"] = r.epsilon;
  j["pair_count"] = r.pair_count;
  j["window_size"] = r.window_size;
  j["worst_pair_separation"] = r.worst_pair_separation;
  j["tolerance"] = r.tolerance;
  j["coverage_gap"] = r.coverage_gap ? nlohmann::json(*r.coverage_gap) : nlohmann::json(nullptr);
  j["coverage_pitch"] = r.coverage_pitch;
  j["seed"] = r.seed;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [name, value] : r.measure_discrepancies) m[name] = value;
  j["measure_discrepancies"] = m;
  return detail::dump17(j);
}

std::string to_json(const NormEstimate& e) {
  nlohmann::json j;
  j["radii"] = e.radii;
  nlohmann::json dirs = nlohmann::json::array();
  for (std::size_t i = 0; i < e.directions.size(); ++i) {
    dirs.push_back({{"x", e.directions[i].x},
                    {"y", e.directions[i].y},
                    {"value", e.values[i]},
                    {"uncertainty", e.uncertainty[i]}});
  }
  j["directions"] = dirs;
  return detail::dump17(j);
}

}  // namespace tangentlab
