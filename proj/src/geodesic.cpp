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

#include "tangentlab/geodesic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <utility>

#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::array<int, 2>, 8> kForward16 = {{
    {1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2},
}};

using QueueEntry = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

// Visits the full stencil neighbourhood of node `id` as (neighbour, weight).
template <typename Fn>
void for_each_neighbor(const GridGraph& g, std::size_t id, Fn&& fn) {
  const auto offsets = forward_offsets(g.stencil());
  const auto ix = static_cast<long long>(id % g.nx());
  const auto iy = static_cast<long long>(id / g.nx());
  const auto nx = static_cast<long long>(g.nx());
  const auto ny = static_cast<long long>(g.ny());
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    const long long dx = offsets[o][0];
    const long long dy = offsets[o][1];
    const long long fx = ix + dx, fy = iy + dy;
    if (fx >= 0 && fx < nx && fy >= 0 && fy < ny) {
      fn(static_cast<std::size_t>(fy * nx + fx), g.edge_weight(id, o));
    }
    const long long bx = ix - dx, by = iy - dy;
    if (bx >= 0 && bx < nx && by >= 0 && by < ny) {
      const auto back = static_cast<std::size_t>(by * nx + bx);
      fn(back, g.edge_weight(back, o));
    }
  }
}

// Dijkstra from pre-seeded distances. `on_settle(id, d)` returns false to stop.
template <typename Settle>
void run_dijkstra(const GridGraph& g, std::vector<double>& dist, MinQueue& queue, Settle&& on_settle) {
  while (!queue.empty()) {
    const auto [d, id] = queue.top();
    queue.pop();
    if (d > dist[id]) continue;
    if (!on_settle(id, d)) return;
    for_each_neighbor(g, id, [&](std::size_t nb, double w) {
      const double nd = d + w;
      if (nd < dist[nb]) {
        dist[nb] = nd;
        queue.emplace(nd, nb);
      }
    });
  }
}

void seed_source(const GridGraph& g, Point2 source, std::vector<double>& dist, MinQueue& queue) {
  for (const auto n : g.attachment_nodes(source)) {
    const double w = g.segment_weight(source, g.node(n));
    if (w < dist[n]) {
      dist[n] = w;
      queue.emplace(w, n);
    }
  }
}

// Largest power of two dividing x (a dyadic rational); +inf for zero.
double dyadic_valuation(double x) {
  if (x == 0.0) return kInf;
  int e = 0;
  const double m = std::frexp(std::abs(x), &e);
  const auto bits = static_cast<std::uint64_t>(std::ldexp(m, 53));
  return std::ldexp(1.0, e - 53 + std::countr_zero(bits));
}

double floor_to(double x, double g) { return std::floor(x / g) * g; }
double ceil_to(double x, double g) { return std::ceil(x / g) * g; }

bool on_skeleton(Point2 p) { return !locate(p).in_square(); }

// Orientation of the skeleton line through an R point: the lattice edge of
// spacing g through p is either entirely in R or entirely inside a square,
// so testing its midpoint is exact.
struct LineInfo {
  bool vertical = false;
  bool horizontal = false;
  double spacing_limit = kInf;
};

LineInfo skeleton_line_through(Point2 p, double cap) {
  LineInfo info;
  const double gx = std::min(dyadic_valuation(p.x), cap);
  const double y0 = floor_to(p.y, gx);
  if (on_skeleton({p.x, y0 + gx / 2})) {
    info.vertical = true;
    info.spacing_limit = gx;
  }
  const double gy = std::min(dyadic_valuation(p.y), cap);
  const double x0 = floor_to(p.x, gy);
  if (on_skeleton({x0 + gy / 2, p.y})) {
    info.horizontal = true;
    info.spacing_limit = info.vertical ? std::max(info.spacing_limit, gy) : gy;
  }
  return info;
}

std::vector<Point2> exit_points(Point2 p, const Locus& locus) {
  if (!locus.in_square()) return {p};
  const auto& q = locus.square;
  return {{q.x_lo(), p.y}, {q.x_hi(), p.y}, {p.x, q.y_lo()}, {p.x, q.y_hi()}};
}

int l1_level(Point2 a, Point2 b) {
  const double t = std::max(norm_inf(a), norm_inf(b));
  if (t == 0.0) return 60;
  int e = 0;
  const double m = std::frexp(t, &e);
  const int level = m == 0.5 ? 1 - e : -e;
  return std::min(level, 60);
}

}  // namespace

std::span<const std::array<int, 2>> forward_offsets(Stencil stencil) {
  const std::span<const std::array<int, 2>> all(kForward16);
  return stencil == Stencil::k8 ? all.first(4) : all;
}

double stencil_distortion(Stencil stencil) {
  // Stencil directions in the first octant, ordered by angle; the remaining
  // sectors are reflections of these.
  std::vector<std::array<double, 2>> dirs = {{1, 0}, {1, 1}};
  if (stencil == Stencil::k16) dirs = {{1, 0}, {2, 1}, {1, 1}};
  double worst = 0.0;
  for (std::size_t s = 0; s + 1 < dirs.size(); ++s) {
    const auto& u = dirs[s];
    const auto& w = dirs[s + 1];
    const double lu = std::hypot(u[0], u[1]);
    const double lw = std::hypot(w[0], w[1]);
    const double det = u[0] * w[1] - u[1] * w[0];
    const double cx = (lu * w[1] - lw * u[1]) / det;
    const double cy = (u[0] * lw - w[0] * lu) / det;
    worst = std::max(worst, std::hypot(cx, cy) - 1.0);
  }
  return worst;
}

double curve_length(std::span<const Point2> polyline, const WeightField& field, double quadrature_step) {
  if (polyline.size() < 2) throw DomainError("curve_length: polyline needs at least two vertices");
  if (!(quadrature_step > 0.0)) throw DomainError("curve_length: quadrature step must be positive");
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Point2 a = polyline[s];
    const Point2 d = polyline[s + 1] - a;
    const double len = norm2(d);
    if (!std::isfinite(len)) throw DomainError("curve_length: non-finite vertex");
    if (len == 0.0) continue;
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(len / quadrature_step)));
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += field(a + d * ((static_cast<double>(i) + 0.5) / static_cast<double>(m)));
    }
    total += len * sum / static_cast<double>(m);
  }
  return total;
}

// ---------------------------------------------------------------------------
// GridGraph

GridGraph GridGraph::build(const Rect& rect, double h, Stencil stencil, WeightField field,
                           std::size_t node_budget) {
  if (!(h > 0.0)) throw DomainError("build_graph: spacing must be positive");
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw DomainError("build_graph: degenerate rectangle");
  const double cx = std::round((rect.x1 - rect.x0) / h);
  const double cy = std::round((rect.y1 - rect.y0) / h);
  if ((cx + 1) * (cy + 1) > static_cast<double>(node_budget)) {
    // Suggest the finest power-of-two spacing that fits.
    double hs = h;
    while ((std::round((rect.x1 - rect.x0) / hs) + 1) * (std::round((rect.y1 - rect.y0) / hs) + 1) >
           static_cast<double>(node_budget)) {
      hs *= 2.0;
    }
    std::ostringstream os;
    os << "build_graph: " << (cx + 1) * (cy + 1) << " nodes exceed the budget of " << node_budget
       << "; try h = " << hs;
    throw ResourceError(os.str());
  }
  GridGraph g;
  g.h_ = h;
  g.nx_ = static_cast<std::size_t>(cx) + 1;
  g.ny_ = static_cast<std::size_t>(cy) + 1;
  g.rect_ = {rect.x0, rect.y0, rect.x0 + cx * h, rect.y0 + cy * h};
  g.stencil_ = stencil;
  g.field_ = std::move(field);

  const auto offsets = forward_offsets(stencil);
  const std::size_t n = g.node_count();
  g.weights_.assign(offsets.size() * n, kInf);
  for (std::size_t iy = 0; iy < g.ny_; ++iy) {
    for (std::size_t ix = 0; ix < g.nx_; ++ix) {
      const std::size_t id = g.id(ix, iy);
      const Point2 p = g.node(id);
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        const auto jx = static_cast<long long>(ix) + offsets[o][0];
        const auto jy = static_cast<long long>(iy) + offsets[o][1];
        if (jx < 0 || jy < 0 || jx >= static_cast<long long>(g.nx_) || jy >= static_cast<long long>(g.ny_)) {
          continue;
        }
        const Point2 q = g.node(g.id(static_cast<std::size_t>(jx), static_cast<std::size_t>(jy)));
        g.weights_[o * n + id] = g.segment_weight(p, q);
      }
    }
  }
  return g;
}

std::size_t GridGraph::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](double w) { return std::isfinite(w); }));
}

Point2 GridGraph::node(std::size_t id) const {
  const auto ix = static_cast<double>(id % nx_);
  const auto iy = static_cast<double>(id / nx_);
  return {rect_.x0 + ix * h_, rect_.y0 + iy * h_};
}

double GridGraph::sample(Point2 p, bool axis) const {
  if (!field_.dyadic()) return field_(p);
  const Locus loc = locate(p);
  if (loc.in_square()) {
    if (loc.square.side() < h_) return field_.upper_bound();
    return field_.at(p, loc);
  }
  return axis ? field_.at(p, loc) : field_.upper_bound();
}

double GridGraph::segment_weight(Point2 a, Point2 b) const {
  const Point2 d = b - a;
  const double len = norm2(d);
  if (len == 0.0) return 0.0;
  if (field_.kind() == WeightField::Kind::kConstant) return field_.lower_bound() * len;
  const bool axis = d.x == 0.0 || d.y == 0.0;
  const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(len / quadrature_step())));
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += sample(a + d * ((static_cast<double>(i) + 0.5) / static_cast<double>(m)), axis);
  }
  return len * sum / static_cast<double>(m);
}

std::vector<std::size_t> GridGraph::attachment_nodes(Point2 p) const {
  const auto fx = static_cast<long long>(std::floor((p.x - rect_.x0) / h_));
  const auto fy = static_cast<long long>(std::floor((p.y - rect_.y0) / h_));
  std::vector<std::size_t> out;
  out.reserve(16);
  for (long long iy = std::max(0LL, fy - 1); iy <= std::min<long long>(static_cast<long long>(ny_) - 1, fy + 2); ++iy) {
    for (long long ix = std::max(0LL, fx - 1); ix <= std::min<long long>(static_cast<long long>(nx_) - 1, fx + 2);
         ++ix) {
      out.push_back(id(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy)));
    }
  }
  return out;
}

double GridGraph::attachment_slack() const { return std::sqrt(2.0) * h_ * field_.upper_bound(); }

bool GridGraph::is_node(Point2 p) const { return rect_.contains(p) && snap(p) == p; }

Point2 GridGraph::snap(Point2 p) const {
  const double ix = std::clamp(std::round((p.x - rect_.x0) / h_), 0.0, static_cast<double>(nx_ - 1));
  const double iy = std::clamp(std::round((p.y - rect_.y0) / h_), 0.0, static_cast<double>(ny_ - 1));
  return {rect_.x0 + ix * h_, rect_.y0 + iy * h_};
}

void GridGraph::write_csv(std::ostream& out) const {
  const auto offsets = forward_offsets(stencil_);
  const auto old_precision = out.precision(17);
  out << "x0,y0,x1,y1,weight\n";
  for (std::size_t id = 0; id < node_count(); ++id) {
    const Point2 p = node(id);
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      const double w = edge_weight(id, o);
      if (!std::isfinite(w)) continue;
      out << p.x << ',' << p.y << ',' << p.x + offsets[o][0] * h_ << ',' << p.y + offsets[o][1] * h_ << ',' << w
          << '\n';
    }
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Queries

DistanceResult distance(const GridGraph& graph, Point2 a, Point2 b) {
  if (!graph.rect().contains(a) || !graph.rect().contains(b)) {
    throw DomainError("distance: endpoint outside the graph rectangle");
  }
  DistanceResult r;
  r.spacing = graph.spacing();
  r.quadrature_step = graph.quadrature_step();
  r.stencil = graph.stencil();
  r.stencil_distortion = stencil_distortion(graph.stencil());
  r.node_count = graph.node_count();
  r.tolerance = (graph.is_node(a) ? 0.0 : 0.5) * 2.0 * graph.attachment_slack() +
                (graph.is_node(b) ? 0.0 : 0.5) * 2.0 * graph.attachment_slack();

  if (!(a == b)) {
    std::vector<double> dist(graph.node_count(), kInf);
    MinQueue queue;
    seed_source(graph, a, dist, queue);

    std::vector<std::pair<std::size_t, double>> targets;
    for (const auto n : graph.attachment_nodes(b)) targets.emplace_back(n, graph.segment_weight(graph.node(n), b));
    double best = norm_inf(a - b) <= 2.0 * graph.spacing() ? graph.segment_weight(a, b) : kInf;

    run_dijkstra(graph, dist, queue, [&](std::size_t id, double d) {
      if (d >= best) return false;
      for (const auto& [n, w] : targets) {
        if (n == id) best = std::min(best, d + w);
      }
      return true;
    });
    if (!std::isfinite(best)) throw ConnectivityError("distance: endpoints are not connected");
    r.estimate = best;
  }

  r.lower_certificate = graph.field().lower_bound() * norm2(a - b);
  r.upper_certificate = r.estimate;
  if (graph.field().kind() == WeightField::Kind::kRhoFinal) {
    const int level = l1_level(a, b);
    if (level >= 2) {
      const double slack = std::pow(4.0, -level);
      r.l1_bracket = Bracket{norm1(a - b) - slack, norm1(a - b) + slack};
      r.l1_level = level;
    }
  }
  return r;
}

std::vector<double> node_distances(const GridGraph& graph, Point2 source) {
  if (!graph.rect().contains(source)) throw DomainError("node_distances: source outside the graph rectangle");
  std::vector<double> dist(graph.node_count(), kInf);
  MinQueue queue;
  seed_source(graph, source, dist, queue);
  run_dijkstra(graph, dist, queue, [](std::size_t, double) { return true; });
  return dist;
}

double distance_from_table(const GridGraph& graph, std::span<const double> table, Point2 target) {
  if (!graph.rect().contains(target)) throw DomainError("distance_from_table: target outside the graph rectangle");
  double best = kInf;
  for (const auto n : graph.attachment_nodes(target)) {
    best = std::min(best, table[n] + graph.segment_weight(graph.node(n), target));
  }
  return best;
}

double auto_spacing(int k) {
  // Two attachments of sqrt(2) h rho_max each, with rho_max = 2.
  const double budget = std::pow(4.0, -(k + 1)) / (4.0 * std::sqrt(2.0));
  int e = 0;
  std::frexp(budget, &e);  // budget in [2^(e-1), 2^e)
  return std::ldexp(1.0, e - 1);
}

DistanceResult localized_distance(const WeightField& field, Point2 a, Point2 b, int k, const SolverOptions& options) {
  if (k < 0) throw DomainError("localized_distance: k must be non-negative");
  if (!field.dyadic()) throw DomainError("localized_distance: field must be rho_inf, rho_kn or the final weight");
  if (!in_box(a, k + 2) || !in_box(b, k + 2)) throw DomainError("localized_distance: endpoints must lie in N_(k+2)");
  if (field.kind() == WeightField::Kind::kRhoKN && field.level() > k) {
    throw DomainError("localized_distance: rho_kn is only defined on its own N_k");
  }
  const double h = options.spacing > 0.0 ? options.spacing : auto_spacing(k);
  const auto graph = GridGraph::build(Rect::box(k), h, options.stencil, field, options.node_budget);
  return distance(graph, a, b);
}

// ---------------------------------------------------------------------------
// Skeleton route

Polyline skeleton_route(Point2 a, Point2 b, std::size_t node_budget) {
  if (!in_box(a, 2) || !in_box(b, 2)) throw DomainError("skeleton_route: endpoints must lie in N_2");
  if (a == b) return {a};

  const Locus la = locate(a);
  const Locus lb = locate(b);
  const double ab1 = norm1(a - b);

  // Exit pair: cheapest bound 2|a-a'| + |a'-b'|_1 + 2|b'-b| among pairs that
  // do not increase the ell^1 separation, if any does.
  Point2 ea = a, eb = b;
  {
    double best = kInf;
    bool best_ok = false;
    for (const auto& pa : exit_points(a, la)) {
      for (const auto& pb : exit_points(b, lb)) {
        const double sep = norm1(pa - pb);
        const bool ok = sep <= ab1;
        const double cost = 2.0 * norm2(a - pa) + 2.0 * norm2(b - pb) + sep;
        if ((ok && !best_ok) || (ok == best_ok && cost < best)) {
          best = cost;
          best_ok = ok;
          ea = pa;
          eb = pb;
        }
      }
    }
  }

  // Lattice spacing: fine enough that both exit points lie on lattice lines.
  double g = 0.25;
  for (const auto* l : {&la, &lb}) {
    if (l->in_square()) g = std::min(g, l->square.side());
  }
  LineInfo line_a, line_b;
  if (!la.in_square()) {
    line_a = skeleton_line_through(ea, g);
    g = std::min(g, line_a.spacing_limit);
  }
  if (!lb.in_square()) {
    line_b = skeleton_line_through(eb, g);
    g = std::min(g, line_b.spacing_limit);
  }
  if (!std::isfinite(g) || g <= 0.0) throw DomainError("skeleton_route: endpoint not on the skeleton");

  const double X0 = floor_to(std::min(ea.x, eb.x), g) - g;
  const double Y0 = floor_to(std::min(ea.y, eb.y), g) - g;
  const double X1 = ceil_to(std::max(ea.x, eb.x), g) + g;
  const double Y1 = ceil_to(std::max(ea.y, eb.y), g) + g;
  const double cx = std::round((X1 - X0) / g) + 1;
  const double cy = std::round((Y1 - Y0) / g) + 1;
  if (cx * cy > static_cast<double>(node_budget)) {
    throw ResourceError("skeleton_route: skeleton lattice exceeds the node budget");
  }
  const auto nx = static_cast<std::size_t>(cx);
  const auto ny = static_cast<std::size_t>(cy);
  const auto node = [&](std::size_t id) {
    return Point2{X0 + static_cast<double>(id % nx) * g, Y0 + static_cast<double>(id / nx) * g};
  };
  const auto id_of = [&](Point2 p) {
    return static_cast<std::size_t>(std::round((p.y - Y0) / g)) * nx +
           static_cast<std::size_t>(std::round((p.x - X0) / g));
  };

  // Lattice nodes reachable from p along its skeleton line.
  const auto attach = [&](Point2 p) {
    std::vector<std::pair<std::size_t, double>> out;
    const bool x_on = std::fmod(p.x, g) == 0.0;
    const bool y_on = std::fmod(p.y, g) == 0.0;
    if (x_on) {
      for (double yy : {floor_to(p.y, g), ceil_to(p.y, g)}) {
        const Point2 q{p.x, yy};
        if (q == p || on_skeleton({p.x, (p.y + yy) / 2})) out.emplace_back(id_of(q), std::abs(yy - p.y));
      }
    }
    if (y_on) {
      for (double xx : {floor_to(p.x, g), ceil_to(p.x, g)}) {
        const Point2 q{xx, p.y};
        if (q == p || on_skeleton({(p.x + xx) / 2, p.y})) out.emplace_back(id_of(q), std::abs(xx - p.x));
      }
    }
    return out;
  };
  const auto starts = attach(ea);
  const auto ends = attach(eb);
  if (starts.empty() || ends.empty()) throw DomainError("skeleton_route: exit point not on a skeleton line");

  std::vector<double> dist(nx * ny, kInf);
  std::vector<std::size_t> parent(nx * ny, std::numeric_limits<std::size_t>::max());
  MinQueue queue;
  for (const auto& [id, w] : starts) {
    if (w < dist[id]) {
      dist[id] = w;
      queue.emplace(w, id);
    }
  }
  double best = kInf;
  std::size_t best_end = 0;
  while (!queue.empty()) {
    const auto [d, id] = queue.top();
    queue.pop();
    if (d > dist[id]) continue;
    if (d >= best) break;
    for (const auto& [e, w] : ends) {
      if (e == id && d + w < best) {
        best = d + w;
        best_end = id;
      }
    }
    const std::size_t ix = id % nx, iy = id / nx;
    const Point2 p = node(id);
    const std::array<std::array<long long, 2>, 4> steps = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& s : steps) {
      const long long jx = static_cast<long long>(ix) + s[0];
      const long long jy = static_cast<long long>(iy) + s[1];
      if (jx < 0 || jy < 0 || jx >= static_cast<long long>(nx) || jy >= static_cast<long long>(ny)) continue;
      const Point2 mid{p.x + 0.5 * g * static_cast<double>(s[0]), p.y + 0.5 * g * static_cast<double>(s[1])};
      if (!on_skeleton(mid)) continue;
      const std::size_t nb = static_cast<std::size_t>(jy) * nx + static_cast<std::size_t>(jx);
      if (d + g < dist[nb]) {
        dist[nb] = d + g;
        parent[nb] = id;
        queue.emplace(d + g, nb);
      }
    }
  }
  if (!std::isfinite(best)) throw ConnectivityError("skeleton_route: exit points not joined on the skeleton");

  Polyline lattice_path;
  for (std::size_t id = best_end; id != std::numeric_limits<std::size_t>::max(); id = parent[id]) {
    lattice_path.push_back(node(id));
  }
  std::reverse(lattice_path.begin(), lattice_path.end());

  Polyline route;
  const auto push = [&](Point2 p) {
    if (route.empty() || !(route.back() == p)) route.push_back(p);
  };
  push(a);
  push(ea);
  for (const auto& p : lattice_path) push(p);
  push(eb);
  push(b);

  // Drop interior vertices of straight axis-parallel runs.
  Polyline compact;
  for (const auto& p : route) {
    while (compact.size() >= 2) {
      const Point2 u = compact[compact.size() - 2];
      const Point2 v = compact.back();
      const bool collinear = (u.x == v.x && v.x == p.x) || (u.y == v.y && v.y == p.y);
      const bool forward = (v.x - u.x) * (p.x - v.x) >= 0.0 && (v.y - u.y) * (p.y - v.y) >= 0.0;
      if (collinear && forward) {
        compact.pop_back();
      } else {
        break;
      }
    }
    compact.push_back(p);
  }
  return compact;
}

double route_length(const Polyline& route, const WeightField& field) {
  if (route.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) total += norm2(route[i + 1] - route[i]);
  return curve_length(route, field, std::max(total / 4096.0, 1e-15));
}

BracketResult bracket_distance(const GridGraph& graph, Point2 a, Point2 b, int k) {
  if (k < 2) throw DomainError("bracket_distance: requires k >= 2");
  if (!in_box(a, k) || !in_box(b, k)) throw DomainError("bracket_distance: endpoints must lie in N_k");
  BracketResult out;
  if (a == b) return out;
  const double l1 = norm1(a - b);
  const double slack = std::pow(4.0, -k);
  out.lemma = {l1 - slack, l1 + slack};

  const auto d = distance(graph, a, b);
  out.estimate = d.estimate;
  out.tolerance = d.tolerance;
  out.certified.lower = std::max({0.0, out.lemma.lower, norm2(a - b)});
  out.certified.upper = std::min(d.estimate + d.tolerance, out.lemma.upper);
  try {
    const auto route = skeleton_route(a, b);
    out.route_length = route_length(route, graph.field());
    out.certified.upper = std::min(out.certified.upper, *out.route_length);
  } catch (const ResourceError&) {
    // Endpoint squares too small for the skeleton lattice; the graph and the
    // ell^1 bound still bound the distance from above.
  }
  return out;
}

// ---------------------------------------------------------------------------
// GridSolver

GridSolver::GridSolver(std::size_t nodes_per_side, Stencil stencil)
    : nodes_per_side_(nodes_per_side), stencil_(stencil) {
  if (nodes_per_side_ < 2) throw DomainError("GridSolver: need at least two cells per side");
}

double GridSolver::spacing(int level) const {
  return 2.0 * box_radius(level) / static_cast<double>(nodes_per_side_);
}

FieldDistanceSolver::Batch GridSolver::all_pairs(const WeightField& field, int level, std::span<const Point2> sources,
                                                 std::span<const Point2> targets) const {
  const auto graph = GridGraph::build(Rect::box(level), spacing(level), stencil_, field);
  Batch out;
  out.spacing = graph.spacing();
  bool all_nodes = true;
  for (const auto& p : sources) all_nodes = all_nodes && graph.is_node(p);
  for (const auto& p : targets) all_nodes = all_nodes && graph.is_node(p);
  out.tolerance = all_nodes ? 0.0 : 2.0 * graph.attachment_slack();
  out.distances.reserve(sources.size() * targets.size());
  for (const auto& s : sources) {
    const auto table = node_distances(graph, s);
    for (const auto& t : targets) out.distances.push_back(distance_from_table(graph, table, t));
  }
  return out;
}

std::vector<Point2> GridSolver::snap(int level, std::span<const Point2> points) const {
  const double h = spacing(level);
  const double r = box_radius(level);
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back({std::clamp(std::round(p.x / h) * h, -r, r), std::clamp(std::round(p.y / h) * h, -r, r)});
  }
  return out;
}

}  // namespace tangentlab
