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

#define TL_BUILDING_LIBRARY
#include "tangentlab/tangentlab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "tangentlab/errors.hpp"
#include "tangentlab/experiments.hpp"
#include "tangentlab/geodesic.hpp"
#include "tangentlab/spaces.hpp"
#include "tangentlab/tangent.hpp"
#include "tangentlab/weight_field.hpp"

struct tl_field {
  tangentlab::WeightField field;
};

struct tl_graph {
  tangentlab::GridGraph graph;
};

struct tl_cantor {
  tangentlab::CantorSquareSpace space;
};

namespace {

thread_local std::string g_last_error;

tl_status fail(tl_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs fn, translating library exceptions into status codes.
template <class Fn>
tl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TL_OK;
  } catch (const tangentlab::DomainError& e) {
    return fail(TL_ERR_DOMAIN, e.what());
  } catch (const tangentlab::ResourceError& e) {
    return fail(TL_ERR_RESOURCE, e.what());
  } catch (const tangentlab::ConnectivityError& e) {
    return fail(TL_ERR_CONNECTIVITY, e.what());
  } catch (const tangentlab::CalibrationError& e) {
    return fail(TL_ERR_CALIBRATION, e.what());
  } catch (const tangentlab::IoError& e) {
    return fail(TL_ERR_IO, e.what());
  } catch (const tangentlab::ConfigError& e) {
    return fail(TL_ERR_CONFIG, e.what());
  } catch (const tangentlab::SupportError& e) {
    return fail(TL_ERR_SUPPORT, e.what());
  } catch (const tangentlab::ResolutionError& e) {
    return fail(TL_ERR_RESOLUTION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TL_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(TL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TL_ERR_INTERNAL, "unknown error");
  }
}

#define TL_REQUIRE(cond, msg) \
  if (!(cond)) return fail(TL_ERR_DOMAIN, msg)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tangentlab::Point2 pt(tl_point p) { return {p.x, p.y}; }

tl_status make_field(tangentlab::WeightField f, tl_field** out) {
  *out = new tl_field{std::move(f)};
  return TL_OK;
}

}  // namespace

extern "C" {

const char* tl_version(void) { return "0.1.0"; }

const char* tl_status_name(tl_status status) {
  switch (status) {
    case TL_OK: return "ok";
    case TL_ERR_DOMAIN: return "domain";
    case TL_ERR_RESOURCE: return "resource";
    case TL_ERR_CONNECTIVITY: return "connectivity";
    case TL_ERR_CALIBRATION: return "calibration";
    case TL_ERR_IO: return "io";
    case TL_ERR_CONFIG: return "config";
    case TL_ERR_SUPPORT: return "support";
    case TL_ERR_RESOLUTION: return "resolution";
    case TL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tl_last_error(void) { return g_last_error.c_str(); }

void tl_string_free(char* s) { std::free(s); }

tl_status tl_field_constant(double c, tl_field** out) {
  TL_REQUIRE(out != nullptr, "tl_field_constant: null output");
  return guarded([&] { make_field(tangentlab::WeightField::constant(c), out); });
}

tl_status tl_field_rho_infinity(tl_field** out) {
  TL_REQUIRE(out != nullptr, "tl_field_rho_infinity: null output");
  return guarded([&] { make_field(tangentlab::WeightField::rho_infinity(), out); });
}

tl_status tl_field_rho_kn(int k, int n, tl_field** out) {
  TL_REQUIRE(out != nullptr, "tl_field_rho_kn: null output");
  return guarded([&] { make_field(tangentlab::WeightField::rho_kn(k, n), out); });
}

tl_status tl_field_rho_final_a_priori(int k_max, tl_field** out) {
  TL_REQUIRE(out != nullptr, "tl_field_rho_final_a_priori: null output");
  return guarded([&] {
    auto s = std::make_shared<tangentlab::CalibrationSchedule>(tangentlab::CalibrationSchedule::a_priori(k_max));
    make_field(tangentlab::WeightField::rho_final(std::move(s)), out);
  });
}

tl_status tl_field_rho_final_json(const char* schedule_json, tl_field** out) {
  TL_REQUIRE(out != nullptr && schedule_json != nullptr, "tl_field_rho_final_json: null argument");
  return guarded([&] {
    auto s = std::make_shared<tangentlab::CalibrationSchedule>(
        tangentlab::CalibrationSchedule::from_json(schedule_json));
    make_field(tangentlab::WeightField::rho_final(std::move(s)), out);
  });
}

tl_status tl_field_eval(const tl_field* field, tl_point p, double* out) {
  TL_REQUIRE(field != nullptr && out != nullptr, "tl_field_eval: null argument");
  return guarded([&] { *out = field->field(pt(p)); });
}

void tl_field_free(tl_field* field) { delete field; }

tl_status tl_graph_build(tl_rect rect, double spacing, tl_stencil stencil, const tl_field* field, tl_graph** out) {
  TL_REQUIRE(field != nullptr && out != nullptr, "tl_graph_build: null argument");
  TL_REQUIRE(stencil == TL_STENCIL_8 || stencil == TL_STENCIL_16, "tl_graph_build: stencil must be 8 or 16");
  return guarded([&] {
    const auto st = stencil == TL_STENCIL_8 ? tangentlab::Stencil::k8 : tangentlab::Stencil::k16;
    *out = new tl_graph{tangentlab::GridGraph::build({rect.x0, rect.y0, rect.x1, rect.y1}, spacing, st, field->field)};
  });
}

tl_status tl_graph_distance(const tl_graph* graph, tl_point a, tl_point b, tl_distance* out) {
  TL_REQUIRE(graph != nullptr && out != nullptr, "tl_graph_distance: null argument");
  return guarded([&] {
    const auto d = tangentlab::distance(graph->graph, pt(a), pt(b));
    *out = {d.estimate,          d.tolerance, d.lower_certificate, d.upper_certificate, d.spacing,
            d.stencil_distortion, d.node_count};
  });
}

tl_status tl_graph_bracket(const tl_graph* graph, tl_point a, tl_point b, int k, tl_bracket* out) {
  TL_REQUIRE(graph != nullptr && out != nullptr, "tl_graph_bracket: null argument");
  return guarded([&] {
    const auto r = tangentlab::bracket_distance(graph->graph, pt(a), pt(b), k);
    *out = {r.lemma.lower, r.lemma.upper, r.certified.lower, r.certified.upper, r.estimate,
            r.route_length.value_or(-1.0)};
  });
}

size_t tl_graph_node_count(const tl_graph* graph) { return graph == nullptr ? 0 : graph->graph.node_count(); }

void tl_graph_free(tl_graph* graph) { delete graph; }

double tl_auto_spacing(int k) {
  double h = NAN;
  guarded([&] { h = tangentlab::auto_spacing(k); });
  return h;
}

tl_status tl_stencil_distortion(tl_stencil stencil, double* out) {
  TL_REQUIRE(out != nullptr, "tl_stencil_distortion: null output");
  TL_REQUIRE(stencil == TL_STENCIL_8 || stencil == TL_STENCIL_16, "tl_stencil_distortion: stencil must be 8 or 16");
  return guarded([&] {
    *out = tangentlab::stencil_distortion(stencil == TL_STENCIL_8 ? tangentlab::Stencil::k8
                                                                  : tangentlab::Stencil::k16);
  });
}

tl_status tl_cantor_create(int depth, tl_cantor** out) {
  TL_REQUIRE(out != nullptr, "tl_cantor_create: null output");
  return guarded([&] { *out = new tl_cantor{tangentlab::CantorSquareSpace(depth)}; });
}

double tl_cantor_kept_length(const tl_cantor* cantor) {
  return cantor == nullptr ? NAN : cantor->space.set().kept_length();
}

tl_status tl_cantor_ball_measure(const tl_cantor* cantor, tl_point center, double r, double* value, double* lower) {
  TL_REQUIRE(cantor != nullptr && value != nullptr, "tl_cantor_ball_measure: null argument");
  return guarded([&] {
    const auto m = tangentlab::cantor_ball_measure(cantor->space, pt(center), r);
    *value = m.value;
    if (lower != nullptr) *lower = m.lower;
  });
}

void tl_cantor_free(tl_cantor* cantor) { delete cantor; }

tl_status tl_grid_ball_measure(int64_t L, int64_t* out) {
  TL_REQUIRE(out != nullptr, "tl_grid_ball_measure: null output");
  return guarded([&] { *out = tangentlab::grid_ball_measure(L).open_ball; });
}

tl_status tl_parallelogram_defect(double p, size_t directions, double* out) {
  TL_REQUIRE(out != nullptr, "tl_parallelogram_defect: null output");
  return guarded([&] { *out = tangentlab::hilbertianity_verdict(tangentlab::lp_norm(p), 1e-12, directions).defect; });
}

size_t tl_experiment_count(void) { return tangentlab::experiment_catalog().size(); }

const char* tl_experiment_name(size_t index) {
  const auto& c = tangentlab::experiment_catalog();
  return index < c.size() ? c[index].name.c_str() : nullptr;
}

const char* tl_experiment_summary(size_t index) {
  const auto& c = tangentlab::experiment_catalog();
  return index < c.size() ? c[index].summary.c_str() : nullptr;
}

tl_status tl_experiment_defaults(const char* name, char** out) {
  TL_REQUIRE(name != nullptr && out != nullptr, "tl_experiment_defaults: null argument");
  return guarded([&] {
    std::string text;
    for (const auto& [k, v] : tangentlab::experiment_info(name).defaults) text += k + "=" + v + "\n";
    *out = copy_string(text);
  });
}

tl_status tl_run_experiment(const char* name, const char* config, char** json, int* passed) {
  TL_REQUIRE(name != nullptr && json != nullptr, "tl_run_experiment: null argument");
  *json = nullptr;
  return guarded([&] {
    const auto cfg = tangentlab::ExperimentConfig::parse(config == nullptr ? "" : config);
    const auto report = tangentlab::run_experiment(name, cfg);
    *json = copy_string(report.to_json());
    if (passed != nullptr) *passed = report.passed() ? 1 : 0;
  });
}

tl_status tl_report_write(const char* json, const char* path, const char* format) {
  TL_REQUIRE(json != nullptr && path != nullptr && format != nullptr, "tl_report_write: null argument");
  return guarded([&] { tangentlab::write_report(tangentlab::Report::from_json(json), path, format); });
}

tl_status tl_report_to_csv(const char* json, char** out) {
  TL_REQUIRE(json != nullptr && out != nullptr, "tl_report_to_csv: null argument");
  return guarded([&] { *out = copy_string(tangentlab::Report::from_json(json).to_csv()); });
}

}  // extern "C"
