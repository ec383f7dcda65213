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

/* C interface of the tangentlab library. Objects are opaque handles released
 * with the matching *_free function. Every call returning tl_status leaves a
 * thread-local message readable through tl_last_error(). */
#ifndef TANGENTLAB_TANGENTLAB_H_
#define TANGENTLAB_TANGENTLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TL_BUILDING_LIBRARY)
#define TL_API __attribute__((visibility("default")))
#else
#define TL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_ERR_DOMAIN = 1,
  TL_ERR_RESOURCE = 2,
  TL_ERR_CONNECTIVITY = 3,
  TL_ERR_CALIBRATION = 4,
  TL_ERR_IO = 5,
  TL_ERR_CONFIG = 6,
  TL_ERR_SUPPORT = 7,
  TL_ERR_RESOLUTION = 8,
  TL_ERR_INTERNAL = 9
} tl_status;

typedef enum tl_stencil { TL_STENCIL_8 = 8, TL_STENCIL_16 = 16 } tl_stencil;

typedef struct tl_point {
  double x;
  double y;
} tl_point;

typedef struct tl_rect {
  double x0;
  double y0;
  double x1;
  double y1;
} tl_rect;

typedef struct tl_field tl_field;
typedef struct tl_graph tl_graph;
typedef struct tl_cantor tl_cantor;

TL_API const char* tl_version(void);
TL_API const char* tl_status_name(tl_status status);
/* Message of the last failing call on this thread; "" after success. */
TL_API const char* tl_last_error(void);
TL_API void tl_string_free(char* s);

/* Weight fields. */
TL_API tl_status tl_field_constant(double c, tl_field** out);
TL_API tl_status tl_field_rho_infinity(tl_field** out);
TL_API tl_status tl_field_rho_kn(int k, int n, tl_field** out);
/* Final weight with n(k) = 2k + 3 for k <= k_max. */
TL_API tl_status tl_field_rho_final_a_priori(int k_max, tl_field** out);
/* Final weight from a schedule in the JSON form written by `weights`. */
TL_API tl_status tl_field_rho_final_json(const char* schedule_json, tl_field** out);
TL_API tl_status tl_field_eval(const tl_field* field, tl_point p, double* out);
TL_API void tl_field_free(tl_field* field);

/* Grid graph approximation of the weighted length metric. */
typedef struct tl_distance {
  double estimate;
  double tolerance;
  double lower_certificate;
  double upper_certificate;
  double spacing;
  double stencil_distortion;
  size_t node_count;
} tl_distance;

typedef struct tl_bracket {
  double lemma_lower;
  double lemma_upper;
  double lower;
  double upper;
  double estimate;
  double route_length; /* negative when no route was built */
} tl_bracket;

TL_API tl_status tl_graph_build(tl_rect rect, double spacing, tl_stencil stencil, const tl_field* field,
                                tl_graph** out);
TL_API tl_status tl_graph_distance(const tl_graph* graph, tl_point a, tl_point b, tl_distance* out);
TL_API tl_status tl_graph_bracket(const tl_graph* graph, tl_point a, tl_point b, int k, tl_bracket* out);
TL_API size_t tl_graph_node_count(const tl_graph* graph);
TL_API void tl_graph_free(tl_graph* graph);
TL_API double tl_auto_spacing(int k);
TL_API tl_status tl_stencil_distortion(tl_stencil stencil, double* out);

/* Fat Cantor square with the l1 metric. */
TL_API tl_status tl_cantor_create(int depth, tl_cantor** out);
TL_API double tl_cantor_kept_length(const tl_cantor* cantor);
TL_API tl_status tl_cantor_ball_measure(const tl_cantor* cantor, tl_point center, double r, double* value,
                                        double* lower);
TL_API void tl_cantor_free(tl_cantor* cantor);

/* Unit-edge length of the open sup-norm ball of integer radius L in the grid. */
TL_API tl_status tl_grid_ball_measure(int64_t L, int64_t* out);
/* max |N(u+v)^2 + N(u-v)^2 - 4| over l^p-unit u, v; p = INFINITY allowed. */
TL_API tl_status tl_parallelogram_defect(double p, size_t directions, double* out);

/* Experiments. config is "key=value" lines (or NULL); *json receives the
 * report, to be released with tl_string_free; *passed is 1 or 0. */
TL_API size_t tl_experiment_count(void);
TL_API const char* tl_experiment_name(size_t index);
TL_API const char* tl_experiment_summary(size_t index);
/* Newline-separated "key=default" list, released with tl_string_free. */
TL_API tl_status tl_experiment_defaults(const char* name, char** out);
TL_API tl_status tl_run_experiment(const char* name, const char* config, char** json, int* passed);
/* Writes a report given as JSON to path in "json" or "csv" format. */
TL_API tl_status tl_report_write(const char* json, const char* path, const char* format);
/* Writes a report as CSV text, released with tl_string_free. */
TL_API tl_status tl_report_to_csv(const char* json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TANGENTLAB_TANGENTLAB_H_ */
