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
#include <cstring>
#include <filesystem>
#include <string>

#include "tangentlab/tangentlab.h"

namespace {

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(tl_version(), "0.1.0");
  EXPECT_STREQ(tl_status_name(TL_OK), "ok");
  EXPECT_STREQ(tl_status_name(TL_ERR_CONFIG), "config");
}

TEST(CApi, FieldsEvaluate) {
  tl_field* f = nullptr;
  ASSERT_EQ(tl_field_rho_infinity(&f), TL_OK);
  double v = 0.0;
  ASSERT_EQ(tl_field_eval(f, {1.0, 0.5}, &v), TL_OK);
  EXPECT_EQ(v, 1.0);
  ASSERT_EQ(tl_field_eval(f, {1.5, 0.5}, &v), TL_OK);
  EXPECT_EQ(v, 2.0);
  tl_field_free(f);

  ASSERT_EQ(tl_field_rho_kn(2, 3, &f), TL_OK);
  EXPECT_EQ(tl_field_eval(f, {0.5, 0.0}, &v), TL_ERR_DOMAIN);
  EXPECT_NE(std::string(tl_last_error()).find("N_k"), std::string::npos);
  tl_field_free(f);

  ASSERT_EQ(tl_field_rho_final_a_priori(8, &f), TL_OK);
  ASSERT_EQ(tl_field_eval(f, {0.0, 0.0}, &v), TL_OK);
  EXPECT_EQ(v, 1.0);
  EXPECT_STREQ(tl_last_error(), "");
  tl_field_free(f);

  EXPECT_EQ(tl_field_rho_final_json("{", &f), TL_ERR_CONFIG);
  EXPECT_EQ(tl_field_constant(1.5, nullptr), TL_ERR_DOMAIN);
}

TEST(CApi, GraphDistanceAndBracket) {
  tl_field* f = nullptr;
  ASSERT_EQ(tl_field_rho_infinity(&f), TL_OK);
  tl_graph* g = nullptr;
  ASSERT_EQ(tl_graph_build({-0.5, -0.5, 2.0, 2.0}, 1.0 / 64.0, TL_STENCIL_16, f, &g), TL_OK);
  EXPECT_EQ(tl_graph_node_count(g), 161u * 161u);
  tl_distance d{};
  ASSERT_EQ(tl_graph_distance(g, {1.0, 0.0}, {0.0, 1.0}, &d), TL_OK);
  EXPECT_NEAR(d.estimate, 2.0, 1e-12);
  EXPECT_EQ(d.spacing, 1.0 / 64.0);
  tl_graph_free(g);
  tl_field_free(f);

  ASSERT_EQ(tl_field_rho_final_a_priori(8, &f), TL_OK);
  ASSERT_EQ(tl_graph_build({-0.25, -0.25, 0.25, 0.25}, tl_auto_spacing(2), TL_STENCIL_16, f, &g), TL_OK);
  tl_bracket b{};
  ASSERT_EQ(tl_graph_bracket(g, {1.0 / 16.0, 0.0}, {0.0, 1.0 / 16.0}, 2, &b), TL_OK);
  EXPECT_EQ(b.lemma_lower, 0.0625);
  EXPECT_EQ(b.lemma_upper, 0.1875);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_EQ(tl_graph_bracket(g, {0.0, 0.0}, {0.1, 0.0}, 1, &b), TL_ERR_DOMAIN);
  tl_graph_free(g);

  EXPECT_EQ(tl_graph_build({0, 0, 1, 1}, 1e-5, TL_STENCIL_16, f, &g), TL_ERR_RESOURCE);
  EXPECT_EQ(tl_graph_build({0, 0, 1, 1}, 0.1, static_cast<tl_stencil>(4), f, &g), TL_ERR_DOMAIN);
  tl_field_free(f);

  double kappa = 0.0;
  ASSERT_EQ(tl_stencil_distortion(TL_STENCIL_16, &kappa), TL_OK);
  EXPECT_NEAR(kappa, 0.027486, 1e-6);
}

TEST(CApi, SpacesAndNorms) {
  tl_cantor* c = nullptr;
  ASSERT_EQ(tl_cantor_create(1, &c), TL_OK);
  EXPECT_EQ(tl_cantor_kept_length(c), 0.75);
  double v = 0.0, lo = 0.0;
  ASSERT_EQ(tl_cantor_ball_measure(c, {0.1, 0.1}, 0.05, &v, &lo), TL_OK);
  EXPECT_NEAR(v, 2 * 0.05 * 0.05, 1e-15);
  tl_cantor_free(c);
  EXPECT_EQ(tl_cantor_create(30, &c), TL_ERR_DOMAIN);

  int64_t m = 0;
  ASSERT_EQ(tl_grid_ball_measure(5, &m), TL_OK);
  EXPECT_EQ(m, 8 * 25 - 20);
  double defect = 0.0;
  ASSERT_EQ(tl_parallelogram_defect(1.0, 64, &defect), TL_OK);
  EXPECT_NEAR(defect, 4.0, 1e-12);
  ASSERT_EQ(tl_parallelogram_defect(2.0, 64, &defect), TL_OK);
  EXPECT_LE(defect, 1e-12);
  ASSERT_EQ(tl_parallelogram_defect(INFINITY, 64, &defect), TL_OK);
  EXPECT_NEAR(defect, 4.0, 1e-12);
}

TEST(CApi, ExperimentsRunAndWrite) {
  ASSERT_EQ(tl_experiment_count(), 7u);
  EXPECT_STREQ(tl_experiment_name(0), "verify-lemma52");
  EXPECT_EQ(tl_experiment_name(99), nullptr);
  char* defaults = nullptr;
  ASSERT_EQ(tl_experiment_defaults("cantor", &defaults), TL_OK);
  EXPECT_NE(std::string(defaults).find("depth=12\n"), std::string::npos);
  tl_string_free(defaults);

  char* json = nullptr;
  int passed = -1;
  ASSERT_EQ(tl_run_experiment("cantor", "depth = 8\ncenters = 10\npoints = 3", &json, &passed), TL_OK);
  EXPECT_EQ(passed, 1);
  EXPECT_NE(std::string(json).find("\"experiment\": \"cantor\""), std::string::npos);
  char* csv = nullptr;
  ASSERT_EQ(tl_report_to_csv(json, &csv), TL_OK);
  EXPECT_EQ(std::string(csv).rfind("claim,k,value,bound,slack,pass\n", 0), 0u);
  tl_string_free(csv);
  const auto path = (std::filesystem::temp_directory_path() / "tangentlab_capi.csv").string();
  ASSERT_EQ(tl_report_write(json, path.c_str(), "csv"), TL_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  EXPECT_EQ(tl_report_write(json, "/nonexistent/dir/x.json", "json"), TL_ERR_IO);
  tl_string_free(json);

  EXPECT_EQ(tl_run_experiment("cantor", "depth = 0", &json, &passed), TL_ERR_CONFIG);
  EXPECT_EQ(json, nullptr);
  EXPECT_EQ(tl_run_experiment("nope", nullptr, &json, &passed), TL_ERR_CONFIG);
}

}  // namespace
