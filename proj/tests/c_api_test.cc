// Copyright 2026 The polybrud Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared library through its C interface only.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "polybrud/polybrud.h"

namespace {

namespace fs = std::filesystem;

fs::path TempPath(const std::string& tag) {
  std::random_device rd;
  return fs::temp_directory_path() / ("polybrud_capi_" + tag + "_" + std::to_string(rd()));
}

TEST_SUITE("c_api") {

TEST_CASE("version and defaults") {
  CHECK(std::string(pb_version()) == "0.3.0");
  const pb_learn_config lc = pb_learn_config_default();
  CHECK(lc.learning_rate == 0.01);
  CHECK(lc.batch_size == 64);
  CHECK(lc.gradient_mode == PB_GRADIENT_EXACT_MOMENTS);
  const pb_pjap_config pc = pb_pjap_config_default();
  CHECK(pc.alpha == 5.0);
  CHECK(pc.epsilon == 0.01);
  CHECK(pc.refresh_fraction == 0.1);
}

TEST_CASE("games") {
  pb_game* g = nullptr;
  REQUIRE(pb_game_create(PB_GAME_TWIN_PEAKS, 1, 4, 5, &g) == PB_OK);
  double v = 0.0;
  const double a = std::sqrt(3.0 / 8.0);
  REQUIRE(pb_game_eval(g, a, a, &v) == PB_OK);
  CHECK(v == doctest::Approx(0.5625));
  double gx = 1, gy = 1;
  REQUIRE(pb_game_gradient(g, a, a, &gx, &gy) == PB_OK);
  CHECK(std::abs(gx) < 1e-12);
  pb_game_destroy(g);

  CHECK(pb_game_create(PB_GAME_TWIN_PEAKS, 1, 4, 1, &g) == PB_ERR_INVALID_PARAMS);
  CHECK(std::string(pb_last_error()).find("InvalidParams") != std::string::npos);
  CHECK(pb_game_create(static_cast<pb_game_kind>(42), 0, 0, 0, &g) == PB_ERR_INVALID_PARAMS);
  CHECK(pb_game_create(PB_GAME_SIGN_AGREEMENT, 0, 0, 0, nullptr) == PB_ERR_NULL_ARGUMENT);

  const int i[] = {1, 0};
  const int j[] = {0, 2};
  const double c[] = {2.0, -1.0};
  REQUIRE(pb_game_create_custom(i, j, c, 2, &g) == PB_OK);
  REQUIRE(pb_game_eval(g, 3.0, 2.0, &v) == PB_OK);
  CHECK(v == 2.0);
  pb_game_destroy(g);
  pb_game_destroy(nullptr);
}

TEST_CASE("datasets, stats and gradients") {
  const double xs[] = {0.5, 0.5};
  const double ys[] = {0.6, 0.7};
  pb_dataset* d = nullptr;
  REQUIRE(pb_dataset_from_arrays(xs, ys, 2, &d) == PB_OK);
  CHECK(pb_dataset_size(d) == 2);
  pb_stats st{};
  REQUIRE(pb_dataset_stats(d, &st) == PB_OK);
  CHECK(st.mean_y == doctest::Approx(0.65));
  double mx[3], my[3];
  REQUIRE(pb_dataset_moments(d, 2, mx, my) == PB_OK);
  CHECK(my[2] == doctest::Approx(0.425));

  pb_game* g = nullptr;
  REQUIRE(pb_game_create(PB_GAME_TWIN_PEAKS, 1, 4, 5, &g) == PB_OK);
  double gx = 0, gy = 0, mgx = 0, mgy = 0;
  REQUIRE(pb_brud_gradient_exact(g, d, 0.5, 0.0, &gx, &gy) == PB_OK);
  REQUIRE(pb_brud_gradient_minibatch(g, d, 0.5, 0.0, &mgx, &mgy) == PB_OK);
  CHECK(gx == doctest::Approx(0.55));
  CHECK(mgx == doctest::Approx(gx).epsilon(1e-12));

  double ax = 0, ay = 0;
  CHECK(pb_dataset_get(d, 5, &ax, &ay) == PB_ERR_INVALID_PARAMS);
  pb_dataset_destroy(d);

  pb_dataset* empty = nullptr;
  REQUIRE(pb_dataset_from_arrays(nullptr, nullptr, 0, &empty) == PB_OK);
  CHECK(pb_dataset_stats(empty, &st) == PB_ERR_EMPTY_DATASET);
  pb_dataset_destroy(empty);

  pb_dataset_spec spec{};
  spec.kind = PB_DATASET_GAUSSIAN_CENTERED;
  spec.size = 101;
  spec.center_x = 0.3;
  spec.center_y = -0.1;
  spec.sigma_x = spec.sigma_y = 0.2;
  spec.seed = 4;
  REQUIRE(pb_dataset_generate(&spec, &d) == PB_OK);
  REQUIRE(pb_dataset_stats(d, &st) == PB_OK);
  CHECK(st.mean_x == doctest::Approx(0.3).epsilon(1e-12));

  const fs::path csv = TempPath("ds");
  REQUIRE(pb_dataset_save_csv(d, csv.c_str()) == PB_OK);
  pb_dataset* back = nullptr;
  REQUIRE(pb_dataset_load_csv(csv.c_str(), &back) == PB_OK);
  CHECK(pb_dataset_size(back) == 101);
  REQUIRE(pb_dataset_get(back, 7, &ax, &ay) == PB_OK);
  double ox = 0, oy = 0;
  REQUIRE(pb_dataset_get(d, 7, &ox, &oy) == PB_OK);
  CHECK(ax == ox);
  CHECK(ay == oy);
  fs::remove(csv);
  pb_dataset_destroy(back);

  spec.size = 0;
  pb_dataset* bad = nullptr;
  CHECK(pb_dataset_generate(&spec, &bad) == PB_ERR_INVALID_SPEC);
  CHECK(bad == nullptr);
  CHECK(pb_dataset_load_csv("/nonexistent.csv", &bad) == PB_ERR_IO);

  // Offline training on the generated data.
  pb_game* act = nullptr;
  REQUIRE(pb_game_create(PB_GAME_ACTION_AGREEMENT, 0, 0, 0, &act) == PB_OK);
  pb_learn_config lc = pb_learn_config_default();
  lc.steps = 20000;
  pb_record* rec = nullptr;
  REQUIRE(pb_train_offline(act, d, 0.0, 0.0, &lc, nullptr, 1, &rec) == PB_OK);
  CHECK(pb_record_rows(rec) == 20001);
  pb_run_row row{};
  REQUIRE(pb_record_row(rec, 20000, &row) == PB_OK);
  CHECK(row.step == 20000);
  CHECK(row.theta_x == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(row.theta_y == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(pb_record_row(rec, 20001, &row) == PB_ERR_INVALID_PARAMS);
  const fs::path rec_csv = TempPath("rec");
  REQUIRE(pb_record_save_csv(rec, rec_csv.c_str()) == PB_OK);
  CHECK(fs::file_size(rec_csv) > 0);
  fs::remove(rec_csv);
  pb_record_destroy(rec);

  pb_fixed_point fp{};
  REQUIRE(pb_brud_fixed_point(act, d, &fp) == PB_OK);
  CHECK(fp.classification == PB_FIXED_POINT_UNIQUE);
  CHECK(fp.has_point == 1);
  CHECK(fp.x == doctest::Approx(-0.1).epsilon(1e-12));

  pb_pjap_config pc = pb_pjap_config_default();
  CHECK(pb_train_offline(act, d, 0.0, 0.0, &lc, &pc, 1, &rec) == PB_ERR_INVALID_PARAMS);
  lc.gradient_mode = PB_GRADIENT_MINIBATCH;
  lc.steps = 10;
  REQUIRE(pb_train_offline(act, d, 0.0, 0.0, &lc, &pc, 1, &rec) == PB_OK);
  pb_record_destroy(rec);

  pb_game_destroy(act);
  pb_game_destroy(g);
  pb_dataset_destroy(d);
}

TEST_CASE("buffers") {
  pb_buffer* b = nullptr;
  REQUIRE(pb_buffer_create(2, &b) == PB_OK);
  int64_t id = -1;
  REQUIRE(pb_buffer_insert(b, 0.1, 0.1, 1.0, &id) == PB_OK);
  CHECK(id == 0);
  REQUIRE(pb_buffer_insert(b, 0.2, 0.2, 2.0, &id) == PB_OK);
  REQUIRE(pb_buffer_insert(b, 0.3, 0.3, 4.0, &id) == PB_OK);
  CHECK(id == 2);
  CHECK(pb_buffer_size(b) == 2);
  CHECK(pb_buffer_total_priority(b) == 6.0);
  double p = 0;
  CHECK(pb_buffer_priority(b, 0, &p) == PB_ERR_UNKNOWN_ID);
  REQUIRE(pb_buffer_priority(b, 1, &p) == PB_OK);
  CHECK(p == 2.0);
  CHECK(pb_buffer_insert(b, 0, 0, -1.0, nullptr) == PB_ERR_INVALID_PARAMS);

  const int64_t ids[] = {1};
  const double prios[] = {0.5};
  REQUIRE(pb_buffer_update_priorities(b, ids, prios, 1) == PB_OK);
  CHECK(pb_buffer_total_priority(b) == 4.5);

  std::vector<int64_t> out(1000);
  REQUIRE(pb_buffer_sample_prioritized(b, out.size(), 3, out.data()) == PB_OK);
  int ones = 0;
  for (int64_t v : out) ones += v == 1;
  CHECK(ones > 60);
  CHECK(ones < 160);
  REQUIRE(pb_buffer_sample_uniform(b, out.size(), 3, out.data()) == PB_OK);
  for (int64_t v : out) CHECK((v == 1 || v == 2));

  pb_pjap_config pc = pb_pjap_config_default();
  pc.refresh_fraction = 1.0;
  size_t count = 0;
  REQUIRE(pb_buffer_pjap_refresh(b, 0.3, 0.3, &pc, nullptr, 0, 1, &count) == PB_OK);
  CHECK(count == 2);
  REQUIRE(pb_buffer_priority(b, 2, &p) == PB_OK);
  CHECK(p == 1.0);

  const fs::path csv = TempPath("buf");
  REQUIRE(pb_buffer_dump_csv(b, csv.c_str()) == PB_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "id,a_x,a_y,priority");
  in.close();
  fs::remove(csv);
  pb_buffer_destroy(b);

  pb_buffer* empty = nullptr;
  REQUIRE(pb_buffer_create(0, &empty) == PB_OK);
  CHECK(pb_buffer_sample_uniform(empty, 4, 1, out.data()) == PB_ERR_EMPTY_BUFFER);
  pb_buffer_destroy(empty);
}

TEST_CASE("online training") {
  pb_game* g = nullptr;
  REQUIRE(pb_game_create(PB_GAME_SIGN_AGREEMENT, 0, 0, 0, &g) == PB_OK);
  pb_learn_config lc = pb_learn_config_default();
  lc.gradient_mode = PB_GRADIENT_MINIBATCH;
  lc.steps = 100;
  lc.has_param_clamp = 1;
  lc.clamp_low = -1.5;
  lc.clamp_high = 1.5;
  pb_record* rec = nullptr;
  pb_buffer* buf = nullptr;
  REQUIRE(pb_train_online(g, -0.5, 0.5, &lc, 64, 1, &rec, &buf) == PB_OK);
  CHECK(pb_record_rows(rec) == 101);
  CHECK(pb_buffer_size(buf) == 64);
  pb_record_destroy(rec);
  pb_buffer_destroy(buf);
  CHECK(pb_train_online(g, 0, 0, &lc, 10, 1, &rec, nullptr) == PB_ERR_INVALID_PARAMS);
  pb_game_destroy(g);
}

TEST_CASE("pjap and analysis helpers") {
  pb_pjap_config pc = pb_pjap_config_default();
  double p = 0;
  REQUIRE(pb_pjap_priority(0.2, &pc, &p) == PB_OK);
  CHECK(p == doctest::Approx(std::exp(-0.2)));
  CHECK(pb_pjap_priority(-1.0, &pc, &p) == PB_ERR_NEGATIVE_DISTANCE);
  pc.epsilon = 0;
  CHECK(pb_pjap_priority(0.2, &pc, &p) == PB_ERR_INVALID_PARAMS);

  CHECK(pb_distance_joint_action(0.4, -0.2, 0.1, 0.1) == doctest::Approx(0.6));
  const double tx[] = {0.4};
  const double ty[] = {-0.2};
  double d = 0;
  REQUIRE(pb_distance_trajectory(tx, ty, 1, 0.1, 0.1, &d) == PB_OK);
  CHECK(d == doctest::Approx(0.3));
  CHECK(pb_distance_trajectory(nullptr, nullptr, 0, 0, 0, &d) == PB_ERR_EMPTY_TRAJECTORY);

  double plus = 0, minus = 0;
  REQUIRE(pb_twin_peaks_optima(1, 4, 5, &plus, &minus) == PB_OK);
  CHECK(plus == doctest::Approx(0.61237).epsilon(1e-5));
  CHECK(minus == -plus);

  int found = 1;
  REQUIRE(pb_sigma_condition(1, 4, 5, 0.0, &found, &plus, &minus) == PB_OK);
  CHECK(found == 0);
  CHECK(std::isnan(plus));
  REQUIRE(pb_sigma_condition(1, 4, 5, std::sqrt(3.0 / 8.0), &found, &plus, &minus) == PB_OK);
  CHECK(found == 1);
  CHECK(plus == 0.0);
  CHECK(std::isnan(minus));
}

TEST_CASE("config and experiment driver") {
  CHECK(pb_config_key_count() > 20);
  const char* key = nullptr;
  const char* flag = nullptr;
  REQUIRE(pb_config_key_info(0, &key, &flag, nullptr, nullptr) == PB_OK);
  CHECK(std::string(flag).rfind("--", 0) == 0);
  CHECK(pb_config_key_info(10000, &key, nullptr, nullptr, nullptr) == PB_ERR_INVALID_PARAMS);

  pb_config* cfg = nullptr;
  CHECK(pb_config_parse("{oops", &cfg) == PB_ERR_CONFIG);
  REQUIRE(pb_config_parse(R"({"experiment": "offline_uniform"})", &cfg) == PB_OK);
  CHECK(pb_config_validate(cfg) == PB_ERR_CONFIG);
  CHECK(std::string(pb_last_error()).find("dataset") != std::string::npos);
  REQUIRE(pb_config_set(cfg, "dataset.size", "40") == PB_OK);
  REQUIRE(pb_config_set(cfg, "learn.steps", "10") == PB_OK);
  const fs::path out = TempPath("exp");
  REQUIRE(pb_config_set(cfg, "output_dir", out.c_str()) == PB_OK);
  CHECK(pb_config_set(cfg, "nope", "1") == PB_ERR_CONFIG);
  REQUIRE(pb_config_validate(cfg) == PB_OK);

  char* text = nullptr;
  REQUIRE(pb_config_to_json(cfg, &text) == PB_OK);
  CHECK(std::string(text).find("\"size\": 40") != std::string::npos);
  pb_string_free(text);

  pb_manifest* m = nullptr;
  REQUIRE(pb_experiment_run(cfg, 1, 1, &m) == PB_OK);
  CHECK(pb_manifest_file_count(m) == 2);
  CHECK_FALSE(fs::exists(out));
  pb_manifest_destroy(m);

  REQUIRE(pb_experiment_run(cfg, 0, 2, &m) == PB_OK);
  for (size_t k = 0; k < pb_manifest_file_count(m); ++k) {
    CHECK(fs::exists(fs::path(pb_manifest_output_dir(m)) / pb_manifest_file(m, k)));
  }
  CHECK(pb_manifest_file(m, 99) == nullptr);
  REQUIRE(pb_manifest_to_json(m, &text) == PB_OK);
  CHECK(std::string(text).find("\"files\"") != std::string::npos);
  pb_string_free(text);
  pb_manifest_destroy(m);

  const fs::path grid = out / "grid.csv";
  char* report = nullptr;
  REQUIRE(pb_analyze(cfg, grid.c_str(), &report) == PB_OK);
  CHECK(std::string(report).find("fixed_point.classification=") != std::string::npos);
  CHECK(fs::exists(grid));
  pb_string_free(report);

  const fs::path ds = out / "ds.csv";
  REQUIRE(pb_generate_dataset_csv(cfg, ds.c_str()) == PB_OK);
  CHECK(fs::exists(ds));

  fs::remove_all(out);
  pb_config_destroy(cfg);

  CHECK(pb_config_load("/nonexistent.json", &cfg) == PB_ERR_IO);
  CHECK(pb_config_validate(nullptr) == PB_ERR_NULL_ARGUMENT);
}

}  // TEST_SUITE

}  // namespace
