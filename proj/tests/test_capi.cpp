// Copyright 2026 The Sonoloc Authors
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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sonoloc/sonoloc.h"

namespace {

std::string temp_file(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

sonoloc_config fast_config() {
  sonoloc_config cfg;
  sonoloc_config_default(&cfg);
  cfg.grid_level = 1;
  return cfg;
}

}  // namespace

TEST_CASE("version and status strings exist") {
  CHECK(std::strcmp(sonoloc_version(), "0.1.0") == 0);
  CHECK(sonoloc_strstatus(SONOLOC_OK) != nullptr);
  CHECK(sonoloc_last_error() != nullptr);
}

TEST_CASE("default configuration carries the evaluation settings") {
  sonoloc_config cfg;
  sonoloc_config_default(&cfg);
  CHECK(cfg.frame_size == 512);
  CHECK(cfg.hop_size == 128);
  CHECK(cfg.fs == 16000.0);
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.c == 340.0);
  CHECK(cfg.delta == 1e-5);
  CHECK(cfg.delta_theta == doctest::Approx(0.1745));
  CHECK(cfg.grid_level == 4);
  CHECK(cfg.scans == 1);
  CHECK(cfg.run_srp == 1);
  CHECK(cfg.run_svd == 1);
}

TEST_CASE("array handles expose presets and json geometries") {
  sonoloc_array_t* a = nullptr;
  REQUIRE(sonoloc_array_preset("linear7", &a) == SONOLOC_OK);
  CHECK(sonoloc_array_mic_count(a) == 7);
  CHECK(sonoloc_array_geometry_class(a) == 1);
  sonoloc_array_free(a);

  sonoloc_array_t* b = nullptr;
  const char* json =
      R"({"name":"tri","unit":"m","positions":[[0,0,0],[0.1,0,0],[0,0.1,0]]})";
  REQUIRE(sonoloc_array_from_json(json, &b) == SONOLOC_OK);
  CHECK(sonoloc_array_mic_count(b) == 3);
  CHECK(sonoloc_array_geometry_class(b) == 2);
  sonoloc_array_free(b);

  sonoloc_array_t* c = nullptr;
  CHECK(sonoloc_array_preset("hexagon12", &c) != SONOLOC_OK);
  CHECK(c == nullptr);
  CHECK(std::strlen(sonoloc_last_error()) > 0);
  CHECK(sonoloc_array_from_json("not json", &c) != SONOLOC_OK);
}

TEST_CASE("null arguments are rejected not crashed") {
  CHECK(sonoloc_array_preset(nullptr, nullptr) != SONOLOC_OK);
  CHECK(sonoloc_model_build(nullptr, nullptr, nullptr) != SONOLOC_OK);
  CHECK(sonoloc_engine_process(nullptr, nullptr, 0) != SONOLOC_OK);
  CHECK(sonoloc_model_load(nullptr, nullptr) != SONOLOC_OK);
  sonoloc_array_free(nullptr);
  sonoloc_model_free(nullptr);
  sonoloc_engine_free(nullptr);
  sonoloc_scenario_free(nullptr);
  sonoloc_buffer_free(nullptr);
}

TEST_CASE("model build save load lifecycle") {
  sonoloc_array_t* array = nullptr;
  REQUIRE(sonoloc_array_preset("spatial7", &array) == SONOLOC_OK);
  const sonoloc_config cfg = fast_config();
  sonoloc_model_t* model = nullptr;
  REQUIRE(sonoloc_model_build(array, &cfg, &model) == SONOLOC_OK);
  CHECK(sonoloc_model_rank(model) >= 1);
  CHECK(sonoloc_model_grid_size(model) == 42);
  CHECK(sonoloc_model_energy_ratio(model) >= 1.0 - 1e-5);

  const std::string path = temp_file("sonoloc_capi_model.snl");
  REQUIRE(sonoloc_model_save(model, path.c_str()) == SONOLOC_OK);
  sonoloc_model_t* loaded = nullptr;
  REQUIRE(sonoloc_model_load(path.c_str(), &loaded) == SONOLOC_OK);
  CHECK(sonoloc_model_rank(loaded) == sonoloc_model_rank(model));
  CHECK(sonoloc_model_energy_ratio(loaded) ==
        sonoloc_model_energy_ratio(model));
  sonoloc_model_free(loaded);
  std::filesystem::remove(path);

  sonoloc_model_t* missing = nullptr;
  CHECK(sonoloc_model_load(path.c_str(), &missing) != SONOLOC_OK);
  CHECK(missing == nullptr);

  sonoloc_model_free(model);
  sonoloc_array_free(array);
}

TEST_CASE("engine processes frames and reports state") {
  sonoloc_array_t* array = nullptr;
  REQUIRE(sonoloc_array_preset("spatial7", &array) == SONOLOC_OK);
  sonoloc_config cfg = fast_config();
  sonoloc_model_t* model = nullptr;
  REQUIRE(sonoloc_model_build(array, &cfg, &model) == SONOLOC_OK);
  sonoloc_engine_t* engine = nullptr;
  REQUIRE(sonoloc_engine_create(array, model, &cfg, &engine) == SONOLOC_OK);

  std::vector<double> zeros(7 * 512, 0.0);
  REQUIRE(sonoloc_engine_process(engine, zeros.data(), 512) == SONOLOC_OK);
  CHECK(sonoloc_engine_frame_silent(engine) == 1);
  CHECK(sonoloc_engine_frame_index(engine) == 0);
  sonoloc_estimate est[4];
  CHECK(sonoloc_engine_estimates(engine, SONOLOC_METHOD_SRP, est, 4) == 0);

  // a pure tone on all channels: not silent, both methods emit something
  std::vector<double> tone(7 * 512);
  for (int m = 0; m < 7; ++m)
    for (int i = 0; i < 512; ++i)
      tone[m * 512 + i] = std::sin(2.0 * M_PI * 40.0 * i / 512.0);
  REQUIRE(sonoloc_engine_process(engine, tone.data(), 512) == SONOLOC_OK);
  CHECK(sonoloc_engine_frame_silent(engine) == 0);
  CHECK(sonoloc_engine_frame_index(engine) == 1);
  CHECK(sonoloc_engine_frame_time(engine) == doctest::Approx(128.0 / 16000.0));
  const int n_srp = sonoloc_engine_estimates(engine, SONOLOC_METHOD_SRP, est, 4);
  CHECK(n_srp == 1);
  const double norm = std::sqrt(est[0].x * est[0].x + est[0].y * est[0].y +
                                est[0].z * est[0].z);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(est[0].scan == 0);

  // wrong window length is an error, engine state survives
  CHECK(sonoloc_engine_process(engine, tone.data(), 256) != SONOLOC_OK);
  CHECK(sonoloc_engine_frame_index(engine) == 1);

  REQUIRE(sonoloc_engine_reset(engine) == SONOLOC_OK);
  REQUIRE(sonoloc_engine_process(engine, zeros.data(), 512) == SONOLOC_OK);
  CHECK(sonoloc_engine_frame_index(engine) == 0);

  sonoloc_engine_free(engine);
  sonoloc_model_free(model);
  sonoloc_array_free(array);
}

TEST_CASE("engine creation validates the method and model mix") {
  sonoloc_array_t* array = nullptr;
  REQUIRE(sonoloc_array_preset("spatial7", &array) == SONOLOC_OK);
  sonoloc_config cfg = fast_config();
  sonoloc_engine_t* engine = nullptr;
  // svd requested but no model given
  CHECK(sonoloc_engine_create(array, nullptr, &cfg, &engine) != SONOLOC_OK);
  CHECK(engine == nullptr);
  cfg.run_svd = 0;
  REQUIRE(sonoloc_engine_create(array, nullptr, &cfg, &engine) == SONOLOC_OK);
  sonoloc_engine_free(engine);
  sonoloc_array_free(array);
}

TEST_CASE("scenarios generate render and describe deterministically") {
  sonoloc_scenario_config sc_cfg;
  sonoloc_scenario_config_default(&sc_cfg);
  CHECK(sc_cfg.source_count == 1);
  CHECK(sc_cfg.rt60_min == 0.2);
  CHECK(sc_cfg.rt60_max == 0.5);
  sc_cfg.source_count = 2;

  sonoloc_scenario_t* sc = nullptr;
  REQUIRE(sonoloc_scenario_generate(&sc_cfg, 31, &sc) == SONOLOC_OK);
  CHECK(sonoloc_scenario_source_count(sc) == 2);
  CHECK(sonoloc_scenario_rt60(sc) >= 0.2);
  CHECK(sonoloc_scenario_rt60(sc) <= 0.5);
  double doa[3] = {0, 0, 0};
  REQUIRE(sonoloc_scenario_true_doa(sc, 1, doa) == SONOLOC_OK);
  CHECK(std::sqrt(doa[0] * doa[0] + doa[1] * doa[1] + doa[2] * doa[2]) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sonoloc_scenario_true_doa(sc, 5, doa) != SONOLOC_OK);

  const char* desc = sonoloc_scenario_describe(sc);
  REQUIRE(desc != nullptr);
  const auto parsed = nlohmann::json::parse(desc);
  CHECK(parsed["seed"] == 31);
  CHECK(parsed["sources"].size() == 2);
  CHECK(parsed["true_doas"].size() == 2);
  CHECK(parsed["rt60"] == doctest::Approx(sonoloc_scenario_rt60(sc)));

  sonoloc_array_t* array = nullptr;
  REQUIRE(sonoloc_array_preset("planar7", &array) == SONOLOC_OK);
  const sonoloc_config cfg = fast_config();
  double* audio1 = nullptr;
  double* audio2 = nullptr;
  size_t frames1 = 0, frames2 = 0;
  REQUIRE(sonoloc_scenario_render(sc, array, &cfg, 0.5, &audio1, &frames1) ==
          SONOLOC_OK);
  REQUIRE(sonoloc_scenario_render(sc, array, &cfg, 0.5, &audio2, &frames2) ==
          SONOLOC_OK);
  REQUIRE(frames1 == frames2);
  REQUIRE(frames1 >= 8000);
  bool same = true;
  double peak = 0.0;
  for (size_t i = 0; i < 7 * frames1; ++i) {
    if (audio1[i] != audio2[i]) same = false;
    peak = std::max(peak, std::abs(audio1[i]));
  }
  CHECK(same);
  CHECK(peak > 0.0);
  sonoloc_buffer_free(audio1);
  sonoloc_buffer_free(audio2);
  sonoloc_array_free(array);
  sonoloc_scenario_free(sc);
}

TEST_CASE("wav io round trips through the c surface") {
  const std::string path = temp_file("sonoloc_capi_io.wav");
  std::vector<double> data(2 * 64);
  for (size_t i = 0; i < data.size(); ++i)
    data[i] = std::sin(0.1 * static_cast<double>(i));
  REQUIRE(sonoloc_wav_write(path.c_str(), data.data(), 2, 64, 16000.0) ==
          SONOLOC_OK);
  double* back = nullptr;
  int32_t channels = 0;
  size_t frames = 0;
  double fs = 0.0;
  REQUIRE(sonoloc_wav_read(path.c_str(), &back, &channels, &frames, &fs) ==
          SONOLOC_OK);
  CHECK(channels == 2);
  CHECK(frames == 64);
  CHECK(fs == 16000.0);
  for (size_t i = 0; i < data.size(); ++i)
    CHECK(std::abs(back[i] - data[i]) < 1e-6);
  sonoloc_buffer_free(back);
  std::filesystem::remove(path);
}

TEST_CASE("evaluation helpers cover the documented hand cases") {
  const double x[3] = {0.6, 0.0, -0.8};
  CHECK(sonoloc_doa_azimuth(x) == doctest::Approx(std::atan2(0.6, 0.8)));
  double out[3] = {0, 0, 0};
  REQUIRE(sonoloc_project_doa(x, 2, out) == SONOLOC_OK);
  CHECK(out[0] == doctest::Approx(0.6));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(0.8));
  CHECK(sonoloc_project_doa(x, 9, out) != SONOLOC_OK);
  const double not_unit[3] = {0.5, 0.0, 0.0};
  CHECK(sonoloc_project_doa(not_unit, 3, out) != SONOLOC_OK);

  sonoloc_estimate est[2] = {};
  est[0].x = 1.0;
  est[1].y = 1.0;
  const double truths[6] = {1, 0, 0, 0, 0, 1};
  double phi[2] = {-1, -1};
  REQUIRE(sonoloc_frame_error(est, 2, truths, 2, 3, phi) == SONOLOC_OK);
  CHECK(phi[0] == doctest::Approx(0.0));
  CHECK(phi[1] == doctest::Approx(M_PI / 2));
  // no estimates scores pi
  REQUIRE(sonoloc_frame_error(nullptr, 0, truths, 2, 3, phi) == SONOLOC_OK);
  CHECK(phi[0] == doctest::Approx(M_PI));
  CHECK(phi[1] == doctest::Approx(M_PI));
}
