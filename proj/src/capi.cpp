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

#include "sonoloc/sonoloc.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <system_error>

#include "core/engine.hpp"
#include "core/geometry.hpp"
#include "core/metrics.hpp"
#include "core/roomsim.hpp"
#include "core/svdphat.hpp"
#include "core/wav.hpp"
#include "json.hpp"

namespace {

thread_local std::string g_last_error = "ok";

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs fn, mapping exceptions to err with the message kept for
// sonoloc_last_error.
template <typename Fn>
sonoloc_status wrap(sonoloc_status err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return SONOLOC_ERR_INTERNAL;
  } catch (const std::system_error& e) {
    set_error(e.what());
    return SONOLOC_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return err;
  } catch (...) {
    set_error("unknown error");
    return SONOLOC_ERR_INTERNAL;
  }
}

sonoloc::EngineConfig to_engine_config(const sonoloc_config& c) {
  sonoloc::EngineConfig e;
  e.stft.frame_size = c.frame_size;
  e.stft.hop_size = c.hop_size;
  e.stft.fs = c.fs;
  e.alpha = c.alpha;
  e.c = c.c;
  e.delta_theta = c.delta_theta;
  e.grid_level = c.grid_level;
  e.scans = c.scans;
  e.run_srp = c.run_srp != 0;
  e.run_svd = c.run_svd != 0;
  return e;
}

sonoloc::SvdModelConfig to_model_config(const sonoloc_config& c) {
  sonoloc::SvdModelConfig m;
  m.frame_size = c.frame_size;
  m.fs = c.fs;
  m.c = c.c;
  m.delta = c.delta;
  m.grid_level = c.grid_level;
  return m;
}

}  // namespace

struct sonoloc_array {
  sonoloc::MicArray impl;
};

struct sonoloc_model {
  std::shared_ptr<const sonoloc::SvdPhatModel> impl;
};

struct sonoloc_engine {
  std::unique_ptr<sonoloc::Localizer> impl;
  sonoloc::FrameResult last;
  bool has_frame = false;
};

struct sonoloc_scenario {
  sonoloc::Scenario impl;
  std::string describe_cache;
};

extern "C" {

const char* sonoloc_strstatus(sonoloc_status status) {
  switch (status) {
    case SONOLOC_OK: return "ok";
    case SONOLOC_ERR_INVALID: return "invalid argument";
    case SONOLOC_ERR_IO: return "io error";
    case SONOLOC_ERR_FORMAT: return "format error";
    case SONOLOC_ERR_SILENT: return "silent frame";
    case SONOLOC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sonoloc_version(void) { return "0.1.0"; }

const char* sonoloc_last_error(void) { return g_last_error.c_str(); }

void sonoloc_config_default(sonoloc_config* cfg) {
  if (!cfg) return;
  cfg->frame_size = 512;
  cfg->hop_size = 128;
  cfg->fs = 16000.0;
  cfg->alpha = 0.1;
  cfg->c = 340.0;
  cfg->delta = 1e-5;
  cfg->delta_theta = 0.1745;
  cfg->grid_level = 4;
  cfg->scans = 1;
  cfg->run_srp = 1;
  cfg->run_svd = 1;
}

sonoloc_status sonoloc_array_preset(const char* name, sonoloc_array_t** out) {
  if (!name || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    auto a = std::make_unique<sonoloc_array>();
    a->impl = sonoloc::preset_array(name);
    *out = a.release();
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_array_from_json(const char* json_text,
                                       sonoloc_array_t** out) {
  if (!json_text || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_FORMAT, [&] {
    auto a = std::make_unique<sonoloc_array>();
    a->impl = sonoloc::parse_array_json(json_text);
    *out = a.release();
    return SONOLOC_OK;
  });
}

int32_t sonoloc_array_mic_count(const sonoloc_array_t* array) {
  return array ? array->impl.mic_count() : -1;
}

int32_t sonoloc_array_geometry_class(const sonoloc_array_t* array) {
  return array ? array->impl.geometry_class() : -1;
}

void sonoloc_array_free(sonoloc_array_t* array) { delete array; }

sonoloc_status sonoloc_model_build(const sonoloc_array_t* array,
                                   const sonoloc_config* cfg,
                                   sonoloc_model_t** out) {
  if (!array || !cfg || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    auto m = std::make_unique<sonoloc_model>();
    m->impl = std::make_shared<const sonoloc::SvdPhatModel>(
        sonoloc::build_svd_model(array->impl, to_model_config(*cfg)));
    *out = m.release();
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_model_save(const sonoloc_model_t* model,
                                  const char* path) {
  if (!model || !path) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_IO, [&] {
    sonoloc::save_model(*model->impl, path);
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_model_load(const char* path, sonoloc_model_t** out) {
  if (!path || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_FORMAT, [&] {
    auto m = std::make_unique<sonoloc_model>();
    m->impl = std::make_shared<const sonoloc::SvdPhatModel>(
        sonoloc::load_model(path));
    *out = m.release();
    return SONOLOC_OK;
  });
}

int32_t sonoloc_model_rank(const sonoloc_model_t* model) {
  return model ? model->impl->rank : -1;
}

double sonoloc_model_energy_ratio(const sonoloc_model_t* model) {
  return model ? model->impl->energy_ratio : -1.0;
}

int32_t sonoloc_model_grid_size(const sonoloc_model_t* model) {
  return model ? model->impl->grid.size() : -1;
}

void sonoloc_model_free(sonoloc_model_t* model) { delete model; }

sonoloc_status sonoloc_engine_create(const sonoloc_array_t* array,
                                     const sonoloc_model_t* model,
                                     const sonoloc_config* cfg,
                                     sonoloc_engine_t** out) {
  if (!array || !cfg || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    auto e = std::make_unique<sonoloc_engine>();
    std::shared_ptr<const sonoloc::SvdPhatModel> m;
    if (model) m = model->impl;
    e->impl = std::make_unique<sonoloc::Localizer>(array->impl, m,
                                                   to_engine_config(*cfg));
    *out = e.release();
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_engine_process(sonoloc_engine_t* engine,
                                      const double* window,
                                      size_t samples_per_channel) {
  if (!engine || !window) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  const auto& cfg = engine->impl->config();
  if (samples_per_channel != static_cast<size_t>(cfg.stft.frame_size)) {
    set_error("window length must equal the frame size");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INTERNAL, [&] {
    std::vector<std::span<const double>> chans;
    const int m = engine->impl->array().mic_count();
    chans.reserve(m);
    for (int i = 0; i < m; ++i)
      chans.emplace_back(window + i * samples_per_channel,
                         samples_per_channel);
    engine->last = engine->impl->process_window(chans);
    engine->has_frame = true;
    return SONOLOC_OK;
  });
}

int32_t sonoloc_engine_frame_silent(const sonoloc_engine_t* engine) {
  if (!engine || !engine->has_frame) return -1;
  return engine->last.silent ? 1 : 0;
}

int64_t sonoloc_engine_frame_index(const sonoloc_engine_t* engine) {
  if (!engine || !engine->has_frame) return -1;
  return engine->last.frame_index;
}

double sonoloc_engine_frame_time(const sonoloc_engine_t* engine) {
  if (!engine || !engine->has_frame) return -1.0;
  return engine->last.time_s;
}

int32_t sonoloc_engine_estimates(const sonoloc_engine_t* engine,
                                 int32_t method, sonoloc_estimate* out,
                                 int32_t max_count) {
  if (!engine || !out || max_count < 0) return -1;
  if (method != SONOLOC_METHOD_SRP && method != SONOLOC_METHOD_SVD) return -1;
  if (!engine->has_frame) return 0;
  const sonoloc::ScanResult& r =
      method == SONOLOC_METHOD_SRP ? engine->last.srp : engine->last.svd;
  int32_t n = 0;
  for (size_t i = 0; i < r.items.size() && n < max_count; ++i, ++n) {
    const auto& item = r.items[i];
    out[n].x = item.doa.x();
    out[n].y = item.doa.y();
    out[n].z = item.doa.z();
    out[n].energy = item.energy;
    out[n].scan = static_cast<int32_t>(i);
    out[n].duplicate = item.duplicate ? 1 : 0;
  }
  return n;
}

sonoloc_status sonoloc_engine_reset(sonoloc_engine_t* engine) {
  if (!engine) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  engine->impl->reset();
  engine->has_frame = false;
  return SONOLOC_OK;
}

void sonoloc_engine_free(sonoloc_engine_t* engine) { delete engine; }

void sonoloc_scenario_config_default(sonoloc_scenario_config* cfg) {
  if (!cfg) return;
  cfg->room[0] = 10.0;
  cfg->room[1] = 10.0;
  cfg->room[2] = 3.0;
  cfg->rt60_min = 0.2;
  cfg->rt60_max = 0.5;
  cfg->source_count = 1;
  cfg->anechoic = 0;
}

sonoloc_status sonoloc_scenario_generate(const sonoloc_scenario_config* cfg,
                                         uint64_t seed,
                                         sonoloc_scenario_t** out) {
  if (!cfg || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    sonoloc::RoomConfig rc;
    rc.room = {cfg->room[0], cfg->room[1], cfg->room[2]};
    rc.rt60_min = cfg->rt60_min;
    rc.rt60_max = cfg->rt60_max;
    rc.source_count = cfg->source_count;
    rc.anechoic = cfg->anechoic != 0;
    auto sc = std::make_unique<sonoloc_scenario>();
    sc->impl = sonoloc::generate_scenario(rc, seed);
    *out = sc.release();
    return SONOLOC_OK;
  });
}

int32_t sonoloc_scenario_source_count(const sonoloc_scenario_t* sc) {
  return sc ? sc->impl.source_count() : -1;
}

double sonoloc_scenario_rt60(const sonoloc_scenario_t* sc) {
  return sc ? sc->impl.rt60 : -1.0;
}

sonoloc_status sonoloc_scenario_true_doa(const sonoloc_scenario_t* sc,
                                         int32_t source, double out[3]) {
  if (!sc || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    const Eigen::Vector3d d = sc->impl.true_doa(source);
    out[0] = d.x();
    out[1] = d.y();
    out[2] = d.z();
    return SONOLOC_OK;
  });
}

const char* sonoloc_scenario_describe(sonoloc_scenario_t* sc) {
  if (!sc) return nullptr;
  if (!sc->describe_cache.empty()) return sc->describe_cache.c_str();
  nlohmann::json j;
  j["seed"] = sc->impl.seed;
  j["room"] = {sc->impl.room.x(), sc->impl.room.y(), sc->impl.room.z()};
  j["rt60"] = sc->impl.rt60;
  j["anechoic"] = sc->impl.anechoic;
  j["array_center"] = {sc->impl.array_center.x(), sc->impl.array_center.y(),
                       sc->impl.array_center.z()};
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r)
    rot.push_back({sc->impl.array_rotation(r, 0),
                   sc->impl.array_rotation(r, 1),
                   sc->impl.array_rotation(r, 2)});
  j["array_rotation"] = rot;
  nlohmann::json sources = nlohmann::json::array();
  nlohmann::json truths = nlohmann::json::array();
  for (int t = 0; t < sc->impl.source_count(); ++t) {
    const auto& p = sc->impl.source_positions[t];
    sources.push_back({p.x(), p.y(), p.z()});
    const Eigen::Vector3d d = sc->impl.true_doa(t);
    truths.push_back({d.x(), d.y(), d.z()});
  }
  j["sources"] = sources;
  j["true_doas"] = truths;
  sc->describe_cache = j.dump();
  return sc->describe_cache.c_str();
}

sonoloc_status sonoloc_scenario_render(const sonoloc_scenario_t* sc,
                                       const sonoloc_array_t* array,
                                       const sonoloc_config* cfg,
                                       double duration_s, double** out,
                                       size_t* frames_out) {
  if (!sc || !array || !cfg || !out || !frames_out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    std::vector<Eigen::VectorXd> signals;
    signals.reserve(sc->impl.source_count());
    for (int t = 0; t < sc->impl.source_count(); ++t) {
      const uint64_t sig_seed =
          sc->impl.seed ^ (0x9E3779B97F4A7C15ull * (t + 1));
      signals.push_back(
          sonoloc::synth_speech_like(sig_seed, duration_s, cfg->fs));
    }
    const Eigen::MatrixXd mix = sonoloc::render_mixture(
        sc->impl, array->impl, signals, cfg->fs, cfg->c);
    const size_t frames = mix.cols();
    const size_t channels = mix.rows();
    double* buf =
        static_cast<double*>(std::malloc(sizeof(double) * channels * frames));
    if (!buf) throw std::bad_alloc();
    for (size_t m = 0; m < channels; ++m)
      for (size_t i = 0; i < frames; ++i) buf[m * frames + i] = mix(m, i);
    *out = buf;
    *frames_out = frames;
    return SONOLOC_OK;
  });
}

void sonoloc_buffer_free(double* buf) { std::free(buf); }

void sonoloc_scenario_free(sonoloc_scenario_t* sc) { delete sc; }

sonoloc_status sonoloc_wav_write(const char* path,
                                 const double* channel_major,
                                 int32_t channels, size_t frames, double fs) {
  if (!path || !channel_major || channels < 1) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_IO, [&] {
    Eigen::MatrixXd m(channels, frames);
    for (int ch = 0; ch < channels; ++ch)
      for (size_t i = 0; i < frames; ++i)
        m(ch, i) = channel_major[ch * frames + i];
    sonoloc::write_wav(path, m, fs);
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_wav_read(const char* path, double** out,
                                int32_t* channels, size_t* frames,
                                double* fs) {
  if (!path || !out || !channels || !frames || !fs) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_FORMAT, [&] {
    const sonoloc::WavData wav = sonoloc::read_wav(path);
    const size_t ch = wav.samples.rows();
    const size_t n = wav.samples.cols();
    double* buf = static_cast<double*>(std::malloc(sizeof(double) * ch * n));
    if (!buf) throw std::bad_alloc();
    for (size_t m = 0; m < ch; ++m)
      for (size_t i = 0; i < n; ++i) buf[m * n + i] = wav.samples(m, i);
    *out = buf;
    *channels = static_cast<int32_t>(ch);
    *frames = n;
    *fs = wav.fs;
    return SONOLOC_OK;
  });
}

double sonoloc_doa_azimuth(const double doa[3]) {
  return sonoloc::doa_azimuth({doa[0], doa[1], doa[2]});
}

sonoloc_status sonoloc_project_doa(const double doa[3],
                                   int32_t geometry_class, double out[3]) {
  if (!doa || !out) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    const Eigen::Vector3d p =
        sonoloc::project_doa({doa[0], doa[1], doa[2]}, geometry_class);
    out[0] = p.x();
    out[1] = p.y();
    out[2] = p.z();
    return SONOLOC_OK;
  });
}

sonoloc_status sonoloc_frame_error(const sonoloc_estimate* estimates,
                                   int32_t estimate_count,
                                   const double* truths, int32_t truth_count,
                                   int32_t geometry_class, double* phi_out) {
  if ((!estimates && estimate_count > 0) || !truths || !phi_out ||
      estimate_count < 0 || truth_count < 1) {
    set_error("null argument");
    return SONOLOC_ERR_INVALID;
  }
  return wrap(SONOLOC_ERR_INVALID, [&] {
    sonoloc::ScanResult r;
    for (int32_t i = 0; i < estimate_count; ++i)
      r.items.push_back({{estimates[i].x, estimates[i].y, estimates[i].z},
                         estimates[i].energy,
                         estimates[i].duplicate != 0});
    std::vector<Eigen::Vector3d> t;
    for (int32_t i = 0; i < truth_count; ++i)
      t.emplace_back(truths[3 * i], truths[3 * i + 1], truths[3 * i + 2]);
    const std::vector<double> phi = sonoloc::frame_error(r, t, geometry_class);
    for (int32_t i = 0; i < truth_count; ++i) phi_out[i] = phi[i];
    return SONOLOC_OK;
  });
}

}  // extern "C"
