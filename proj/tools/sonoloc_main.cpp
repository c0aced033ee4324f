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

// Command line front end. Links only the public C API.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sonoloc/sonoloc.h"

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sonoloc_status s, const std::string& what) {
  if (s != SONOLOC_OK)
    throw DataError(what + ": " + sonoloc_last_error());
}

// RAII wrappers over the C handles.
struct ArrayHandle {
  sonoloc_array_t* h = nullptr;
  ~ArrayHandle() { sonoloc_array_free(h); }
};

struct ModelHandle {
  sonoloc_model_t* h = nullptr;
  ~ModelHandle() { sonoloc_model_free(h); }
};

struct EngineHandle {
  sonoloc_engine_t* h = nullptr;
  ~EngineHandle() { sonoloc_engine_free(h); }
};

struct ScenarioHandle {
  sonoloc_scenario_t* h = nullptr;
  ~ScenarioHandle() { sonoloc_scenario_free(h); }
};

struct Buffer {
  double* data = nullptr;
  ~Buffer() { sonoloc_buffer_free(data); }
};

const std::vector<std::string> kPresets = {"linear7", "planar7", "spatial7"};

void load_array(const std::string& geometry, ArrayHandle& out) {
  if (std::filesystem::exists(geometry)) {
    std::ifstream is(geometry);
    std::stringstream ss;
    ss << is.rdbuf();
    check(sonoloc_array_from_json(ss.str().c_str(), &out.h),
          "geometry file " + geometry);
    return;
  }
  check(sonoloc_array_preset(geometry.c_str(), &out.h),
        "geometry " + geometry);
}

// Shared flags mapped straight onto sonoloc_config.
struct ConfigFlags {
  sonoloc_config cfg;

  void add(CLI::App* app) {
    sonoloc_config_default(&cfg);
    app->add_option("--frame", cfg.frame_size, "analysis frame size");
    app->add_option("--hop", cfg.hop_size, "hop size in samples");
    app->add_option("--fs", cfg.fs, "sample rate in Hz");
    app->add_option("--alpha", cfg.alpha, "cross-spectrum smoothing");
    app->add_option("--c", cfg.c, "speed of sound in m/s");
    app->add_option("--delta", cfg.delta, "subspace energy tolerance");
    app->add_option("--dtheta", cfg.delta_theta,
                    "null width around found sources, radians");
    app->add_option("--grid-level", cfg.grid_level,
                    "sphere subdivision level (4 -> 2562 points)");
  }
};

std::string model_cache_name(const std::string& geometry,
                             const sonoloc_config& cfg) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s_L%d_N%d_fs%g_c%g_d%g.snl",
                geometry.c_str(), cfg.grid_level, cfg.frame_size, cfg.fs,
                cfg.c, cfg.delta);
  return buf;
}

// Loads the model from the cache directory, building and saving it when
// missing. geometry must be a preset name for cache naming to be stable.
void cached_model(const std::string& geometry, const sonoloc_config& cfg,
                  const std::string& cache_dir, ArrayHandle& array,
                  ModelHandle& out) {
  const std::filesystem::path path =
      std::filesystem::path(cache_dir) / model_cache_name(geometry, cfg);
  if (std::filesystem::exists(path)) {
    check(sonoloc_model_load(path.string().c_str(), &out.h),
          "model " + path.string());
    return;
  }
  std::fprintf(stderr, "building model for %s (one-time, cached at %s)\n",
               geometry.c_str(), path.string().c_str());
  check(sonoloc_model_build(array.h, &cfg, &out.h), "model build");
  std::filesystem::create_directories(path.parent_path());
  check(sonoloc_model_save(out.h, path.string().c_str()),
        "model save " + path.string());
}

int cmd_precompute(const std::string& geometry, const ConfigFlags& flags,
                   const std::string& out_path) {
  ArrayHandle array;
  load_array(geometry, array);
  ModelHandle model;
  check(sonoloc_model_build(array.h, &flags.cfg, &model.h), "model build");
  check(sonoloc_model_save(model.h, out_path.c_str()), "model save");
  std::printf("rank K = %d\n", sonoloc_model_rank(model.h));
  std::printf("kept energy ratio = %.9f\n",
              sonoloc_model_energy_ratio(model.h));
  std::printf("grid size Q = %d\n", sonoloc_model_grid_size(model.h));
  std::printf("model written to %s\n", out_path.c_str());
  return 0;
}

constexpr int kMaxScans = 64;

struct FrameRows {
  int64_t frame = 0;
  double time_s = 0.0;
  std::vector<sonoloc_estimate> srp, svd;
};

// Streams a channel-major buffer through an engine, one hop at a time.
template <typename Fn>
void stream_windows(sonoloc_engine_t* engine, const double* audio,
                    int channels, size_t frames, const sonoloc_config& cfg,
                    Fn&& per_frame) {
  const int n = cfg.frame_size;
  const int hop = cfg.hop_size;
  if (frames < static_cast<size_t>(n)) return;
  std::vector<double> window(static_cast<size_t>(channels) * n);
  for (size_t start = 0; start + n <= frames; start += hop) {
    for (int m = 0; m < channels; ++m)
      std::copy(audio + m * frames + start, audio + m * frames + start + n,
                window.begin() + static_cast<size_t>(m) * n);
    check(sonoloc_engine_process(engine, window.data(), n), "process");
    per_frame();
  }
}

void write_estimate_rows(std::FILE* f, int64_t frame, double time_s,
                         const char* method,
                         const std::vector<sonoloc_estimate>& est) {
  for (const auto& e : est)
    std::fprintf(f, "%" PRId64 ",%.6f,%s,%d,%.9f,%.9f,%.9f,%.9f,%d\n", frame,
                 time_s, method, e.scan, e.x, e.y, e.z, e.energy,
                 e.duplicate);
}

int cmd_localize(const std::string& wav_path, const std::string& geometry,
                 const std::string& model_path, const std::string& method,
                 int scans, ConfigFlags& flags, const std::string& out_path) {
  sonoloc_config cfg = flags.cfg;
  cfg.scans = scans;
  cfg.run_srp = (method == "srp" || method == "both") ? 1 : 0;
  cfg.run_svd = (method == "svd" || method == "both") ? 1 : 0;
  if (!cfg.run_srp && !cfg.run_svd)
    throw UsageError("--method must be srp, svd, or both");

  ArrayHandle array;
  load_array(geometry, array);

  Buffer audio;
  int32_t channels = 0;
  size_t frames = 0;
  double fs = 0.0;
  check(sonoloc_wav_read(wav_path.c_str(), &audio.data, &channels, &frames,
                         &fs),
        "wav " + wav_path);
  if (channels != sonoloc_array_mic_count(array.h))
    throw DataError("wav has " + std::to_string(channels) +
                    " channels, geometry needs " +
                    std::to_string(sonoloc_array_mic_count(array.h)));
  if (fs != cfg.fs)
    throw DataError("wav sample rate " + std::to_string(fs) +
                    " does not match --fs " + std::to_string(cfg.fs));

  ModelHandle model;
  if (cfg.run_svd) {
    if (!model_path.empty()) {
      check(sonoloc_model_load(model_path.c_str(), &model.h),
            "model " + model_path);
    } else {
      std::fprintf(stderr,
                   "no --model given; building one now (precompute avoids "
                   "this wait)\n");
      check(sonoloc_model_build(array.h, &cfg, &model.h), "model build");
    }
  }
  EngineHandle engine;
  check(sonoloc_engine_create(array.h, model.h, &cfg, &engine.h), "engine");

  std::FILE* f = out_path.empty() ? stdout : std::fopen(out_path.c_str(), "w");
  if (!f) throw DataError("cannot open output: " + out_path);
  std::fprintf(f, "frame,time_s,method,scan,x,y,z,energy,duplicate\n");
  std::vector<sonoloc_estimate> est(kMaxScans);
  stream_windows(engine.h, audio.data, channels, frames, cfg, [&] {
    if (sonoloc_engine_frame_silent(engine.h) == 1) return;
    const int64_t frame = sonoloc_engine_frame_index(engine.h);
    const double t = sonoloc_engine_frame_time(engine.h);
    if (cfg.run_srp) {
      const int n = sonoloc_engine_estimates(engine.h, SONOLOC_METHOD_SRP,
                                             est.data(), kMaxScans);
      write_estimate_rows(f, frame, t, "srp",
                          {est.begin(), est.begin() + std::max(n, 0)});
    }
    if (cfg.run_svd) {
      const int n = sonoloc_engine_estimates(engine.h, SONOLOC_METHOD_SVD,
                                             est.data(), kMaxScans);
      write_estimate_rows(f, frame, t, "svd",
                          {est.begin(), est.begin() + std::max(n, 0)});
    }
  });
  if (f != stdout) std::fclose(f);
  return 0;
}

struct SimJob {
  int cell = 0;       // geometry_index * 3 + (sources - 1)
  int index = 0;      // scenario index within the cell
  std::string geometry;
  int sources = 1;
  uint64_t seed = 0;
};

struct SimResult {
  bool ok = false;
  double rt60 = 0.0;
  long frames = 0;  // frames where at least one method emitted
  double sum_sq_srp = 0.0;  // sum of phi^2 over frames x sources
  double sum_sq_svd = 0.0;
  double rmse_srp = 0.0;
  double rmse_svd = 0.0;
  std::string error;
};

int cmd_simulate(const std::string& geometry_flag, int sources_flag,
                 int count, double duration, uint64_t seed, int workers,
                 bool anechoic, bool save_audio, ConfigFlags& flags,
                 std::string model_cache, const std::string& out_dir) {
  if (sources_flag < 0 || sources_flag > 3)
    throw UsageError("--sources must be 1-3, or 0 for all three");
  if (count < 1) throw UsageError("--count must be >= 1");
  if (duration <= 0.0) throw UsageError("--duration must be positive");
  if (workers < 1) throw UsageError("--workers must be >= 1");

  std::vector<std::string> geometries;
  if (geometry_flag == "all")
    geometries = kPresets;
  else
    geometries.push_back(geometry_flag);
  std::vector<int> source_counts;
  if (sources_flag == 0)
    source_counts = {1, 2, 3};
  else
    source_counts.push_back(sources_flag);

  std::filesystem::create_directories(out_dir);
  if (model_cache.empty())
    model_cache = (std::filesystem::path(out_dir) / "models").string();

  // one array and one model per geometry, shared by all workers
  std::map<std::string, std::unique_ptr<ArrayHandle>> arrays;
  std::map<std::string, std::unique_ptr<ModelHandle>> models;
  for (const auto& g : geometries) {
    auto arr = std::make_unique<ArrayHandle>();
    load_array(g, *arr);
    auto mdl = std::make_unique<ModelHandle>();
    cached_model(g, flags.cfg, model_cache, *arr, *mdl);
    arrays[g] = std::move(arr);
    models[g] = std::move(mdl);
  }

  std::vector<SimJob> jobs;
  for (size_t gi = 0; gi < geometries.size(); ++gi) {
    for (int t : source_counts) {
      for (int i = 0; i < count; ++i) {
        SimJob job;
        job.cell = static_cast<int>(gi) * 3 + (t - 1);
        job.index = i;
        job.geometry = geometries[gi];
        job.sources = t;
        job.seed = seed + static_cast<uint64_t>(job.cell) * count + i;
        jobs.push_back(job);
      }
    }
  }
  std::vector<SimResult> results(jobs.size());

  std::atomic<size_t> next{0};
  std::mutex io_mutex;
  auto worker = [&] {
    // engines are reusable per (geometry, scan count); reset between runs
    std::map<std::pair<std::string, int>, std::unique_ptr<EngineHandle>>
        engines;
    std::vector<sonoloc_estimate> est(kMaxScans);
    for (;;) {
      const size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const SimJob& job = jobs[j];
      SimResult& res = results[j];
      try {
        sonoloc_config cfg = flags.cfg;
        cfg.scans = job.sources;
        cfg.run_srp = 1;
        cfg.run_svd = 1;

        sonoloc_scenario_config sc_cfg;
        sonoloc_scenario_config_default(&sc_cfg);
        sc_cfg.source_count = job.sources;
        sc_cfg.anechoic = anechoic ? 1 : 0;
        ScenarioHandle scenario;
        check(sonoloc_scenario_generate(&sc_cfg, job.seed, &scenario.h),
              "scenario");
        res.rt60 = sonoloc_scenario_rt60(scenario.h);

        const auto key = std::make_pair(job.geometry, job.sources);
        auto it = engines.find(key);
        if (it == engines.end()) {
          auto eng = std::make_unique<EngineHandle>();
          check(sonoloc_engine_create(arrays[job.geometry]->h,
                                      models[job.geometry]->h, &cfg, &eng->h),
                "engine");
          it = engines.emplace(key, std::move(eng)).first;
        }
        sonoloc_engine_t* engine = it->second->h;
        check(sonoloc_engine_reset(engine), "engine reset");

        Buffer audio;
        size_t frames = 0;
        check(sonoloc_scenario_render(scenario.h, arrays[job.geometry]->h,
                                      &cfg, duration, &audio.data, &frames),
              "render");
        const int channels = sonoloc_array_mic_count(arrays[job.geometry]->h);

        std::vector<double> truths(3 * job.sources);
        for (int t = 0; t < job.sources; ++t)
          check(sonoloc_scenario_true_doa(scenario.h, t, truths.data() + 3 * t),
                "true doa");
        const int beta = sonoloc_array_geometry_class(arrays[job.geometry]->h);

        std::vector<double> phi(job.sources);
        stream_windows(engine, audio.data, channels, frames, cfg, [&] {
          if (sonoloc_engine_frame_silent(engine) == 1) return;
          res.frames += 1;
          const int n_srp = sonoloc_engine_estimates(
              engine, SONOLOC_METHOD_SRP, est.data(), kMaxScans);
          check(sonoloc_frame_error(est.data(), n_srp, truths.data(),
                                    job.sources, beta, phi.data()),
                "frame error");
          for (double v : phi) res.sum_sq_srp += v * v;
          const int n_svd = sonoloc_engine_estimates(
              engine, SONOLOC_METHOD_SVD, est.data(), kMaxScans);
          check(sonoloc_frame_error(est.data(), n_svd, truths.data(),
                                    job.sources, beta, phi.data()),
                "frame error");
          for (double v : phi) res.sum_sq_svd += v * v;
        });
        if (res.frames == 0) throw DataError("no active frames");
        res.rmse_srp =
            std::sqrt(res.sum_sq_srp / (static_cast<double>(res.frames) *
                                        job.sources));
        res.rmse_svd =
            std::sqrt(res.sum_sq_svd / (static_cast<double>(res.frames) *
                                        job.sources));

        if (save_audio) {
          char stem[128];
          std::snprintf(stem, sizeof stem, "%s_T%d_%04d", job.geometry.c_str(),
                        job.sources, job.index);
          const auto wav_path =
              std::filesystem::path(out_dir) / (std::string(stem) + ".wav");
          check(sonoloc_wav_write(wav_path.string().c_str(), audio.data,
                                  channels, frames, cfg.fs),
                "wav write");
          const auto json_path =
              std::filesystem::path(out_dir) / (std::string(stem) + ".json");
          std::ofstream js(json_path);
          js << sonoloc_scenario_describe(scenario.h) << "\n";
        }
        res.ok = true;
      } catch (const std::exception& e) {
        res.error = e.what();
        std::lock_guard<std::mutex> lock(io_mutex);
        std::fprintf(stderr, "scenario %s T=%d seed=%" PRIu64 " failed: %s\n",
                     job.geometry.c_str(), job.sources, job.seed, e.what());
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // per-scenario rows in deterministic job order
  const auto sims_path = std::filesystem::path(out_dir) / "simulations.csv";
  std::FILE* sims = std::fopen(sims_path.string().c_str(), "w");
  if (!sims) throw DataError("cannot open " + sims_path.string());
  std::fprintf(sims, "geometry,sources,seed,rt60,frames,rmse_srp,rmse_svd\n");
  for (size_t j = 0; j < jobs.size(); ++j) {
    if (!results[j].ok) continue;
    std::fprintf(sims, "%s,%d,%" PRIu64 ",%.6f,%ld,%.6f,%.6f\n",
                 jobs[j].geometry.c_str(), jobs[j].sources, jobs[j].seed,
                 results[j].rt60, results[j].frames, results[j].rmse_srp,
                 results[j].rmse_svd);
  }
  std::fclose(sims);

  const auto summary_path = std::filesystem::path(out_dir) / "summary.csv";
  std::FILE* summary = std::fopen(summary_path.string().c_str(), "w");
  if (!summary) throw DataError("cannot open " + summary_path.string());
  std::fprintf(summary,
               "geometry,sources,scenarios,mean_rmse_srp,mean_rmse_svd,"
               "delta\n");
  bool all_ok = true;
  for (size_t gi = 0; gi < geometries.size(); ++gi) {
    for (int t : source_counts) {
      double acc_srp = 0.0, acc_svd = 0.0;
      int n = 0;
      for (size_t j = 0; j < jobs.size(); ++j) {
        if (!results[j].ok || jobs[j].geometry != geometries[gi] ||
            jobs[j].sources != t)
          continue;
        acc_srp += results[j].rmse_srp;
        acc_svd += results[j].rmse_svd;
        ++n;
      }
      if (n == 0) {
        all_ok = false;
        continue;
      }
      std::fprintf(summary, "%s,%d,%d,%.6f,%.6f,%.6f\n",
                   geometries[gi].c_str(), t, n, acc_srp / n, acc_svd / n,
                   acc_srp / n - acc_svd / n);
    }
  }
  std::fclose(summary);
  std::printf("wrote %s and %s\n", summary_path.string().c_str(),
              sims_path.string().c_str());
  if (!all_ok) throw DataError("some scenarios failed; summary incomplete");
  return 0;
}

int cmd_bench(const std::string& geometry, const std::string& model_path,
              int frames, int scans, uint64_t seed, ConfigFlags& flags,
              const std::string& out_path) {
  if (frames < 1) throw UsageError("--frames must be >= 1");
  ArrayHandle array;
  load_array(geometry, array);
  ModelHandle model;
  if (!model_path.empty())
    check(sonoloc_model_load(model_path.c_str(), &model.h),
          "model " + model_path);
  else
    check(sonoloc_model_build(array.h, &flags.cfg, &model.h), "model build");

  // one reverberant scenario provides realistic frames
  sonoloc_scenario_config sc_cfg;
  sonoloc_scenario_config_default(&sc_cfg);
  sc_cfg.source_count = std::min(scans, 3);
  ScenarioHandle scenario;
  check(sonoloc_scenario_generate(&sc_cfg, seed, &scenario.h), "scenario");
  sonoloc_config cfg = flags.cfg;
  cfg.scans = scans;
  const double duration =
      (static_cast<double>(frames) * cfg.hop_size + cfg.frame_size) / cfg.fs +
      0.5;
  Buffer audio;
  size_t audio_frames = 0;
  check(sonoloc_scenario_render(scenario.h, array.h, &cfg, duration,
                                &audio.data, &audio_frames),
        "render");
  const int channels = sonoloc_array_mic_count(array.h);

  auto measure = [&](int run_srp, int run_svd) {
    sonoloc_config mcfg = cfg;
    mcfg.run_srp = run_srp;
    mcfg.run_svd = run_svd;
    EngineHandle engine;
    check(sonoloc_engine_create(array.h, run_svd ? model.h : nullptr, &mcfg,
                                &engine.h),
          "engine");
    std::vector<double> us;
    us.reserve(frames);
    const int n = mcfg.frame_size;
    std::vector<double> window(static_cast<size_t>(channels) * n);
    size_t start = 0;
    while (static_cast<int>(us.size()) < frames) {
      if (start + n > audio_frames) start = 0;  // wrap; timing only
      for (int m = 0; m < channels; ++m)
        std::copy(audio.data + m * audio_frames + start,
                  audio.data + m * audio_frames + start + n,
                  window.begin() + static_cast<size_t>(m) * n);
      const auto t0 = std::chrono::steady_clock::now();
      check(sonoloc_engine_process(engine.h, window.data(), n), "process");
      const auto t1 = std::chrono::steady_clock::now();
      us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      start += mcfg.hop_size;
    }
    std::sort(us.begin(), us.end());
    const double median = us[us.size() / 2];
    double mean = 0.0;
    for (double v : us) mean += v;
    mean /= static_cast<double>(us.size());
    return std::make_pair(median, mean);
  };

  const auto [srp_median, srp_mean] = measure(1, 0);
  const auto [svd_median, svd_mean] = measure(0, 1);

  std::ostringstream json;
  json.setf(std::ios::fixed);
  json.precision(3);
  json << "{\n"
       << "  \"frames\": " << frames << ",\n"
       << "  \"scans\": " << scans << ",\n"
       << "  \"grid_size\": " << sonoloc_model_grid_size(model.h) << ",\n"
       << "  \"rank\": " << sonoloc_model_rank(model.h) << ",\n"
       << "  \"frame_size\": " << cfg.frame_size << ",\n"
       << "  \"srp\": {\"median_us\": " << srp_median
       << ", \"mean_us\": " << srp_mean << "},\n"
       << "  \"svd\": {\"median_us\": " << svd_median
       << ", \"mean_us\": " << svd_mean << "}\n"
       << "}\n";
  if (out_path.empty()) {
    std::fputs(json.str().c_str(), stdout);
  } else {
    std::ofstream os(out_path);
    if (!os) throw DataError("cannot open " + out_path);
    os << json.str();
  }
  return 0;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_plot_data(const std::string& estimates_path, const std::string& method,
                  const std::string& truths_arg, const std::string& out_path) {
  std::ifstream is(estimates_path);
  if (!is) throw DataError("cannot open " + estimates_path);
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty estimates file");
  const auto header = split_csv(line);
  const auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw DataError("estimates file lacks column " + name);
  };
  const int c_time = col("time_s"), c_method = col("method"),
            c_scan = col("scan"), c_x = col("x"), c_y = col("y"),
            c_z = col("z");

  std::vector<double> truths;
  if (!truths_arg.empty()) {
    for (const auto& tok : split_csv(truths_arg)) truths.push_back(std::stod(tok));
  }

  // time -> azimuth per scan
  std::map<std::pair<double, int>, double> az;
  int max_scan = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f[c_method] != method) continue;
    const double doa[3] = {std::stod(f[c_x]), std::stod(f[c_y]),
                           std::stod(f[c_z])};
    const int scan = std::stoi(f[c_scan]);
    az[{std::stod(f[c_time]), scan}] = sonoloc_doa_azimuth(doa);
    max_scan = std::max(max_scan, scan);
  }

  std::FILE* f = out_path.empty() ? stdout : std::fopen(out_path.c_str(), "w");
  if (!f) throw DataError("cannot open output: " + out_path);
  std::fprintf(f, "time_s");
  for (int r = 0; r <= max_scan; ++r) std::fprintf(f, ",azimuth_scan%d", r);
  for (size_t t = 0; t < truths.size(); ++t)
    std::fprintf(f, ",truth%zu", t);
  std::fprintf(f, "\n");
  std::vector<double> times;
  for (const auto& [key, value] : az)
    if (times.empty() || times.back() != key.first)
      times.push_back(key.first);
  for (double t : times) {
    std::fprintf(f, "%.6f", t);
    for (int r = 0; r <= max_scan; ++r) {
      const auto it = az.find({t, r});
      if (it == az.end())
        std::fprintf(f, ",");
      else
        std::fprintf(f, ",%.6f", it->second);
    }
    for (double tr : truths) std::fprintf(f, ",%.6f", tr);
    std::fprintf(f, "\n");
  }
  if (f != stdout) std::fclose(f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel sound source localization toolkit"};
  app.require_subcommand(1);

  // precompute
  auto* pre = app.add_subcommand("precompute", "build and save a model");
  std::string pre_geometry = "spatial7", pre_out = "model.snl";
  ConfigFlags pre_flags;
  pre->add_option("--geometry", pre_geometry, "preset name or JSON file");
  pre->add_option("--out", pre_out, "output model path");
  pre_flags.add(pre);

  // localize
  auto* loc = app.add_subcommand("localize", "localize sources in a WAV file");
  std::string loc_wav, loc_geometry = "spatial7", loc_model, loc_method = "both",
              loc_out;
  int loc_scans = 1;
  ConfigFlags loc_flags;
  loc->add_option("--wav", loc_wav, "input multichannel WAV")->required();
  loc->add_option("--geometry", loc_geometry, "preset name or JSON file");
  loc->add_option("--model", loc_model, "model file (precompute output)");
  loc->add_option("--method", loc_method, "srp, svd, or both");
  loc->add_option("--scans", loc_scans, "sources searched per frame");
  loc->add_option("--out", loc_out, "estimates CSV (default stdout)");
  loc_flags.add(loc);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a room simulation campaign");
  std::string sim_geometry = "all", sim_out = "campaign", sim_cache;
  int sim_sources = 0, sim_count = 50, sim_workers = 1;
  double sim_duration = 5.0;
  uint64_t sim_seed = 1;
  bool sim_anechoic = false, sim_save_audio = false;
  ConfigFlags sim_flags;
  sim->add_option("--geometry", sim_geometry,
                  "preset name, or 'all' for the three presets");
  sim->add_option("--sources", sim_sources,
                  "source count 1-3, or 0 for all three");
  sim->add_option("--count", sim_count, "scenarios per cell");
  sim->add_option("--duration", sim_duration, "seconds of audio per scenario");
  sim->add_option("--seed", sim_seed, "campaign seed");
  sim->add_option("--workers", sim_workers, "parallel scenario workers");
  sim->add_flag("--anechoic", sim_anechoic, "disable reverberation");
  sim->add_flag("--save-audio", sim_save_audio,
                "write per-scenario WAV and JSON truth files");
  sim->add_option("--model-cache", sim_cache,
                  "model cache dir (default <out>/models)");
  sim->add_option("--out", sim_out, "output directory");
  sim_flags.add(sim);

  // bench
  auto* ben = app.add_subcommand("bench", "time the two methods per frame");
  std::string ben_geometry = "spatial7", ben_model, ben_out;
  int ben_frames = 1000, ben_scans = 1;
  uint64_t ben_seed = 7;
  ConfigFlags ben_flags;
  ben->add_option("--geometry", ben_geometry, "preset name or JSON file");
  ben->add_option("--model", ben_model, "model file (built if omitted)");
  ben->add_option("--frames", ben_frames, "frames to time");
  ben->add_option("--scans", ben_scans, "sources searched per frame");
  ben->add_option("--seed", ben_seed, "scenario seed");
  ben->add_option("--out", ben_out, "JSON report path (default stdout)");
  ben_flags.add(ben);

  // plot-data
  auto* plot = app.add_subcommand(
      "plot-data", "azimuth-over-time table from an estimates CSV");
  std::string plot_estimates, plot_method = "svd", plot_truths, plot_out;
  plot->add_option("--estimates", plot_estimates, "localize output CSV")
      ->required();
  plot->add_option("--method", plot_method, "srp or svd");
  plot->add_option("--truths", plot_truths,
                   "comma-separated truth azimuths in radians");
  plot->add_option("--out", plot_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (pre->parsed())
      return cmd_precompute(pre_geometry, pre_flags, pre_out);
    if (loc->parsed())
      return cmd_localize(loc_wav, loc_geometry, loc_model, loc_method,
                          loc_scans, loc_flags, loc_out);
    if (sim->parsed())
      return cmd_simulate(sim_geometry, sim_sources, sim_count, sim_duration,
                          sim_seed, sim_workers, sim_anechoic, sim_save_audio,
                          sim_flags, sim_cache, sim_out);
    if (ben->parsed())
      return cmd_bench(ben_geometry, ben_model, ben_frames, ben_scans,
                       ben_seed, ben_flags, ben_out);
    if (plot->parsed())
      return cmd_plot_data(plot_estimates, plot_method, plot_truths, plot_out);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
