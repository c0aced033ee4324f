/* Copyright 2026 The Sonoloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Multichannel sound source localization: steered-response-power scanning
 * and its low-rank subspace variant behind one streaming engine, plus the
 * room simulator used to evaluate them.
 *
 * All functions are thread-safe for distinct handles. A handle must not be
 * used concurrently from two threads. Error messages for the last failing
 * call on this thread are available via sonoloc_last_error().
 */

#ifndef SONOLOC_SONOLOC_H_
#define SONOLOC_SONOLOC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sonoloc_status {
  SONOLOC_OK = 0,
  SONOLOC_ERR_INVALID = 1,  /* bad argument or configuration */
  SONOLOC_ERR_IO = 2,       /* file could not be read or written */
  SONOLOC_ERR_FORMAT = 3,   /* file exists but is malformed */
  SONOLOC_ERR_SILENT = 4,   /* frame carried no usable signal */
  SONOLOC_ERR_INTERNAL = 5
} sonoloc_status;

const char* sonoloc_strstatus(sonoloc_status status);
const char* sonoloc_version(void);
/* Message for the most recent failing call on this thread, never NULL. */
const char* sonoloc_last_error(void);

typedef struct sonoloc_array sonoloc_array_t;
typedef struct sonoloc_model sonoloc_model_t;
typedef struct sonoloc_engine sonoloc_engine_t;
typedef struct sonoloc_scenario sonoloc_scenario_t;

/* Processing parameters. Defaults (sonoloc_config_default) are the
 * evaluation settings: N = 512, hop = 128, fs = 16 kHz, alpha = 0.1,
 * c = 340 m/s, delta = 1e-5, delta_theta = 0.1745 rad, grid level 4
 * (2562 directions), one scan, both methods on. */
typedef struct sonoloc_config {
  int32_t frame_size;
  int32_t hop_size;
  double fs;
  double alpha;
  double c;
  double delta;
  double delta_theta;
  int32_t grid_level;
  int32_t scans;
  int32_t run_srp;
  int32_t run_svd;
} sonoloc_config;

void sonoloc_config_default(sonoloc_config* cfg);

/* ---- microphone arrays ---- */

/* Presets: "linear7", "planar7", "spatial7". */
sonoloc_status sonoloc_array_preset(const char* name, sonoloc_array_t** out);
/* {"name": ..., "unit": "cm"|"m", "positions": [[x,y,z], ...]} */
sonoloc_status sonoloc_array_from_json(const char* json_text,
                                       sonoloc_array_t** out);
int32_t sonoloc_array_mic_count(const sonoloc_array_t* array);
/* 1 linear, 2 planar, 3 general; selects the scoring projection. */
int32_t sonoloc_array_geometry_class(const sonoloc_array_t* array);
void sonoloc_array_free(sonoloc_array_t* array);

/* ---- subspace models (offline step of the low-rank method) ---- */

sonoloc_status sonoloc_model_build(const sonoloc_array_t* array,
                                   const sonoloc_config* cfg,
                                   sonoloc_model_t** out);
sonoloc_status sonoloc_model_save(const sonoloc_model_t* model,
                                  const char* path);
sonoloc_status sonoloc_model_load(const char* path, sonoloc_model_t** out);
int32_t sonoloc_model_rank(const sonoloc_model_t* model);
double sonoloc_model_energy_ratio(const sonoloc_model_t* model);
int32_t sonoloc_model_grid_size(const sonoloc_model_t* model);
void sonoloc_model_free(sonoloc_model_t* model);

/* ---- streaming engine ---- */

/* model may be NULL when cfg->run_svd is 0; otherwise it must have been
 * built for the same array and parameters. */
sonoloc_status sonoloc_engine_create(const sonoloc_array_t* array,
                                     const sonoloc_model_t* model,
                                     const sonoloc_config* cfg,
                                     sonoloc_engine_t** out);

/* One analysis window per call, advanced by hop_size samples outside.
 * window is channel-major: mic m sample n at window[m*frame_size + n];
 * samples_per_channel must equal cfg->frame_size. Returns SONOLOC_OK for a
 * processed frame (even a silent one). */
sonoloc_status sonoloc_engine_process(sonoloc_engine_t* engine,
                                      const double* window,
                                      size_t samples_per_channel);

typedef struct sonoloc_estimate {
  double x, y, z;    /* unit direction of arrival, array frame */
  double energy;
  int32_t scan;      /* 0-based scan round that produced it */
  int32_t duplicate; /* repeats an earlier scan's direction */
} sonoloc_estimate;

#define SONOLOC_METHOD_SRP 0
#define SONOLOC_METHOD_SVD 1

/* State of the last processed frame. estimates() returns the number
 * written (0 for silent frames or before the first frame), or -1 on bad
 * arguments. */
int32_t sonoloc_engine_frame_silent(const sonoloc_engine_t* engine);
int64_t sonoloc_engine_frame_index(const sonoloc_engine_t* engine);
double sonoloc_engine_frame_time(const sonoloc_engine_t* engine);
int32_t sonoloc_engine_estimates(const sonoloc_engine_t* engine,
                                 int32_t method, sonoloc_estimate* out,
                                 int32_t max_count);
sonoloc_status sonoloc_engine_reset(sonoloc_engine_t* engine);
void sonoloc_engine_free(sonoloc_engine_t* engine);

/* ---- room simulation ---- */

typedef struct sonoloc_scenario_config {
  double room[3];       /* meters; default 10 x 10 x 3 */
  double rt60_min;      /* 0.2 s */
  double rt60_max;      /* 0.5 s */
  int32_t source_count; /* 1 */
  int32_t anechoic;     /* 0 */
} sonoloc_scenario_config;

void sonoloc_scenario_config_default(sonoloc_scenario_config* cfg);

/* Deterministic per seed: random reverberation time, array pose, and
 * source positions with 0.5 m wall/array clearance and 30 degree pairwise
 * separation seen from the array. */
sonoloc_status sonoloc_scenario_generate(const sonoloc_scenario_config* cfg,
                                         uint64_t seed,
                                         sonoloc_scenario_t** out);
int32_t sonoloc_scenario_source_count(const sonoloc_scenario_t* sc);
double sonoloc_scenario_rt60(const sonoloc_scenario_t* sc);
/* Unit direction toward the source in the array frame; this is the ground
 * truth the engine's estimates are scored against. */
sonoloc_status sonoloc_scenario_true_doa(const sonoloc_scenario_t* sc,
                                         int32_t source, double out[3]);
/* JSON description (room, rt60, pose, sources, truths). The pointer stays
 * valid until the scenario is freed. */
const char* sonoloc_scenario_describe(sonoloc_scenario_t* sc);

/* Renders deterministic speech-like test signals (one per source, derived
 * from the scenario seed) through image-method room impulse responses.
 * *out receives a channel-major buffer of mic_count x *frames_out samples;
 * release it with sonoloc_buffer_free. */
sonoloc_status sonoloc_scenario_render(const sonoloc_scenario_t* sc,
                                       const sonoloc_array_t* array,
                                       const sonoloc_config* cfg,
                                       double duration_s, double** out,
                                       size_t* frames_out);
void sonoloc_buffer_free(double* buf);
void sonoloc_scenario_free(sonoloc_scenario_t* sc);

/* ---- wav files (channel-major buffers) ---- */

sonoloc_status sonoloc_wav_write(const char* path,
                                 const double* channel_major,
                                 int32_t channels, size_t frames, double fs);
sonoloc_status sonoloc_wav_read(const char* path, double** out,
                                int32_t* channels, size_t* frames,
                                double* fs);

/* ---- scoring ---- */

/* atan2(x, sqrt(y^2 + z^2)), the azimuth used for linear arrays. */
double sonoloc_doa_azimuth(const double doa[3]);
/* Geometry-aware projection applied before angular scoring. */
sonoloc_status sonoloc_project_doa(const double doa[3],
                                   int32_t geometry_class, double out[3]);
/* Per true source, the minimum projected angle to any estimate, pi when
 * there are none. truths is 3*truth_count doubles, phi_out truth_count. */
sonoloc_status sonoloc_frame_error(const sonoloc_estimate* estimates,
                                   int32_t estimate_count,
                                   const double* truths, int32_t truth_count,
                                   int32_t geometry_class, double* phi_out);

#ifdef __cplusplus
}
#endif

#endif /* SONOLOC_SONOLOC_H_ */
