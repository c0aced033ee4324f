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

#ifndef SONOLOC_CORE_ENGINE_HPP_
#define SONOLOC_CORE_ENGINE_HPP_

#include <memory>
#include <span>
#include <vector>

#include "core/geometry.hpp"
#include "core/spectral.hpp"
#include "core/srp.hpp"
#include "core/svdphat.hpp"

namespace sonoloc {

struct EngineConfig {
  StftConfig stft;             // N = 512, hop = 128, fs = 16000
  double alpha = 0.1;          // cross-spectrum smoothing
  double c = 340.0;            // m/s
  double delta_theta = 0.1745; // null width around a found source, rad
  int grid_level = 4;          // 2562 directions
  int scans = 1;               // R, sources searched per frame
  bool run_srp = true;
  bool run_svd = true;

  void validate() const;
};

struct FrameResult {
  long frame_index = -1;
  double time_s = 0.0;  // time of the window's first sample
  bool silent = false;  // degenerate cross-spectra; no method emitted
  ScanResult srp;
  ScanResult svd;
};

// One audio stream's localization state. Both methods run on the same
// smoothed cross-spectra, so their outputs are directly comparable per
// frame. The caller slides the analysis window and hands in one full
// window per hop.
class Localizer {
 public:
  // model is required when cfg.run_svd is set and must agree with the array
  // and config (same geometry, frame size, fs, c, grid level).
  Localizer(const MicArray& array, std::shared_ptr<const SvdPhatModel> model,
            const EngineConfig& cfg);

  // samples: one span of frame_size samples per channel.
  FrameResult process_window(
      const std::vector<std::span<const double>>& samples);

  void reset();

  const MicArray& array() const { return array_; }
  const DoaGrid& grid() const { return grid_; }
  const EngineConfig& config() const { return cfg_; }
  long frames_processed() const { return frames_; }

 private:
  MicArray array_;
  EngineConfig cfg_;
  std::shared_ptr<const SvdPhatModel> model_;
  DoaGrid grid_;
  TdoaTable tdoa_;
  NullRangeTable nulls_;
  Stft stft_;
  CrossSpectrumState xspec_;
  Fft gcc_fft_;
  long frames_ = 0;
};

}  // namespace sonoloc

#endif  // SONOLOC_CORE_ENGINE_HPP_
