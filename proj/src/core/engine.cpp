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

#include "core/engine.hpp"

#include <stdexcept>

namespace sonoloc {

void EngineConfig::validate() const {
  stft.validate();
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::runtime_error("alpha must be in (0, 1]");
  if (c <= 0.0) throw std::runtime_error("speed of sound must be positive");
  if (delta_theta <= 0.0 || delta_theta >= M_PI)
    throw std::runtime_error("delta_theta must be in (0, pi)");
  if (scans < 1) throw std::runtime_error("scans must be >= 1");
  if (!run_srp && !run_svd)
    throw std::runtime_error("at least one method must be enabled");
}

namespace {

const EngineConfig& validated(const EngineConfig& cfg) {
  cfg.validate();
  return cfg;
}

void check_model(const MicArray& array, const SvdPhatModel& model,
                 const EngineConfig& cfg) {
  const auto& mc = model.config;
  if (mc.frame_size != cfg.stft.frame_size || mc.fs != cfg.stft.fs ||
      mc.c != cfg.c || mc.grid_level != cfg.grid_level)
    throw std::runtime_error("model parameters do not match run config");
  if (model.array.mic_count() != array.mic_count())
    throw std::runtime_error("model geometry does not match array");
  for (int i = 0; i < array.mic_count(); ++i)
    if ((model.array.positions[i] - array.positions[i]).norm() > 1e-12)
      throw std::runtime_error("model geometry does not match array");
}

}  // namespace

Localizer::Localizer(const MicArray& array,
                     std::shared_ptr<const SvdPhatModel> model,
                     const EngineConfig& cfg)
    : array_(array),
      cfg_(cfg),
      model_(std::move(model)),
      stft_(validated(cfg).stft),
      xspec_(array.mic_count(), cfg.stft.bins(), cfg.alpha),
      gcc_fft_(cfg.stft.frame_size) {
  if (cfg_.run_svd) {
    if (!model_) throw std::runtime_error("svd method needs a model");
    check_model(array_, *model_, cfg_);
    grid_ = model_->grid;
  } else {
    grid_ = build_doa_grid(cfg_.grid_level);
  }
  tdoa_ = compute_tdoa(array_, grid_, cfg_.stft.fs, cfg_.c);
  nulls_ = build_null_ranges(tdoa_, build_neighbor_sets(grid_, cfg_.delta_theta));
  nulls_.delta_theta = cfg_.delta_theta;
}

FrameResult Localizer::process_window(
    const std::vector<std::span<const double>>& samples) {
  FrameResult result;
  result.frame_index = frames_;
  result.time_s =
      static_cast<double>(frames_) * cfg_.stft.hop_size / cfg_.stft.fs;
  ++frames_;

  xspec_.update(stft_.analyze(samples));
  const PhatVector phat = phat_normalize(xspec_);
  if (phat.flat.squaredNorm() == 0.0) {
    result.silent = true;
    return result;
  }
  if (cfg_.run_srp) {
    GccTensor gcc = gcc_phat(phat, cfg_.stft.frame_size, gcc_fft_);
    result.srp = localize_srp(gcc, tdoa_, nulls_, grid_, cfg_.scans);
  }
  if (cfg_.run_svd) result.svd = localize_svd(*model_, phat, cfg_.scans);
  return result;
}

void Localizer::reset() {
  xspec_.reset();
  frames_ = 0;
}

}  // namespace sonoloc
