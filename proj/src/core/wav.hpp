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

#ifndef SONOLOC_CORE_WAV_HPP_
#define SONOLOC_CORE_WAV_HPP_

#include <Eigen/Dense>
#include <string>

namespace sonoloc {

struct WavData {
  Eigen::MatrixXd samples;  // channels x frames, in [-1, 1] for PCM input
  double fs = 0.0;
};

// RIFF/WAVE reader for 16-bit PCM and 32-bit float, any channel count.
// Throws std::runtime_error on IO failure or unsupported encodings.
WavData read_wav(const std::string& path);

// Writes 32-bit float WAV (format 3). samples is channels x frames.
void write_wav(const std::string& path, const Eigen::MatrixXd& samples,
               double fs);

// Writes 16-bit PCM with clipping at full scale.
void write_wav_pcm16(const std::string& path, const Eigen::MatrixXd& samples,
                     double fs);

}  // namespace sonoloc

#endif  // SONOLOC_CORE_WAV_HPP_
