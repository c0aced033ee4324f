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

#include "core/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace sonoloc {

namespace {

uint32_t rd_u32(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t rd_u16(const char* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

void wr_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void wr_u16(std::ostream& os, uint16_t v) {
  os.write(reinterpret_cast<const char*>(&v), 2);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::system_error(errno, std::generic_category(),
                            "cannot open wav file: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a wav file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const char* data = nullptr;
  size_t data_len = 0;
  size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const char* id = bytes.data() + off;
    const uint32_t len = rd_u32(bytes.data() + off + 4);
    if (off + 8 + len > bytes.size())
      throw std::runtime_error("truncated wav chunk: " + path);
    const char* body = bytes.data() + off + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw std::runtime_error("short fmt chunk: " + path);
      format = rd_u16(body);
      channels = rd_u16(body + 2);
      rate = rd_u32(body + 4);
      bits = rd_u16(body + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = body;
      data_len = len;
    }
    off += 8 + len + (len & 1);  // chunks are word aligned
  }
  if (!data || channels == 0 || rate == 0)
    throw std::runtime_error("missing fmt or data chunk: " + path);

  WavData out;
  out.fs = rate;
  const size_t bytes_per = bits / 8;
  if (bytes_per == 0) throw std::runtime_error("bad bit depth: " + path);
  const size_t frames = data_len / (bytes_per * channels);
  out.samples.resize(channels, frames);
  if (format == 1 && bits == 16) {
    for (size_t f = 0; f < frames; ++f)
      for (int ch = 0; ch < channels; ++ch) {
        int16_t v;
        std::memcpy(&v, data + (f * channels + ch) * 2, 2);
        out.samples(ch, f) = v / 32767.0;
      }
  } else if (format == 3 && bits == 32) {
    for (size_t f = 0; f < frames; ++f)
      for (int ch = 0; ch < channels; ++ch) {
        float v;
        std::memcpy(&v, data + (f * channels + ch) * 4, 4);
        out.samples(ch, f) = v;
      }
  } else {
    throw std::runtime_error("unsupported wav encoding (want 16-bit PCM or "
                             "32-bit float): " + path);
  }
  return out;
}

namespace {

void write_header(std::ostream& os, uint16_t format, uint16_t channels,
                  uint32_t rate, uint16_t bits, uint32_t data_len) {
  os.write("RIFF", 4);
  wr_u32(os, 36 + data_len);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  wr_u32(os, 16);
  wr_u16(os, format);
  wr_u16(os, channels);
  wr_u32(os, rate);
  wr_u32(os, rate * channels * (bits / 8));
  wr_u16(os, static_cast<uint16_t>(channels * (bits / 8)));
  wr_u16(os, bits);
  os.write("data", 4);
  wr_u32(os, data_len);
}

}  // namespace

void write_wav(const std::string& path, const Eigen::MatrixXd& samples,
               double fs) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::system_error(errno, std::generic_category(),
                            "cannot open wav file for write: " + path);
  const auto channels = static_cast<uint16_t>(samples.rows());
  const auto frames = static_cast<uint32_t>(samples.cols());
  write_header(os, 3, channels, static_cast<uint32_t>(fs), 32,
               frames * channels * 4);
  for (uint32_t f = 0; f < frames; ++f)
    for (int ch = 0; ch < channels; ++ch) {
      const float v = static_cast<float>(samples(ch, f));
      os.write(reinterpret_cast<const char*>(&v), 4);
    }
  if (!os) throw std::runtime_error("short write on wav file: " + path);
}

void write_wav_pcm16(const std::string& path, const Eigen::MatrixXd& samples,
                     double fs) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::system_error(errno, std::generic_category(),
                            "cannot open wav file for write: " + path);
  const auto channels = static_cast<uint16_t>(samples.rows());
  const auto frames = static_cast<uint32_t>(samples.cols());
  write_header(os, 1, channels, static_cast<uint32_t>(fs), 16,
               frames * channels * 2);
  for (uint32_t f = 0; f < frames; ++f)
    for (int ch = 0; ch < channels; ++ch) {
      const double clipped = std::clamp(samples(ch, f), -1.0, 1.0);
      const auto v = static_cast<int16_t>(std::lround(clipped * 32767.0));
      os.write(reinterpret_cast<const char*>(&v), 2);
    }
  if (!os) throw std::runtime_error("short write on wav file: " + path);
}

}  // namespace sonoloc
