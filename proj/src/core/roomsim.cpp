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

#include "core/roomsim.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

#include "core/fft.hpp"

namespace sonoloc {

Eigen::Vector3d Scenario::true_doa(int t) const {
  if (t < 0 || t >= source_count())
    throw std::runtime_error("source index out of range");
  const Eigen::Vector3d local =
      array_rotation.transpose() * (source_positions[t] - array_center);
  return local.normalized();
}

namespace {

void validate_config(const RoomConfig& cfg) {
  for (int i = 0; i < 3; ++i)
    if (cfg.room[i] <= 2.0 * cfg.min_wall_dist)
      throw std::runtime_error("room too small for wall clearance");
  if (cfg.source_count < 1)
    throw std::runtime_error("source count must be >= 1");
  if (!cfg.anechoic && (cfg.rt60_min <= 0.0 || cfg.rt60_max < cfg.rt60_min))
    throw std::runtime_error("bad rt60 range");
}

}  // namespace

Scenario generate_scenario(const RoomConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  Rng rng(seed);
  Scenario sc;
  sc.room = cfg.room;
  sc.seed = seed;
  sc.anechoic = cfg.anechoic;
  sc.rt60 = rng.uniform(cfg.rt60_min, cfg.rt60_max);
  auto sample_point = [&] {
    Eigen::Vector3d p;
    for (int i = 0; i < 3; ++i)
      p[i] = rng.uniform(cfg.min_wall_dist, cfg.room[i] - cfg.min_wall_dist);
    return p;
  };
  sc.array_center = sample_point();
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(rng.gaussian(), rng.gaussian(), rng.gaussian(),
                           rng.gaussian());
  } while (q.norm() < 1e-12);
  q.normalize();
  sc.array_rotation = q.toRotationMatrix();

  const double max_dot =
      std::cos(cfg.min_separation_deg * M_PI / 180.0);
  constexpr int kMaxAttempts = 10000;
  for (int t = 0; t < cfg.source_count; ++t) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Eigen::Vector3d p = sample_point();
      if ((p - sc.array_center).norm() < cfg.min_source_dist) continue;
      const Eigen::Vector3d dir = (p - sc.array_center).normalized();
      bool ok = true;
      for (const auto& prev : sc.source_positions) {
        const Eigen::Vector3d pd = (prev - sc.array_center).normalized();
        if (dir.dot(pd) > max_dot) {
          ok = false;
          break;
        }
      }
      if (ok) {
        sc.source_positions.push_back(p);
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error("source placement failed; constraints too tight");
  }
  return sc;
}

std::vector<Eigen::Vector3d> world_mic_positions(const Scenario& sc,
                                                 const MicArray& array) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(array.positions.size());
  for (const auto& r : array.positions)
    out.push_back(sc.array_center + sc.array_rotation * r);
  return out;
}

double wall_reflection_coeff(const Eigen::Vector3d& room, double rt60,
                             double c) {
  if (rt60 <= 0.0) throw std::runtime_error("rt60 must be positive");
  // The image cloud decays as a mixture of exponentials: images near
  // direction u accumulate reflections at rate c * h(u) per second, so the
  // Schroeder tail is
  //   S(t) ~ integral over the sphere of beta^(2 c h(u) t) / (2 c h(u)) dO,
  //   h(u) = |u_x|/L_x + |u_y|/L_y + |u_z|/L_z.
  // A mean-rate inversion (Sabine or Eyring) misses the slow tangential
  // paths and the rendered decay comes out too long. Instead solve for the
  // beta whose modeled -5 dB to -35 dB Schroeder slope extrapolates to the
  // requested rt60. With s = -ln(beta) * t the model is beta-free, so the
  // crossings are found once per room shape and beta follows in closed
  // form.
  const DoaGrid quad = build_doa_grid(3);
  std::vector<double> rate(quad.size());
  for (int i = 0; i < quad.size(); ++i) {
    const Eigen::Vector3d& u = quad.directions[i];
    rate[i] = 2.0 * c * (std::abs(u.x()) / room.x() +
                         std::abs(u.y()) / room.y() +
                         std::abs(u.z()) / room.z());
  }
  const auto tail = [&](double s) {
    double sum = 0.0;
    for (double r : rate) sum += std::exp(-r * s) / r;
    return sum;
  };
  const double total = tail(0.0);
  const auto crossing = [&](double level) {
    const double target = total * level;
    double lo = 0.0, hi = 1.0;
    while (tail(hi) > target) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double s5 = crossing(std::pow(10.0, -0.5));
  const double s35 = crossing(std::pow(10.0, -3.5));
  return std::exp(-2.0 * (s35 - s5) / rt60);
}

namespace {

constexpr int kInterpHalf = 40;  // 81-tap fractional delay

// Adds amp * sinc(n - delay), Hann-tapered over 81 taps around the delay.
// sin(pi (k - frac)) = -(-1)^k sin(pi frac), so one sine serves all taps.
void add_tap(std::vector<double>& taps, double delay, double amp) {
  const int i0 = static_cast<int>(std::floor(delay));
  const double frac = delay - i0;
  const double s = std::sin(M_PI * frac);
  const int len = static_cast<int>(taps.size());
  for (int k = -kInterpHalf; k <= kInterpHalf; ++k) {
    const int idx = i0 + k;
    if (idx < 0 || idx >= len) continue;
    const double x = k - frac;
    double sinc;
    if (std::abs(x) < 1e-12)
      sinc = 1.0;
    else
      sinc = ((k % 2 == 0) ? -s : s) / (M_PI * x);
    const double w = 0.5 + 0.5 * std::cos(M_PI * x / (kInterpHalf + 1));
    taps[idx] += amp * sinc * w;
  }
}

}  // namespace

Rir image_method_rir(const Scenario& sc, const Eigen::Vector3d& source,
                     const Eigen::Vector3d& mic, double fs, double c) {
  Rir rir;
  rir.fs = fs;
  if (sc.anechoic) {
    const double dist = std::max((source - mic).norm(), 1e-9);
    rir.taps.assign(
        static_cast<size_t>(std::ceil(dist / c * fs)) + kInterpHalf + 2, 0.0);
    add_tap(rir.taps, dist / c * fs, 1.0 / (4.0 * M_PI * dist));
    return rir;
  }
  const double t_cov = 1.25 * sc.rt60;
  const double max_dist = std::max(c * t_cov, (source - mic).norm() + 1.0);
  const double beta = wall_reflection_coeff(sc.room, sc.rt60, c);
  int range[3];
  for (int i = 0; i < 3; ++i)
    range[i] = static_cast<int>(std::ceil(max_dist / (2.0 * sc.room[i])));
  rir.taps.assign(
      static_cast<size_t>(std::ceil(max_dist / c * fs)) + kInterpHalf + 2, 0.0);
  for (int px = 0; px <= 1; ++px) {
    for (int py = 0; py <= 1; ++py) {
      for (int pz = 0; pz <= 1; ++pz) {
        const int par[3] = {px, py, pz};
        for (int nx = -range[0]; nx <= range[0]; ++nx) {
          for (int ny = -range[1]; ny <= range[1]; ++ny) {
            for (int nz = -range[2]; nz <= range[2]; ++nz) {
              const int n[3] = {nx, ny, nz};
              Eigen::Vector3d img;
              int refl = 0;
              for (int i = 0; i < 3; ++i) {
                img[i] = (1 - 2 * par[i]) * source[i] + 2.0 * n[i] * sc.room[i];
                refl += std::abs(n[i] - par[i]) + std::abs(n[i]);
              }
              const double dist = (img - mic).norm();
              if (dist > max_dist) continue;
              const double amp = std::pow(beta, refl) /
                                 (4.0 * M_PI * std::max(dist, 1e-9));
              add_tap(rir.taps, dist / c * fs, amp);
            }
          }
        }
      }
    }
  }
  return rir;
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

Eigen::MatrixXd render_mixture(const Scenario& sc, const MicArray& array,
                               const std::vector<Eigen::VectorXd>& signals,
                               double fs, double c) {
  const int sources = sc.source_count();
  if (static_cast<int>(signals.size()) != sources)
    throw std::runtime_error("signal count does not match scenario sources");
  const auto mics = world_mic_positions(sc, array);
  const int m_count = static_cast<int>(mics.size());

  std::vector<Eigen::VectorXd> unit(signals.size());
  for (int t = 0; t < sources; ++t) {
    const double rms =
        std::sqrt(signals[t].squaredNorm() / std::max<long>(1, signals[t].size()));
    unit[t] = rms > 0.0 ? (signals[t] / rms).eval() : signals[t];
  }

  std::vector<std::vector<Rir>> rirs(sources);
  size_t max_rir = 0;
  long max_sig = 0;
  for (int t = 0; t < sources; ++t) {
    rirs[t].reserve(m_count);
    for (int m = 0; m < m_count; ++m) {
      rirs[t].push_back(
          image_method_rir(sc, sc.source_positions[t], mics[m], fs, c));
      max_rir = std::max(max_rir, rirs[t][m].taps.size());
    }
    max_sig = std::max(max_sig, unit[t].size());
  }
  const long out_len = max_sig + static_cast<long>(max_rir) - 1;
  const int fft_len = next_pow2(static_cast<int>(out_len));
  Fft fft(fft_len);
  const int bins = fft_len / 2 + 1;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_count, out_len);
  std::vector<double> padded(fft_len);
  std::vector<std::complex<double>> sig_spec(bins), rir_spec(bins),
      prod(bins);
  std::vector<double> conv(fft_len);
  for (int t = 0; t < sources; ++t) {
    std::fill(padded.begin(), padded.end(), 0.0);
    for (long i = 0; i < unit[t].size(); ++i) padded[i] = unit[t][i];
    fft.forward_real(padded, sig_spec);
    for (int m = 0; m < m_count; ++m) {
      std::fill(padded.begin(), padded.end(), 0.0);
      for (size_t i = 0; i < rirs[t][m].taps.size(); ++i)
        padded[i] = rirs[t][m].taps[i];
      fft.forward_real(padded, rir_spec);
      for (int k = 0; k < bins; ++k) prod[k] = sig_spec[k] * rir_spec[k];
      fft.backward_real(prod, conv);
      for (long i = 0; i < out_len; ++i) out(m, i) += conv[i] / fft_len;
    }
  }
  return out;
}

Eigen::VectorXd synth_speech_like(std::uint64_t seed, double duration,
                                  double fs) {
  const long n = static_cast<long>(std::llround(duration * fs));
  if (n <= 0) throw std::runtime_error("duration must be positive");
  Rng rng(seed);

  // two-rate raised-sine envelope, syllable and phrase speeds
  const double f1 = rng.uniform(1.5, 3.0);
  const double f2 = rng.uniform(4.0, 7.0);
  const double ph1 = rng.uniform(0.0, 2.0 * M_PI);
  const double ph2 = rng.uniform(0.0, 2.0 * M_PI);

  // RBJ biquads: highpass 100 Hz, two lowpass 3400 Hz stages
  struct Biquad {
    double b0, b1, b2, a1, a2, z1 = 0.0, z2 = 0.0;
    double step(double x) {
      const double y = b0 * x + z1;
      z1 = b1 * x - a1 * y + z2;
      z2 = b2 * x - a2 * y;
      return y;
    }
  };
  auto make = [&](double fc, bool lowpass) {
    const double w0 = 2.0 * M_PI * fc / fs;
    const double alpha = std::sin(w0) / (2.0 * M_SQRT1_2);  // Q = 0.707
    const double cw = std::cos(w0);
    const double a0 = 1.0 + alpha;
    Biquad b{};
    if (lowpass) {
      b.b0 = (1.0 - cw) / 2.0 / a0;
      b.b1 = (1.0 - cw) / a0;
      b.b2 = b.b0;
    } else {
      b.b0 = (1.0 + cw) / 2.0 / a0;
      b.b1 = -(1.0 + cw) / a0;
      b.b2 = b.b0;
    }
    b.a1 = -2.0 * cw / a0;
    b.a2 = (1.0 - alpha) / a0;
    return b;
  };
  Biquad hp = make(100.0, false);
  Biquad lp1 = make(3400.0, true);
  Biquad lp2 = make(3400.0, true);

  Eigen::VectorXd x(n);
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double env = (0.15 + 0.85 * (0.5 + 0.5 * std::sin(2.0 * M_PI * f1 * t + ph1))) *
                       (0.15 + 0.85 * (0.5 + 0.5 * std::sin(2.0 * M_PI * f2 * t + ph2)));
    x[i] = env * lp2.step(lp1.step(hp.step(rng.gaussian())));
  }
  const double rms = std::sqrt(x.squaredNorm() / static_cast<double>(n));
  if (rms > 0.0) x /= rms;
  return x;
}

}  // namespace sonoloc
