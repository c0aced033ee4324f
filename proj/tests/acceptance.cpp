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

// End-to-end acceptance checks, one per command line invocation:
//
//   acceptance <criterion 1..9> <model-cache-dir> [cli-binary]
//
// Each criterion prints a single [PASS]/[FAIL] line with the measured
// numbers and its tolerance, and exits nonzero on failure. Full-scale
// models are cached under the given directory so repeated runs skip the
// factorization cost.

#include <lapacke.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/metrics.hpp"
#include "core/roomsim.hpp"
#include "core/svdphat.hpp"
#include "core/wav.hpp"
#include "test_util.hpp"

using namespace sonoloc;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g_cache_dir;
std::string g_cli_path;

// Full-scale model (frame 512, fs 16 kHz, grid level 4), built once and
// cached on disk.
const SvdPhatModel& full_model(const std::string& preset) {
  static std::map<std::string, SvdPhatModel> cache;
  auto it = cache.find(preset);
  if (it != cache.end()) return it->second;
  const std::filesystem::path path =
      std::filesystem::path(g_cache_dir) / (preset + "_L4.snl");
  if (std::filesystem::exists(path)) {
    it = cache.emplace(preset, load_model(path.string())).first;
    return it->second;
  }
  std::fprintf(stderr, "building full-scale model for %s (cached at %s)\n",
               preset.c_str(), path.string().c_str());
  SvdModelConfig cfg;  // defaults: level 4, delta 1e-5
  SvdPhatModel model = build_svd_model(preset_array(preset), cfg);
  std::filesystem::create_directories(path.parent_path());
  save_model(model, path.string());
  it = cache.emplace(preset, std::move(model)).first;
  return it->second;
}

// Streams a channels x samples matrix through the localizer hop by hop.
template <typename Fn>
void stream(Localizer& loc, const Eigen::MatrixXd& audio, Fn&& per_frame) {
  const int n = loc.config().stft.frame_size;
  const int hop = loc.config().stft.hop_size;
  for (int start = 0; start + n <= audio.cols(); start += hop) {
    const auto win = testutil::window_at(audio, start, n);
    const FrameResult r = loc.process_window(testutil::make_spans(win));
    per_frame(r);
  }
}

bool report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  return pass;
}

std::string fmt(const char* pattern, ...) {
  char buf[1024];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: the nearest-neighbor index is exact

bool criterion_0() {
  // not a criterion: builds and caches the full-scale models so the timed
  // checks below measure their own workload, not the one-time offline step
  for (const char* preset : {"linear7", "planar7", "spatial7"}) {
    const SvdPhatModel& m = full_model(preset);
    std::printf("model %s: rank %d of %d x %d\n", preset, m.rank,
                m.grid.size(), m.flat_size());
  }
  return true;
}

bool criterion_1() {
  const SvdPhatModel& m = full_model("spatial7");
  const auto t0 = Clock::now();
  Rng rng(1001);
  const int total_queries = 10000;
  int mismatches = 0;
  for (int t = 0; t < total_queries; ++t) {
    Eigen::VectorXcd z(m.rank);
    if (t % 2 == 0) {
      // unstructured query
      for (int i = 0; i < m.rank; ++i)
        z[i] = cd(rng.gaussian(), rng.gaussian());
    } else {
      // projection of an ideal observation from a random direction
      Eigen::Vector3d dir(rng.gaussian(), rng.gaussian(), rng.gaussian());
      while (dir.norm() < 1e-9)
        dir = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
      dir.normalize();
      const int pairs = m.array.pair_count();
      const int bins = m.bins();
      PhatVector x;
      x.bins = bins;
      x.flat.resize(static_cast<Eigen::Index>(pairs) * bins);
      const auto pair_list = m.array.pairs();
      for (int p = 0; p < pairs; ++p) {
        const Eigen::Vector3d d = m.array.positions[pair_list[p].second] -
                                  m.array.positions[pair_list[p].first];
        const double tau = m.config.fs / m.config.c * d.dot(dir);
        for (int k = 0; k < bins; ++k) {
          const double ph = -2.0 * M_PI * k * tau / m.config.frame_size;
          x.flat[static_cast<Eigen::Index>(p) * bins + k] =
              cd(std::cos(ph), std::sin(ph));
        }
      }
      z = project_observation(m, x);
    }
    const auto hit = nearest_doa(m, z);
    if (!hit.has_value()) {
      ++mismatches;
      continue;
    }
    // brute-force maximizer of the real correlation, lowest index on ties
    const Eigen::VectorXcd zn = z.normalized();
    const Eigen::VectorXd sims = (m.d_hat * zn).real();
    int best = 0;
    for (int q = 1; q < sims.size(); ++q)
      if (sims[q] > sims[best]) best = q;
    if (hit->q_star != best) ++mismatches;
  }
  const double elapsed = seconds_since(t0);
  const bool pass = mismatches == 0 && elapsed <= 60.0;
  return report(1, pass,
                fmt("nearest-neighbor lookup exact on %d queries "
                    "(%d mismatches allowed 0, %.1f s limit 60 s)",
                    total_queries, mismatches, elapsed));
}

// ---------------------------------------------------------------------------
// criterion 2: minimal rank selection and monotone fidelity in delta

struct RankProbe {
  int rank = 0;
  double eps_ratio = 0.0;      // 1 - kept energy share
  double eps_observed = 0.0;   // max |Re{DZ} - Re{WX}| over random X
  bool minimal = false;
  bool meets_target = false;
};

bool criterion_2() {
  const MicArray array = preset_array("spatial7");
  const int level = 2;
  const std::vector<double> deltas = {1e-2, 1e-3, 1e-5};

  // singular values of the steering supermatrix, computed once
  SvdModelConfig probe_cfg;
  probe_cfg.grid_level = level;
  const DoaGrid grid = build_doa_grid(level);
  const TdoaTable tdoa = compute_tdoa(array, grid, probe_cfg.fs, probe_cfg.c);
  Eigen::MatrixXcd w = build_steering_matrix(tdoa, probe_cfg.frame_size);
  const int q_count = static_cast<int>(w.rows());
  const int cols = static_cast<int>(w.cols());
  const double total = static_cast<double>(q_count) * cols;
  Eigen::VectorXd sigma(std::min(q_count, cols));
  {
    Eigen::MatrixXcd scratch = w;
    std::vector<cd> dummy(1);
    const int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'N', q_count, cols,
        reinterpret_cast<lapack_complex_double*>(scratch.data()), q_count,
        sigma.data(), reinterpret_cast<lapack_complex_double*>(dummy.data()),
        1, reinterpret_cast<lapack_complex_double*>(dummy.data()), 1);
    if (info != 0) return report(2, false, fmt("svd probe failed, info=%d", info));
  }
  const double sigma_total = sigma.squaredNorm();
  if (std::abs(sigma_total - total) / total > 1e-9)
    return report(2, false,
                  fmt("energy bookkeeping off: sum sigma^2 = %.6f vs %.0f",
                      sigma_total, total));

  Rng rng(2002);
  std::vector<PhatVector> probes;
  for (int t = 0; t < 100; ++t)
    probes.push_back(
        testutil::random_phat(array.pair_count(), probe_cfg.frame_size / 2 + 1,
                              rng));

  std::vector<RankProbe> results;
  for (double delta : deltas) {
    SvdModelConfig cfg = probe_cfg;
    cfg.delta = delta;
    const SvdPhatModel m = build_svd_model(array, cfg);
    RankProbe r;
    r.rank = m.rank;
    r.eps_ratio = 1.0 - m.energy_ratio;
    const double target = (1.0 - delta) * total;
    double kept = 0.0;
    int minimal_rank = static_cast<int>(sigma.size());
    for (int i = 0; i < sigma.size(); ++i) {
      kept += sigma[i] * sigma[i];
      if (kept >= target) {
        minimal_rank = i + 1;
        break;
      }
    }
    r.minimal = (m.rank == minimal_rank);
    double cum = 0.0;
    for (int i = 0; i < m.rank; ++i) cum += sigma[i] * sigma[i];
    r.meets_target = cum >= target;
    if (m.rank >= 2) {
      r.meets_target =
          r.meets_target && (cum - sigma[m.rank - 1] * sigma[m.rank - 1] <
                             target);
    }
    // observed reconstruction error on random unit-modulus observations:
    // max_q |Re{(D Z)_q} - Re{(W X)_q}| / ||X||; the truncated subspaces
    // are nested, so this shrinks as delta does
    for (const auto& x : probes) {
      const Eigen::VectorXcd z = project_observation(m, x);
      const double err =
          ((m.d * z).real() - (w * x.flat).real()).cwiseAbs().maxCoeff() /
          x.flat.norm();
      r.eps_observed = std::max(r.eps_observed, err);
    }
    results.push_back(r);
  }

  bool pass = true;
  for (const auto& r : results) pass = pass && r.minimal && r.meets_target;
  // shrinking delta must not grow the error or shrink the rank
  for (size_t i = 1; i < results.size(); ++i) {
    pass = pass && results[i].rank >= results[i - 1].rank;
    pass = pass && results[i].eps_ratio <= results[i - 1].eps_ratio + 1e-15;
    pass = pass && results[i].eps_observed < results[i - 1].eps_observed;
  }
  for (size_t i = 0; i < deltas.size(); ++i)
    pass = pass && results[i].eps_ratio <= deltas[i];
  return report(
      2, pass,
      fmt("rank selection minimal at grid level %d: K = {%d, %d, %d} for "
          "delta = {1e-2, 1e-3, 1e-5}, residual shares {%.2e, %.2e, %.2e}, "
          "reconstruction errors {%.4f, %.4f, %.4f} on 100 observations "
          "monotone",
          level, results[0].rank, results[1].rank, results[2].rank,
          results[0].eps_ratio, results[1].eps_ratio, results[2].eps_ratio,
          results[0].eps_observed, results[1].eps_observed,
          results[2].eps_observed));
}

// ---------------------------------------------------------------------------
// criterion 3: fft-based correlation equals the direct spectral sum

bool criterion_3() {
  const int frame_size = 512, bins = 257, pairs = 21;
  Fft fft(frame_size);
  // direct evaluation matrix: F(n, k) = e^{+2 pi i k n / N}
  Eigen::MatrixXcd f(frame_size, bins);
  for (int n = 0; n < frame_size; ++n)
    for (int k = 0; k < bins; ++k) {
      const double ph = 2.0 * M_PI * k * n / frame_size;
      f(n, k) = cd(std::cos(ph), std::sin(ph));
    }
  Rng rng(3003);
  double max_diff = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhatVector x = testutil::random_phat(pairs, bins, rng);
    const GccTensor g = gcc_phat(x, frame_size, fft);
    for (int p = 0; p < pairs; ++p) {
      const Eigen::VectorXd direct =
          (f * x.flat.segment(static_cast<Eigen::Index>(p) * bins, bins))
              .real();
      max_diff = std::max(
          max_diff,
          (g.gcc.row(p).transpose() - direct).cwiseAbs().maxCoeff());
    }
  }
  const bool pass = max_diff <= 1e-9;
  return report(3, pass,
                fmt("fft correlation vs direct sum on 100 random spectra: "
                    "max |diff| = %.3e (tolerance 1e-9)",
                    max_diff));
}

// ---------------------------------------------------------------------------
// criterion 4: clean anechoic sources localize within 0.08 rad rms

bool criterion_4() {
  const std::vector<std::string> presets = {"linear7", "planar7", "spatial7"};
  for (const auto& preset : presets) full_model(preset);
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = true;
  Rng rng(4004);
  for (const auto& preset : presets) {
    const SvdPhatModel& model = full_model(preset);
    const MicArray array = preset_array(preset);
    const int beta = array.geometry_class();
    EngineConfig cfg;
    cfg.scans = 1;
    Localizer loc(array,
                  std::shared_ptr<const SvdPhatModel>(&model,
                                                      [](const SvdPhatModel*) {}),
                  cfg);
    ErrorRecord record_srp, record_svd;
    for (int render = 0; render < 20; ++render) {
      // random grid direction kept well inside the room at 2 m range
      int q = -1;
      do {
        q = std::min<int>(static_cast<int>(rng.uniform() * model.grid.size()),
                          model.grid.size() - 1);
      } while (std::abs(model.grid.directions[q].z()) > 0.45);
      Scenario sc;
      sc.room = {10.0, 10.0, 3.0};
      sc.rt60 = 0.3;
      sc.anechoic = true;
      sc.array_center = {5.0, 5.0, 1.5};
      sc.array_rotation = Eigen::Matrix3d::Identity();
      sc.source_positions = {sc.array_center + 2.0 * model.grid.directions[q]};
      const Eigen::VectorXd sig =
          synth_speech_like(9000 + render, 2.5, cfg.stft.fs);
      const Eigen::MatrixXd audio =
          render_mixture(sc, array, {sig}, cfg.stft.fs, cfg.c);
      const std::vector<Eigen::Vector3d> truths = {sc.true_doa(0)};
      loc.reset();
      stream(loc, audio, [&](const FrameResult& r) {
        if (r.silent) return;
        record_srp.phi.push_back(frame_error(r.srp, truths, beta));
        record_svd.phi.push_back(frame_error(r.svd, truths, beta));
      });
    }
    record_srp.beta = beta;
    record_svd.beta = beta;
    const double rmse_srp = rmse(record_srp);
    const double rmse_svd = rmse(record_svd);
    pass = pass && rmse_srp <= 0.08 && rmse_svd <= 0.08;
    detail += fmt("%s srp %.4f svd %.4f; ", preset.c_str(), rmse_srp,
                  rmse_svd);
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed <= 300.0;
  return report(4, pass,
                fmt("anechoic single-source rmse (tolerance 0.08 rad, 20 "
                    "renders each): %s%.0f s limit 300 s",
                    detail.c_str(), elapsed));
}

// ---------------------------------------------------------------------------
// criterion 5: deflation invariants over 1000 randomized runs

bool criterion_5() {
  const SvdPhatModel& m = full_model("spatial7");
  Rng rng(5005);
  double worst_gram = 0.0, worst_growth = 0.0, worst_redeflate = 0.0;
  for (int run = 0; run < 1000; ++run) {
    Eigen::VectorXcd z(m.rank);
    for (int i = 0; i < m.rank; ++i) z[i] = cd(rng.gaussian(), rng.gaussian());
    DeflationState state(m.rank);
    const int scans = 1 + run % 3;
    std::vector<int> picked;
    double prev_norm = z.norm();
    for (int r = 0; r < scans; ++r) {
      int q = 0;
      do {
        q = std::min<int>(static_cast<int>(rng.uniform() * m.grid.size()),
                          m.grid.size() - 1);
      } while (std::find(picked.begin(), picked.end(), q) != picked.end());
      picked.push_back(q);
      deflate(state, m, q, z);
      const Eigen::MatrixXcd gram = state.basis().adjoint() * state.basis();
      worst_gram = std::max(
          worst_gram,
          (gram - Eigen::MatrixXcd::Identity(state.count(), state.count()))
              .cwiseAbs()
              .maxCoeff());
      worst_growth = std::max(worst_growth, z.norm() - prev_norm);
      prev_norm = z.norm();
    }
    // removing an already-removed direction must not move z
    const Eigen::VectorXcd z_before = z;
    const double norm_before = std::max(z.norm(), 1e-300);
    deflate(state, m, picked[0], z);
    worst_redeflate =
        std::max(worst_redeflate, (z - z_before).norm() / norm_before);
  }
  const bool pass =
      worst_gram <= 1e-10 && worst_growth <= 1e-12 && worst_redeflate <= 1e-10;
  return report(5, pass,
                fmt("deflation over 1000 runs: basis gram error %.2e "
                    "(limit 1e-10), norm growth %.2e (limit 0), repeat "
                    "deflation drift %.2e (limit 1e-10)",
                    worst_gram, worst_growth, worst_redeflate));
}

// ---------------------------------------------------------------------------
// criterion 6: full reverberant campaign, subspace method matches or beats
// the exhaustive scan per cell

bool criterion_6() {
  const std::vector<std::string> presets = {"linear7", "planar7", "spatial7"};
  for (const auto& preset : presets) full_model(preset);
  const auto t0 = Clock::now();
  const int per_cell = 50;
  const double duration = 4.0;
  std::string detail;
  bool margin_ok = true;
  int strictly_better = 0, cells = 0;
  for (const auto& preset : presets) {
    const SvdPhatModel& model = full_model(preset);
    const MicArray array = preset_array(preset);
    const int beta = array.geometry_class();
    for (int sources = 1; sources <= 3; ++sources) {
      EngineConfig cfg;
      cfg.scans = sources;
      Localizer loc(
          array,
          std::shared_ptr<const SvdPhatModel>(&model,
                                              [](const SvdPhatModel*) {}),
          cfg);
      RoomConfig room;
      room.source_count = sources;
      double sum_srp = 0.0, sum_svd = 0.0;
      int done = 0;
      std::uint64_t seed = 60000 + static_cast<std::uint64_t>(cells) * 1000;
      while (done < per_cell) {
        Scenario sc;
        try {
          sc = generate_scenario(room, seed++);
        } catch (const std::exception&) {
          continue;  // placement failed for this seed, take the next
        }
        std::vector<Eigen::VectorXd> signals;
        for (int t = 0; t < sources; ++t)
          signals.push_back(synth_speech_like(sc.seed * 1000003ull + t,
                                              duration, cfg.stft.fs));
        const Eigen::MatrixXd audio =
            render_mixture(sc, array, signals, cfg.stft.fs, cfg.c);
        std::vector<Eigen::Vector3d> truths;
        for (int t = 0; t < sources; ++t) truths.push_back(sc.true_doa(t));
        ErrorRecord rec_srp, rec_svd;
        loc.reset();
        stream(loc, audio, [&](const FrameResult& r) {
          if (r.silent) return;
          rec_srp.phi.push_back(frame_error(r.srp, truths, beta));
          rec_svd.phi.push_back(frame_error(r.svd, truths, beta));
        });
        if (rec_srp.phi.empty()) continue;
        sum_srp += rmse(rec_srp);
        sum_svd += rmse(rec_svd);
        ++done;
      }
      const double mean_srp = sum_srp / per_cell;
      const double mean_svd = sum_svd / per_cell;
      margin_ok = margin_ok && (mean_svd <= mean_srp + 0.01);
      if (mean_svd < mean_srp) ++strictly_better;
      ++cells;
      detail += fmt("%s/T%d srp %.4f svd %.4f; ", preset.c_str(), sources,
                    mean_srp, mean_svd);
    }
  }
  const double elapsed = seconds_since(t0);
  const bool majority = strictly_better * 2 > cells;
  const bool pass = margin_ok && majority && elapsed <= 3600.0;
  return report(
      6, pass,
      fmt("reverberant campaign, %d scenarios per cell: %ssubspace within "
          "+0.01 of scan in %s cells, strictly better in %d/%d, %.0f s "
          "limit 3600 s",
          per_cell, detail.c_str(), margin_ok ? "all" : "NOT all",
          strictly_better, cells, elapsed));
}

// ---------------------------------------------------------------------------
// criterion 7: first-scan picks agree with the exhaustive steering oracle

bool criterion_7() {
  const auto t0 = Clock::now();
  const SvdPhatModel& model = full_model("spatial7");
  const MicArray array = preset_array("spatial7");
  StftConfig stft_cfg;
  Stft stft(stft_cfg);
  CrossSpectrumState xspec(array.mic_count(), stft_cfg.bins(), 0.1);

  // collect phase-transformed observations from reverberant scenarios
  std::vector<Eigen::VectorXcd> observations;
  RoomConfig room;
  std::uint64_t seed = 70000;
  while (observations.size() < 1200) {
    Scenario sc;
    try {
      sc = generate_scenario(room, seed++);
    } catch (const std::exception&) {
      continue;
    }
    const Eigen::VectorXd sig =
        synth_speech_like(sc.seed * 999983ull, 4.0, stft_cfg.fs);
    const Eigen::MatrixXd audio =
        render_mixture(sc, array, {sig}, stft_cfg.fs, 340.0);
    xspec.reset();
    for (int start = 0; start + stft_cfg.frame_size <= audio.cols();
         start += stft_cfg.hop_size) {
      const auto win = testutil::window_at(audio, start, stft_cfg.frame_size);
      xspec.update(stft.analyze(testutil::make_spans(win)));
      const PhatVector x = phat_normalize(xspec);
      if (x.flat.squaredNorm() == 0.0) continue;
      observations.push_back(x.flat);
      if (observations.size() >= 1200) break;
    }
  }

  // subspace picks
  std::vector<int> svd_pick(observations.size());
  for (size_t i = 0; i < observations.size(); ++i) {
    PhatVector x;
    x.flat = observations[i];
    x.bins = stft_cfg.bins();
    const auto hit = nearest_doa(model, project_observation(model, x));
    svd_pick[i] = hit ? hit->q_star : -1;
  }

  // oracle: argmax of Re{W x} over the full grid, in column chunks
  const TdoaTable tdoa =
      compute_tdoa(array, model.grid, stft_cfg.fs, 340.0);
  const Eigen::MatrixXcd w =
      build_steering_matrix(tdoa, stft_cfg.frame_size);
  std::vector<int> oracle_pick(observations.size());
  const int chunk = 100;
  for (size_t base = 0; base < observations.size(); base += chunk) {
    const int count =
        static_cast<int>(std::min<size_t>(chunk, observations.size() - base));
    Eigen::MatrixXcd batch(w.cols(), count);
    for (int j = 0; j < count; ++j) batch.col(j) = observations[base + j];
    const Eigen::MatrixXd power = (w * batch).real();
    for (int j = 0; j < count; ++j) {
      int best = 0;
      for (int q = 1; q < power.rows(); ++q)
        if (power(q, j) > power(best, j)) best = q;
      oracle_pick[base + j] = best;
    }
  }

  // adjacency of the scan grid
  std::vector<std::set<int>> adjacent(model.grid.size());
  for (const auto& [u, v] : doa_grid_edges(model.config.grid_level)) {
    adjacent[u].insert(v);
    adjacent[v].insert(u);
  }
  int agree = 0;
  for (size_t i = 0; i < observations.size(); ++i) {
    if (svd_pick[i] == oracle_pick[i] ||
        (svd_pick[i] >= 0 && adjacent[oracle_pick[i]].count(svd_pick[i])))
      ++agree;
  }
  const double share = static_cast<double>(agree) / observations.size();
  const double elapsed = seconds_since(t0);
  const bool pass = share >= 0.99;
  return report(7, pass,
                fmt("subspace pick vs exhaustive steering oracle on %zu "
                    "reverberant frames: %.2f%% within one grid step "
                    "(required 99%%, %.0f s)",
                    observations.size(), 100.0 * share, elapsed));
}

// ---------------------------------------------------------------------------
// criterion 8: documented evaluation hand cases

bool criterion_8() {
  bool pass = true;
  std::string why;

  ErrorRecord rec;
  rec.phi = {{0.3}, {0.4}};
  const double r = rmse(rec);
  if (std::abs(r - 0.35355339059327373) > 1e-9) {
    pass = false;
    why += fmt("rmse(0.3, 0.4) = %.10f; ", r);
  }

  const Eigen::Vector3d x(0.6, 0.0, -0.8);
  const Eigen::Vector3d p1 = project_doa(x, 1);
  const double g = std::atan2(0.6, 0.8);
  if ((p1 - Eigen::Vector3d(std::cos(g), std::sin(g), 0.0)).norm() > 1e-9) {
    pass = false;
    why += "linear projection off; ";
  }
  const Eigen::Vector3d p2 = project_doa(x, 2);
  if ((p2 - Eigen::Vector3d(0.6, 0.0, 0.8)).norm() > 1e-9) {
    pass = false;
    why += "planar projection off; ";
  }
  if ((project_doa(x, 3) - x).norm() != 0.0) {
    pass = false;
    why += "full projection not identity; ";
  }

  // clamped arccos: an exact repeat of the truth scores zero, never nan
  ScanResult est;
  est.items.push_back({Eigen::Vector3d(0.6, 0.0, -0.8), 1.0, false});
  const auto phi = frame_error(est, {x}, 3);
  if (!(phi.size() == 1 && std::isfinite(phi[0]) && phi[0] < 1e-7)) {
    pass = false;
    why += "clamped self-distance not zero; ";
  }
  const auto none = frame_error(ScanResult{}, {x, -x}, 3);
  if (!(none.size() == 2 && none[0] == M_PI && none[1] == M_PI)) {
    pass = false;
    why += "empty frame does not score pi; ";
  }
  if (std::abs(doa_azimuth(x) - std::atan2(0.6, 0.8)) > 1e-12) {
    pass = false;
    why += "azimuth hand value off; ";
  }
  return report(8, pass,
                pass ? "evaluation hand cases (rmse 0.35355, projections, "
                       "clamping, empty-frame pi) all match"
                     : "evaluation hand cases failed: " + why);
}

// ---------------------------------------------------------------------------
// criterion 9: simulation campaigns are byte-reproducible

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

bool criterion_9() {
  if (g_cli_path.empty())
    return report(9, false, "no cli binary path given");
  const std::filesystem::path root =
      std::filesystem::path(g_cache_dir) / "campaign_repro";
  std::filesystem::remove_all(root);
  const std::string models = (root / "models").string();
  auto run = [&](const std::string& out, int workers) {
    const std::string cmd =
        g_cli_path +
        " simulate --geometry all --sources 0 --count 2 --duration 1.5"
        " --grid-level 2 --seed 99 --workers " +
        std::to_string(workers) + " --model-cache " + models + " --out " +
        (root / out).string() + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (run("a", 1) != 0) return report(9, false, "first campaign run failed");
  if (run("b", 1) != 0) return report(9, false, "second campaign run failed");
  if (run("c", 2) != 0) return report(9, false, "parallel campaign run failed");
  bool pass = true;
  std::string why;
  for (const char* name : {"summary.csv", "simulations.csv"}) {
    const std::string a = slurp(root / "a" / name);
    const std::string b = slurp(root / "b" / name);
    const std::string c = slurp(root / "c" / name);
    if (a.empty()) {
      pass = false;
      why += fmt("%s empty; ", name);
    }
    if (a != b) {
      pass = false;
      why += fmt("%s differs between identical runs; ", name);
    }
    if (a != c) {
      pass = false;
      why += fmt("%s differs under --workers 2; ", name);
    }
  }
  return report(9, pass,
                pass ? "campaign outputs byte-identical across repeated and "
                       "parallel runs (seed 99, 18 scenarios)"
                     : "campaign outputs not reproducible: " + why);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <criterion 0..9> <cache-dir> [cli]\n",
                 argv[0]);
    return 2;
  }
  const int criterion = std::atoi(argv[1]);
  g_cache_dir = argv[2];
  if (argc > 3) g_cli_path = argv[3];
  std::filesystem::create_directories(g_cache_dir);
  bool pass = false;
  switch (criterion) {
    case 0: pass = criterion_0(); break;
    case 1: pass = criterion_1(); break;
    case 2: pass = criterion_2(); break;
    case 3: pass = criterion_3(); break;
    case 4: pass = criterion_4(); break;
    case 5: pass = criterion_5(); break;
    case 6: pass = criterion_6(); break;
    case 7: pass = criterion_7(); break;
    case 8: pass = criterion_8(); break;
    case 9: pass = criterion_9(); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", criterion);
      return 2;
  }
  return pass ? 0 : 1;
}
