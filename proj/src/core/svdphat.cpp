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

#include "core/svdphat.hpp"

#include <lapacke.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace sonoloc {

void SvdPhatModel::finalize() {
  const int q_count = static_cast<int>(d.rows());
  if (rank != d.cols() || rank < 1)
    throw std::runtime_error("model rank does not match dictionary");
  d_hat.resize(q_count, rank);
  Eigen::MatrixXd embed(q_count, 2 * rank);
  for (int q = 0; q < q_count; ++q) {
    const double n = d.row(q).norm();
    if (n == 0.0) throw std::runtime_error("zero dictionary row");
    d_hat.row(q) = d.row(q) / n;
    for (int i = 0; i < rank; ++i) {
      embed(q, 2 * i) = d_hat(q, i).real();
      embed(q, 2 * i + 1) = d_hat(q, i).imag();
    }
  }
  nn.build(embed);
}

Eigen::MatrixXcd build_steering_matrix(const TdoaTable& tdoa, int frame_size) {
  const int P = static_cast<int>(tdoa.tau.rows());
  const int Q = static_cast<int>(tdoa.tau.cols());
  const int bins = frame_size / 2 + 1;
  Eigen::MatrixXcd w(Q, static_cast<long>(P) * bins);
  for (int p = 0; p < P; ++p) {
    for (int q = 0; q < Q; ++q) {
      const double step = 2.0 * M_PI * tdoa.tau(p, q) / frame_size;
      for (int k = 0; k < bins; ++k)
        w(q, static_cast<long>(p) * bins + k) = std::polar(1.0, step * k);
    }
  }
  return w;
}

SvdPhatModel build_svd_model(const MicArray& array, const SvdModelConfig& cfg) {
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0)
    throw std::runtime_error("delta must be in (0, 1)");
  if (cfg.frame_size < 2 || cfg.frame_size % 2 != 0)
    throw std::runtime_error("frame size must be even and positive");
  SvdPhatModel model;
  model.array = array;
  model.config = cfg;
  model.grid = build_doa_grid(cfg.grid_level);
  const TdoaTable tdoa = compute_tdoa(array, model.grid, cfg.fs, cfg.c);

  const int q_count = model.grid.size();
  const long cols = static_cast<long>(array.pair_count()) * model.bins();
  const int minmn = static_cast<int>(std::min<long>(q_count, cols));

  Eigen::VectorXd sigma(minmn);
  Eigen::MatrixXcd u(q_count, minmn);
  Eigen::MatrixXcd vt(minmn, cols);
  {
    // W is overwritten by zgesdd; scoped so the 16*Q*P*(N/2+1) bytes are
    // released before the dictionary copies below.
    Eigen::MatrixXcd w = build_steering_matrix(tdoa, cfg.frame_size);
    const int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'S', q_count, static_cast<int>(cols),
        reinterpret_cast<lapack_complex_double*>(w.data()), q_count,
        sigma.data(), reinterpret_cast<lapack_complex_double*>(u.data()),
        q_count, reinterpret_cast<lapack_complex_double*>(vt.data()), minmn);
    if (info != 0)
      throw std::runtime_error("svd failed (degenerate geometry?), info=" +
                               std::to_string(info));
  }

  // Unit-modulus entries make Tr{WW^H} = Q*P*(N/2+1) exactly; keep the
  // smallest K whose cumulative sigma^2 reaches (1 - delta) of it.
  const double total = static_cast<double>(q_count) * static_cast<double>(cols);
  const double target = (1.0 - cfg.delta) * total;
  double kept = 0.0;
  int rank = minmn;
  for (int i = 0; i < minmn; ++i) {
    kept += sigma[i] * sigma[i];
    if (kept >= target) {
      rank = i + 1;
      break;
    }
  }
  model.rank = rank;
  model.energy_ratio = kept / total;
  model.d = u.leftCols(rank);
  for (int i = 0; i < rank; ++i) model.d.col(i) *= sigma[i];
  model.v = vt.topRows(rank).adjoint();
  model.finalize();
  return model;
}

Eigen::VectorXcd project_observation(const SvdPhatModel& model,
                                     const PhatVector& x) {
  if (x.flat.size() != model.v.rows())
    throw std::runtime_error("observation length does not match model");
  return model.v.adjoint() * x.flat;
}

std::optional<NearestResult> nearest_doa(const SvdPhatModel& model,
                                         const Eigen::VectorXcd& z) {
  if (z.size() != model.rank)
    throw std::runtime_error("projection length does not match model rank");
  const double norm = z.norm();
  if (norm == 0.0) return std::nullopt;
  Eigen::VectorXd query(2 * model.rank);
  for (int i = 0; i < model.rank; ++i) {
    const std::complex<double> zi = z[i] / norm;
    query[2 * i] = zi.real();
    query[2 * i + 1] = -zi.imag();
  }
  NearestResult r;
  r.q_star = model.nn.query(query);
  r.energy = (model.d.row(r.q_star) * z).value().real();
  return r;
}

bool DeflationState::add_and_project(const Eigen::VectorXcd& v,
                                     Eigen::VectorXcd& z, double tol) {
  const double vnorm = v.norm();
  Eigen::VectorXcd u = v;
  if (basis_.cols() > 0) u -= basis_ * (basis_.adjoint() * u);
  if (u.norm() < tol * vnorm) return false;
  // second orthogonalization pass keeps the basis Gram matrix at identity
  // to machine precision over long runs
  if (basis_.cols() > 0) u -= basis_ * (basis_.adjoint() * u);
  u /= u.norm();
  basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
  basis_.col(basis_.cols() - 1) = u;
  z -= u * u.dot(z);
  return true;
}

bool deflate(DeflationState& state, const SvdPhatModel& model, int q_star,
             Eigen::VectorXcd& z) {
  if (q_star < 0 || q_star >= model.d.rows())
    throw std::runtime_error("deflate: direction index out of range");
  const Eigen::VectorXcd v = model.d.row(q_star).adjoint();
  return state.add_and_project(v, z);
}

ScanResult localize_svd(const SvdPhatModel& model, const PhatVector& x,
                        int scans) {
  if (scans < 1) throw std::runtime_error("localize_svd: scans must be >= 1");
  ScanResult result;
  Eigen::VectorXcd z = project_observation(model, x);
  DeflationState state(model.rank);
  for (int r = 0; r < scans; ++r) {
    const auto hit = nearest_doa(model, z);
    if (!hit) break;
    const bool grew = deflate(state, model, hit->q_star, z);
    result.items.push_back(
        {model.grid.directions[hit->q_star], hit->energy, !grew});
  }
  return result;
}

namespace {

constexpr char kModelMagic[8] = {'S', 'N', 'L', 'C', 'M', 'D', 'L', '1'};
constexpr uint32_t kEndianTag = 0x01020304u;

void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void write_complex_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      write_f64(os, m(r, c).real());
      write_f64(os, m(r, c).imag());
    }
  }
}

void read_complex_matrix(std::istream& is, Eigen::MatrixXcd& m) {
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      const double re = read_f64(is);
      const double im = read_f64(is);
      m(r, c) = {re, im};
    }
  }
}

}  // namespace

void save_model(const SvdPhatModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::system_error(errno, std::generic_category(),
                            "cannot open model file for write: " + path);
  os.write(kModelMagic, sizeof kModelMagic);
  write_u32(os, kEndianTag);
  write_u32(os, static_cast<uint32_t>(model.array.mic_count()));
  write_u32(os, static_cast<uint32_t>(model.array.pair_count()));
  write_u32(os, static_cast<uint32_t>(model.config.frame_size));
  write_u32(os, static_cast<uint32_t>(model.grid.size()));
  write_u32(os, static_cast<uint32_t>(model.rank));
  write_u32(os, static_cast<uint32_t>(model.config.grid_level));
  write_f64(os, model.config.fs);
  write_f64(os, model.config.c);
  write_f64(os, model.config.delta);
  write_f64(os, model.energy_ratio);
  write_u32(os, static_cast<uint32_t>(model.array.name.size()));
  os.write(model.array.name.data(),
           static_cast<std::streamsize>(model.array.name.size()));
  for (const auto& p : model.array.positions)
    for (int i = 0; i < 3; ++i) write_f64(os, p[i]);
  for (const auto& s : model.grid.directions)
    for (int i = 0; i < 3; ++i) write_f64(os, s[i]);
  write_complex_matrix(os, model.v);
  write_complex_matrix(os, model.d);
  if (!os) throw std::runtime_error("short write on model file: " + path);
}

SvdPhatModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::system_error(errno, std::generic_category(),
                            "cannot open model file: " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
    throw std::runtime_error("not a model file: " + path);
  if (read_u32(is) != kEndianTag)
    throw std::runtime_error("model file byte order mismatch: " + path);
  SvdPhatModel model;
  const uint32_t mics = read_u32(is);
  const uint32_t pair_count = read_u32(is);
  model.config.frame_size = static_cast<int>(read_u32(is));
  const uint32_t q_count = read_u32(is);
  model.rank = static_cast<int>(read_u32(is));
  model.config.grid_level = static_cast<int>(read_u32(is));
  model.config.fs = read_f64(is);
  model.config.c = read_f64(is);
  model.config.delta = read_f64(is);
  model.energy_ratio = read_f64(is);
  const uint32_t name_len = read_u32(is);
  if (!is || mics < 2 || name_len > 4096 || model.rank < 1)
    throw std::runtime_error("corrupt model header: " + path);
  if (pair_count != mics * (mics - 1) / 2)
    throw std::runtime_error("corrupt model header: " + path);
  model.array.name.resize(name_len);
  is.read(model.array.name.data(), name_len);
  model.array.positions.resize(mics);
  for (auto& p : model.array.positions)
    for (int i = 0; i < 3; ++i) p[i] = read_f64(is);
  model.grid.directions.resize(q_count);
  for (auto& s : model.grid.directions)
    for (int i = 0; i < 3; ++i) s[i] = read_f64(is);
  model.v.resize(static_cast<long>(pair_count) * model.bins(), model.rank);
  model.d.resize(q_count, model.rank);
  read_complex_matrix(is, model.v);
  read_complex_matrix(is, model.d);
  if (!is) throw std::runtime_error("truncated model file: " + path);
  model.finalize();
  return model;
}

}  // namespace sonoloc
