// Copyright 2026 The qcarbon Authors
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

#include "qcarbon/mitigation.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/Sparse>
#include <unsupported/Eigen/IterativeSolvers>

#include "qcarbon/error.hpp"

namespace qcarbon {

namespace {

double parity(std::uint64_t bits, std::uint64_t mask) { return (std::popcount(bits & mask) & 1) ? -1.0 : 1.0; }

std::uint64_t all_qubits(std::size_t n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }

Eigen::Matrix2d confusion_of(double p10, double p01) {
  Eigen::Matrix2d m;
  m << 1.0 - p10, p01, p10, 1.0 - p01;
  return m;
}

}  // namespace

ReadoutCalibration ReadoutCalibration::identity(std::size_t n) {
  return {std::vector<Eigen::Matrix2d>(n, Eigen::Matrix2d::Identity()), 0, 0};
}

ReadoutCalibration calibrate(const ReadoutNoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error("calibration requires at least one shot");
  const std::size_t n = noise.n_qubits();
  const PauliWord z(n);
  Statevector zeros(n);
  Statevector ones(n);
  for (std::size_t q = 0; q < n; ++q) ones.apply_x(q);
  const auto c0 = sample(zeros, z, shots, &noise, derive_seed(seed, 0));
  const auto c1 = sample(ones, z, shots, &noise, derive_seed(seed, 1));
  ReadoutCalibration cal;
  cal.shots = shots;
  cal.seed = seed;
  for (std::size_t q = 0; q < n; ++q) {
    std::uint64_t up = 0, down = 0;
    for (const auto& [b, k] : c0.counts) up += ((b >> q) & 1u) ? k : 0;
    for (const auto& [b, k] : c1.counts) down += ((b >> q) & 1u) ? 0 : k;
    cal.confusion.push_back(confusion_of(static_cast<double>(up) / static_cast<double>(shots),
                                         static_cast<double>(down) / static_cast<double>(shots)));
  }
  return cal;
}

std::string to_text(const ReadoutCalibration& cal) {
  std::string out = "nqubits=" + std::to_string(cal.n_qubits()) + "\nshots=" + std::to_string(cal.shots) +
                    "\nseed=" + std::to_string(cal.seed) + "\n";
  for (std::size_t q = 0; q < cal.n_qubits(); ++q) {
    out += std::to_string(q) + ' ' + format_double(cal.p1_given0(q)) + ' ' + format_double(cal.p0_given1(q)) + '\n';
  }
  return out;
}

ReadoutCalibration calibration_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, body;
  ReadoutCalibration cal;
  while (std::getline(in, line)) {
    if (line.rfind("shots=", 0) == 0) {
      cal.shots = std::stoull(line.substr(6));
    } else if (line.rfind("seed=", 0) == 0) {
      cal.seed = std::stoull(line.substr(5));
    } else {
      body += line + '\n';
    }
  }
  const auto model = noise_from_text(body);
  for (std::size_t q = 0; q < model.n_qubits(); ++q) cal.confusion.push_back(model.confusion(q));
  return cal;
}

double QuasiDistribution::sum() const {
  double s = 0.0;
  for (const auto& [b, p] : probs) s += p;
  return s;
}

double QuasiDistribution::expectation(std::uint64_t z_mask) const {
  double s = 0.0;
  for (const auto& [b, p] : probs) s += p * parity(b, z_mask);
  return s;
}

namespace {

struct Restricted {
  std::vector<std::uint64_t> keys;
  Eigen::VectorXd probs;
  std::uint64_t shots = 0;
};

Restricted restrict_counts(const ShotCounts& counts) {
  if (counts.counts.empty() || counts.shots == 0) throw Error("cannot mitigate empty counts");
  counts.check();
  Restricted r;
  r.shots = counts.shots;
  r.probs.resize(static_cast<Eigen::Index>(counts.counts.size()));
  Eigen::Index i = 0;
  for (const auto& [b, k] : counts.counts) {
    r.keys.push_back(b);
    r.probs[i++] = static_cast<double>(k) / static_cast<double>(counts.shots);
  }
  return r;
}

double assignment(const std::vector<Eigen::Matrix2d>& conf, std::uint64_t read, std::uint64_t prepared) {
  double v = 1.0;
  for (std::size_t q = 0; q < conf.size(); ++q) {
    v *= conf[q]((read >> q) & 1u, (prepared >> q) & 1u);
    if (v == 0.0) break;
  }
  return v;
}

// Solves A x = rhs (or A^T x = rhs) with the column-normalised restricted matrix.
class RestrictedSystem {
 public:
  RestrictedSystem(const std::vector<std::uint64_t>& keys, const std::vector<Eigen::Matrix2d>& conf) {
    const auto d = static_cast<Eigen::Index>(keys.size());
    dense_ = keys.size() < kM3DirectLimit;
    if (dense_) {
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) a(i, j) = assignment(conf, keys[i], keys[j]);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double s = a.col(j).sum();
        if (s <= 0.0) throw Error("restricted assignment matrix has an empty column");
        a.col(j) /= s;
      }
      lu_.compute(a);
      if (std::abs(lu_.determinant()) < 1e-300 || lu_.rcond() < 1e-14) {
        throw Error("restricted assignment matrix is singular");
      }
    } else {
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd colsum = Eigen::VectorXd::Zero(d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
          const double v = assignment(conf, keys[i], keys[j]);
          colsum[j] += v;
          if (v > 1e-12) trip.emplace_back(i, j, v);
        }
      for (auto& t : trip) t = Eigen::Triplet<double>(t.row(), t.col(), t.value() / colsum[t.col()]);
      sparse_.resize(d, d);
      sparse_.setFromTriplets(trip.begin(), trip.end());
      sparse_t_ = sparse_.transpose();
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, bool transpose) const {
    if (dense_) return transpose ? Eigen::VectorXd(lu_.transpose().solve(rhs)) : Eigen::VectorXd(lu_.solve(rhs));
    Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> gmres;
    gmres.set_restart(30);
    gmres.setTolerance(1e-12);
    gmres.setMaxIterations(2000);
    gmres.compute(transpose ? sparse_t_ : sparse_);
    Eigen::VectorXd x = gmres.solve(rhs);
    if (gmres.info() != Eigen::Success) throw Error("iterative assignment solve did not converge");
    return x;
  }

 private:
  bool dense_ = true;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::SparseMatrix<double> sparse_, sparse_t_;
};

Eigen::VectorXd weights(const std::vector<std::uint64_t>& keys,
                        std::span<const std::pair<double, std::uint64_t>> weighted_masks) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (const auto& [c, m] : weighted_masks) s[static_cast<Eigen::Index>(i)] += c * parity(keys[i], m);
  return s;
}

void check_width(const ShotCounts& counts, const ReadoutCalibration& cal) {
  if (cal.n_qubits() != counts.n_qubits) throw Error("calibration width does not match counts");
}

}  // namespace

QuasiDistribution m3_mitigate(const ShotCounts& counts, const ReadoutCalibration& cal) {
  check_width(counts, cal);
  const auto r = restrict_counts(counts);
  const RestrictedSystem sys(r.keys, cal.confusion);
  const Eigen::VectorXd x = sys.solve(r.probs, false);
  QuasiDistribution q;
  q.n_qubits = counts.n_qubits;
  q.shots = counts.shots;
  for (std::size_t i = 0; i < r.keys.size(); ++i) q.probs[r.keys[i]] = x[static_cast<Eigen::Index>(i)];
  return q;
}

Estimate m3_expectation(const ShotCounts& counts, const ReadoutCalibration& cal,
                        std::span<const std::pair<double, std::uint64_t>> weighted_masks) {
  check_width(counts, cal);
  const auto r = restrict_counts(counts);
  const Eigen::VectorXd s = weights(r.keys, weighted_masks);
  const RestrictedSystem sys(r.keys, cal.confusion);
  // value = s^T A^-1 p = w^T p with A^T w = s.
  const Eigen::VectorXd w = sys.solve(s, true);
  Estimate e;
  e.value = w.dot(r.probs);
  const double second = r.probs.dot(w.cwiseAbs2());
  double var = std::max(0.0, second - e.value * e.value) / static_cast<double>(r.shots);

  if (cal.shots > 0) {
    auto value_with = [&](const std::vector<Eigen::Matrix2d>& conf) {
      const RestrictedSystem shifted(r.keys, conf);
      return s.dot(shifted.solve(r.probs, false));
    };
    for (std::size_t q = 0; q < cal.n_qubits(); ++q) {
      for (int dir = 0; dir < 2; ++dir) {
        const double p = dir == 0 ? cal.p1_given0(q) : cal.p0_given1(q);
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(cal.shots));
        if (sigma == 0.0) continue;
        auto conf_hi = cal.confusion;
        auto conf_lo = cal.confusion;
        const double hi = std::min(p + sigma, 1.0), lo = std::max(p - sigma, 0.0);
        if (dir == 0) {
          conf_hi[q] = confusion_of(hi, cal.p0_given1(q));
          conf_lo[q] = confusion_of(lo, cal.p0_given1(q));
        } else {
          conf_hi[q] = confusion_of(cal.p1_given0(q), hi);
          conf_lo[q] = confusion_of(cal.p1_given0(q), lo);
        }
        const double slope = (value_with(conf_hi) - value_with(conf_lo)) / (hi - lo);
        var += slope * slope * sigma * sigma;
      }
    }
  }
  e.std_error = std::sqrt(var);
  return e;
}

ShotCounts twirled_sample(const Statevector& s, const PauliWord& basis, std::uint64_t shots,
                          const ReadoutNoiseModel* noise, std::uint64_t seed) {
  if (shots == 0) throw Error("twirled sampling requires at least one shot");
  std::mt19937_64 rng(seed);
  const std::uint64_t full = all_qubits(s.n_qubits());
  ShotCounts out;
  out.n_qubits = s.n_qubits();
  out.shots = shots;
  out.basis = basis;
  for (std::size_t b = 0; b < kTrexBatches; ++b) {
    const std::uint64_t mask = rng() & full;
    const std::uint64_t batch = shots / kTrexBatches + (b < shots % kTrexBatches ? 1 : 0);
    if (batch == 0) continue;
    const auto part = sample(s, basis, batch, noise, derive_seed(seed, b + 1), mask);
    for (const auto& [k, v] : part.counts) out.counts[k] += v;
  }
  return out;
}

Estimate TrexCalibration::attenuation(std::uint64_t z_mask) const {
  double f = 0.0;
  for (const auto& [b, k] : counts.counts) f += static_cast<double>(k) * parity(b, z_mask);
  f /= static_cast<double>(counts.shots);
  return {f, std::sqrt(std::max(0.0, 1.0 - f * f) / static_cast<double>(counts.shots))};
}

TrexCalibration trex_calibrate(std::size_t n_qubits, std::uint64_t shots, const ReadoutNoiseModel* noise,
                               std::uint64_t seed) {
  return {twirled_sample(Statevector(n_qubits), PauliWord(n_qubits), shots, noise, seed)};
}

namespace {

Estimate per_shot_mean(const ShotCounts& counts, const std::vector<std::pair<double, std::uint64_t>>& terms) {
  double m1 = 0.0, m2 = 0.0;
  for (const auto& [b, k] : counts.counts) {
    double e = 0.0;
    for (const auto& [c, m] : terms) e += c * parity(b, m);
    m1 += static_cast<double>(k) * e;
    m2 += static_cast<double>(k) * e * e;
  }
  const double n = static_cast<double>(counts.shots);
  m1 /= n;
  m2 /= n;
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1) / n)};
}

}  // namespace

Estimate trex_from_counts(const ShotCounts& twirled, const TrexCalibration& cal,
                          std::span<const std::pair<double, std::uint64_t>> weighted_masks) {
  if (twirled.shots == 0) throw Error("cannot mitigate empty counts");
  if (cal.counts.n_qubits != twirled.n_qubits) throw Error("T-REx calibration width does not match counts");
  std::vector<std::pair<double, std::uint64_t>> scaled;
  double cal_var = 0.0;
  for (const auto& [c, m] : weighted_masks) {
    const auto f = cal.attenuation(m);
    if (f.value < 1e-6) {
      throw Error("T-REx attenuation factor " + format_double(f.value) + " for mask " + std::to_string(m) +
                  " is below 1e-6; readout cannot be mitigated");
    }
    scaled.emplace_back(c / f.value, m);
    const std::pair<double, std::uint64_t> single{1.0, m};
    const double raw = per_shot_mean(twirled, {single}).value;
    const double d = c * raw * f.std_error / (f.value * f.value);
    cal_var += d * d;
  }
  auto e = per_shot_mean(twirled, scaled);
  e.std_error = std::sqrt(e.std_error * e.std_error + cal_var);
  return e;
}

Estimate trex_expectation(const Circuit& c, std::span<const double> params, const PauliWord& observable,
                          std::uint64_t shots, const ReadoutNoiseModel* noise, std::uint64_t seed) {
  if (observable.size() != c.n_qubits()) throw Error("observable width does not match the circuit");
  const auto state = evolve(c, params);
  const auto cal = trex_calibrate(c.n_qubits(), shots, noise, derive_seed(seed, 0));
  const auto counts = twirled_sample(state, observable, shots, noise, derive_seed(seed, 1));
  const std::pair<double, std::uint64_t> term{1.0, observable.support()};
  return trex_from_counts(counts, cal, {&term, 1});
}

Estimate raw_expectation(const ShotCounts& counts, std::span<const std::pair<double, std::uint64_t>> weighted_masks) {
  if (counts.shots == 0) throw Error("cannot estimate from empty counts");
  return per_shot_mean(counts, {weighted_masks.begin(), weighted_masks.end()});
}

}  // namespace qcarbon
