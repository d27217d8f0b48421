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

#include "qcarbon/estimator.hpp"

#include <cmath>

#include "qcarbon/error.hpp"

namespace qcarbon {

std::string to_string(MitigationKind kind) {
  switch (kind) {
    case MitigationKind::m3: return "m3";
    case MitigationKind::trex: return "trex";
    default: return "none";
  }
}

MitigationKind mitigation_from_string(const std::string& s) {
  if (s == "none") return MitigationKind::none;
  if (s == "m3") return MitigationKind::m3;
  if (s == "trex") return MitigationKind::trex;
  throw ParseError("unknown mitigation kind '" + s + "' (expected none, m3 or trex)");
}

namespace {

constexpr std::uint64_t kCalibrationStream = 0xCA11B8A7E;

void check_real(const QubitHamiltonian& h) {
  const double im = max_imaginary(h);
  if (im > 1e-10) throw Error("Hamiltonian is not Hermitian (imaginary coefficient " + format_double(im) + ")");
}

}  // namespace

EnergyEstimator EnergyEstimator::exact(const QubitHamiltonian& h) {
  check_real(h);
  EnergyEstimator e;
  e.h_ = std::make_shared<const QubitHamiltonian>(simplify(h));
  e.matrix_ = std::make_shared<const SparseMatrixC>(to_sparse(*e.h_, 20));
  return e;
}

EnergyEstimator EnergyEstimator::sampled(const QubitHamiltonian& h, const SamplingConfig& cfg) {
  if (cfg.shots == 0) throw Error("sampled estimation requires shots > 0");
  check_real(h);
  EnergyEstimator e;
  e.h_ = std::make_shared<const QubitHamiltonian>(simplify(h));
  e.sampling_ = cfg;
  if (cfg.noise && cfg.noise->n_qubits() != h.n_qubits()) throw Error("noise model width does not match Hamiltonian");
  e.prepare_groups();
  const std::uint64_t cal_shots = cfg.calibration_shots ? cfg.calibration_shots : cfg.shots;
  const std::uint64_t cal_seed = derive_seed(cfg.seed, kCalibrationStream);
  const ReadoutNoiseModel* noise = cfg.noise ? &*cfg.noise : nullptr;
  if (cfg.mitigation == MitigationKind::m3) {
    e.mitigators_.m3 = noise ? calibrate(*noise, cal_shots, cal_seed) : ReadoutCalibration::identity(h.n_qubits());
  } else if (cfg.mitigation == MitigationKind::trex) {
    e.mitigators_.trex = trex_calibrate(h.n_qubits(), cal_shots, noise, cal_seed);
  }
  return e;
}

void EnergyEstimator::prepare_groups() {
  identity_ = h_->identity_coefficient().real();
  for (const auto& g : group_qubitwise(*h_)) {
    Group grp;
    grp.basis = group_basis(*h_, g);
    for (auto t : g) grp.terms.emplace_back(h_->terms()[t].coeff.real(), h_->terms()[t].word.support());
    groups_.push_back(std::move(grp));
  }
}

Estimate EnergyEstimator::sample_state(const Statevector& s, std::uint64_t seed) const {
  const auto& cfg = *sampling_;
  const ReadoutNoiseModel* noise = cfg.noise ? &*cfg.noise : nullptr;
  Estimate total{identity_, 0.0};
  double var = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& grp = groups_[g];
    const std::uint64_t gseed = derive_seed(seed, g);
    Estimate e;
    switch (cfg.mitigation) {
      case MitigationKind::none:
        e = raw_expectation(sample(s, grp.basis, cfg.shots, noise, gseed), grp.terms);
        break;
      case MitigationKind::m3:
        e = m3_expectation(sample(s, grp.basis, cfg.shots, noise, gseed), *mitigators_.m3, grp.terms);
        break;
      case MitigationKind::trex:
        e = trex_from_counts(twirled_sample(s, grp.basis, cfg.shots, noise, gseed), *mitigators_.trex, grp.terms);
        break;
    }
    total.value += e.value;
    var += e.std_error * e.std_error;
  }
  total.std_error = std::sqrt(var);
  return total;
}

Estimate EnergyEstimator::operator()(const Circuit& c, std::span<const double> params) {
  if (c.n_qubits() != h_->n_qubits()) throw Error("circuit and Hamiltonian qubit counts differ");
  const auto state = evolve(c, params);
  if (!sampling_) return {exact_expectation(state, *matrix_), 0.0};
  const std::uint64_t seed = derive_seed(sampling_->seed, calls_++);
  return sample_state(state, seed);
}

double EnergyEstimator::exact_value(const Circuit& c, std::span<const double> params) const {
  const auto state = evolve(c, params);
  if (matrix_) return exact_expectation(state, *matrix_);
  return exact_expectation(state, *h_);
}

Estimate sampled_expectation(const Circuit& c, std::span<const double> params, const QubitHamiltonian& h,
                             const SamplingConfig& cfg) {
  if (c.n_qubits() != h.n_qubits()) throw Error("circuit and Hamiltonian qubit counts differ");
  const auto est = EnergyEstimator::sampled(h, cfg);
  return est.sample_state(evolve(c, params), cfg.seed);
}

}  // namespace qcarbon
