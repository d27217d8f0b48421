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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "qcarbon/mitigation.hpp"
#include "qcarbon/pauli.hpp"
#include "qcarbon/simulator.hpp"

namespace qcarbon {

enum class MitigationKind { none, m3, trex };

std::string to_string(MitigationKind kind);
MitigationKind mitigation_from_string(const std::string& s);

struct SamplingConfig {
  std::uint64_t shots = 1000;
  std::optional<ReadoutNoiseModel> noise;
  MitigationKind mitigation = MitigationKind::none;
  std::uint64_t seed = 0;
  /// Shots for the mitigation calibration pass; 0 means the same as `shots`.
  std::uint64_t calibration_shots = 0;
};

/**
 * @brief Shot-based estimate of <H> for the circuit state.
 *
 * Terms are partitioned into qubit-wise commuting groups; each group is
 * measured once in its shared basis with `shots` shots. Identity terms
 * contribute their coefficient exactly.
 */
Estimate sampled_expectation(const Circuit& c, std::span<const double> params, const QubitHamiltonian& h,
                             const SamplingConfig& cfg);

/// Reusable energy evaluator; sampled mode derives a fresh seed per call.
class EnergyEstimator {
 public:
  static EnergyEstimator exact(const QubitHamiltonian& h);
  static EnergyEstimator sampled(const QubitHamiltonian& h, const SamplingConfig& cfg);

  bool is_exact() const { return !sampling_; }
  const QubitHamiltonian& hamiltonian() const { return *h_; }
  std::uint64_t calls() const { return calls_; }

  Estimate operator()(const Circuit& c, std::span<const double> params);

  /// Noise-free value regardless of mode.
  double exact_value(const Circuit& c, std::span<const double> params) const;

 private:
  struct Group {
    PauliWord basis;
    std::vector<std::pair<double, std::uint64_t>> terms;
  };
  struct Mitigators {
    std::optional<ReadoutCalibration> m3;
    std::optional<TrexCalibration> trex;
  };

  EnergyEstimator() = default;
  void prepare_groups();
  Estimate sample_state(const Statevector& s, std::uint64_t seed) const;

  std::shared_ptr<const QubitHamiltonian> h_;
  std::shared_ptr<const SparseMatrixC> matrix_;
  std::optional<SamplingConfig> sampling_;
  std::vector<Group> groups_;
  double identity_ = 0.0;
  Mitigators mitigators_;
  std::uint64_t calls_ = 0;

  friend Estimate sampled_expectation(const Circuit&, std::span<const double>, const QubitHamiltonian&,
                                      const SamplingConfig&);
};

}  // namespace qcarbon
