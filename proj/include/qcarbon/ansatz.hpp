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

#include <optional>
#include <string>
#include <vector>

#include "qcarbon/simulator.hpp"
#include "qcarbon/vqe.hpp"

namespace qcarbon {

struct HeaConfig {
  std::size_t n_qubits = 0;
  std::size_t layers = 1;
};

/**
 * @brief Hardware-efficient ansatz.
 *
 * X on every set HF bit, then `layers` x [Ry on every qubit, CNOT chain
 * 0->1->...->n-1], then a closing Ry layer: n_qubits * (layers + 1) parameters.
 */
Circuit build_hea(const HeaConfig& cfg, const std::vector<int>& hf_bits);

std::vector<double> default_candidate_angles();

/// Nearest candidate to `angle` (compared modulo 2pi); ties go to the smaller magnitude.
double nearest_candidate(double angle, const std::vector<double>& candidates);

struct DeparamOptions {
  double tolerance = 1e-2;
  std::vector<double> candidates = default_candidate_angles();
  /// Ground energy used for relative errors; the qubit-space minimum when unset.
  std::optional<double> oracle;
};

struct DeparamStep {
  std::size_t gate = 0;
  std::size_t qubit = 0;
  double angle = 0.0;
  double energy = 0.0;
  double relative_error = 0.0;
  std::size_t params_before = 0;
  std::size_t params_after = 0;
  bool accepted = false;
  /// Frozen at 0 or +-pi.
  bool virtual_identity = false;
};

struct DeparamReport {
  double baseline_energy = 0.0;
  double baseline_relative_error = 0.0;
  double oracle_energy = 0.0;
  double tolerance = 0.0;
  std::size_t initial_params = 0;
  /// Accepted steps in order, followed by the first rejected attempt if any.
  std::vector<DeparamStep> steps;
  Circuit circuit;
  std::vector<double> params;

  std::size_t final_params() const { return circuit.n_params(); }
};

/**
 * @brief Greedy one-gate-per-step freezing of Ry angles.
 *
 * Every remaining free gate is tentatively frozen at its nearest candidate and
 * the rest re-optimised from the current parameters; the freeze closest to the
 * baseline energy is kept while its relative error stays within tolerance.
 */
DeparamReport deparameterise(const VqeProblem& problem, const VqeResult& baseline, const DeparamOptions& opts = {});

/// One record per step: `step,gate,qubit,angle,energy,relative_error,params_before,params_after,accepted,virtual_identity`.
std::string to_text(const DeparamReport& report);

/// `step,parameters` rows starting from the baseline.
std::string params_csv(const DeparamReport& report);
/// `step,relative_error` rows starting from the baseline.
std::string error_csv(const DeparamReport& report);

}  // namespace qcarbon
