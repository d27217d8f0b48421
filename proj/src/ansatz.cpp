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

#include "qcarbon/ansatz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qcarbon/error.hpp"

namespace qcarbon {

Circuit build_hea(const HeaConfig& cfg, const std::vector<int>& hf_bits) {
  if (hf_bits.size() != cfg.n_qubits) {
    throw Error("HF bit vector has length " + std::to_string(hf_bits.size()) + " for " +
                std::to_string(cfg.n_qubits) + " qubits");
  }
  Circuit c(cfg.n_qubits);
  for (std::size_t q = 0; q < cfg.n_qubits; ++q) {
    if (hf_bits[q] != 0 && hf_bits[q] != 1) throw Error("HF bits must be 0 or 1");
    if (hf_bits[q]) c.x(q);
  }
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    for (std::size_t q = 0; q < cfg.n_qubits; ++q) c.ry(q);
    for (std::size_t q = 0; q + 1 < cfg.n_qubits; ++q) c.cnot(q, q + 1);
  }
  for (std::size_t q = 0; q < cfg.n_qubits; ++q) c.ry(q);
  return c;
}

std::vector<double> default_candidate_angles() {
  constexpr double pi = std::numbers::pi;
  return {0.0, pi / 2, -pi / 2, pi, -pi};
}

double nearest_candidate(double angle, const std::vector<double>& candidates) {
  if (candidates.empty()) throw Error("candidate angle set is empty");
  double best = candidates.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    const double d = std::abs(std::remainder(angle - c, 2.0 * std::numbers::pi));
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && std::abs(c) < std::abs(best))) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

namespace {

bool is_virtual_identity(double angle) {
  return angle == 0.0 || std::abs(std::abs(angle) - std::numbers::pi) < 1e-15;
}

}  // namespace

DeparamReport deparameterise(const VqeProblem& problem, const VqeResult& baseline, const DeparamOptions& opts) {
  problem.validate();
  if (baseline.params.size() != problem.circuit.n_params()) {
    throw Error("baseline parameters do not match the problem circuit");
  }
  if (opts.tolerance < 0.0) throw Error("deparameterisation tolerance must be non-negative");

  DeparamReport rep;
  rep.oracle_energy = opts.oracle ? *opts.oracle : ground_state_energy(problem.hamiltonian).energy;
  rep.baseline_energy = baseline.energy;
  rep.baseline_relative_error = relative_error(baseline.energy, rep.oracle_energy);
  rep.tolerance = opts.tolerance;
  rep.initial_params = problem.circuit.n_params();
  rep.circuit = problem.circuit;
  rep.params = baseline.params;

  VqeProblem current = problem;
  current.restarts = 1;
  while (rep.circuit.n_params() > 0) {
    const auto free = rep.circuit.free_gates();
    std::optional<DeparamStep> pick;
    Circuit pick_circuit;
    std::vector<double> pick_params;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const std::size_t gate = free[i];
      const double angle = nearest_candidate(rep.params[i], opts.candidates);
      current.circuit = rep.circuit.freeze(gate, angle);
      std::vector<double> warm;
      for (std::size_t j = 0; j < rep.params.size(); ++j) {
        if (j != i) warm.push_back(rep.params[j]);
      }
      auto res = solve_from(current, std::move(warm));
      const double dev = std::abs(res.energy - rep.baseline_energy);
      if (!pick || dev < std::abs(pick->energy - rep.baseline_energy)) {
        DeparamStep s;
        s.gate = gate;
        s.qubit = std::get<RyGate>(rep.circuit.gates()[gate]).qubit;
        s.angle = angle;
        s.energy = res.energy;
        s.relative_error = relative_error(res.energy, rep.oracle_energy);
        s.params_before = rep.circuit.n_params();
        s.params_after = current.circuit.n_params();
        s.virtual_identity = is_virtual_identity(angle);
        pick = s;
        pick_circuit = current.circuit;
        pick_params = std::move(res.params);
      }
    }
    if (pick->relative_error > opts.tolerance) {
      pick->params_after = pick->params_before;
      rep.steps.push_back(*pick);
      break;
    }
    pick->accepted = true;
    rep.steps.push_back(*pick);
    rep.circuit = std::move(pick_circuit);
    rep.params = std::move(pick_params);
  }
  return rep;
}

std::string to_text(const DeparamReport& r) {
  std::string out = "baseline_energy=" + format_double(r.baseline_energy) +
                    "\nbaseline_relative_error=" + format_double(r.baseline_relative_error) +
                    "\noracle_energy=" + format_double(r.oracle_energy) + "\ntolerance=" + format_double(r.tolerance) +
                    "\ninitial_params=" + std::to_string(r.initial_params) +
                    "\nfinal_params=" + std::to_string(r.final_params()) +
                    "\nstep,gate,qubit,angle,energy,relative_error,params_before,params_after,accepted,virtual_identity\n";
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    out += std::to_string(i + 1) + ',' + std::to_string(s.gate) + ',' + std::to_string(s.qubit) + ',' +
           format_double(s.angle) + ',' + format_double(s.energy) + ',' + format_double(s.relative_error) + ',' +
           std::to_string(s.params_before) + ',' + std::to_string(s.params_after) + ',' +
           (s.accepted ? "true" : "false") + ',' + (s.virtual_identity ? "true" : "false") + '\n';
  }
  return out;
}

std::string params_csv(const DeparamReport& r) {
  std::string out = "step,parameters\n0," + std::to_string(r.initial_params) + '\n';
  std::size_t k = 0;
  for (const auto& s : r.steps) {
    if (s.accepted) out += std::to_string(++k) + ',' + std::to_string(s.params_after) + '\n';
  }
  return out;
}

std::string error_csv(const DeparamReport& r) {
  std::string out = "step,relative_error\n0," + format_double(r.baseline_relative_error) + '\n';
  std::size_t k = 0;
  for (const auto& s : r.steps) {
    if (s.accepted) out += std::to_string(++k) + ',' + format_double(s.relative_error) + '\n';
  }
  return out;
}

}  // namespace qcarbon
