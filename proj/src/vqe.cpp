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

#include "qcarbon/vqe.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qcarbon/error.hpp"

namespace qcarbon {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::spsa ? "spsa" : "quasi_newton"; }

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "spsa") return OptimizerKind::spsa;
  if (s == "quasi_newton" || s == "lbfgsb" || s == "l-bfgs-b") return OptimizerKind::quasi_newton;
  throw ParseError("unknown optimizer '" + s + "' (expected spsa or quasi_newton)");
}

void VqeProblem::validate() const {
  if (circuit.n_qubits() != hamiltonian.n_qubits()) {
    throw Error("circuit has " + std::to_string(circuit.n_qubits()) + " qubits but the Hamiltonian has " +
                std::to_string(hamiltonian.n_qubits()));
  }
  if (restarts < 1) throw Error("at least one VQE start is required");
  if (sampling && sampling->shots == 0) throw Error("sampled estimator requires shots > 0");
}

double relative_error(double energy, double reference) {
  if (reference == 0.0) throw Error("relative error against a zero reference is undefined");
  return std::abs(energy - reference) / std::abs(reference);
}

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}

std::vector<double> random_angles(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * kPi;
  return v;
}

}  // namespace

VqeResult solve_from(const VqeProblem& p, std::vector<double> theta, std::size_t stream) {
  p.validate();
  if (theta.size() != p.circuit.n_params()) throw Error("initial parameter count does not match the circuit");
  for (auto& t : theta) t = wrap(t);

  EnergyEstimator est = [&] {
    if (!p.sampling) return EnergyEstimator::exact(p.hamiltonian);
    SamplingConfig cfg = *p.sampling;
    if (stream) cfg.seed = derive_seed(cfg.seed, stream);
    return EnergyEstimator::sampled(p.hamiltonian, cfg);
  }();
  const Circuit& circuit = p.circuit;
  const Objective f = [&](std::span<const double> x) { return est(circuit, x).value; };

  VqeResult r;
  r.restart = stream;
  if (theta.empty()) {
    r.energy = f(theta);
    r.exact_energy = est.exact_value(circuit, theta);
    r.trace.records.push_back({0, r.energy, r.energy, {}, 0.0});
    r.evaluations = 1;
    r.converged = true;
    return r;
  }

  OptimizeResult o;
  if (p.optimizer.kind == OptimizerKind::spsa) {
    SpsaConfig cfg = p.optimizer.spsa;
    if (stream) cfg.seed = derive_seed(cfg.seed, stream);
    o = spsa(f, theta, cfg);
  } else {
    QuasiNewtonConfig cfg = p.optimizer.quasi_newton;
    if (cfg.bounds.empty()) cfg.bounds.assign(theta.size(), {-2.0 * kPi, 2.0 * kPi});
    o = bounded_quasi_newton(f, theta, cfg);
  }
  r.energy = o.value;
  r.params = std::move(o.params);
  r.trace = std::move(o.trace);
  r.evaluations = o.evaluations;
  r.converged = o.converged;
  r.exact_energy = est.exact_value(circuit, r.params);
  return r;
}

VqeResult solve(const VqeProblem& p) {
  p.validate();
  const std::size_t np = p.circuit.n_params();
  std::optional<VqeResult> best;
  for (std::size_t r = 0; r < p.restarts; ++r) {
    std::vector<double> theta0;
    if (r == 0) {
      theta0 = p.init == InitKind::zeros ? std::vector<double>(np, 0.0) : random_angles(np, p.init_seed);
    } else {
      theta0 = random_angles(np, derive_seed(p.init_seed, r));
    }
    auto res = solve_from(p, std::move(theta0), r);
    if (!best || res.energy < best->energy) best = std::move(res);
  }
  return std::move(*best);
}

}  // namespace qcarbon
