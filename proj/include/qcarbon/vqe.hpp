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
#include <optional>
#include <string>
#include <vector>

#include "qcarbon/estimator.hpp"
#include "qcarbon/optimize.hpp"
#include "qcarbon/pauli.hpp"
#include "qcarbon/simulator.hpp"

namespace qcarbon {

enum class OptimizerKind { spsa, quasi_newton };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& s);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::quasi_newton;
  SpsaConfig spsa;
  /// Bounds are filled in per problem (every angle in [-2pi, 2pi]) when left empty.
  QuasiNewtonConfig quasi_newton;
};

enum class InitKind { zeros, random };

struct VqeProblem {
  QubitHamiltonian hamiltonian;
  Circuit circuit;
  /// Exact statevector energies when unset.
  std::optional<SamplingConfig> sampling;
  OptimizerSpec optimizer;
  InitKind init = InitKind::zeros;
  std::uint64_t init_seed = 0;
  /// Independent starts; restart r > 0 draws random angles from a derived seed.
  std::size_t restarts = 1;

  void validate() const;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> params;
  OptimizerTrace trace;
  /// Noise-free energy at the returned parameters.
  double exact_energy = 0.0;
  std::size_t evaluations = 0;
  std::size_t restart = 0;
  bool converged = false;
};

/// |energy - reference| / |reference|; throws on a zero reference.
double relative_error(double energy, double reference);

VqeResult solve(const VqeProblem& p);

/// Single optimisation from the given parameters (angles are wrapped to [-pi, pi]).
VqeResult solve_from(const VqeProblem& p, std::vector<double> theta0, std::size_t stream = 0);

}  // namespace qcarbon
