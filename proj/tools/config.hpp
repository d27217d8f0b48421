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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qcarbon/dmet.hpp"
#include "qcarbon/error.hpp"
#include "qcarbon/mapping.hpp"
#include "qcarbon/vqe.hpp"

namespace qcarbon::cli {

/// Bad config, flags or input paths; maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::uint64_t> shots;
  std::optional<std::string> mitigation;
};

struct RunConfig {
  std::filesystem::path integrals;
  std::filesystem::path hamiltonian;
  std::optional<int> window;

  MappingSpec mapping;

  std::size_t layers = 1;
  InitKind init = InitKind::zeros;
  std::size_t restarts = 1;

  OptimizerSpec optimizer;

  /// Exact statevector energies when shots is 0.
  std::uint64_t shots = 0;
  std::optional<ReadoutNoiseModel> noise;
  std::optional<double> readout_error;
  MitigationKind mitigation = MitigationKind::none;
  std::uint64_t calibration_shots = 0;

  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";

  double deparam_tolerance = 1e-2;
  std::vector<double> candidates;

  std::optional<Fragmentation> fragments;
  std::vector<FragmentSolverKind> solvers{FragmentSolverKind::exact};
  DmetOptions dmet;

  std::vector<int> windows;

  bool stochastic() const;
  std::uint64_t seed_or_zero() const { return seed.value_or(0); }
};

/**
 * @brief INI config plus flag overrides (flags win).
 *
 * Input paths resolve against the config file's directory; `--out` resolves
 * against the working directory.
 */
RunConfig load_config(const std::filesystem::path& path, const Overrides& flags);

}  // namespace qcarbon::cli
