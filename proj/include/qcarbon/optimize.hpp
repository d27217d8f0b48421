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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qcarbon {

using Objective = std::function<double(std::span<const double>)>;

struct TraceRecord {
  std::size_t iteration = 0;
  double objective = 0.0;
  /// Lowest objective seen up to and including this iteration.
  double best = 0.0;
  std::vector<double> params;
  /// Wall-clock seconds; never serialized into primary artifacts.
  double seconds = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceRecord> records;
};

/// `iteration,objective` rows; parameter columns `p0,p1,...` appended on request.
std::string trace_csv(const OptimizerTrace& trace, bool with_params = false);

struct OptimizeResult {
  std::vector<double> params;
  double value = 0.0;
  OptimizerTrace trace;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct SpsaConfig {
  std::size_t iterations = 100;
  /// Calibrated from probes when unset.
  std::optional<double> a;
  double c = 0.1;
  /// Defaults to iterations / 10.
  std::optional<double> A;
  double alpha = 0.602;
  double gamma = 0.101;
  std::size_t calibration_samples = 10;
  double target_step = 0.1;
  std::uint64_t seed = 0;
};

/**
 * @brief Simultaneous-perturbation stochastic approximation.
 *
 * a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma, Rademacher
 * perturbations drawn from `seed`. Record 0 holds f(theta0); record k holds
 * the objective at the k-th updated iterate. Returns the best iterate seen.
 */
OptimizeResult spsa(const Objective& f, std::vector<double> theta0, const SpsaConfig& cfg);

struct QuasiNewtonConfig {
  /// Empty means unbounded.
  std::vector<std::pair<double, double>> bounds;
  double grad_step = 1e-6;
  double conv_tol = 1e-9;
  std::size_t memory = 10;
  std::size_t max_iter = 1000;
};

/// Projected limited-memory BFGS on a box, central finite-difference gradients.
OptimizeResult bounded_quasi_newton(const Objective& f, std::vector<double> theta0, const QuasiNewtonConfig& cfg);

}  // namespace qcarbon
