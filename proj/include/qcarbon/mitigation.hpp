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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qcarbon/simulator.hpp"

namespace qcarbon {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Estimated per-qubit confusion matrices (same layout as ReadoutNoiseModel).
struct ReadoutCalibration {
  std::vector<Eigen::Matrix2d> confusion;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  std::size_t n_qubits() const { return confusion.size(); }
  double p1_given0(std::size_t q) const { return confusion.at(q)(1, 0); }
  double p0_given1(std::size_t q) const { return confusion.at(q)(0, 1); }

  static ReadoutCalibration identity(std::size_t n_qubits);
};

/// Flip frequencies from simulated all-0 and all-1 preparations.
ReadoutCalibration calibrate(const ReadoutNoiseModel& noise, std::uint64_t shots, std::uint64_t seed);

/// Text form: `nqubits=`, `shots=`, `seed=` headers then `<qubit> <p(1|0)> <p(0|1)>`.
std::string to_text(const ReadoutCalibration& cal);
ReadoutCalibration calibration_from_text(std::string_view text);

/// Quasi-probabilities over observed bitstrings; entries may be negative.
struct QuasiDistribution {
  std::size_t n_qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::uint64_t, double> probs;

  double sum() const;
  /// Expectation of the Z-string on the qubits in `z_mask`.
  double expectation(std::uint64_t z_mask) const;
};

inline constexpr std::size_t kM3DirectLimit = 500;

/**
 * @brief Solve the assignment-error system restricted to the observed bitstrings.
 *
 * The restricted matrix is column-normalised so the solution sums to one.
 * Dense LU below kM3DirectLimit distinct bitstrings, preconditioned GMRES above.
 */
QuasiDistribution m3_mitigate(const ShotCounts& counts, const ReadoutCalibration& cal);

/**
 * @brief M3-mitigated value of sum_t coeff_t <Z_{mask_t}> from one set of counts.
 *
 * The standard error combines the multinomial shot noise (delta method
 * through the linear solve) with the binomial uncertainty of the calibration.
 */
Estimate m3_expectation(const ShotCounts& counts, const ReadoutCalibration& cal,
                        std::span<const std::pair<double, std::uint64_t>> weighted_masks);

inline constexpr std::size_t kTrexBatches = 16;

/// Twirled measurement: 16 batches, each with its own random X mask.
ShotCounts twirled_sample(const Statevector& s, const PauliWord& basis, std::uint64_t shots,
                          const ReadoutNoiseModel* noise, std::uint64_t seed);

/// Twirled readout of |0...0>, from which attenuation factors are read off.
struct TrexCalibration {
  ShotCounts counts;

  /// Mean of the Z-string parity over calibration shots, with its standard error.
  Estimate attenuation(std::uint64_t z_mask) const;
};

TrexCalibration trex_calibrate(std::size_t n_qubits, std::uint64_t shots, const ReadoutNoiseModel* noise,
                               std::uint64_t seed);

/// T-REx value of sum_t coeff_t <Z_{mask_t}> from twirled counts. Throws when an
/// attenuation factor falls below 1e-6.
Estimate trex_from_counts(const ShotCounts& twirled, const TrexCalibration& cal,
                          std::span<const std::pair<double, std::uint64_t>> weighted_masks);

/// Single-observable T-REx estimate of <observable> for the circuit state.
Estimate trex_expectation(const Circuit& c, std::span<const double> params, const PauliWord& observable,
                          std::uint64_t shots, const ReadoutNoiseModel* noise, std::uint64_t seed);

/// Unmitigated value with its shot-noise standard error.
Estimate raw_expectation(const ShotCounts& counts, std::span<const std::pair<double, std::uint64_t>> weighted_masks);

}  // namespace qcarbon
