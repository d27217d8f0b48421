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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qcarbon/pauli.hpp"

namespace qcarbon {

struct FreeSlot {
  std::size_t index;
  friend bool operator==(const FreeSlot&, const FreeSlot&) = default;
};
struct FrozenSlot {
  double angle;
  friend bool operator==(const FrozenSlot&, const FrozenSlot&) = default;
};
using Slot = std::variant<FreeSlot, FrozenSlot>;

struct XGate {
  std::size_t qubit;
};
struct RyGate {
  std::size_t qubit;
  Slot slot;
};
struct CnotGate {
  std::size_t control;
  std::size_t target;
};
using Gate = std::variant<XGate, RyGate, CnotGate>;

/// Ordered gate list over {X, Ry, CNOT} with free or frozen Ry angles.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_(n_qubits) {}

  std::size_t n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t n_params() const { return n_params_; }

  void x(std::size_t q);
  /// Appends an Ry with a new free parameter; returns its gate position.
  std::size_t ry(std::size_t q);
  std::size_t ry_frozen(std::size_t q, double angle);
  void cnot(std::size_t control, std::size_t target);

  /// Gate positions of every Ry whose slot is still free, in parameter order.
  std::vector<std::size_t> free_gates() const;

  /// Copy with the Ry at `gate` frozen; remaining free slots are renumbered
  /// contiguously in gate order.
  Circuit freeze(std::size_t gate, double angle) const;

  std::size_t count_cnots() const;

 private:
  void check_qubit(std::size_t q) const;

  std::size_t n_ = 0;
  std::size_t n_params_ = 0;
  std::vector<Gate> gates_;
};

class Statevector {
 public:
  explicit Statevector(std::size_t n_qubits);  // |0...0>
  Statevector(std::size_t n_qubits, Eigen::VectorXcd amplitudes);

  std::size_t n_qubits() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  void apply_x(std::size_t q);
  void apply_ry(std::size_t q, double theta);
  void apply_cnot(std::size_t control, std::size_t target);
  void apply_h(std::size_t q);
  void apply_sdg(std::size_t q);

  /// Rotates so that measuring Z realises the given Pauli basis (H for X, S^dag then H for Y).
  void rotate_to_basis(const PauliWord& basis);

  Eigen::VectorXd probabilities() const;

 private:
  std::size_t n_;
  Eigen::VectorXcd amps_;
};

Statevector evolve(const Circuit& c, std::span<const double> params);

/// Real part of <psi|H|psi>; throws if the imaginary part exceeds 1e-10.
double exact_expectation(const Statevector& s, const QubitHamiltonian& h);
double exact_expectation(const Statevector& s, const SparseMatrixC& h);

/// Per-qubit readout confusion matrices, column = prepared bit, row = read bit:
/// [[p(0|0), p(0|1)], [p(1|0), p(1|1)]].
class ReadoutNoiseModel {
 public:
  ReadoutNoiseModel() = default;
  explicit ReadoutNoiseModel(std::vector<Eigen::Matrix2d> confusion);

  static ReadoutNoiseModel uniform(std::size_t n_qubits, double p_flip_0to1, double p_flip_1to0);
  static ReadoutNoiseModel ideal(std::size_t n_qubits) { return uniform(n_qubits, 0.0, 0.0); }

  std::size_t n_qubits() const { return confusion_.size(); }
  const Eigen::Matrix2d& confusion(std::size_t q) const { return confusion_.at(q); }
  double p1_given0(std::size_t q) const { return confusion_.at(q)(1, 0); }
  double p0_given1(std::size_t q) const { return confusion_.at(q)(0, 1); }

 private:
  std::vector<Eigen::Matrix2d> confusion_;
};

/// Text form: `nqubits=<n>` then `<qubit> <p(1|0)> <p(0|1)>` per qubit.
ReadoutNoiseModel noise_from_text(std::string_view text);
ReadoutNoiseModel read_noise_model(const std::string& path);
std::string to_text(const ReadoutNoiseModel& noise);

/// Histogram of measured basis indices (bit q of the key is qubit q).
struct ShotCounts {
  std::size_t n_qubits = 0;
  std::uint64_t shots = 0;
  PauliWord basis;
  std::map<std::uint64_t, std::uint64_t> counts;

  /// Qubit 0 leftmost.
  std::string bitstring(std::uint64_t index) const;
  void check() const;
};

std::string to_text(const ShotCounts& c);
ShotCounts counts_from_text(std::string_view text);

/// Deterministic 64-bit mixer used to derive child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/**
 * @brief Born-rule sampling in a Pauli basis, followed by classical readout flips.
 *
 * X letters in `flip_mask` are applied to the state immediately before
 * measurement and undone on the recorded bits (used for twirling).
 */
ShotCounts sample(const Statevector& s, const PauliWord& basis, std::uint64_t shots,
                  const ReadoutNoiseModel* noise, std::uint64_t seed, std::uint64_t flip_mask = 0);

/// Greedy first-fit partition of term indices into qubit-wise commuting groups.
/// Identity terms are excluded.
std::vector<std::vector<std::size_t>> group_qubitwise(const QubitHamiltonian& h);

/// Word covering every non-I letter of the group.
PauliWord group_basis(const QubitHamiltonian& h, const std::vector<std::size_t>& group);

}  // namespace qcarbon
