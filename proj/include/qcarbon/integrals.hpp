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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qcarbon {

/// Dense n^4 array of two-electron integrals in chemist notation (pq|rs).
class TwoBodyTensor {
 public:
  TwoBodyTensor() = default;
  explicit TwoBodyTensor(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }

  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  /// Writes v into all eight permutationally equivalent slots.
  void set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v);

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const TwoBodyTensor&, const TwoBodyTensor&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct MolecularIntegrals {
  std::size_t n_orbitals = 0;
  int n_electrons = 0;
  double core_energy = 0.0;
  Eigen::MatrixXd one_body;
  TwoBodyTensor two_body;

  /// Throws ParseError on broken symmetry or electron count.
  void validate(double tol = 1e-10) const;
};

MolecularIntegrals parse_fcidump(std::istream& in);
MolecularIntegrals parse_fcidump(std::string_view text);
MolecularIntegrals read_fcidump(const std::string& path);
std::string to_fcidump(const MolecularIntegrals& m);

/// Coulomb minus half exchange of a spin-summed density: J[D] - K[D]/2.
Eigen::MatrixXd coulomb_exchange(const TwoBodyTensor& eri, const Eigen::MatrixXd& density);

/**
 * @brief Transform integrals to the orbitals given by the columns of coeffs.
 *
 * coeffs may be rectangular (n x m, m <= n). The electron count and core
 * energy are copied unchanged.
 */
MolecularIntegrals rotate(const MolecularIntegrals& m, const Eigen::MatrixXd& coeffs);

/// Core + sum D h + 1/2 sum D (J - K/2) for a spin-summed density.
double mean_field_energy(const MolecularIntegrals& m, const Eigen::MatrixXd& density);

struct MeanField {
  Eigen::MatrixXd orbital_coeffs;
  Eigen::VectorXd orbital_energies;
  Eigen::MatrixXd density;
  double hf_energy = 0.0;
  int iterations = 0;
  /// Energy of each damped iterate, for monotonicity checks.
  std::vector<double> energy_trace;
};

struct ScfOptions {
  int max_iter = 200;
  double conv_tol = 1e-8;
  double damping = 0.3;
};

MeanField restricted_hartree_fock(const MolecularIntegrals& m, const ScfOptions& opts = {});

struct FrozenInfo {
  std::vector<std::size_t> frozen_occupied;
  std::vector<std::size_t> active;
  std::vector<std::size_t> frozen_virtual;
  double frozen_energy = 0.0;
  std::vector<std::string> warnings;
};

struct ActiveSpace {
  MolecularIntegrals integrals;
  FrozenInfo info;
};

/**
 * @brief Reduce to the canonical orbitals HOMO-k ... LUMO+k.
 *
 * The integrals are first rotated into the mean-field orbital basis. Frozen
 * doubly occupied orbitals are folded into the one-body term and the core
 * energy; frozen virtuals are dropped. With no window, all orbitals stay
 * active and the result is a pure basis rotation.
 */
ActiveSpace active_space(const MolecularIntegrals& m, const MeanField& mf,
                         std::optional<int> window);

/// Number of active spatial orbitals a window keeps.
inline std::size_t window_orbitals(int k) { return 2 * static_cast<std::size_t>(k) + 2; }

}  // namespace qcarbon
