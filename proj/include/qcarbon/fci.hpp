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
#include <vector>

#include <Eigen/Dense>

#include "qcarbon/integrals.hpp"
#include "qcarbon/pauli.hpp"

namespace qcarbon {

/// Amplitudes over occupation-number determinants (bit j = spin orbital j,
/// interleaved spin order). This is also the Jordan-Wigner computational basis.
struct FockState {
  std::size_t n_modes = 0;
  std::vector<std::uint64_t> dets;
  Eigen::VectorXcd amplitudes;

  /// Full 2^n statevector in the Jordan-Wigner basis.
  static FockState from_statevector(const Eigen::VectorXcd& psi, std::size_t n_modes);
};

/// Spin-summed one-particle density gamma_pq = sum_s <a+_ps a_qs>.
Eigen::MatrixXd one_rdm(const FockState& state, std::size_t n_spatial);

/// Spin-summed two-particle density Gamma_pqrs = sum_st <a+_ps a+_rt a_st a_qs>,
/// so that E_2 = 1/2 sum (pq|rs) Gamma_pqrs.
TwoBodyTensor two_rdm(const FockState& state, std::size_t n_spatial);

/// <N> over the state.
double electron_count(const FockState& state);

struct SectorSolution {
  double energy = 0.0;
  FockState state;
};

/**
 * @brief Exact ground state of the electronic Hamiltonian with fixed alpha and
 * beta electron counts, built directly in determinant space.
 */
SectorSolution solve_sector(const MolecularIntegrals& m, int n_alpha, int n_beta);

/// Closed-shell (or n_alpha = ceil(N/2)) sector ground energy.
SectorSolution solve_fci(const MolecularIntegrals& m);

}  // namespace qcarbon
