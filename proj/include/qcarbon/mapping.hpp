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
#include <string>
#include <vector>

#include "qcarbon/integrals.hpp"
#include "qcarbon/pauli.hpp"

namespace qcarbon {

/// Spin-orbital index in the interleaved convention: 2p is alpha, 2p+1 is beta.
inline constexpr std::size_t spin_orbital(std::size_t spatial, int spin) {
  return 2 * spatial + static_cast<std::size_t>(spin);
}

struct LadderOp {
  std::uint32_t mode;
  bool creation;
  friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

struct FermionTerm {
  cplx coeff;
  /// Operator product, leftmost factor first.
  std::vector<LadderOp> ops;
};

class FermionOperator {
 public:
  FermionOperator() = default;
  explicit FermionOperator(std::size_t n_modes) : n_modes_(n_modes) {}

  std::size_t n_modes() const { return n_modes_; }
  const std::vector<FermionTerm>& terms() const { return terms_; }

  void add(cplx coeff, std::vector<LadderOp> ops);
  FermionOperator& operator+=(const FermionOperator& other);

 private:
  std::size_t n_modes_ = 0;
  std::vector<FermionTerm> terms_;
};

/**
 * @brief Second-quantised electronic Hamiltonian in chemist convention.
 *
 * H = E_core + sum_pq h_pq sum_s a+_ps a_qs
 *     + 1/2 sum_pqrs (pq|rs) sum_st a+_ps a+_rt a_st a_qs
 */
FermionOperator build_fermionic_hamiltonian(const MolecularIntegrals& m);

/// Total number operator over n_spatial orbitals.
FermionOperator number_operator(std::size_t n_spatial);

enum class MappingKind { jordan_wigner, parity };

struct MappingSpec {
  MappingKind kind = MappingKind::jordan_wigner;
  bool two_qubit_reduction = false;
  int n_electrons = 0;

  void validate() const;
};

std::string to_string(MappingKind kind);
MappingKind mapping_kind_from_string(const std::string& s);

/// Qubit count after mapping n_modes spin orbitals.
std::size_t mapped_qubits(std::size_t n_modes, const MappingSpec& spec);

/**
 * @brief Encode a fermionic operator as a simplified qubit Hamiltonian.
 *
 * Jordan-Wigner acts on the interleaved modes directly. The parity encoding
 * first reorders modes into spin blocks (all alpha, then all beta) so that
 * qubits n-1 and 2n-1 hold the alpha and total parities; the two-qubit
 * reduction replaces those qubits by their eigenvalues in the requested
 * electron sector (n_alpha = ceil(N/2)).
 */
QubitHamiltonian map_to_qubits(const FermionOperator& f, const MappingSpec& spec);

/// Occupation bits of the lowest spin orbitals, encoded per the mapping.
std::vector<int> hartree_fock_bitstring(std::size_t n_spatial, int n_electrons, const MappingSpec& spec);

}  // namespace qcarbon
