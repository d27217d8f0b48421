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

#include <string>
#include <vector>

#include "qcarbon/integrals.hpp"
#include "qcarbon/mapping.hpp"

namespace qcarbon {

struct ResourceEstimate {
  int window = 0;
  std::size_t active_orbitals = 0;
  std::size_t active_electrons = 0;
  std::size_t width = 0;
  std::size_t terms = 0;
  MappingKind mapping = MappingKind::jordan_wigner;
  bool two_qubit_reduction = false;
};

/**
 * @brief Qubit width and simplified Pauli term count per HOMO-k..LUMO+k window.
 *
 * The electron count in `spec` is replaced by the active electron count of each window.
 */
std::vector<ResourceEstimate> estimate(const MolecularIntegrals& m, const MeanField& mf, const std::vector<int>& windows,
                                       const MappingSpec& spec);

/// Aligned table with the same cells as `resources_csv`.
std::string resources_table(const std::vector<ResourceEstimate>& rows);
/// `window,active_orbitals,active_electrons,qubits,terms,mapping` rows.
std::string resources_csv(const std::vector<ResourceEstimate>& rows);

}  // namespace qcarbon
