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

#include "qcarbon/resource.hpp"

#include <algorithm>
#include <array>

#include "qcarbon/error.hpp"
#include "qcarbon/pauli.hpp"

namespace qcarbon {

std::vector<ResourceEstimate> estimate(const MolecularIntegrals& m, const MeanField& mf, const std::vector<int>& windows,
                                       const MappingSpec& spec) {
  std::vector<ResourceEstimate> out;
  out.reserve(windows.size());
  for (int k : windows) {
    const auto as = active_space(m, mf, k);
    MappingSpec s = spec;
    s.n_electrons = as.integrals.n_electrons;
    const auto h = map_to_qubits(build_fermionic_hamiltonian(as.integrals), s);
    ResourceEstimate r;
    r.window = k;
    r.active_orbitals = as.integrals.n_orbitals;
    r.active_electrons = static_cast<std::size_t>(as.integrals.n_electrons);
    r.width = h.n_qubits();
    r.terms = h.size();
    r.mapping = s.kind;
    r.two_qubit_reduction = s.two_qubit_reduction;
    out.push_back(r);
  }
  return out;
}

namespace {

using Row = std::array<std::string, 6>;

std::vector<Row> cells(const std::vector<ResourceEstimate>& rows) {
  std::vector<Row> out{{"window", "active_orbitals", "active_electrons", "qubits", "terms", "mapping"}};
  for (const auto& r : rows) {
    std::string mapping = to_string(r.mapping);
    if (r.two_qubit_reduction) mapping += "+reduction";
    out.push_back({std::to_string(r.window), std::to_string(r.active_orbitals), std::to_string(r.active_electrons),
                   std::to_string(r.width), std::to_string(r.terms), mapping});
  }
  return out;
}

}  // namespace

std::string resources_table(const std::vector<ResourceEstimate>& rows) {
  const auto c = cells(rows);
  std::array<std::size_t, 6> w{};
  for (const auto& row : c)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
  std::string out;
  for (const auto& row : c) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += std::string(w[i] - row[i].size(), ' ') + row[i];
    }
    out += line + '\n';
  }
  return out;
}

std::string resources_csv(const std::vector<ResourceEstimate>& rows) {
  std::string out;
  for (const auto& row : cells(rows)) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += '\n';
  }
  return out;
}

}  // namespace qcarbon
