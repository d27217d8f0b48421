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

#include "qcarbon/mapping.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <utility>

#include "qcarbon/error.hpp"

namespace qcarbon {

void FermionOperator::add(cplx coeff, std::vector<LadderOp> ops) {
  for (const auto& op : ops) {
    if (op.mode >= n_modes_) {
      throw Error("ladder operator on mode " + std::to_string(op.mode) + " outside " +
                  std::to_string(n_modes_) + " modes");
    }
  }
  terms_.push_back({coeff, std::move(ops)});
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  if (other.n_modes_ != n_modes_) throw Error("cannot add fermion operators over different mode counts");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionOperator build_fermionic_hamiltonian(const MolecularIntegrals& m) {
  const auto n = m.n_orbitals;
  FermionOperator f(2 * n);
  if (m.core_energy != 0.0) f.add(m.core_energy, {});
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const double h = m.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (h == 0.0) continue;
      for (int s = 0; s < 2; ++s) {
        f.add(h, {{static_cast<std::uint32_t>(spin_orbital(p, s)), true},
                  {static_cast<std::uint32_t>(spin_orbital(q, s)), false}});
      }
    }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double g = m.two_body(p, q, r, s);
          if (g == 0.0) continue;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              const auto pa = static_cast<std::uint32_t>(spin_orbital(p, a));
              const auto rb = static_cast<std::uint32_t>(spin_orbital(r, b));
              // Same-spin pairs on one orbital vanish by exclusion.
              if (pa == rb) continue;
              const auto sb = static_cast<std::uint32_t>(spin_orbital(s, b));
              const auto qa = static_cast<std::uint32_t>(spin_orbital(q, a));
              if (sb == qa) continue;
              f.add(0.5 * g, {{pa, true}, {rb, true}, {sb, false}, {qa, false}});
            }
        }
  return f;
}

FermionOperator number_operator(std::size_t n_spatial) {
  FermionOperator f(2 * n_spatial);
  for (std::uint32_t j = 0; j < 2 * n_spatial; ++j) f.add(1.0, {{j, true}, {j, false}});
  return f;
}

void MappingSpec::validate() const {
  if (two_qubit_reduction && kind != MappingKind::parity) {
    throw Error("two-qubit reduction requires the parity mapping");
  }
  if (n_electrons < 0) throw Error("negative electron count in mapping spec");
}

std::string to_string(MappingKind kind) {
  return kind == MappingKind::parity ? "parity" : "jordan_wigner";
}

MappingKind mapping_kind_from_string(const std::string& s) {
  if (s == "jordan_wigner" || s == "jw") return MappingKind::jordan_wigner;
  if (s == "parity") return MappingKind::parity;
  throw ParseError("unknown mapping kind '" + s + "'");
}

std::size_t mapped_qubits(std::size_t n_modes, const MappingSpec& spec) {
  return spec.two_qubit_reduction ? n_modes - 2 : n_modes;
}

namespace {

using Key = std::pair<std::uint64_t, std::uint64_t>;
using TermMap = std::map<Key, cplx>;

// One ladder operator as a two-term Pauli sum over n qubits.
struct EncodedLadder {
  PauliWord a;  // coefficient 1/2
  PauliWord b;  // coefficient -i/2 for creation, +i/2 for annihilation
  cplx b_coeff;
};

std::uint64_t range_mask(std::size_t lo, std::size_t hi) {  // bits [lo, hi)
  if (hi <= lo) return 0;
  const std::uint64_t upto_hi = hi >= 64 ? ~0ull : ((1ull << hi) - 1);
  const std::uint64_t upto_lo = (1ull << lo) - 1;
  return upto_hi & ~upto_lo;
}

std::size_t block_index(std::size_t mode, std::size_t n_spatial) {
  return (mode % 2) * n_spatial + mode / 2;
}

EncodedLadder encode(const LadderOp& op, std::size_t n_modes, MappingKind kind) {
  EncodedLadder e;
  e.b_coeff = op.creation ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
  if (kind == MappingKind::jordan_wigner) {
    const std::size_t j = op.mode;
    const std::uint64_t chain = range_mask(0, j);
    const std::uint64_t bj = 1ull << j;
    e.a = PauliWord::from_masks(n_modes, bj, chain);        // X_j Z_{<j}
    e.b = PauliWord::from_masks(n_modes, bj, chain | bj);   // Y_j Z_{<j}
  } else {
    const std::size_t j = block_index(op.mode, n_modes / 2);
    const std::uint64_t update = range_mask(j + 1, n_modes);
    const std::uint64_t bj = 1ull << j;
    const std::uint64_t parity = j > 0 ? (1ull << (j - 1)) : 0;
    e.a = PauliWord::from_masks(n_modes, update | bj, parity);  // X_U X_j Z_{j-1}
    e.b = PauliWord::from_masks(n_modes, update | bj, bj);      // X_U Y_j
  }
  return e;
}

void map_term(const FermionTerm& term, std::size_t n_modes, MappingKind kind, TermMap& out) {
  std::vector<std::pair<cplx, PauliWord>> acc{{term.coeff, PauliWord(n_modes)}};
  for (const auto& op : term.ops) {
    const auto enc = encode(op, n_modes, kind);
    std::vector<std::pair<cplx, PauliWord>> next;
    next.reserve(acc.size() * 2);
    for (const auto& [c, w] : acc) {
      auto pa = multiply(w, enc.a);
      next.emplace_back(c * 0.5 * pa.phase, std::move(pa.word));
      auto pb = multiply(w, enc.b);
      next.emplace_back(c * enc.b_coeff * pb.phase, std::move(pb.word));
    }
    acc = std::move(next);
  }
  for (const auto& [c, w] : acc) out[{w.x_mask(), w.z_mask()}] += c;
}

// Drops qubit positions `drop` (ascending) from a mask.
std::uint64_t squeeze(std::uint64_t mask, const std::vector<std::size_t>& drop) {
  std::uint64_t out = 0;
  std::size_t dst = 0;
  for (std::size_t q = 0; q < 64; ++q) {
    if (std::find(drop.begin(), drop.end(), q) != drop.end()) continue;
    if ((mask >> q) & 1u) out |= 1ull << dst;
    ++dst;
  }
  return out;
}

}  // namespace

QubitHamiltonian map_to_qubits(const FermionOperator& f, const MappingSpec& spec) {
  spec.validate();
  const std::size_t n_modes = f.n_modes();
  if (n_modes > kMaxQubits) throw Error("too many modes to map");
  if (spec.kind == MappingKind::parity && n_modes % 2 != 0) {
    throw Error("parity mapping expects an even number of spin orbitals");
  }
  TermMap merged;
  for (const auto& t : f.terms()) map_term(t, n_modes, spec.kind, merged);

  if (!spec.two_qubit_reduction) {
    QubitHamiltonian h(n_modes);
    for (const auto& [k, c] : merged) h.add(c, PauliWord::from_masks(n_modes, k.first, k.second));
    return simplify(h);
  }

  if (n_modes < 4) throw Error("two-qubit reduction needs at least two spatial orbitals");
  if (spec.n_electrons > static_cast<int>(n_modes)) {
    throw Error("two-qubit reduction: " + std::to_string(spec.n_electrons) + " electrons exceed " +
                std::to_string(n_modes) + " spin orbitals");
  }
  const std::size_t n_spatial = n_modes / 2;
  const int n_alpha = (spec.n_electrons + 1) / 2;
  if (n_alpha > static_cast<int>(n_spatial)) {
    throw Error("two-qubit reduction: alpha electron count exceeds spatial orbitals");
  }
  const std::size_t q_alpha = n_spatial - 1;
  const std::size_t q_total = n_modes - 1;
  const double sign_alpha = (n_alpha % 2) ? -1.0 : 1.0;
  const double sign_total = (spec.n_electrons % 2) ? -1.0 : 1.0;
  const std::vector<std::size_t> drop{q_alpha, q_total};

  QubitHamiltonian h(n_modes - 2);
  for (const auto& [k, c] : merged) {
    if (std::abs(c) < kDefaultDropTol) continue;
    const auto [x, z] = k;
    const std::uint64_t sym = (1ull << q_alpha) | (1ull << q_total);
    if (x & sym) {
      throw Error("two-qubit reduction: term flips a symmetry qubit; operator does not conserve spin parity");
    }
    double sign = 1.0;
    if ((z >> q_alpha) & 1u) sign *= sign_alpha;
    if ((z >> q_total) & 1u) sign *= sign_total;
    h.add(c * sign, PauliWord::from_masks(n_modes - 2, squeeze(x, drop), squeeze(z, drop)));
  }
  return simplify(h);
}

std::vector<int> hartree_fock_bitstring(std::size_t n_spatial, int n_electrons, const MappingSpec& spec) {
  spec.validate();
  const std::size_t n_modes = 2 * n_spatial;
  if (n_electrons < 0 || n_electrons > static_cast<int>(n_modes)) {
    throw Error("electron count " + std::to_string(n_electrons) + " exceeds " + std::to_string(n_modes) +
                " spin orbitals");
  }
  const int n_alpha = (n_electrons + 1) / 2;
  const int n_beta = n_electrons / 2;
  std::vector<int> occ(n_modes, 0);
  for (int p = 0; p < n_alpha; ++p) occ[spin_orbital(static_cast<std::size_t>(p), 0)] = 1;
  for (int p = 0; p < n_beta; ++p) occ[spin_orbital(static_cast<std::size_t>(p), 1)] = 1;
  if (spec.kind == MappingKind::jordan_wigner) return occ;

  std::vector<int> block(n_modes, 0);
  for (std::size_t m = 0; m < n_modes; ++m) block[block_index(m, n_spatial)] = occ[m];
  std::vector<int> bits(n_modes, 0);
  int parity = 0;
  for (std::size_t j = 0; j < n_modes; ++j) {
    parity ^= block[j];
    bits[j] = parity;
  }
  if (!spec.two_qubit_reduction) return bits;
  std::vector<int> reduced;
  for (std::size_t j = 0; j < n_modes; ++j) {
    if (j == n_spatial - 1 || j == n_modes - 1) continue;
    reduced.push_back(bits[j]);
  }
  return reduced;
}

}  // namespace qcarbon
