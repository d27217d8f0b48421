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

#include <doctest.h>

#include <bit>
#include <random>

#include "qcarbon/error.hpp"
#include "qcarbon/fci.hpp"
#include "qcarbon/integrals.hpp"
#include "qcarbon/mapping.hpp"
#include "qcarbon/simulator.hpp"
#include "support.hpp"

using namespace qcarbon;
using qcarbon::test::fixture;
using qcarbon::test::metadata;

namespace {

/// Occupation-number matrix of a fermion operator (bit j of the index = mode j occupied).
Eigen::MatrixXcd occupation_matrix(const FermionOperator& f) {
  const std::size_t n = f.n_modes();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : f.terms()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      std::uint64_t state = static_cast<std::uint64_t>(col);
      double sign = 1.0;
      bool alive = true;
      for (auto it = t.ops.rbegin(); it != t.ops.rend() && alive; ++it) {
        const std::uint64_t bit = std::uint64_t{1} << it->mode;
        const bool occupied = state & bit;
        if (occupied == it->creation) {
          alive = false;
          break;
        }
        if (std::popcount(state & (bit - 1)) % 2) sign = -sign;
        state ^= bit;
      }
      if (alive) out(static_cast<Eigen::Index>(state), col) += t.coeff * sign;
    }
  }
  return out;
}

MolecularIntegrals random_integrals(std::size_t n, int electrons, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  MolecularIntegrals m;
  m.n_orbitals = n;
  m.n_electrons = electrons;
  m.core_energy = g(rng);
  m.one_body = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index p = 0; p < m.one_body.rows(); ++p)
    for (Eigen::Index q = 0; q <= p; ++q) m.one_body(p, q) = m.one_body(q, p) = g(rng);
  m.two_body = TwoBodyTensor(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) m.two_body.set_symmetric(p, q, r, s, g(rng));
  m.validate();
  return m;
}

MappingSpec parity(bool reduce, int electrons) {
  MappingSpec s;
  s.kind = MappingKind::parity;
  s.two_qubit_reduction = reduce;
  s.n_electrons = electrons;
  return s;
}

}  // namespace

TEST_CASE("JW number operator on one mode") {
  FermionOperator f(1);
  f.add(1.0, {{0, true}, {0, false}});
  const auto h = map_to_qubits(f, MappingSpec{});
  REQUIRE(h.size() == 2);
  CHECK(h.terms()[0].word.str() == "I");
  CHECK(h.terms()[0].coeff == cplx(0.5, 0));
  CHECK(h.terms()[1].word.str() == "Z");
  CHECK(h.terms()[1].coeff == cplx(-0.5, 0));
}

TEST_CASE("second-quantised Hamiltonian of one orbital") {
  MolecularIntegrals m;
  m.n_orbitals = 1;
  m.n_electrons = 2;
  m.one_body = Eigen::MatrixXd::Constant(1, 1, -0.75);
  m.two_body = TwoBodyTensor(1);
  const auto f = build_fermionic_hamiltonian(m);
  Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
  expect(1, 1) = expect(2, 2) = -0.75;
  expect(3, 3) = -1.5;
  CHECK((occupation_matrix(f) - expect).norm() < 1e-15);

  m.one_body(0, 0) = 0.0;
  m.two_body(0, 0, 0, 0) = 0.6;
  expect.setZero();
  expect(3, 3) = 0.6;
  CHECK((occupation_matrix(build_fermionic_hamiltonian(m)) - expect).norm() < 1e-15);
}

TEST_CASE("JW matrix equals the occupation-basis matrix") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto m = random_integrals(3, 2, seed);
    const auto f = build_fermionic_hamiltonian(m);
    const auto h = map_to_qubits(f, MappingSpec{});
    CHECK((to_matrix(h) - occupation_matrix(f)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_imaginary(h) < 1e-10);
  }
  const auto h2 = read_fcidump(fixture("h2.fcidump"));
  const auto f = build_fermionic_hamiltonian(h2);
  CHECK((to_matrix(map_to_qubits(f, MappingSpec{})) - occupation_matrix(f)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("H2 mapped ground energy matches the recorded FCI") {
  const auto m = read_fcidump(fixture("h2.fcidump"));
  const double fci = metadata("h2")["fci_energy"].get<double>();
  const auto f = build_fermionic_hamiltonian(m);
  const double jw = ground_state_energy(map_to_qubits(f, MappingSpec{})).energy;
  const auto reduced = map_to_qubits(f, parity(true, 2));
  CHECK(reduced.n_qubits() == 2);
  const double pr = ground_state_energy(reduced).energy;
  CHECK(std::abs(jw - fci) < 1e-8);
  CHECK(std::abs(jw - pr) < 1e-10);
}

TEST_CASE("JW and parity are isospectral") {
  for (const char* name : {"h2", "h4_chain", "hubbard4"}) {
    CAPTURE(name);
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto f = build_fermionic_hamiltonian(m);
    const auto a = spectrum(map_to_qubits(f, MappingSpec{}));
    const auto b = spectrum(map_to_qubits(f, parity(false, m.n_electrons)));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
  const auto r = random_integrals(4, 4, 9);
  const auto f = build_fermionic_hamiltonian(r);
  CHECK((spectrum(map_to_qubits(f, MappingSpec{})) - spectrum(map_to_qubits(f, parity(false, 4))))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("two-qubit reduction keeps the sector ground energy") {
  for (const char* name : {"h2", "h4_chain", "hubbard4"}) {
    CAPTURE(name);
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto f = build_fermionic_hamiltonian(m);
    const auto h = map_to_qubits(f, parity(true, m.n_electrons));
    CHECK(h.n_qubits() == 2 * m.n_orbitals - 2);
    const int na = m.n_electrons / 2;
    const double sector = solve_sector(m, na, na).energy;
    // Only the parities are fixed, so the sector ground energy must appear somewhere in the reduced spectrum.
    const auto ev = spectrum(h);
    CHECK((ev.array() - sector).abs().minCoeff() < 1e-10);
    CHECK(ev(0) <= sector + 1e-10);
  }
  const auto h2 = read_fcidump(fixture("h2.fcidump"));
  CHECK(ground_state_energy(map_to_qubits(build_fermionic_hamiltonian(h2), parity(true, 2))).energy ==
        doctest::Approx(solve_sector(h2, 1, 1).energy).epsilon(1e-10));
}

TEST_CASE("JW number operator commutes with the Hamiltonian") {
  for (const char* name : {"h2", "h4_chain"}) {
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto h = to_matrix(map_to_qubits(build_fermionic_hamiltonian(m), MappingSpec{}));
    const auto n = to_matrix(map_to_qubits(number_operator(m.n_orbitals), MappingSpec{}));
    CHECK((h * n - n * h).norm() < 1e-10);
  }
}

TEST_CASE("mapping spec errors") {
  MappingSpec bad;
  bad.two_qubit_reduction = true;
  CHECK_THROWS_AS(bad.validate(), Error);
  const auto m = read_fcidump(fixture("h2.fcidump"));
  const auto f = build_fermionic_hamiltonian(m);
  CHECK_THROWS_AS(map_to_qubits(f, bad), Error);
  CHECK_THROWS_AS(map_to_qubits(f, parity(true, 5)), Error);
  CHECK_THROWS_AS(mapping_kind_from_string("bravyi_kitaev"), ParseError);
  CHECK(mapping_kind_from_string("jordan_wigner") == MappingKind::jordan_wigner);
  CHECK(mapped_qubits(8, parity(true, 4)) == 6);
  CHECK(mapped_qubits(8, MappingSpec{}) == 8);
}

TEST_CASE("Hartree-Fock bitstrings") {
  CHECK(hartree_fock_bitstring(2, 2, MappingSpec{}) == std::vector<int>{1, 1, 0, 0});
  for (const auto& s : {MappingSpec{}, parity(false, 0), parity(true, 0)}) {
    const auto bits = hartree_fock_bitstring(2, 0, s);
    CHECK(std::count(bits.begin(), bits.end(), 1) == 0);
  }
  CHECK_THROWS_AS(hartree_fock_bitstring(2, 5, MappingSpec{}), Error);
}

TEST_CASE("prepared HF state energy equals the RHF energy in every encoding") {
  for (const char* name : {"h2", "h4_chain", "hubbard4"}) {
    CAPTURE(name);
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto mf = restricted_hartree_fock(m);
    const auto mo = active_space(m, mf, std::nullopt).integrals;
    const auto f = build_fermionic_hamiltonian(mo);
    for (const auto& spec : {MappingSpec{}, parity(false, m.n_electrons), parity(true, m.n_electrons)}) {
      const auto h = map_to_qubits(f, spec);
      const auto bits = hartree_fock_bitstring(mo.n_orbitals, mo.n_electrons, spec);
      Statevector s(h.n_qubits());
      for (std::size_t q = 0; q < bits.size(); ++q)
        if (bits[q]) s.apply_x(q);
      CHECK(exact_expectation(s, h) == doctest::Approx(mf.hf_energy).epsilon(1e-8));
    }
  }
}
