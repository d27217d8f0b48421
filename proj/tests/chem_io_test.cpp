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

#include "qcarbon/error.hpp"
#include "qcarbon/fci.hpp"
#include "qcarbon/integrals.hpp"
#include "qcarbon/mapping.hpp"
#include "support.hpp"

using namespace qcarbon;
using qcarbon::test::fixture;
using qcarbon::test::metadata;

namespace {

const char* const kFixtures[] = {"h2", "h4_chain", "hubbard4", "h10_chain"};

/// H2 block (orbitals 0, 1) plus a decoupled, deeply bound orbital 2.
MolecularIntegrals decoupled_system() {
  const auto h2 = read_fcidump(fixture("h2.fcidump"));
  MolecularIntegrals m;
  m.n_orbitals = 3;
  m.n_electrons = 4;
  m.core_energy = h2.core_energy;
  m.one_body = Eigen::MatrixXd::Zero(3, 3);
  m.one_body.topLeftCorner(2, 2) = h2.one_body;
  m.one_body(2, 2) = -5.0;
  m.two_body = TwoBodyTensor(3);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s) m.two_body(p, q, r, s) = h2.two_body(p, q, r, s);
  m.two_body(2, 2, 2, 2) = 0.7;
  return m;
}

}  // namespace

TEST_CASE("FCIDUMP header and core record") {
  const auto m = parse_fcidump(
      "&FCI NORB=4,NELEC=4,MS2=0,\n ORBSYM=1,1,1,1,\n ISYM=1,\n&END\n"
      "0.5 1 1 1 1\n-1.25D0 1 1 0 0\n0.713 0 0 0 0\n");
  CHECK(m.n_orbitals == 4);
  CHECK(m.n_electrons == 4);
  CHECK(m.core_energy == 0.713);
  CHECK(m.one_body(0, 0) == -1.25);
  CHECK(m.two_body(0, 0, 0, 0) == 0.5);

  const auto sym = parse_fcidump("&FCI NORB=2,NELEC=2 /\n0.25 2 1 1 1\n0.1 2 1 0 0\n");
  CHECK(sym.two_body(1, 0, 0, 0) == 0.25);
  CHECK(sym.two_body(0, 1, 0, 0) == 0.25);
  CHECK(sym.two_body(0, 0, 1, 0) == 0.25);
  CHECK(sym.two_body(0, 0, 0, 1) == 0.25);
  CHECK(sym.one_body(0, 1) == 0.1);
  CHECK(sym.one_body(1, 0) == 0.1);
  CHECK(sym.two_body(1, 1, 1, 1) == 0.0);
}

TEST_CASE("FCIDUMP errors") {
  CHECK_THROWS_AS(parse_fcidump("NORB=2,NELEC=2 /\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2\n1.0 1 1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NELEC=2 /\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2 /\n1.0 3 1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2 /\n1.0 1 1 0 0\n2.0 1 1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2 /\n1.0 1 2 0 0 extra\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=1,NELEC=3 /\n"), ParseError);
  CHECK_NOTHROW(parse_fcidump("&FCI NORB=2,NELEC=2 /\n1.0 1 1 0 0\n1.0 1 1 0 0\n"));
  CHECK_THROWS_AS(read_fcidump(fixture("missing.fcidump")), ParseError);
}

TEST_CASE("FCIDUMP round-trip is bit-exact") {
  for (const char* name : kFixtures) {
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto again = parse_fcidump(to_fcidump(m));
    CHECK(again.n_orbitals == m.n_orbitals);
    CHECK(again.n_electrons == m.n_electrons);
    CHECK(again.core_energy == m.core_energy);
    CHECK(again.one_body == m.one_body);
    CHECK(again.two_body == m.two_body);
  }
}

TEST_CASE("RHF on a non-interacting model") {
  MolecularIntegrals m;
  m.n_orbitals = 2;
  m.n_electrons = 2;
  m.core_energy = 0.25;
  m.one_body = Eigen::Vector2d(-1.0, 1.0).asDiagonal();
  m.two_body = TwoBodyTensor(2);
  const auto mf = restricted_hartree_fock(m);
  CHECK(mf.hf_energy == doctest::Approx(0.25 - 2.0).epsilon(1e-14));
  CHECK((mf.density - Eigen::Matrix2d(Eigen::Vector2d(2.0, 0.0).asDiagonal())).norm() < 1e-12);

  m.n_electrons = 1;
  CHECK_THROWS_AS(restricted_hartree_fock(m), Error);
}

TEST_CASE("RHF reproduces the recorded fixture energies") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto mf = restricted_hartree_fock(m);
    CHECK(mf.hf_energy == doctest::Approx(metadata(name)["hf_energy"].get<double>()).epsilon(1e-8));
    CHECK(mf.density.trace() == doctest::Approx(m.n_electrons).epsilon(1e-8));
    CHECK((mf.density * mf.density - 2.0 * mf.density).norm() < 1e-6);
    for (Eigen::Index i = 1; i < mf.orbital_energies.size(); ++i) {
      CHECK(mf.orbital_energies(i - 1) <= mf.orbital_energies(i));
    }
    CHECK((mf.orbital_coeffs.transpose() * mf.orbital_coeffs - Eigen::MatrixXd::Identity(m.n_orbitals, m.n_orbitals))
              .norm() < 1e-10);
    for (std::size_t i = 1; i < mf.energy_trace.size(); ++i) CHECK(mf.energy_trace[i] <= mf.energy_trace[i - 1] + 1e-10);
  }
}

TEST_CASE("RHF reports non-convergence") {
  const auto m = read_fcidump(fixture("h4_chain.fcidump"));
  ScfOptions o;
  o.max_iter = 2;
  CHECK_THROWS_AS(restricted_hartree_fock(m, o), ConvergenceError);
}

TEST_CASE("full-window active space is a basis rotation") {
  for (const char* name : {"h2", "h4_chain", "hubbard4"}) {
    CAPTURE(name);
    const auto m = read_fcidump(fixture(std::string(name) + ".fcidump"));
    const auto mf = restricted_hartree_fock(m);
    const auto as = active_space(m, mf, std::nullopt);
    CHECK(as.integrals.n_orbitals == m.n_orbitals);
    CHECK(as.info.frozen_occupied.empty());
    const auto e0 = solve_fci(m).energy, e1 = solve_fci(as.integrals).energy;
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-10));
    CHECK(e0 == doctest::Approx(metadata(name)["fci_energy"].get<double>()).epsilon(1e-9));

    MappingSpec jw;
    const auto a = spectrum(map_to_qubits(build_fermionic_hamiltonian(m), jw));
    const auto b = spectrum(map_to_qubits(build_fermionic_hamiltonian(as.integrals), jw));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("window k keeps HOMO-k .. LUMO+k") {
  const auto m = read_fcidump(fixture("h10_chain.fcidump"));
  const auto mf = restricted_hartree_fock(m);
  for (int k = 0; k <= 4; ++k) {
    const auto as = active_space(m, mf, k);
    CHECK(as.integrals.n_orbitals == window_orbitals(k));
    CHECK(as.integrals.n_electrons == 2 * (k + 1));
    CHECK(as.info.frozen_occupied.size() == static_cast<std::size_t>(4 - k));
  }
  CHECK_THROWS_AS(active_space(m, mf, 5), Error);
  CHECK_THROWS_AS(active_space(m, mf, -1), Error);
}

TEST_CASE("freezing a decoupled occupied block leaves the FCI energy invariant") {
  const auto m = decoupled_system();
  const auto mf = restricted_hartree_fock(m);
  const auto as = active_space(m, mf, 0);
  REQUIRE(as.info.frozen_occupied.size() == 1);
  CHECK(as.integrals.n_orbitals == 2);
  CHECK(as.integrals.n_electrons == 2);
  CHECK(solve_sector(as.integrals, 1, 1).energy == doctest::Approx(solve_sector(m, 2, 2).energy).epsilon(1e-10));
}

TEST_CASE("frozen-core energy matches the closed-shell formula") {
  const auto m = read_fcidump(fixture("h4_chain.fcidump"));
  const auto mf = restricted_hartree_fock(m);
  const auto as = active_space(m, mf, 0);
  const auto mo = active_space(m, mf, std::nullopt).integrals;
  double e = 0.0;
  for (auto i : as.info.frozen_occupied) {
    e += 2.0 * mo.one_body(i, i);
    for (auto j : as.info.frozen_occupied) e += 2.0 * mo.two_body(i, i, j, j) - mo.two_body(i, j, j, i);
  }
  CHECK(as.info.frozen_energy == doctest::Approx(e).epsilon(1e-12));
  CHECK(as.integrals.core_energy == doctest::Approx(m.core_energy + e).epsilon(1e-12));
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t q = 0; q < 2; ++q) {
      const auto P = as.info.active[p], Q = as.info.active[q];
      double h = mo.one_body(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(Q));
      for (auto i : as.info.frozen_occupied) h += 2.0 * mo.two_body(P, Q, i, i) - mo.two_body(P, i, i, Q);
      CHECK(as.integrals.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) ==
            doctest::Approx(h).epsilon(1e-12));
    }
  }
}
