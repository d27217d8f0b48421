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

#include <cmath>
#include <random>

#include "qcarbon/dmet.hpp"
#include "qcarbon/error.hpp"
#include "qcarbon/fci.hpp"
#include "support.hpp"

using namespace qcarbon;

namespace {

struct System {
  MolecularIntegrals m;
  MeanField mf;
};

System load(const std::string& name) {
  System s;
  s.m = read_fcidump(test::fixture(name + ".fcidump"));
  s.mf = restricted_hartree_fock(s.m);
  return s;
}

double reference_fci(const std::string& name, const MolecularIntegrals& m) {
  const auto meta = test::metadata(name);
  if (meta.contains("fci_energy")) return meta["fci_energy"].get<double>();
  return solve_fci(m).energy;
}

SolverOptions vqe_solver(std::uint64_t seed) {
  SolverOptions o;
  o.kind = FragmentSolverKind::vqe;
  o.window = 0;
  o.vqe.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("fragmentation parsing and validation") {
  const auto f = Fragmentation::parse("0,1; 2 ,3");
  REQUIRE(f.fragments.size() == 2);
  CHECK(f.fragments[1] == std::vector<std::size_t>{2, 3});
  CHECK(f.str() == "0,1;2,3");
  CHECK_NOTHROW(f.validate(4));
  CHECK_THROWS_AS(f.validate(5), Error);
  CHECK_THROWS_AS(f.validate(3), Error);
  CHECK_THROWS_AS(Fragmentation::parse("0,1;1,2,3").validate(4), Error);
  CHECK_THROWS_AS(Fragmentation::parse("0,1;;2,3").validate(4), Error);
  CHECK_THROWS_AS(Fragmentation::parse("0,a"), ParseError);
  CHECK(Fragmentation::whole(3).str() == "0,1,2");
}

TEST_CASE("whole-molecule fragment has no bath and no core") {
  const auto s = load("h4_chain");
  const auto b = make_bath(s.mf, Fragmentation::whole(4).fragments[0]);
  CHECK(b.n_bath() == 0);
  CHECK(b.core_density.norm() == 0.0);
  CHECK((b.basis - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("block-diagonal density gives no bath") {
  MeanField mf;
  mf.density = Eigen::MatrixXd::Zero(4, 4);
  mf.density.topLeftCorner(2, 2) << 1.0, 1.0, 1.0, 1.0;
  mf.density.bottomRightCorner(2, 2) << 1.0, -1.0, -1.0, 1.0;
  const auto b = make_bath(mf, {0, 1});
  CHECK(b.n_bath() == 0);
  CHECK(b.core_density.trace() == doctest::Approx(2.0));
}

TEST_CASE("bath bookkeeping conserves electrons") {
  for (const std::string name : {"h4_chain", "hubbard4", "h10_chain"}) {
    CAPTURE(name);
    const auto s = load(name);
    const auto n = s.m.n_orbitals;
    for (const auto& frag : {std::vector<std::size_t>{0}, std::vector<std::size_t>{0, 1},
                             std::vector<std::size_t>{1, 2}}) {
      const auto b = make_bath(s.mf, frag);
      const auto& c = b.basis;
      CHECK(b.n_bath() <= frag.size());
      CHECK(static_cast<std::size_t>(c.cols()) <= 2 * frag.size());
      CHECK((c.transpose() * c - Eigen::MatrixXd::Identity(c.cols(), c.cols())).norm() < 1e-10);
      const double inside = (c.transpose() * s.mf.density * c).trace();
      CHECK(inside + b.core_density.trace() == doctest::Approx(s.m.n_electrons).epsilon(1e-10));
      CHECK(std::abs(inside - std::round(inside)) < 1e-8);
      // The core lives in the environment and is orthogonal to the embedding space.
      CHECK((b.core_density * c).norm() < 1e-8);
      CHECK(static_cast<std::size_t>(b.core_density.rows()) == n);
    }
  }
}

TEST_CASE("embedding one-body term folds J - K/2 of the core") {
  const auto s = load("h4_chain");
  const auto b = make_bath(s.mf, {1, 2});
  const auto e = fragment_hamiltonian(s.m, b, 0.0);
  const auto n = s.m.n_orbitals;
  const auto& d = b.core_density;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t)
          v(p, q) += d(r, t) * (s.m.two_body(p, q, r, t) - 0.5 * s.m.two_body(p, t, r, q));
  const Eigen::MatrixXd& c = b.basis;
  CHECK((e.env_potential - c.transpose() * v * c).norm() < 1e-12);
  CHECK((e.integrals.one_body - c.transpose() * (s.m.one_body + v) * c).norm() < 1e-12);
  CHECK(e.integrals.n_electrons == std::lround(s.m.n_electrons - d.trace()));
  const double core = s.m.core_energy + (d.cwiseProduct(s.m.one_body + 0.5 * v)).sum();
  CHECK(e.integrals.core_energy == doctest::Approx(core).epsilon(1e-14));
}

TEST_CASE("chemical potential shifts only the fragment diagonal") {
  const auto s = load("h4_chain");
  const auto b = make_bath(s.mf, {0, 1});
  const auto e0 = fragment_hamiltonian(s.m, b, 0.0);
  const auto e1 = fragment_hamiltonian(s.m, b, 0.3);
  const auto e2 = e1.with_mu(-0.2);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(e0.integrals.one_body.rows(), e0.integrals.one_body.cols());
  shift(0, 0) = shift(1, 1) = 1.0;
  CHECK((e1.integrals.one_body - (e0.integrals.one_body - 0.3 * shift)).norm() < 1e-14);
  CHECK((e2.integrals.one_body - (e0.integrals.one_body + 0.2 * shift)).norm() < 1e-14);
  CHECK(e2.mu == -0.2);
}

TEST_CASE("whole-molecule embedding reproduces FCI") {
  for (const std::string name : {"h2", "h4_chain", "hubbard4"}) {
    CAPTURE(name);
    const auto s = load(name);
    const auto e = fragment_hamiltonian(s.m, make_bath(s.mf, Fragmentation::whole(s.m.n_orbitals).fragments[0]), 0.0);
    const auto sol = solve_fci(e.integrals);
    CHECK(sol.energy == doctest::Approx(reference_fci(name, s.m)).epsilon(1e-10));
    const auto f = solve_fragment(e, {});
    CHECK(f.electrons == doctest::Approx(s.m.n_electrons).epsilon(1e-10));
    CHECK(f.energy + e.integrals.core_energy == doctest::Approx(sol.energy).epsilon(1e-10));
  }
}

TEST_CASE("non-interacting DMET is exact") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  MolecularIntegrals m;
  m.n_orbitals = 6;
  m.n_electrons = 6;
  m.one_body = Eigen::MatrixXd::Zero(6, 6);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q <= p; ++q) m.one_body(p, q) = m.one_body(q, p) = g(rng);
  m.two_body = TwoBodyTensor(6);
  const auto mf = restricted_hartree_fock(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.one_body);
  const double exact = 2.0 * es.eigenvalues().head(3).sum();
  const auto r = run_dmet(m, mf, Fragmentation::parse("0,1;2,3;4,5"));
  CHECK(r.converged);
  CHECK(r.energy == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::abs(r.mu) < 1e-8);
}

TEST_CASE("whole-molecule DMET equals FCI on every fixture") {
  for (const std::string name : {"h2", "h4_chain", "hubbard4", "h10_chain"}) {
    CAPTURE(name);
    const auto s = load(name);
    const auto r = run_dmet(s.m, s.mf, Fragmentation::whole(s.m.n_orbitals));
    CHECK(r.converged);
    CHECK(std::abs(r.energy - reference_fci(name, s.m)) < 1e-8);
    CHECK(r.trace.size() == 1);
  }
}

TEST_CASE("half-filled Hubbard ring has zero chemical potential") {
  const auto s = load("hubbard4");
  const auto r = run_dmet(s.m, s.mf, Fragmentation::parse("0,1;2,3"));
  CHECK(r.converged);
  CHECK(std::abs(r.mu) < 1e-6);
  CHECK(std::abs(r.trace.back().mismatch) < 1e-6);
}

TEST_CASE("two-fragment H4 DMET") {
  const auto s = load("h4_chain");
  const double fci = test::metadata("h4_chain")["fci_energy"].get<double>();
  const auto r = run_dmet(s.m, s.mf, Fragmentation::parse("0,1;2,3"));
  REQUIRE(r.converged);
  CHECK(std::abs(r.trace.back().mismatch) < 1e-6);
  CHECK(std::abs(r.energy - fci) < 1e-2);
  for (std::size_t f = 0; f < 2; ++f) {
    CHECK(r.embedding_orbitals[f] <= 4);
    CHECK(r.bath_orbitals[f] <= 2);
  }
  double total = 0.0;
  for (double n : r.fragment_electrons) total += n;
  CHECK(total == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(mu_trace_csv(r).rfind("iteration,mu,mismatch\n0,", 0) == 0);
}

TEST_CASE("VQE fragment solver matches exact on a two-orbital embedding") {
  const auto s = load("h4_chain");
  for (std::size_t site = 0; site < 4; ++site) {
    CAPTURE(site);
    const auto e = fragment_hamiltonian(s.m, make_bath(s.mf, {site}), 0.05);
    REQUIRE(e.integrals.n_orbitals == 2);
    const auto exact = solve_fragment(e, {});
    SolverOptions o;
    o.kind = FragmentSolverKind::vqe;
    o.vqe.seed = 11;
    const auto v = solve_fragment(e, o);
    CHECK_FALSE(v.fallback);
    CHECK(std::abs(v.energy - exact.energy) < 2e-3);
    CHECK(std::abs(v.electrons - exact.electrons) < 1e-2);
  }
}

TEST_CASE("DMET-VQE tracks DMET-exact on H4") {
  const auto s = load("h4_chain");
  const auto frag = Fragmentation::parse("0,1;2,3");
  DmetOptions exact_opts;
  exact_opts.solver.window = 0;
  const auto exact = run_dmet(s.m, s.mf, frag, exact_opts);
  REQUIRE(exact.converged);
  for (std::uint64_t seed : {1u, 2u}) {
    CAPTURE(seed);
    DmetOptions o;
    o.solver = vqe_solver(seed);
    const auto r = run_dmet(s.m, s.mf, frag, o);
    CHECK(r.converged);
    CHECK(std::abs(r.energy - exact.energy) < 5e-3);
  }
}

TEST_CASE("DMET rejects bad input") {
  const auto s = load("h4_chain");
  CHECK_THROWS_AS(run_dmet(s.m, s.mf, Fragmentation::parse("0,1;2")), Error);
  DmetOptions o;
  o.mu_tol = 0.0;
  CHECK_THROWS_AS(run_dmet(s.m, s.mf, Fragmentation::whole(4), o), Error);
  CHECK_THROWS_AS(fragment_solver_from_string("dmrg"), ParseError);
  CHECK(fragment_solver_from_string("vqe") == FragmentSolverKind::vqe);
}
