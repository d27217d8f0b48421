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

#include <numbers>
#include <random>

#include "qcarbon/error.hpp"
#include "qcarbon/estimator.hpp"
#include "qcarbon/simulator.hpp"
#include "support.hpp"

using namespace qcarbon;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit ghz(std::size_t n) {
  Circuit c(n);
  c.ry_frozen(0, kPi / 2);
  for (std::size_t q = 0; q + 1 < n; ++q) c.cnot(q, q + 1);
  return c;
}

Circuit random_circuit(std::size_t n, std::size_t layers) {
  Circuit c(n);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n; ++q) c.ry(q);
    for (std::size_t q = 0; q + 1 < n; ++q) c.cnot(q, q + 1);
    c.x(l % n);
  }
  return c;
}

std::vector<double> random_params(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> v(k);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("evolve on closed-form circuits") {
  const auto s0 = evolve(Circuit(3), {});
  CHECK(std::abs(s0.amplitudes()(0) - cplx(1, 0)) == 0.0);
  CHECK(s0.amplitudes().norm() == doctest::Approx(1.0));

  Circuit x(1);
  x.x(0);
  CHECK(std::abs(evolve(x, {}).amplitudes()(1)) == doctest::Approx(1.0));

  Circuit ry(1);
  ry.ry(0);
  const std::vector<double> half{kPi / 2};
  const auto s = evolve(ry, half);
  CHECK(std::abs(s.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < 1e-12);

  const std::vector<double> wrong{0.1, 0.2};
  CHECK_THROWS_AS(evolve(ry, wrong), Error);
}

TEST_CASE("circuit structure") {
  Circuit c(3);
  CHECK_THROWS_AS(c.cnot(1, 1), Error);
  CHECK_THROWS_AS(c.x(3), Error);
  c.ry(0);
  c.cnot(0, 1);
  c.ry(1);
  c.ry(2);
  CHECK(c.n_params() == 3);
  CHECK(c.count_cnots() == 1);
  const auto f = c.freeze(2, 0.5);
  CHECK(f.n_params() == 2);
  CHECK(std::get<FrozenSlot>(std::get<RyGate>(f.gates()[2]).slot).angle == 0.5);
  CHECK(std::get<FreeSlot>(std::get<RyGate>(f.gates()[3]).slot).index == 1);
  CHECK(f.free_gates() == std::vector<std::size_t>{0, 3});
  CHECK_THROWS_AS(c.freeze(1, 0.0), Error);
}

TEST_CASE("gates preserve the norm") {
  std::mt19937_64 rng(4);
  Statevector s(5, test::random_state(5, rng));
  for (int k = 0; k < 50; ++k) {
    const std::size_t q = rng() % 5, t = (q + 1 + rng() % 4) % 5;
    switch (k % 5) {
      case 0: s.apply_x(q); break;
      case 1: s.apply_ry(q, random_params(1, rng)[0]); break;
      case 2: s.apply_cnot(q, t); break;
      case 3: s.apply_h(q); break;
      default: s.apply_sdg(q);
    }
    CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("exact expectation") {
  QubitHamiltonian z(1);
  z.add(1.0, "Z");
  CHECK(exact_expectation(Statevector(1), z) == 1.0);
  Statevector one(1);
  one.apply_x(0);
  CHECK(exact_expectation(one, z) == -1.0);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = simplify(test::random_hamiltonian(4, 12, rng));
    const auto psi = test::random_state(4, rng);
    const double dense = psi.dot(test::kron_matrix(h) * psi).real();
    CHECK(exact_expectation(Statevector(4, psi), h) == doctest::Approx(dense).epsilon(1e-10));
    CHECK(exact_expectation(Statevector(4, psi), to_sparse(h)) == doctest::Approx(dense).epsilon(1e-10));
  }
  CHECK_THROWS_AS(exact_expectation(Statevector(2), z), Error);
}

TEST_CASE("sampling in the measured basis") {
  auto zero = sample(Statevector(2), PauliWord::from_string("ZZ"), 500, nullptr, 1);
  CHECK(zero.counts.size() == 1);
  CHECK(zero.counts.at(0) == 500);

  Statevector plus(1);
  plus.apply_h(0);
  auto px = sample(plus, PauliWord::from_string("X"), 500, nullptr, 2);
  CHECK(px.counts.at(0) == 500);

  Statevector minus_i(1);
  minus_i.apply_h(0);
  minus_i.apply_sdg(0);
  auto py = sample(minus_i, PauliWord::from_string("Y"), 500, nullptr, 3);
  CHECK(py.counts.at(1) == 500);

  const auto noise = ReadoutNoiseModel::uniform(1, 0.1, 0.0);
  const auto noisy = sample(Statevector(1), PauliWord::from_string("Z"), 100000, &noise, 4);
  const double frac = static_cast<double>(noisy.counts.at(1)) / 100000.0;
  CHECK(frac >= 0.094);
  CHECK(frac <= 0.106);
}

TEST_CASE("sampling is deterministic under a seed") {
  std::mt19937_64 rng(12);
  const auto c = random_circuit(4, 2);
  const auto s = evolve(c, random_params(c.n_params(), rng));
  const auto noise = ReadoutNoiseModel::uniform(4, 0.03, 0.05);
  const auto a = sample(s, PauliWord::from_string("XZYI"), 2000, &noise, 99);
  const auto b = sample(s, PauliWord::from_string("XZYI"), 2000, &noise, 99);
  CHECK(a.counts == b.counts);
  CHECK(to_text(a) == to_text(b));
  const auto c2 = sample(s, PauliWord::from_string("XZYI"), 2000, &noise, 100);
  CHECK(a.counts != c2.counts);
}

TEST_CASE("shot count and noise text formats") {
  ShotCounts c;
  c.n_qubits = 3;
  c.shots = 10;
  c.basis = PauliWord::from_string("ZXZ");
  c.counts = {{0b001, 7}, {0b110, 3}};
  CHECK(c.bitstring(0b001) == "100");
  const auto text = to_text(c);
  CHECK(text.find("shots=10") != std::string::npos);
  CHECK(text.find("basis=ZXZ") != std::string::npos);
  CHECK(text.find("100 7") != std::string::npos);
  const auto back = counts_from_text(text);
  CHECK(back.counts == c.counts);
  CHECK(back.basis == c.basis);
  CHECK_THROWS_AS(counts_from_text("shots=5\nbasis=Z\n0 3\n"), ParseError);

  const auto noise = ReadoutNoiseModel::uniform(2, 0.02, 0.08);
  const auto again = noise_from_text(to_text(noise));
  CHECK(again.p1_given0(1) == 0.02);
  CHECK(again.p0_given1(0) == 0.08);
  CHECK_THROWS_AS(ReadoutNoiseModel::uniform(1, 1.5, 0.0), Error);
}

TEST_CASE("qubit-wise commuting groups") {
  std::mt19937_64 rng(21);
  const auto h = simplify(test::random_hamiltonian(5, 40, rng));
  const auto groups = group_qubitwise(h);
  std::vector<int> seen(h.size(), 0);
  for (const auto& g : groups) {
    const auto basis = group_basis(h, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ++seen[g[i]];
      CHECK(qubitwise_commute(h.terms()[g[i]].word, basis));
      for (std::size_t j = i + 1; j < g.size(); ++j) CHECK(qubitwise_commute(h.terms()[g[i]].word, h.terms()[g[j]].word));
    }
  }
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(seen[i] == (h.terms()[i].word.is_identity() ? 0 : 1));
}

TEST_CASE("sampled expectation") {
  QubitHamiltonian id(2);
  id.add(-0.75, "II");
  SamplingConfig cfg;
  cfg.shots = 100;
  const auto e = sampled_expectation(Circuit(2), {}, id, cfg);
  CHECK(e.value == -0.75);
  CHECK(e.std_error == 0.0);

  std::mt19937_64 rng(30);
  cfg.shots = 20000;
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = simplify(test::random_hamiltonian(4, 10, rng));
    const auto c = random_circuit(4, 2);
    const auto p = random_params(c.n_params(), rng);
    cfg.seed = 100 + trial;
    const auto est = sampled_expectation(c, p, h, cfg);
    const double exact = exact_expectation(evolve(c, p), h);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.value - exact) < 5.0 * est.std_error);
  }
}

TEST_CASE("uniform readout flips bias GHZ parity by (1-2p)^n") {
  QubitHamiltonian zzzz(4);
  zzzz.add(1.0, "ZZZZ");
  SamplingConfig cfg;
  cfg.shots = 10000;
  cfg.noise = ReadoutNoiseModel::uniform(4, 0.02, 0.02);
  cfg.seed = 5;
  const auto raw = sampled_expectation(ghz(4), {}, zzzz, cfg);
  CHECK(std::abs(raw.value - std::pow(0.96, 4)) < 5.0 * raw.std_error);
  CHECK(1.0 - raw.value > 5.0 * raw.std_error);
}
