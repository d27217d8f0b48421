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

#include <complex>
#include <fstream>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "qcarbon/pauli.hpp"

namespace qcarbon::test {

inline std::string fixture(const std::string& name) { return std::string(QCARBON_FIXTURE_DIR) + "/" + name; }

inline nlohmann::json metadata(const std::string& system) {
  std::ifstream in(fixture(system + ".json"));
  return nlohmann::json::parse(in);
}

/// Kronecker-product matrix of a word, built letter by letter (qubit 0 is the lowest index bit).
inline Eigen::MatrixXcd kron_word(const PauliWord& w) {
  using M = Eigen::Matrix2cd;
  const cplx i(0, 1);
  M id = M::Identity(), x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < w.size(); ++q) {
    const M& p = w.at(q) == Pauli::I ? id : w.at(q) == Pauli::X ? x : w.at(q) == Pauli::Y ? y : z;
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = p(a, b) * out;
    out = next;
  }
  return out;
}

inline Eigen::MatrixXcd kron_matrix(const QubitHamiltonian& h) {
  const Eigen::Index d = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : h.terms()) out += t.coeff * kron_word(t.word);
  return out;
}

inline PauliWord random_word(std::size_t n, std::mt19937_64& rng) {
  PauliWord w(n);
  for (std::size_t q = 0; q < n; ++q) w.set(q, static_cast<Pauli>(rng() % 4));
  return w;
}

/// Hermitian when `hermitian`: real coefficients only.
inline QubitHamiltonian random_hamiltonian(std::size_t n, std::size_t terms, std::mt19937_64& rng,
                                           bool hermitian = true) {
  std::normal_distribution<double> g;
  QubitHamiltonian h(n);
  for (std::size_t k = 0; k < terms; ++k) {
    h.add(hermitian ? cplx(g(rng), 0.0) : cplx(g(rng), g(rng)), random_word(n, rng));
  }
  return h;
}

inline Eigen::VectorXcd random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (auto& a : v) a = cplx(g(rng), g(rng));
  return v.normalized();
}

}  // namespace qcarbon::test
