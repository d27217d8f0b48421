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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qcarbon {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::size_t kMaxQubits = 64;
inline constexpr std::size_t kDenseQubitCap = 14;
inline constexpr double kDefaultDropTol = 1e-12;

/**
 * @brief A tensor product of single-qubit Pauli letters.
 *
 * Stored in symplectic form: qubit q carries X if bit q of x_mask is set and Z
 * if bit q of z_mask is set (both set means Y). Qubit 0 is the leftmost letter
 * in the string form, and bit q of a computational-basis index is qubit q.
 */
class PauliWord {
 public:
  PauliWord() = default;
  explicit PauliWord(std::size_t n_qubits);

  static PauliWord from_string(std::string_view letters);
  static PauliWord from_masks(std::size_t n_qubits, std::uint64_t x, std::uint64_t z);

  std::size_t size() const { return n_; }
  Pauli at(std::size_t q) const;
  void set(std::size_t q, Pauli p);

  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }

  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_diagonal() const { return x_ == 0; }

  std::string str() const;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
  /// Lexicographic by letters (I < X < Y < Z), qubit 0 most significant.
  friend bool operator<(const PauliWord& a, const PauliWord& b);

 private:
  std::size_t n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliProduct {
  cplx phase;
  PauliWord word;
};

/// matrix(a) * matrix(b) == phase * matrix(word), phase in {±1, ±i}.
PauliProduct multiply(const PauliWord& a, const PauliWord& b);

/// True when every qubit carries I on one side or identical letters.
bool qubitwise_commute(const PauliWord& a, const PauliWord& b);

struct PauliTerm {
  cplx coeff;
  PauliWord word;
};

/// Weighted sum of Pauli words on a fixed number of qubits.
class QubitHamiltonian {
 public:
  QubitHamiltonian() = default;
  explicit QubitHamiltonian(std::size_t n_qubits);
  QubitHamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms);

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(cplx coeff, PauliWord word);
  void add(cplx coeff, std::string_view letters) { add(coeff, PauliWord::from_string(letters)); }

  QubitHamiltonian& operator+=(const QubitHamiltonian& other);
  QubitHamiltonian& operator*=(cplx scale);
  friend QubitHamiltonian operator*(const QubitHamiltonian& a, const QubitHamiltonian& b);

  /// Coefficient of the all-I word (summed over duplicates).
  cplx identity_coefficient() const;

 private:
  std::size_t n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Merge like words, drop |c| < drop_tol, sort words lexicographically.
QubitHamiltonian simplify(const QubitHamiltonian& h, double drop_tol = kDefaultDropTol);

/// Largest |Im c| over the simplified terms.
double max_imaginary(const QubitHamiltonian& h);

using SparseMatrixC = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

Eigen::MatrixXcd to_matrix(const QubitHamiltonian& h, std::size_t cap = kDenseQubitCap);
SparseMatrixC to_sparse(const QubitHamiltonian& h, std::size_t cap = kDenseQubitCap);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd state;
};

/**
 * @brief Lowest eigenpair of a Hermitian qubit Hamiltonian.
 *
 * Dense self-adjoint diagonalisation up to 10 qubits, Lanczos with full
 * reorthogonalisation from 11 qubits to the cap. Refuses above the cap.
 */
GroundState ground_state_energy(const QubitHamiltonian& h, std::size_t cap = kDenseQubitCap);

/// All eigenvalues in ascending order (dense path only).
Eigen::VectorXd spectrum(const QubitHamiltonian& h, std::size_t cap = 10);

/// Applies h to a statevector term by term.
Eigen::VectorXcd apply(const QubitHamiltonian& h, const Eigen::VectorXcd& psi);

// Text form: header `nqubits=<n>`, then one `<re> <im> <word>` per line.
std::string to_text(const QubitHamiltonian& h);
QubitHamiltonian hamiltonian_from_text(std::string_view text);
QubitHamiltonian read_hamiltonian(const std::string& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace qcarbon
