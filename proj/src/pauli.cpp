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

#include "qcarbon/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qcarbon/error.hpp"
#include "lanczos.hpp"

namespace qcarbon {

namespace {

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

int letter_code(std::uint64_t x, std::uint64_t z, std::size_t q) {
  const bool xb = (x >> q) & 1u;
  const bool zb = (z >> q) & 1u;
  if (xb) return zb ? 2 : 1;
  return zb ? 3 : 0;
}

// i^k for k mod 4.
cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapacityError("Hamiltonian on " + std::to_string(n) + " qubits exceeds the dense cap of " +
                        std::to_string(cap));
  }
}

// Phase of the word applied to basis state b, i.e. P|b> = phase |b ^ x>.
cplx word_phase(const PauliWord& w, std::uint64_t b) {
  const int y_count = std::popcount(w.x_mask() & w.z_mask());
  const int sign = std::popcount(w.z_mask() & b) & 1;
  return i_power(y_count + 2 * sign);
}

}  // namespace

PauliWord::PauliWord(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) throw Error("Pauli words support at most 64 qubits");
}

PauliWord PauliWord::from_string(std::string_view letters) {
  PauliWord w(letters.size());
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': w.set(q, Pauli::X); break;
      case 'Y': w.set(q, Pauli::Y); break;
      case 'Z': w.set(q, Pauli::Z); break;
      default:
        throw ParseError("invalid Pauli letter '" + std::string(1, letters[q]) + "'");
    }
  }
  return w;
}

PauliWord PauliWord::from_masks(std::size_t n_qubits, std::uint64_t x, std::uint64_t z) {
  PauliWord w(n_qubits);
  const std::uint64_t keep = n_qubits == 64 ? ~0ull : ((1ull << n_qubits) - 1);
  if ((x | z) & ~keep) throw Error("Pauli mask has bits beyond the word length");
  w.x_ = x;
  w.z_ = z;
  return w;
}

Pauli PauliWord::at(std::size_t q) const {
  if (q >= n_) throw Error("qubit index out of range");
  return static_cast<Pauli>(letter_code(x_, z_, q));
}

void PauliWord::set(std::size_t q, Pauli p) {
  if (q >= n_) throw Error("qubit index out of range");
  const std::uint64_t bit = 1ull << q;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
}

std::string PauliWord::str() const {
  std::string s(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) s[q] = kLetters[letter_code(x_, z_, q)];
  return s;
}

bool operator<(const PauliWord& a, const PauliWord& b) {
  const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
  if (diff == 0) return a.n_ < b.n_;
  const auto q = static_cast<std::size_t>(std::countr_zero(diff));
  return letter_code(a.x_, a.z_, q) < letter_code(b.x_, b.z_, q);
}

PauliProduct multiply(const PauliWord& a, const PauliWord& b) {
  if (a.size() != b.size()) {
    throw Error("Pauli word length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  }
  // With P = i^{|x&z|} X^x Z^z, moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int k = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) +
                2 * std::popcount(a.z_mask() & b.x_mask()) - std::popcount(x & z);
  return {i_power(k), PauliWord::from_masks(a.size(), x, z)};
}

bool qubitwise_commute(const PauliWord& a, const PauliWord& b) {
  const std::uint64_t both = a.support() & b.support();
  return ((a.x_mask() ^ b.x_mask()) & both) == 0 && ((a.z_mask() ^ b.z_mask()) & both) == 0;
}

QubitHamiltonian::QubitHamiltonian(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) throw Error("Hamiltonians support at most 64 qubits");
}

QubitHamiltonian::QubitHamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : QubitHamiltonian(n_qubits) {
  for (auto& t : terms) add(t.coeff, std::move(t.word));
}

void QubitHamiltonian::add(cplx coeff, PauliWord word) {
  if (word.size() != n_) {
    throw Error("word " + word.str() + " does not match Hamiltonian width " + std::to_string(n_));
  }
  terms_.push_back({coeff, std::move(word)});
}

QubitHamiltonian& QubitHamiltonian::operator+=(const QubitHamiltonian& other) {
  if (other.n_ != n_) throw Error("cannot add Hamiltonians of different widths");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

QubitHamiltonian& QubitHamiltonian::operator*=(cplx scale) {
  for (auto& t : terms_) t.coeff *= scale;
  return *this;
}

QubitHamiltonian operator*(const QubitHamiltonian& a, const QubitHamiltonian& b) {
  if (a.n_ != b.n_) throw Error("cannot multiply Hamiltonians of different widths");
  QubitHamiltonian out(a.n_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      auto [phase, word] = multiply(ta.word, tb.word);
      out.terms_.push_back({phase * ta.coeff * tb.coeff, std::move(word)});
    }
  }
  return out;
}

cplx QubitHamiltonian::identity_coefficient() const {
  cplx c = 0.0;
  for (const auto& t : terms_) {
    if (t.word.is_identity()) c += t.coeff;
  }
  return c;
}

QubitHamiltonian simplify(const QubitHamiltonian& h, double drop_tol) {
  std::map<PauliWord, cplx> merged;
  for (const auto& t : h.terms()) merged[t.word] += t.coeff;
  std::vector<PauliTerm> terms;
  terms.reserve(merged.size());
  for (auto& [word, c] : merged) {
    if (std::abs(c) >= drop_tol) terms.push_back({c, word});
  }
  QubitHamiltonian out(h.n_qubits());
  for (auto& t : terms) out.add(t.coeff, std::move(t.word));
  return out;
}

double max_imaginary(const QubitHamiltonian& h) {
  double m = 0.0;
  const auto merged = simplify(h);
  for (const auto& t : merged.terms()) m = std::max(m, std::abs(t.coeff.imag()));
  return m;
}

SparseMatrixC to_sparse(const QubitHamiltonian& h, std::size_t cap) {
  check_cap(h.n_qubits(), cap);
  const auto s = simplify(h, 0.0);
  const std::uint64_t dim = 1ull << h.n_qubits();
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * s.size());
  for (const auto& t : s.terms()) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const std::uint64_t row = b ^ t.word.x_mask();
      triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b),
                            t.coeff * word_phase(t.word, b));
    }
  }
  SparseMatrixC m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(cplx(0.0), 0.0);
  return m;
}

Eigen::MatrixXcd to_matrix(const QubitHamiltonian& h, std::size_t cap) {
  check_cap(h.n_qubits(), cap);
  const std::uint64_t dim = 1ull << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const auto& t : h.terms()) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      m(static_cast<Eigen::Index>(b ^ t.word.x_mask()), static_cast<Eigen::Index>(b)) +=
          t.coeff * word_phase(t.word, b);
    }
  }
  return m;
}

Eigen::VectorXcd apply(const QubitHamiltonian& h, const Eigen::VectorXcd& psi) {
  const std::uint64_t dim = 1ull << h.n_qubits();
  if (static_cast<std::uint64_t>(psi.size()) != dim) throw Error("statevector dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& t : h.terms()) {
    const std::uint64_t x = t.word.x_mask();
    for (std::uint64_t b = 0; b < dim; ++b) {
      out[static_cast<Eigen::Index>(b ^ x)] += t.coeff * word_phase(t.word, b) * psi[static_cast<Eigen::Index>(b)];
    }
  }
  return out;
}

namespace {

void check_hermitian(const QubitHamiltonian& h) {
  const double im = max_imaginary(h);
  if (im > 1e-10) {
    throw Error("Hamiltonian is not Hermitian (max imaginary coefficient " + format_double(im) + ")");
  }
}

bool is_real_matrix(const QubitHamiltonian& h) {
  // Real coefficients give a real matrix when every word has an even Y count.
  for (const auto& t : h.terms()) {
    if (std::popcount(t.word.x_mask() & t.word.z_mask()) % 2 != 0) return false;
  }
  return true;
}

GroundState dense_ground(const QubitHamiltonian& h) {
  GroundState gs;
  if (is_real_matrix(h)) {
    const Eigen::MatrixXd m = to_matrix(h).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    gs.energy = es.eigenvalues()(0);
    gs.state = es.eigenvectors().col(0).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_matrix(h));
    gs.energy = es.eigenvalues()(0);
    gs.state = es.eigenvectors().col(0);
  }
  gs.state.normalize();
  return gs;
}

GroundState lanczos_ground(const QubitHamiltonian& h) {
  const SparseMatrixC m = to_sparse(h);
  const Eigen::Index dim = m.rows();
  double scale = 0.0;
  for (const auto& t : h.terms()) scale += std::abs(t.coeff);

  Eigen::VectorXcd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    // Fixed, deterministic start vector with no accidental symmetry.
    start[i] = cplx(1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i) + 0.1), 0.0);
  }
  const auto apply = [&m](const auto& x) -> Eigen::VectorXcd { return m * x; };
  auto eig = detail::lanczos_lowest(apply, std::move(start), 1e-12 * std::max(1.0, scale));
  GroundState gs;
  gs.energy = eig.value;
  gs.state = std::move(eig.vector);
  return gs;
}

}  // namespace

GroundState ground_state_energy(const QubitHamiltonian& h, std::size_t cap) {
  check_cap(h.n_qubits(), cap);
  check_hermitian(h);
  if (h.n_qubits() <= 10) return dense_ground(h);
  return lanczos_ground(h);
}

Eigen::VectorXd spectrum(const QubitHamiltonian& h, std::size_t cap) {
  check_cap(h.n_qubits(), cap);
  check_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_matrix(h, cap), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_text(const QubitHamiltonian& h) {
  std::string out = "nqubits=" + std::to_string(h.n_qubits()) + "\n";
  for (const auto& t : h.terms()) {
    out += format_double(t.coeff.real());
    out += ' ';
    out += format_double(t.coeff.imag());
    out += ' ';
    out += t.word.str();
    out += '\n';
  }
  return out;
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("invalid number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

QubitHamiltonian hamiltonian_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  QubitHamiltonian h;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line.rfind("nqubits=", 0) != 0) throw ParseError("missing 'nqubits=' header");
      n = static_cast<std::size_t>(parse_double(line.substr(8)));
      h = QubitHamiltonian(n);
      have_header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string re, im, word;
    if (!(fields >> re >> im >> word)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected '<re> <im> <word>'");
    }
    if (word.size() != n) {
      throw ParseError("line " + std::to_string(lineno) + ": word length " +
                       std::to_string(word.size()) + " != nqubits " + std::to_string(n));
    }
    h.add(cplx(parse_double(re), parse_double(im)), PauliWord::from_string(word));
  }
  if (!have_header) throw ParseError("empty Hamiltonian document");
  return h;
}

QubitHamiltonian read_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Hamiltonian file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return hamiltonian_from_text(ss.str());
}

}  // namespace qcarbon
