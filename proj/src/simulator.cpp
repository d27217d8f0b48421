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

#include "qcarbon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "qcarbon/error.hpp"

namespace qcarbon {

void Circuit::check_qubit(std::size_t q) const {
  if (q >= n_) throw Error("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_) + " qubits");
}

void Circuit::x(std::size_t q) {
  check_qubit(q);
  gates_.emplace_back(XGate{q});
}

std::size_t Circuit::ry(std::size_t q) {
  check_qubit(q);
  gates_.emplace_back(RyGate{q, FreeSlot{n_params_++}});
  return gates_.size() - 1;
}

std::size_t Circuit::ry_frozen(std::size_t q, double angle) {
  check_qubit(q);
  gates_.emplace_back(RyGate{q, FrozenSlot{angle}});
  return gates_.size() - 1;
}

void Circuit::cnot(std::size_t control, std::size_t target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw Error("CNOT control and target must differ");
  gates_.emplace_back(CnotGate{control, target});
}

std::vector<std::size_t> Circuit::free_gates() const {
  std::vector<std::size_t> out(n_params_);
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (const auto* ry = std::get_if<RyGate>(&gates_[g])) {
      if (const auto* f = std::get_if<FreeSlot>(&ry->slot)) out[f->index] = g;
    }
  }
  return out;
}

Circuit Circuit::freeze(std::size_t gate, double angle) const {
  if (gate >= gates_.size()) throw Error("gate index out of range");
  const auto* target = std::get_if<RyGate>(&gates_[gate]);
  if (!target || !std::holds_alternative<FreeSlot>(target->slot)) {
    throw Error("gate " + std::to_string(gate) + " is not a free Ry");
  }
  Circuit out(n_);
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (const auto* ry = std::get_if<RyGate>(&gates_[g])) {
      if (g == gate) {
        out.ry_frozen(ry->qubit, angle);
      } else if (const auto* f = std::get_if<FrozenSlot>(&ry->slot)) {
        out.ry_frozen(ry->qubit, f->angle);
      } else {
        out.ry(ry->qubit);
      }
    } else {
      out.gates_.push_back(gates_[g]);
    }
  }
  return out;
}

std::size_t Circuit::count_cnots() const {
  return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(),
                                                [](const Gate& g) { return std::holds_alternative<CnotGate>(g); }));
}

Statevector::Statevector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > 30) throw CapacityError("statevector simulation limited to 30 qubits");
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps_[0] = 1.0;
}

Statevector::Statevector(std::size_t n_qubits, Eigen::VectorXcd amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != (Eigen::Index{1} << n_qubits)) throw Error("amplitude vector has wrong dimension");
}

void Statevector::apply_x(std::size_t q) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }
}

void Statevector::apply_ry(std::size_t q, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = amps_[i];
    const cplx a1 = amps_[i | bit];
    amps_[i] = c * a0 - s * a1;
    amps_[i | bit] = s * a0 + c * a1;
  }
}

void Statevector::apply_cnot(std::size_t control, std::size_t target) {
  const Eigen::Index cb = Eigen::Index{1} << control;
  const Eigen::Index tb = Eigen::Index{1} << target;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if ((i & cb) && !(i & tb)) std::swap(amps_[i], amps_[i | tb]);
  }
}

void Statevector::apply_h(std::size_t q) {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = amps_[i];
    const cplx a1 = amps_[i | bit];
    amps_[i] = r * (a0 + a1);
    amps_[i | bit] = r * (a0 - a1);
  }
}

void Statevector::apply_sdg(std::size_t q) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= cplx(0.0, -1.0);
  }
}

void Statevector::rotate_to_basis(const PauliWord& basis) {
  if (basis.size() != n_) throw Error("basis word width does not match the state");
  for (std::size_t q = 0; q < n_; ++q) {
    switch (basis.at(q)) {
      case Pauli::X: apply_h(q); break;
      case Pauli::Y:
        apply_sdg(q);
        apply_h(q);
        break;
      default: break;
    }
  }
}

Eigen::VectorXd Statevector::probabilities() const { return amps_.cwiseAbs2(); }

Statevector evolve(const Circuit& c, std::span<const double> params) {
  if (params.size() != c.n_params()) {
    throw Error("circuit expects " + std::to_string(c.n_params()) + " parameters, got " +
                std::to_string(params.size()));
  }
  Statevector s(c.n_qubits());
  for (const auto& g : c.gates()) {
    std::visit(
        [&](const auto& gate) {
          using T = std::decay_t<decltype(gate)>;
          if constexpr (std::is_same_v<T, XGate>) {
            s.apply_x(gate.qubit);
          } else if constexpr (std::is_same_v<T, RyGate>) {
            const double theta = std::visit(
                [&](const auto& slot) -> double {
                  if constexpr (std::is_same_v<std::decay_t<decltype(slot)>, FreeSlot>) {
                    return params[slot.index];
                  } else {
                    return slot.angle;
                  }
                },
                gate.slot);
            s.apply_ry(gate.qubit, theta);
          } else {
            s.apply_cnot(gate.control, gate.target);
          }
        },
        g);
  }
  return s;
}

namespace {

double checked_real(cplx v) {
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real()))) {
    throw Error("expectation value has imaginary part " + format_double(v.imag()) + "; Hamiltonian not Hermitian");
  }
  return v.real();
}

}  // namespace

double exact_expectation(const Statevector& s, const QubitHamiltonian& h) {
  if (h.n_qubits() != s.n_qubits()) throw Error("Hamiltonian and state dimensions differ");
  return checked_real(s.amplitudes().dot(apply(h, s.amplitudes())));
}

double exact_expectation(const Statevector& s, const SparseMatrixC& h) {
  if (h.rows() != s.amplitudes().size()) throw Error("Hamiltonian and state dimensions differ");
  return checked_real(s.amplitudes().dot(h * s.amplitudes()));
}

ReadoutNoiseModel::ReadoutNoiseModel(std::vector<Eigen::Matrix2d> confusion) : confusion_(std::move(confusion)) {
  for (std::size_t q = 0; q < confusion_.size(); ++q) {
    const auto& m = confusion_[q];
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any()) {
      throw Error("confusion matrix of qubit " + std::to_string(q) + " has entries outside [0, 1]");
    }
    for (int col = 0; col < 2; ++col) {
      if (std::abs(m.col(col).sum() - 1.0) > 1e-12) {
        throw Error("confusion matrix of qubit " + std::to_string(q) + " has a column not summing to 1");
      }
    }
  }
}

ReadoutNoiseModel ReadoutNoiseModel::uniform(std::size_t n_qubits, double p10, double p01) {
  Eigen::Matrix2d m;
  m << 1.0 - p10, p01, p10, 1.0 - p01;
  return ReadoutNoiseModel(std::vector<Eigen::Matrix2d>(n_qubits, m));
}

ReadoutNoiseModel noise_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool header = false;
  std::vector<Eigen::Matrix2d> mats;
  std::vector<bool> seen;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("nqubits=", 0) != 0) throw ParseError("noise model missing 'nqubits=' header");
      n = std::stoul(line.substr(8));
      mats.assign(n, Eigen::Matrix2d::Identity());
      seen.assign(n, false);
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::size_t q = 0;
    double p10 = 0.0, p01 = 0.0;
    if (!(ls >> q >> p10 >> p01)) throw ParseError("noise model line must be '<qubit> <p(1|0)> <p(0|1)>'");
    if (q >= n) throw ParseError("noise model qubit " + std::to_string(q) + " out of range");
    mats[q] << 1.0 - p10, p01, p10, 1.0 - p01;
    seen[q] = true;
  }
  if (!header) throw ParseError("empty noise model");
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParseError("noise model does not list every qubit");
  }
  return ReadoutNoiseModel(std::move(mats));
}

ReadoutNoiseModel read_noise_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open noise model " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return noise_from_text(ss.str());
}

std::string to_text(const ReadoutNoiseModel& noise) {
  std::string out = "nqubits=" + std::to_string(noise.n_qubits()) + "\n";
  for (std::size_t q = 0; q < noise.n_qubits(); ++q) {
    out += std::to_string(q) + ' ' + format_double(noise.p1_given0(q)) + ' ' + format_double(noise.p0_given1(q)) + '\n';
  }
  return out;
}

std::string ShotCounts::bitstring(std::uint64_t index) const {
  std::string s(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1u) s[q] = '1';
  }
  return s;
}

void ShotCounts::check() const {
  std::uint64_t total = 0;
  for (const auto& [k, v] : counts) total += v;
  if (total != shots) throw Error("shot counts do not sum to the shot total");
}

std::string to_text(const ShotCounts& c) {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  for (const auto& [k, v] : c.counts) rows.emplace_back(c.bitstring(k), v);
  std::sort(rows.begin(), rows.end());
  std::string out = "shots=" + std::to_string(c.shots) + "\nbasis=" + c.basis.str() + "\n";
  for (const auto& [b, v] : rows) out += b + ' ' + std::to_string(v) + '\n';
  return out;
}

ShotCounts counts_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  ShotCounts c;
  bool have_shots = false, have_basis = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("shots=", 0) == 0) {
      c.shots = std::stoull(line.substr(6));
      have_shots = true;
      continue;
    }
    if (line.rfind("basis=", 0) == 0) {
      c.basis = PauliWord::from_string(line.substr(6));
      c.n_qubits = c.basis.size();
      have_basis = true;
      continue;
    }
    if (!have_basis) throw ParseError("counts document needs 'basis=' before data");
    std::istringstream ls(line);
    std::string bits;
    std::uint64_t n = 0;
    if (!(ls >> bits >> n) || bits.size() != c.n_qubits) throw ParseError("malformed counts line '" + line + "'");
    std::uint64_t idx = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] == '1') {
        idx |= 1ull << q;
      } else if (bits[q] != '0') {
        throw ParseError("malformed bitstring '" + bits + "'");
      }
    }
    c.counts[idx] += n;
  }
  if (!have_shots || !have_basis) throw ParseError("counts document needs 'shots=' and 'basis=' headers");
  std::uint64_t total = 0;
  for (const auto& [k, v] : c.counts) total += v;
  if (total != c.shots) {
    throw ParseError("shot counts sum to " + std::to_string(total) + ", header says shots=" + std::to_string(c.shots));
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 finaliser over the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ShotCounts sample(const Statevector& s, const PauliWord& basis, std::uint64_t shots,
                  const ReadoutNoiseModel* noise, std::uint64_t seed, std::uint64_t flip_mask) {
  if (shots == 0) throw Error("sample requires at least one shot");
  const std::size_t n = s.n_qubits();
  if (noise && noise->n_qubits() != n) throw Error("noise model width does not match the state");

  Statevector rotated = s;
  rotated.rotate_to_basis(basis);
  for (std::size_t q = 0; q < n; ++q) {
    if ((flip_mask >> q) & 1u) rotated.apply_x(q);
  }
  const Eigen::VectorXd probs = rotated.probabilities();
  std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[static_cast<std::size_t>(i)] = acc;
  }

  std::mt19937_64 rng(seed);
  ShotCounts out;
  out.n_qubits = n;
  out.shots = shots;
  out.basis = basis;
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = unit_uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    std::uint64_t outcome = static_cast<std::uint64_t>(it - cdf.begin());
    if (noise) {
      for (std::size_t q = 0; q < n; ++q) {
        const bool bit = (outcome >> q) & 1u;
        const double p_flip = bit ? noise->p0_given1(q) : noise->p1_given0(q);
        if (unit_uniform(rng) < p_flip) outcome ^= 1ull << q;
      }
    }
    ++out.counts[outcome ^ flip_mask];
  }
  return out;
}

std::vector<std::vector<std::size_t>> group_qubitwise(const QubitHamiltonian& h) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<PauliWord> bases;
  for (std::size_t t = 0; t < h.terms().size(); ++t) {
    const auto& w = h.terms()[t].word;
    if (w.is_identity()) continue;
    bool placed = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (qubitwise_commute(bases[g], w)) {
        groups[g].push_back(t);
        bases[g] = PauliWord::from_masks(w.size(), bases[g].x_mask() | w.x_mask(), bases[g].z_mask() | w.z_mask());
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({t});
      bases.push_back(w);
    }
  }
  return groups;
}

PauliWord group_basis(const QubitHamiltonian& h, const std::vector<std::size_t>& group) {
  std::uint64_t x = 0, z = 0;
  for (auto t : group) {
    x |= h.terms().at(t).word.x_mask();
    z |= h.terms().at(t).word.z_mask();
  }
  return PauliWord::from_masks(h.n_qubits(), x, z);
}

}  // namespace qcarbon
