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

#include "qcarbon/fci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "qcarbon/error.hpp"
#include "qcarbon/mapping.hpp"
#include "lanczos.hpp"

namespace qcarbon {

namespace {

// Applies a+_j (create) or a_j to det; returns the fermionic sign or 0.
int ladder(std::uint64_t& det, std::size_t j, bool create) {
  const std::uint64_t bit = 1ull << j;
  const bool occ = det & bit;
  if (occ == create) return 0;
  const int sign = (std::popcount(det & (bit - 1)) & 1) ? -1 : 1;
  det ^= bit;
  return sign;
}

// a+_p a_q on det.
std::optional<std::pair<int, std::uint64_t>> excite(std::uint64_t det, std::size_t p, std::size_t q) {
  int s = ladder(det, q, false);
  if (!s) return std::nullopt;
  const int s2 = ladder(det, p, true);
  if (!s2) return std::nullopt;
  return std::make_pair(s * s2, det);
}

// a+_p a+_r a_s a_q on det.
std::optional<std::pair<int, std::uint64_t>> excite2(std::uint64_t det, std::size_t p, std::size_t q,
                                                     std::size_t r, std::size_t s) {
  int sign = ladder(det, q, false);
  if (!sign) return std::nullopt;
  int t = ladder(det, s, false);
  if (!t) return std::nullopt;
  sign *= t;
  t = ladder(det, r, true);
  if (!t) return std::nullopt;
  sign *= t;
  t = ladder(det, p, true);
  if (!t) return std::nullopt;
  return std::make_pair(sign * t, det);
}

std::unordered_map<std::uint64_t, Eigen::Index> index_of(const std::vector<std::uint64_t>& dets) {
  std::unordered_map<std::uint64_t, Eigen::Index> idx;
  idx.reserve(dets.size() * 2);
  for (std::size_t i = 0; i < dets.size(); ++i) idx.emplace(dets[i], static_cast<Eigen::Index>(i));
  return idx;
}

constexpr std::size_t kDenseSectorDim = 2000;
// Bound on dim * n^2, the size of the single-excitation image block.
constexpr std::size_t kDirectSectorWork = 20'000'000;

Eigen::MatrixXd dense_sector_matrix(const MolecularIntegrals& m, const std::vector<std::uint64_t>& dets,
                                    const std::unordered_map<std::uint64_t, Eigen::Index>& idx) {
  const auto d = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  const std::size_t nso = 2 * m.n_orbitals;
  for (Eigen::Index col = 0; col < d; ++col) {
    const std::uint64_t det = dets[static_cast<std::size_t>(col)];
    h(col, col) += m.core_energy;
    for (std::size_t q = 0; q < nso; ++q) {
      if (!((det >> q) & 1u)) continue;
      for (std::size_t p = q % 2; p < nso; p += 2) {
        const double v = m.one_body(static_cast<Eigen::Index>(p / 2), static_cast<Eigen::Index>(q / 2));
        if (v == 0.0) continue;
        auto r = excite(det, p, q);
        if (!r) continue;
        h(idx.at(r->second), col) += r->first * v;
      }
    }
    for (std::size_t q = 0; q < nso; ++q) {
      if (!((det >> q) & 1u)) continue;
      for (std::size_t s = 0; s < nso; ++s) {
        if (s == q || !((det >> s) & 1u)) continue;
        for (std::size_t p = q % 2; p < nso; p += 2)
          for (std::size_t r = s % 2; r < nso; r += 2) {
            const double v = m.two_body(p / 2, q / 2, r / 2, s / 2);
            if (v == 0.0) continue;
            auto res = excite2(det, p, q, r, s);
            if (!res) continue;
            h(idx.at(res->second), col) += 0.5 * res->first * v;
          }
      }
    }
  }
  return h;
}

// H = sum_pq k_pq E_pq + 1/2 sum_pqrs (pq|rs) E_pq E_rs + core with
// k_pq = h_pq - 1/2 sum_r (pr|rq), applied through the images E_rs |c>.
class SectorOperator {
 public:
  SectorOperator(const MolecularIntegrals& m, const std::vector<std::uint64_t>& dets,
                 const std::unordered_map<std::uint64_t, Eigen::Index>& idx)
      : n_(m.n_orbitals), dim_(static_cast<Eigen::Index>(dets.size())), core_(m.core_energy) {
    const auto nn = static_cast<Eigen::Index>(n_ * n_);
    k_ = Eigen::VectorXd::Zero(nn);
    v_.resize(nn, nn);
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t q = 0; q < n_; ++q) {
        double k = m.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        for (std::size_t r = 0; r < n_; ++r) k -= 0.5 * m.two_body(p, r, r, q);
        k_[static_cast<Eigen::Index>(p * n_ + q)] = k;
        for (std::size_t r = 0; r < n_; ++r)
          for (std::size_t s = 0; s < n_; ++s) {
            v_(static_cast<Eigen::Index>(p * n_ + q), static_cast<Eigen::Index>(r * n_ + s)) =
                0.5 * m.two_body(p, q, r, s);
          }
      }
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const std::uint64_t det = dets[static_cast<std::size_t>(i)];
      for (std::size_t p = 0; p < n_; ++p)
        for (std::size_t q = 0; q < n_; ++q)
          for (int s = 0; s < 2; ++s) {
            auto r = excite(det, spin_orbital(p, s), spin_orbital(q, s));
            if (!r) continue;
            links_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(idx.at(r->second)),
                              static_cast<std::uint32_t>(p * n_ + q), static_cast<double>(r->first)});
          }
    }
  }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& c) const {
    const auto nn = static_cast<Eigen::Index>(n_ * n_);
    Eigen::MatrixXd images = Eigen::MatrixXd::Zero(dim_, nn);
    for (const auto& l : links_) images(l.to, l.col) += l.sign * c[l.from];
    Eigen::MatrixXd w = images * v_.transpose();
    w.noalias() += c * k_.transpose();
    Eigen::VectorXd out = core_ * c;
    for (const auto& l : links_) out[l.to] += l.sign * w(l.from, l.col);
    return out;
  }

 private:
  struct Link {
    std::uint32_t from, to, col;
    double sign;
  };
  std::size_t n_;
  Eigen::Index dim_;
  double core_;
  Eigen::VectorXd k_;
  Eigen::MatrixXd v_;
  std::vector<Link> links_;
};

}  // namespace

FockState FockState::from_statevector(const Eigen::VectorXcd& psi, std::size_t n_modes) {
  if (psi.size() != (Eigen::Index{1} << n_modes)) throw Error("statevector dimension mismatch");
  FockState s;
  s.n_modes = n_modes;
  std::vector<cplx> amps;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::norm(psi[i]) == 0.0) continue;
    s.dets.push_back(static_cast<std::uint64_t>(i));
    amps.push_back(psi[i]);
  }
  s.amplitudes = Eigen::Map<Eigen::VectorXcd>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  return s;
}

namespace {

// Columns p*n+q hold E_pq |psi> over the state's determinants extended by
// every image of a single excitation; psi is padded with zeros to match.
struct SingleImages {
  Eigen::VectorXcd psi;
  Eigen::MatrixXcd images;
};

SingleImages single_images(const FockState& state, std::size_t n) {
  auto idx = index_of(state.dets);
  std::vector<std::uint64_t> space = state.dets;
  struct Hit {
    Eigen::Index from, to, col;
    int sign;
  };
  std::vector<Hit> hits;
  for (std::size_t k = 0; k < state.dets.size(); ++k) {
    if (state.amplitudes[static_cast<Eigen::Index>(k)] == cplx(0.0)) continue;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (int s = 0; s < 2; ++s) {
          auto r = excite(state.dets[k], spin_orbital(p, s), spin_orbital(q, s));
          if (!r) continue;
          auto [it, added] = idx.try_emplace(r->second, static_cast<Eigen::Index>(space.size()));
          if (added) space.push_back(r->second);
          hits.push_back({static_cast<Eigen::Index>(k), it->second, static_cast<Eigen::Index>(p * n + q), r->first});
        }
  }
  SingleImages out;
  const auto dim = static_cast<Eigen::Index>(space.size());
  out.psi = Eigen::VectorXcd::Zero(dim);
  out.psi.head(state.amplitudes.size()) = state.amplitudes;
  out.images = Eigen::MatrixXcd::Zero(dim, static_cast<Eigen::Index>(n * n));
  for (const auto& h : hits) out.images(h.to, h.col) += static_cast<double>(h.sign) * out.psi[h.from];
  return out;
}

Eigen::MatrixXd one_rdm_from(const SingleImages& si, std::size_t n) {
  const auto ni = static_cast<Eigen::Index>(n);
  const Eigen::VectorXcd g = si.images.adjoint() * si.psi;
  Eigen::MatrixXd out(ni, ni);
  // Re <E_pq psi|psi> = Re <psi|E_pq psi>.
  for (Eigen::Index p = 0; p < ni; ++p)
    for (Eigen::Index q = 0; q < ni; ++q) out(p, q) = g[p * ni + q].real();
  return out;
}

}  // namespace

Eigen::MatrixXd one_rdm(const FockState& state, std::size_t n) {
  if (state.n_modes != 2 * n) throw Error("one_rdm: mode count does not match orbital count");
  return one_rdm_from(single_images(state, n), n);
}

TwoBodyTensor two_rdm(const FockState& state, std::size_t n) {
  if (state.n_modes != 2 * n) throw Error("two_rdm: mode count does not match orbital count");
  const auto si = single_images(state, n);
  const Eigen::MatrixXd g1 = one_rdm_from(si, n);
  // Gamma_pqrs = <E_pq E_rs> - delta_qr gamma_ps and <E_pq E_rs> = <E_qp psi|E_rs psi>.
  const Eigen::MatrixXcd gram = si.images.adjoint() * si.images;
  TwoBodyTensor g(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double v = gram(static_cast<Eigen::Index>(q * n + p), static_cast<Eigen::Index>(r * n + s)).real();
          if (q == r) v -= g1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));
          g(p, q, r, s) = v;
        }
  return g;
}

double electron_count(const FockState& state) {
  double n = 0.0;
  for (std::size_t k = 0; k < state.dets.size(); ++k) {
    n += std::norm(state.amplitudes[static_cast<Eigen::Index>(k)]) * std::popcount(state.dets[k]);
  }
  return n;
}

SectorSolution solve_sector(const MolecularIntegrals& m, int n_alpha, int n_beta) {
  const auto n = m.n_orbitals;
  if (n_alpha < 0 || n_beta < 0 || n_alpha > static_cast<int>(n) || n_beta > static_cast<int>(n)) {
    throw Error("sector electron counts out of range");
  }
  if (2 * n > 32) throw CapacityError("determinant solver supports at most 16 spatial orbitals");

  // Alpha modes are even bits, beta modes odd bits.
  std::vector<std::uint64_t> alpha_strings, beta_strings;
  for (std::uint64_t s = 0; s < (1ull << n); ++s) {
    const int c = std::popcount(s);
    if (c == n_alpha) alpha_strings.push_back(s);
    if (c == n_beta) beta_strings.push_back(s);
  }
  const std::size_t dim = alpha_strings.size() * beta_strings.size();
  std::vector<std::uint64_t> dets;
  dets.reserve(dim);
  for (auto a : alpha_strings)
    for (auto b : beta_strings) {
      std::uint64_t d = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if ((a >> p) & 1u) d |= 1ull << spin_orbital(p, 0);
        if ((b >> p) & 1u) d |= 1ull << spin_orbital(p, 1);
      }
      dets.push_back(d);
    }
  std::sort(dets.begin(), dets.end());
  const auto idx = index_of(dets);

  SectorSolution sol;
  sol.state.n_modes = 2 * n;
  if (dim <= kDenseSectorDim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_sector_matrix(m, dets, idx));
    sol.energy = es.eigenvalues()(0);
    sol.state.amplitudes = es.eigenvectors().col(0).cast<cplx>();
  } else {
    if (dim * n * n > kDirectSectorWork) {
      throw CapacityError("determinant space of dimension " + std::to_string(dim) + " is too large");
    }
    const SectorOperator op(m, dets, idx);
    Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      start[i] = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i) + 0.1);
    }
    double scale = std::abs(m.core_energy) + m.one_body.cwiseAbs().sum();
    for (double v : m.two_body.data()) scale += 0.5 * std::abs(v);
    const auto apply = [&op](const auto& x) -> Eigen::VectorXd { return op.apply(x); };
    auto eig = detail::lanczos_lowest(apply, std::move(start), 1e-12 * std::max(1.0, scale));
    sol.energy = eig.value;
    sol.state.amplitudes = eig.vector.cast<cplx>();
  }
  sol.state.dets = std::move(dets);
  return sol;
}

SectorSolution solve_fci(const MolecularIntegrals& m) {
  const int na = (m.n_electrons + 1) / 2;
  return solve_sector(m, na, m.n_electrons - na);
}

}  // namespace qcarbon
