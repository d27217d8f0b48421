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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcarbon/integrals.hpp"
#include "qcarbon/optimize.hpp"
#include "qcarbon/simulator.hpp"

namespace qcarbon {

struct Fragmentation {
  std::vector<std::vector<std::size_t>> fragments;

  /// Disjoint, nonempty, covering 0..n_orbitals-1.
  void validate(std::size_t n_orbitals) const;

  /// "0,1;2,3" form.
  static Fragmentation parse(const std::string& text);
  static Fragmentation whole(std::size_t n_orbitals);
  std::string str() const;
};

struct Bath {
  /// Fragment unit vectors followed by bath orbitals, one per column.
  Eigen::MatrixXd basis;
  /// Spin-summed mean-field density of the environment core (bath removed).
  Eigen::MatrixXd core_density;
  std::size_t n_fragment = 0;

  std::size_t n_bath() const { return static_cast<std::size_t>(basis.cols()) - n_fragment; }
};

inline constexpr double kDefaultBathTol = 1e-6;

Bath make_bath(const MeanField& mf, const std::vector<std::size_t>& fragment, double bath_tol = kDefaultBathTol);

struct EmbeddingProblem {
  /// Embedding-space integrals including the environment fold and the -mu shift.
  MolecularIntegrals integrals;
  /// Rotated bare one-body term (no fold, no mu).
  Eigen::MatrixXd bare_one_body;
  /// Rotated environment potential J - K/2 of the core density.
  Eigen::MatrixXd env_potential;
  std::size_t n_fragment = 0;
  double mu = 0.0;

  /// Copy with a different chemical potential.
  EmbeddingProblem with_mu(double mu) const;
};

/**
 * @brief Embedding Hamiltonian for one fragment.
 *
 * One-body: C^T (h + J[D] - K[D]/2) C with D the spin-summed core density,
 * which is the spin-orbital fold sum_mn [(rs|mn) - (rn|ms)] D_mn written for a
 * closed-shell density. mu is subtracted on the fragment diagonal.
 */
EmbeddingProblem fragment_hamiltonian(const MolecularIntegrals& m, const Bath& bath, double mu);

enum class FragmentSolverKind { exact, vqe };

std::string to_string(FragmentSolverKind kind);
FragmentSolverKind fragment_solver_from_string(const std::string& s);

struct VqeFragmentOptions {
  std::size_t layers = 3;
  std::size_t restarts = 8;
  /// Weight of the lambda (N - N_emb)^2 particle-number penalty.
  double penalty = 1.0;
  std::uint64_t seed = 0;
  QuasiNewtonConfig optimizer;
  /// Largest tolerated deviation of <N> before falling back to the exact solver.
  double number_tol = 1e-2;
};

struct SolverOptions {
  FragmentSolverKind kind = FragmentSolverKind::exact;
  /// HOMO-k..LUMO+k window on the embedding problem.
  std::optional<int> window;
  VqeFragmentOptions vqe;
};

struct FragmentSolution {
  /// Densities in the embedding basis.
  Eigen::MatrixXd one_rdm;
  TwoBodyTensor two_rdm;
  /// Democratic fragment energy (electronic, no core constant).
  double energy = 0.0;
  double electrons = 0.0;
  bool fallback = false;
};

/// Democratic partition: sum_{p in frag, q} (h + V/2)_pq g_pq + 1/2 sum_{p in frag, qrs} (pq|rs) G_pqrs.
double democratic_energy(const EmbeddingProblem& e, const Eigen::MatrixXd& one_rdm, const TwoBodyTensor& two_rdm);

/// Fragment solver with per-slot state (fixed embedding orbitals, warm-start parameters).
class FragmentSolver {
 public:
  explicit FragmentSolver(SolverOptions opts) : opts_(std::move(opts)) {}

  FragmentSolution solve(const EmbeddingProblem& e, std::size_t slot);
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  struct Slot {
    MeanField orbitals;
    bool has_orbitals = false;
    std::vector<double> params;
  };

  FragmentSolution solve_in_orbitals(const EmbeddingProblem& e, Slot& slot, std::size_t index);
  bool vqe_active(const MolecularIntegrals& act, Slot& slot, std::size_t index, Eigen::MatrixXd& g1,
                  TwoBodyTensor& g2);

  SolverOptions opts_;
  std::map<std::size_t, Slot> slots_;
  std::vector<std::string> notes_;
};

FragmentSolution solve_fragment(const EmbeddingProblem& e, const SolverOptions& opts);

struct DmetOptions {
  SolverOptions solver;
  /// Electron-count tolerance on |sum_f n_f - N|.
  double mu_tol = 1e-6;
  double bath_tol = kDefaultBathTol;
  double fd_step = 1e-4;
  std::size_t max_iter = 50;
  double mu0 = 0.0;
};

struct MuStep {
  double mu = 0.0;
  double mismatch = 0.0;
};

struct DmetResult {
  double energy = 0.0;
  double mu = 0.0;
  bool converged = false;
  std::vector<double> fragment_electrons;
  std::vector<double> fragment_energies;
  std::vector<std::size_t> embedding_orbitals;
  std::vector<std::size_t> bath_orbitals;
  std::vector<MuStep> trace;
  std::vector<std::string> notes;
};

/**
 * @brief One-shot DMET with a global chemical potential.
 *
 * Baths come from the mean-field density once; mu is tuned by Newton-Raphson
 * (central difference derivative) with bisection once a bracket exists.
 * Non-convergence is reported through `converged` and the mu trace.
 */
DmetResult run_dmet(const MolecularIntegrals& m, const MeanField& mf, const Fragmentation& frag,
                    const DmetOptions& opts = {});

/// `iteration,mu,mismatch` rows.
std::string mu_trace_csv(const DmetResult& r);

}  // namespace qcarbon
