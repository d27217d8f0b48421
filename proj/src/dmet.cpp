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

#include "qcarbon/dmet.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "qcarbon/ansatz.hpp"
#include "qcarbon/error.hpp"
#include "qcarbon/fci.hpp"
#include "qcarbon/mapping.hpp"
#include "qcarbon/vqe.hpp"

namespace qcarbon {

void Fragmentation::validate(std::size_t n) const {
  if (fragments.empty()) throw Error("fragmentation has no fragments");
  std::vector<int> seen(n, 0);
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    if (fragments[f].empty()) throw Error("fragment " + std::to_string(f) + " is empty");
    for (auto p : fragments[f]) {
      if (p >= n) throw Error("fragment " + std::to_string(f) + " names orbital " + std::to_string(p) + " of " +
                              std::to_string(n));
      if (seen[p]++) throw Error("orbital " + std::to_string(p) + " appears in more than one fragment");
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!seen[p]) throw Error("orbital " + std::to_string(p) + " is not covered by any fragment");
  }
}

Fragmentation Fragmentation::parse(const std::string& text) {
  Fragmentation f;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<std::size_t> ids;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      const auto e = item.find_last_not_of(" \t");
      const std::string tok = item.substr(b, e - b + 1);
      if (tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("fragment entry '" + tok + "' is not an orbital index");
      }
      ids.push_back(std::stoul(tok));
    }
    f.fragments.push_back(std::move(ids));
  }
  return f;
}

Fragmentation Fragmentation::whole(std::size_t n) {
  Fragmentation f;
  f.fragments.emplace_back();
  for (std::size_t p = 0; p < n; ++p) f.fragments.back().push_back(p);
  return f;
}

std::string Fragmentation::str() const {
  std::string out;
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    if (f) out += ';';
    for (std::size_t i = 0; i < fragments[f].size(); ++i) {
      if (i) out += ',';
      out += std::to_string(fragments[f][i]);
    }
  }
  return out;
}

Bath make_bath(const MeanField& mf, const std::vector<std::size_t>& fragment, double bath_tol) {
  const auto n = static_cast<std::size_t>(mf.density.rows());
  std::set<std::size_t> in_frag(fragment.begin(), fragment.end());
  if (in_frag.size() != fragment.size() || fragment.empty()) throw Error("fragment must be nonempty without repeats");
  std::vector<std::size_t> env;
  for (std::size_t p = 0; p < n; ++p) {
    if (!in_frag.count(p)) env.push_back(p);
  }
  for (auto p : fragment) {
    if (p >= n) throw Error("fragment orbital " + std::to_string(p) + " outside the mean-field dimension");
  }
  const auto nf = static_cast<Eigen::Index>(fragment.size());
  const auto ne = static_cast<Eigen::Index>(env.size());

  Bath b;
  b.n_fragment = fragment.size();
  b.core_density = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd bath_env(ne, 0);
  if (ne > 0) {
    Eigen::MatrixXd block(ne, nf);
    for (Eigen::Index i = 0; i < ne; ++i)
      for (Eigen::Index j = 0; j < nf; ++j) block(i, j) = mf.density(env[i], fragment[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinU);
    Eigen::Index nb = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      if (svd.singularValues()[k] > bath_tol) ++nb;
    }
    bath_env = svd.matrixU().leftCols(nb);

    Eigen::MatrixXd d_env(ne, ne);
    for (Eigen::Index i = 0; i < ne; ++i)
      for (Eigen::Index j = 0; j < ne; ++j) d_env(i, j) = mf.density(env[i], env[j]);
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(ne, ne) - bath_env * bath_env.transpose();
    const Eigen::MatrixXd core = proj * d_env * proj;
    for (Eigen::Index i = 0; i < ne; ++i)
      for (Eigen::Index j = 0; j < ne; ++j) b.core_density(env[i], env[j]) = core(i, j);
  }

  b.basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), nf + bath_env.cols());
  for (Eigen::Index j = 0; j < nf; ++j) b.basis(fragment[j], j) = 1.0;
  for (Eigen::Index k = 0; k < bath_env.cols(); ++k)
    for (Eigen::Index i = 0; i < ne; ++i) b.basis(env[i], nf + k) = bath_env(i, k);
  return b;
}

EmbeddingProblem EmbeddingProblem::with_mu(double new_mu) const {
  EmbeddingProblem e = *this;
  for (std::size_t p = 0; p < n_fragment; ++p) {
    e.integrals.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) += mu - new_mu;
  }
  e.mu = new_mu;
  return e;
}

EmbeddingProblem fragment_hamiltonian(const MolecularIntegrals& m, const Bath& bath, double mu) {
  if (bath.basis.rows() != static_cast<Eigen::Index>(m.n_orbitals)) throw Error("bath basis dimension mismatch");
  const Eigen::MatrixXd v = coulomb_exchange(m.two_body, bath.core_density);
  const Eigen::MatrixXd& c = bath.basis;

  MolecularIntegrals folded = m;
  folded.one_body = m.one_body + v;
  EmbeddingProblem e;
  e.integrals = rotate(folded, c);
  e.bare_one_body = c.transpose() * m.one_body * c;
  e.env_potential = c.transpose() * v * c;
  e.n_fragment = bath.n_fragment;

  const double core_electrons = bath.core_density.trace();
  const double n_emb = static_cast<double>(m.n_electrons) - core_electrons;
  const long rounded = std::lround(n_emb);
  if (std::abs(n_emb - static_cast<double>(rounded)) > 1e-6) {
    throw Error("embedding electron count " + format_double(n_emb) + " is not an integer; mean-field density is not idempotent");
  }
  const auto n_orb = static_cast<long>(c.cols());
  if (rounded < 0 || rounded % 2 != 0 || rounded > 2 * n_orb) {
    throw Error("embedding electron count " + std::to_string(rounded) + " is invalid for " + std::to_string(n_orb) +
                " embedding orbitals");
  }
  e.integrals.n_electrons = static_cast<int>(rounded);
  e.integrals.core_energy =
      m.core_energy + (bath.core_density.cwiseProduct(m.one_body + 0.5 * v)).sum();
  return e.with_mu(mu);
}

std::string to_string(FragmentSolverKind kind) { return kind == FragmentSolverKind::vqe ? "vqe" : "exact"; }

FragmentSolverKind fragment_solver_from_string(const std::string& s) {
  if (s == "exact" || s == "fci") return FragmentSolverKind::exact;
  if (s == "vqe") return FragmentSolverKind::vqe;
  throw ParseError("unknown fragment solver '" + s + "' (expected exact or vqe)");
}

double democratic_energy(const EmbeddingProblem& e, const Eigen::MatrixXd& g1, const TwoBodyTensor& g2) {
  const std::size_t n = e.integrals.n_orbitals;
  double energy = 0.0;
  for (std::size_t p = 0; p < e.n_fragment; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto pi = static_cast<Eigen::Index>(p), qi = static_cast<Eigen::Index>(q);
      energy += (e.bare_one_body(pi, qi) + 0.5 * e.env_potential(pi, qi)) * g1(pi, qi);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) energy += 0.5 * e.integrals.two_body(p, q, r, s) * g2(p, q, r, s);
    }
  }
  return energy;
}

namespace {

// G'_abcd = sum U_ap U_bq U_cr U_ds G_pqrs, for rectangular U (rows = new index).
TwoBodyTensor transform(const TwoBodyTensor& g, const Eigen::MatrixXd& u) {
  const std::size_t m = static_cast<std::size_t>(u.rows());
  const std::size_t n = g.dim();
  auto step = [&u](const std::vector<double>& in, std::size_t d_old, std::size_t d_new, std::size_t rest) {
    // Contracts the leading index (size d_old) into d_new, rotating the layout.
    std::vector<double> out(d_new * rest, 0.0);
    for (std::size_t a = 0; a < d_new; ++a)
      for (std::size_t p = 0; p < d_old; ++p) {
        const double w = u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p));
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < rest; ++k) out[k * d_new + a] += w * in[p * rest + k];
      }
    return out;
  };
  // Layout [p][q][r][s]; each step moves the transformed index to the back.
  std::vector<double> t = g.data();
  t = step(t, n, m, n * n * n);  // [q][r][s][a]
  t = step(t, n, m, n * n * m);  // [r][s][a][b]
  t = step(t, n, m, n * m * m);  // [s][a][b][c]
  t = step(t, n, m, m * m * m);  // [a][b][c][d]
  TwoBodyTensor out(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) out(a, b, c, d) = t[((a * m + b) * m + c) * m + d];
  return out;
}

QubitHamiltonian number_penalty(std::size_t n_spatial, int n_electrons, double weight) {
  MappingSpec jw;
  jw.n_electrons = n_electrons;
  QubitHamiltonian n_op = map_to_qubits(number_operator(n_spatial), jw);
  QubitHamiltonian shifted = n_op;
  shifted.add(-static_cast<double>(n_electrons), PauliWord(n_op.n_qubits()));
  QubitHamiltonian sq = simplify(shifted * shifted);
  sq *= weight;
  return sq;
}

}  // namespace

bool FragmentSolver::vqe_active(const MolecularIntegrals& act, Slot& slot, std::size_t index, Eigen::MatrixXd& g1,
                                TwoBodyTensor& g2) {
  const auto& vo = opts_.vqe;
  MappingSpec jw;
  jw.n_electrons = act.n_electrons;
  QubitHamiltonian h = map_to_qubits(build_fermionic_hamiltonian(act), jw);
  h += number_penalty(act.n_orbitals, act.n_electrons, vo.penalty);
  VqeProblem p;
  p.hamiltonian = simplify(h);
  p.circuit = build_hea({h.n_qubits(), vo.layers}, hartree_fock_bitstring(act.n_orbitals, act.n_electrons, jw));
  p.optimizer.kind = OptimizerKind::quasi_newton;
  p.optimizer.quasi_newton = vo.optimizer;
  p.init = InitKind::random;
  p.init_seed = derive_seed(vo.seed, index);
  p.restarts = std::max<std::size_t>(1, vo.restarts);
  VqeResult r = qcarbon::solve(p);
  if (!slot.params.empty()) {
    auto warm = solve_from(p, slot.params);
    if (warm.energy < r.energy) r = std::move(warm);
  }
  slot.params = r.params;
  const auto state = evolve(p.circuit, r.params);
  const auto fock = FockState::from_statevector(state.amplitudes(), 2 * act.n_orbitals);
  const double ne = electron_count(fock);
  if (std::abs(ne - act.n_electrons) > vo.number_tol) {
    notes_.push_back("fragment " + std::to_string(index) + ": VQE state has <N> = " + format_double(ne) +
                     " instead of " + std::to_string(act.n_electrons) + "; exact solver used");
    slot.params.clear();
    return false;
  }
  g1 = one_rdm(fock, act.n_orbitals);
  g2 = two_rdm(fock, act.n_orbitals);
  return true;
}

FragmentSolution FragmentSolver::solve_in_orbitals(const EmbeddingProblem& e, Slot& slot, std::size_t index) {
  const MolecularIntegrals& m = e.integrals;
  const std::size_t n = m.n_orbitals;
  if (!slot.has_orbitals) {
    slot.orbitals = restricted_hartree_fock(m);
    slot.has_orbitals = true;
  }
  const ActiveSpace as = active_space(m, slot.orbitals, opts_.window);
  for (const auto& w : as.info.warnings) notes_.push_back("fragment " + std::to_string(index) + ": " + w);
  const MolecularIntegrals& act = as.integrals;
  const std::size_t na = act.n_orbitals;

  Eigen::MatrixXd g1a;
  TwoBodyTensor g2a;
  bool fallback = false;
  if (opts_.kind == FragmentSolverKind::vqe) {
    fallback = !vqe_active(act, slot, index, g1a, g2a);
  }
  if (opts_.kind == FragmentSolverKind::exact || fallback) {
    const auto sol = solve_sector(act, act.n_electrons / 2, act.n_electrons / 2);
    g1a = one_rdm(sol.state, na);
    g2a = two_rdm(sol.state, na);
  }

  // Assemble MO-basis densities with the frozen closed-shell core.
  const std::size_t lo = as.info.frozen_occupied.size();
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < lo; ++i) g1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 2.0;
  g1.block(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(na),
           static_cast<Eigen::Index>(na)) = g1a;
  auto active = [&](std::size_t p) { return p >= lo && p < lo + na; };
  TwoBodyTensor g2(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (active(p) && active(q) && active(r) && active(s)) {
            g2(p, q, r, s) = g2a(p - lo, q - lo, r - lo, s - lo);
          } else {
            const auto P = static_cast<Eigen::Index>(p), Q = static_cast<Eigen::Index>(q);
            const auto R = static_cast<Eigen::Index>(r), S = static_cast<Eigen::Index>(s);
            g2(p, q, r, s) = g1(P, Q) * g1(R, S) - 0.5 * g1(P, S) * g1(R, Q);
          }
        }

  const Eigen::MatrixXd& u = slot.orbitals.orbital_coeffs;
  FragmentSolution out;
  out.one_rdm = u * g1 * u.transpose();
  out.two_rdm = transform(g2, u);
  out.fallback = fallback;
  return out;
}

FragmentSolution FragmentSolver::solve(const EmbeddingProblem& e, std::size_t index) {
  const MolecularIntegrals& m = e.integrals;
  FragmentSolution out;
  if (opts_.kind == FragmentSolverKind::exact && !opts_.window) {
    const auto sol = solve_sector(m, m.n_electrons / 2, m.n_electrons / 2);
    out.one_rdm = one_rdm(sol.state, m.n_orbitals);
    out.two_rdm = two_rdm(sol.state, m.n_orbitals);
  } else {
    out = solve_in_orbitals(e, slots_[index], index);
  }
  out.energy = democratic_energy(e, out.one_rdm, out.two_rdm);
  out.electrons = out.one_rdm.diagonal().head(static_cast<Eigen::Index>(e.n_fragment)).sum();
  return out;
}

FragmentSolution solve_fragment(const EmbeddingProblem& e, const SolverOptions& opts) {
  FragmentSolver solver(opts);
  return solver.solve(e, 0);
}

DmetResult run_dmet(const MolecularIntegrals& m, const MeanField& mf, const Fragmentation& frag,
                    const DmetOptions& opts) {
  frag.validate(m.n_orbitals);
  if (!(opts.mu_tol > 0.0)) throw Error("mu tolerance must be positive");
  if (!(opts.fd_step > 0.0)) throw Error("mu finite-difference step must be positive");

  DmetResult res;
  std::vector<EmbeddingProblem> base;
  for (const auto& f : frag.fragments) {
    const Bath b = make_bath(mf, f, opts.bath_tol);
    res.embedding_orbitals.push_back(static_cast<std::size_t>(b.basis.cols()));
    res.bath_orbitals.push_back(b.n_bath());
    base.push_back(fragment_hamiltonian(m, b, 0.0));
  }

  FragmentSolver solver(opts.solver);
  std::vector<FragmentSolution> last(base.size());
  auto mismatch = [&](double mu) {
    double total = 0.0;
    for (std::size_t f = 0; f < base.size(); ++f) {
      last[f] = solver.solve(base[f].with_mu(mu), f);
      total += last[f].electrons;
    }
    return total - static_cast<double>(m.n_electrons);
  };

  double mu = opts.mu0;
  double fm = mismatch(mu);
  res.trace.push_back({mu, fm});
  std::optional<double> lo, hi;  // mu with negative / positive mismatch
  auto bracket = [&](double x, double fx) {
    if (fx < 0.0) lo = x;
    if (fx > 0.0) hi = x;
  };
  bracket(mu, fm);
  while (std::abs(fm) >= opts.mu_tol && res.trace.size() <= opts.max_iter) {
    const double fp = (mismatch(mu + opts.fd_step) - mismatch(mu - opts.fd_step)) / (2.0 * opts.fd_step);
    double next = mu;
    const bool have_bracket = lo && hi;
    bool newton_ok = std::isfinite(fp) && fp > 0.0;
    if (newton_ok) {
      double step = -fm / fp;
      if (!have_bracket) step = std::clamp(step, -1.0, 1.0);
      next = mu + step;
      if (have_bracket && !(next > std::min(*lo, *hi) && next < std::max(*lo, *hi))) newton_ok = false;
    }
    if (!newton_ok) {
      if (have_bracket) {
        next = 0.5 * (*lo + *hi);
      } else {
        next = mu + (fm < 0.0 ? 0.5 : -0.5);
      }
    }
    mu = next;
    fm = mismatch(mu);
    res.trace.push_back({mu, fm});
    bracket(mu, fm);
  }
  res.converged = std::abs(fm) < opts.mu_tol;
  res.mu = mu;
  res.energy = m.core_energy;
  for (const auto& s : last) {
    res.fragment_electrons.push_back(s.electrons);
    res.fragment_energies.push_back(s.energy);
    res.energy += s.energy;
  }
  res.notes = solver.notes();
  if (!res.converged) {
    res.notes.push_back("chemical potential did not converge after " + std::to_string(res.trace.size() - 1) +
                        " updates; last mismatch " + format_double(fm));
  }
  return res;
}

std::string mu_trace_csv(const DmetResult& r) {
  std::string out = "iteration,mu,mismatch\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(r.trace[i].mu) + ',' + format_double(r.trace[i].mismatch) + '\n';
  }
  return out;
}

}  // namespace qcarbon
