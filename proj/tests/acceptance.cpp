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


// Runs the acceptance criteria end to end and prints one PASS/FAIL line each.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcarbon/ansatz.hpp"
#include "qcarbon/dmet.hpp"
#include "qcarbon/error.hpp"
#include "qcarbon/fci.hpp"
#include "qcarbon/mapping.hpp"
#include "qcarbon/mitigation.hpp"
#include "qcarbon/resource.hpp"
#include "qcarbon/vqe.hpp"

using namespace qcarbon;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(QCARBON_FIXTURE_DIR) + "/" + name; }

double fixture_fci(const std::string& system) {
  std::ifstream in(fixture(system + ".json"));
  const auto j = nlohmann::json::parse(in);
  return j.contains("fci_energy") ? j["fci_energy"].get<double>() : std::nan("");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

VqeProblem h2_problem(const MappingSpec& base) {
  const auto m = read_fcidump(fixture("h2.fcidump"));
  const auto mo = active_space(m, restricted_hartree_fock(m), std::nullopt).integrals;
  MappingSpec spec = base;
  spec.n_electrons = mo.n_electrons;
  VqeProblem p;
  p.hamiltonian = map_to_qubits(build_fermionic_hamiltonian(mo), spec);
  p.circuit = build_hea({p.hamiltonian.n_qubits(), 1}, hartree_fock_bitstring(mo.n_orbitals, mo.n_electrons, spec));
  return p;
}

MappingSpec reduced_parity() {
  MappingSpec s;
  s.kind = MappingKind::parity;
  s.two_qubit_reduction = true;
  return s;
}

VqeProblem h2_spsa(std::uint64_t seed) {
  auto p = h2_problem(reduced_parity());
  p.optimizer.kind = OptimizerKind::spsa;
  p.optimizer.spsa.iterations = 100;
  p.optimizer.spsa.seed = seed;
  p.restarts = 4;
  p.init_seed = seed;
  return p;
}

Outcome oracle() {
  Outcome o;
  const auto m = read_fcidump(fixture("h2.fcidump"));
  const auto mo = active_space(m, restricted_hartree_fock(m), std::nullopt).integrals;
  const auto fh = build_fermionic_hamiltonian(mo);
  MappingSpec jw;
  jw.n_electrons = mo.n_electrons;
  MappingSpec par = reduced_parity();
  par.n_electrons = mo.n_electrons;
  const double e_jw = ground_state_energy(map_to_qubits(fh, jw)).energy;
  const double e_par = ground_state_energy(map_to_qubits(fh, par)).energy;
  const double fci = fixture_fci("h2");
  o.require(std::abs(e_jw - fci) <= 1e-8, "|E_JW - FCI| <= 1e-8");
  o.require(std::abs(e_jw - e_par) <= 1e-10, "|E_JW - E_parity| <= 1e-10");
  o.note("|E_JW - FCI| = " + fmt("%.2e", std::abs(e_jw - fci)) + ", |E_JW - E_parity| = " +
         fmt("%.2e", std::abs(e_jw - e_par)));
  return o;
}

Outcome vqe() {
  Outcome o;
  const auto sp = h2_spsa(17);
  const double ref = ground_state_energy(sp.hamiltonian).energy;
  const auto rs = solve(sp);
  const double err_spsa = relative_error(rs.energy, ref);
  o.require(err_spsa <= 5e-3, "SPSA relative error <= 5e-3");

  auto qn = h2_problem(MappingSpec{});
  qn.restarts = 16;
  qn.init_seed = 2026;
  const auto rq = solve(qn);
  const double err_qn = relative_error(rq.energy, ref);
  o.require(err_qn <= 2e-3, "quasi-Newton relative error <= 2e-3");
  o.note("SPSA " + fmt("%.2e", err_spsa) + ", quasi-Newton " + fmt("%.2e", err_qn));

  // Noisy sampled runs with readout flips, aggregated over seeds (informational).
  for (const auto kind : {MitigationKind::none, MitigationKind::m3, MitigationKind::trex}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto p = h2_spsa(derive_seed(seed, 2));
      SamplingConfig s;
      s.shots = 4000;
      s.noise = ReadoutNoiseModel::uniform(2, 0.02, 0.02);
      s.mitigation = kind;
      s.seed = derive_seed(seed, 1);
      p.sampling = s;
      errs.push_back(1e3 * relative_error(solve(p).exact_energy, ref));
    }
    const auto [lo, hi] = std::minmax_element(errs.begin(), errs.end());
    const double avg = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    o.note("noisy " + to_string(kind) + " rel err x1e-3 min/avg/max " + fmt("%.2f", *lo) + "/" + fmt("%.2f", avg) +
           "/" + fmt("%.2f", *hi));
  }
  return o;
}

Outcome deparam() {
  Outcome o;
  VqeProblem p;
  p.hamiltonian = read_hamiltonian(fixture("ising5.ham"));
  p.circuit = build_hea({5, 1}, std::vector<int>(5, 0));
  const auto r = deparameterise(p, solve(p));
  o.require(r.initial_params == 10, "10 initial parameters");
  const auto removed = r.initial_params - r.final_params();
  o.require(2 * removed >= r.initial_params, "at least half the parameters removed");
  const auto cands = default_candidate_angles();
  for (const auto& s : r.steps) {
    if (!s.accepted) continue;
    o.require(s.relative_error <= 1e-2, "accepted step relative error <= 1e-2");
    o.require(std::find(cands.begin(), cands.end(), s.angle) != cands.end(), "angle in {0, +-pi/2, +-pi}");
  }
  o.note(std::to_string(r.initial_params) + " -> " + std::to_string(r.final_params()) + " parameters");
  return o;
}

Circuit ghz(std::size_t n) {
  Circuit c(n);
  c.ry_frozen(0, std::numbers::pi / 2);
  for (std::size_t q = 0; q + 1 < n; ++q) c.cnot(q, q + 1);
  return c;
}

Outcome mitigation() {
  Outcome o;
  const std::pair<double, std::uint64_t> parity[] = {{1.0, 0b1111}};
  const auto noise = ReadoutNoiseModel::uniform(4, 0.02, 0.02);
  const auto psi = evolve(ghz(4), {});
  const auto counts = sample(psi, PauliWord(4), 10000, &noise, 101);
  const auto raw = raw_expectation(counts, parity);
  const auto m3 = m3_expectation(counts, calibrate(noise, 10000, 102), parity);
  const auto trex = trex_expectation(ghz(4), {}, PauliWord::from_string("ZZZZ"), 10000, &noise, 103);
  o.require(std::abs(m3.value - 1.0) < 3.0 * m3.std_error, "M3 within 3 sigma");
  o.require(std::abs(trex.value - 1.0) < 3.0 * trex.std_error, "T-REx within 3 sigma");
  o.require(1.0 - raw.value > 5.0 * raw.std_error, "raw beyond 5 sigma");
  o.note("raw " + fmt("%.4f", raw.value) + ", M3 " + fmt("%.4f", m3.value) + ", T-REx " + fmt("%.4f", trex.value));

  const auto clean = sample(psi, PauliWord(4), 10000, nullptr, 104);
  const auto clean_raw = raw_expectation(clean, parity);
  const auto clean_m3 = m3_expectation(clean, calibrate(ReadoutNoiseModel::ideal(4), 10000, 105), parity);
  const auto tcal = trex_calibrate(4, 10000, nullptr, 106);
  const auto twirled = twirled_sample(psi, PauliWord(4), 10000, nullptr, 107);
  o.require(clean_m3.value == clean_raw.value, "M3 pass-through at zero noise");
  o.require(trex_from_counts(twirled, tcal, parity).value == raw_expectation(twirled, parity).value,
            "T-REx pass-through at zero noise");
  return o;
}

Outcome dmet() {
  Outcome o;
  for (const std::string name : {"h2", "h4_chain", "hubbard4", "h10_chain"}) {
    const auto m = read_fcidump(fixture(name + ".fcidump"));
    const auto mf = restricted_hartree_fock(m);
    double fci = fixture_fci(name);
    if (std::isnan(fci)) fci = solve_fci(m).energy;
    const auto r = run_dmet(m, mf, Fragmentation::whole(m.n_orbitals));
    o.require(r.converged && std::abs(r.energy - fci) <= 1e-8, "whole-molecule DMET = FCI on " + name);
  }

  const auto m = read_fcidump(fixture("h4_chain.fcidump"));
  const auto mf = restricted_hartree_fock(m);
  const auto frag = Fragmentation::parse("0,1;2,3");
  const double fci = fixture_fci("h4_chain");
  const auto exact = run_dmet(m, mf, frag);
  o.require(exact.converged && std::abs(exact.trace.back().mismatch) < 1e-6, "H4 mismatch < 1e-6");
  o.require(std::abs(exact.energy - fci) <= 1e-2, "H4 two-fragment within 1e-2 Ha of FCI");
  o.note("H4 two-fragment error " + fmt("%.2e", std::abs(exact.energy - fci)) + " Ha");

  DmetOptions wopts;
  wopts.solver.window = 0;
  const auto exact_w = run_dmet(m, mf, frag, wopts);
  o.require(exact_w.converged, "windowed DMET-exact converges");
  std::vector<double> dev;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DmetOptions v = wopts;
    v.solver.kind = FragmentSolverKind::vqe;
    v.solver.vqe.seed = seed;
    const auto r = run_dmet(m, mf, frag, v);
    o.require(r.converged, "DMET-VQE seed " + std::to_string(seed) + " converges");
    dev.push_back(r.energy - exact_w.energy);
  }
  double worst = 0.0;
  for (double d : dev) worst = std::max(worst, std::abs(d));
  const double mean = std::accumulate(dev.begin(), dev.end(), 0.0) / static_cast<double>(dev.size());
  double var = 0.0;
  for (double d : dev) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / static_cast<double>(dev.size() - 1));
  const auto [lo, hi] = std::minmax_element(dev.begin(), dev.end());
  o.require(worst <= 5e-3, "DMET-VQE within 5e-3 of DMET-exact on all seeds");
  o.note("DMET-VQE - DMET-exact over 10 seeds: min " + fmt("%.2e", *lo) + ", max " + fmt("%.2e", *hi) + ", mean " +
         fmt("%.2e", mean) + ", sd " + fmt("%.2e", sd));
  return o;
}

Outcome resources() {
  Outcome o;
  const auto m = read_fcidump(fixture("h10_chain.fcidump"));
  o.require(m.n_orbitals >= 10, "fixture has at least 10 orbitals");
  const auto rows = estimate(m, restricted_hartree_fock(m), {1, 2, 3, 4}, {});
  const std::size_t widths[] = {8, 12, 16, 20};
  std::string summary;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    o.require(rows[i].width == widths[i], "width for k=" + std::to_string(i + 1));
    if (i) o.require(rows[i].terms > rows[i - 1].terms, "term count increases at k=" + std::to_string(i + 1));
    summary += (i ? ", " : "") + std::to_string(rows[i].width) + "q/" + std::to_string(rows[i].terms) + "t";
  }
  o.note(summary);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  auto p = h2_spsa(5);
  SamplingConfig s;
  s.shots = 1000;
  s.noise = ReadoutNoiseModel::uniform(2, 0.02, 0.02);
  s.mitigation = MitigationKind::m3;
  s.seed = 9;
  p.sampling = s;
  o.require(trace_csv(solve(p).trace, true) == trace_csv(solve(p).trace, true), "sampled VQE trace");

  VqeProblem ising;
  ising.hamiltonian = read_hamiltonian(fixture("ising5.ham"));
  ising.circuit = build_hea({5, 1}, std::vector<int>(5, 0));
  ising.init = InitKind::random;
  ising.init_seed = 4;
  const auto base = solve(ising);
  o.require(to_text(deparameterise(ising, base)) == to_text(deparameterise(ising, base)), "deparameterisation report");

  const auto m = read_fcidump(fixture("h4_chain.fcidump"));
  const auto mf = restricted_hartree_fock(m);
  DmetOptions d;
  d.solver.kind = FragmentSolverKind::vqe;
  d.solver.window = 0;
  d.solver.vqe.seed = 3;
  const auto frag = Fragmentation::parse("0,1;2,3");
  o.require(mu_trace_csv(run_dmet(m, mf, frag, d)) == mu_trace_csv(run_dmet(m, mf, frag, d)), "DMET-VQE mu trace");

  const fs::path dir = fs::temp_directory_path() / ("qcarbon_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "h2.ini") << "[system]\nintegrals = " << fixture("h2.fcidump")
                                  << "\n[mapping]\nkind = parity\ntwo_qubit_reduction = true\n"
                                     "[optimizer]\nkind = spsa\niterations = 50\n"
                                     "[estimator]\nshots = 1000\nreadout_error = 0.02\nmitigation = trex\n";
  }
  bool ran = true;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(QCARBON_CLI) + " vqe --config " + (dir / "h2.ini").string() +
                            " --seed 21 --out " + (dir / run).string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ran = ran && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  }
  o.require(ran, "CLI runs succeed");
  for (const char* f : {"vqe.json", "trace.csv", "convergence.svg"}) {
    const auto a = slurp(dir / "a" / f);
    o.require(!a.empty() && a == slurp(dir / "b" / f), std::string("CLI ") + f + " byte-identical");
  }
  fs::remove_all(dir);
  o.note("traces, reports and CLI documents identical across seeded reruns");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle", 5.0, oracle},           {2, "vqe", 60.0, vqe},
      {3, "deparameterisation", 300.0, deparam}, {4, "mitigation", 60.0, mitigation},
      {5, "dmet", 600.0, dmet},             {6, "resources", 120.0, resources},
      {7, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.note("FAILED time budget " + fmt("%.0f", c.budget_s) + " s");
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
