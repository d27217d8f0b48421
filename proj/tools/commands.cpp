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

#include "commands.hpp"

#include <cstdio>
#include <iostream>

#include <json.hpp>

#include "artifacts.hpp"
#include "qcarbon/ansatz.hpp"
#include "qcarbon/fci.hpp"
#include "qcarbon/resource.hpp"

namespace qcarbon::cli {

namespace {

using Json = nlohmann::ordered_json;

// Largest system that gets a determinant-space FCI reference.
constexpr std::size_t kFciOrbitalCap = 10;

struct Problem {
  std::string name;
  QubitHamiltonian hamiltonian;
  std::vector<int> hf_bits;
  std::optional<double> hf_energy;
  std::optional<double> fci_energy;
};

Problem load_problem(const RunConfig& cfg) {
  Problem p;
  if (!cfg.hamiltonian.empty()) {
    p.name = cfg.hamiltonian.filename().string();
    p.hamiltonian = read_hamiltonian(cfg.hamiltonian.string());
    p.hf_bits.assign(p.hamiltonian.n_qubits(), 0);
    return p;
  }
  p.name = cfg.integrals.filename().string();
  const auto m = read_fcidump(cfg.integrals.string());
  const auto mf = restricted_hartree_fock(m);
  const auto as = active_space(m, mf, cfg.window);
  for (const auto& w : as.info.warnings) std::cerr << "warning: " << w << '\n';
  const auto& act = as.integrals;
  MappingSpec spec = cfg.mapping;
  spec.n_electrons = act.n_electrons;
  p.hamiltonian = map_to_qubits(build_fermionic_hamiltonian(act), spec);
  p.hf_bits = hartree_fock_bitstring(act.n_orbitals, act.n_electrons, spec);
  p.hf_energy = mf.hf_energy;
  if (act.n_orbitals <= kFciOrbitalCap) {
    const int na = (act.n_electrons + 1) / 2;
    p.fci_energy = solve_sector(act, na, act.n_electrons - na).energy;
  }
  return p;
}

VqeProblem vqe_problem(const RunConfig& cfg, const Problem& sys) {
  VqeProblem p;
  p.hamiltonian = sys.hamiltonian;
  p.circuit = build_hea({sys.hamiltonian.n_qubits(), cfg.layers}, sys.hf_bits);
  const std::uint64_t seed = cfg.seed_or_zero();
  if (cfg.shots > 0) {
    SamplingConfig s;
    s.shots = cfg.shots;
    if (cfg.noise) {
      s.noise = cfg.noise;
    } else if (cfg.readout_error) {
      s.noise = ReadoutNoiseModel::uniform(sys.hamiltonian.n_qubits(), *cfg.readout_error, *cfg.readout_error);
    }
    s.mitigation = cfg.mitigation;
    s.seed = derive_seed(seed, 1);
    s.calibration_shots = cfg.calibration_shots;
    p.sampling = s;
  }
  p.optimizer = cfg.optimizer;
  p.optimizer.spsa.seed = derive_seed(seed, 2);
  p.init = cfg.init;
  p.init_seed = derive_seed(seed, 3);
  p.restarts = cfg.restarts;
  return p;
}

Json header(const std::string& command, const RunConfig& cfg, const Problem& sys) {
  Json j;
  j["command"] = command;
  j["system"] = sys.name;
  if (!cfg.integrals.empty()) {
    j["mapping"] = to_string(cfg.mapping.kind) + (cfg.mapping.two_qubit_reduction ? "+reduction" : "");
    j["window"] = cfg.window ? Json(*cfg.window) : Json(nullptr);
  }
  j["n_qubits"] = sys.hamiltonian.n_qubits();
  j["n_terms"] = sys.hamiltonian.size();
  return j;
}

Json estimator_json(const RunConfig& cfg) {
  Json j;
  j["shots"] = cfg.shots;
  j["mitigation"] = to_string(cfg.mitigation);
  if (cfg.readout_error) j["readout_error"] = *cfg.readout_error;
  j["noise_model"] = cfg.noise.has_value();
  return j;
}

Json optimizer_json(const RunConfig& cfg) {
  Json j;
  j["kind"] = to_string(cfg.optimizer.kind);
  if (cfg.optimizer.kind == OptimizerKind::spsa) {
    j["iterations"] = cfg.optimizer.spsa.iterations;
  } else {
    j["max_iter"] = cfg.optimizer.quasi_newton.max_iter;
    j["conv_tol"] = cfg.optimizer.quasi_newton.conv_tol;
  }
  j["restarts"] = cfg.restarts;
  j["init"] = cfg.init == InitKind::zeros ? "zeros" : "random";
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

Series trace_series(const OptimizerTrace& t) {
  Series s;
  for (const auto& r : t.records) {
    s.x.push_back(static_cast<double>(r.iteration));
    s.y.push_back(r.objective);
  }
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

int cmd_vqe(const RunConfig& cfg) {
  const auto sys = load_problem(cfg);
  const double oracle = ground_state_energy(sys.hamiltonian).energy;
  const auto p = vqe_problem(cfg, sys);
  const auto r = solve(p);
  const double rel = relative_error(r.energy, oracle);

  Json j = header("vqe", cfg, sys);
  j["layers"] = cfg.layers;
  j["n_params"] = p.circuit.n_params();
  j["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  j["estimator"] = estimator_json(cfg);
  j["optimizer"] = optimizer_json(cfg);
  j["energy"] = r.energy;
  j["exact_energy"] = r.exact_energy;
  j["oracle_energy"] = oracle;
  j["relative_error"] = rel;
  j["exact_relative_error"] = relative_error(r.exact_energy, oracle);
  if (sys.hf_energy) j["hf_energy"] = *sys.hf_energy;
  if (sys.fci_energy) j["fci_energy"] = *sys.fci_energy;
  j["params"] = r.params;
  j["evaluations"] = r.evaluations;
  j["best_restart"] = r.restart;
  j["converged"] = r.converged;

  write_atomic(cfg.out / "vqe.json", dump(j));
  write_atomic(cfg.out / "trace.csv", trace_csv(r.trace, false));
  PlotSpec ps{"VQE convergence: " + sys.name, "iteration", "energy (Hartree)", oracle, "exact ground energy", false,
              false};
  write_atomic(cfg.out / "convergence.svg", svg_plot(trace_series(r.trace), ps));
  std::cout << "energy " << format_double(r.energy) << "  oracle " << format_double(oracle) << "  relative_error "
            << fmt("%.3e", rel) << '\n';
  return 0;
}

int cmd_deparam(const RunConfig& cfg) {
  const auto sys = load_problem(cfg);
  const double oracle = ground_state_energy(sys.hamiltonian).energy;
  const auto p = vqe_problem(cfg, sys);
  const auto baseline = solve(p);
  DeparamOptions o;
  o.tolerance = cfg.deparam_tolerance;
  if (!cfg.candidates.empty()) o.candidates = cfg.candidates;
  o.oracle = oracle;
  const auto rep = deparameterise(p, baseline, o);

  write_atomic(cfg.out / "deparam.txt", to_text(rep));
  write_atomic(cfg.out / "baseline_trace.csv", trace_csv(baseline.trace, false));
  const std::string pcsv = params_csv(rep), ecsv = error_csv(rep);
  write_atomic(cfg.out / "deparam_params.csv", pcsv);
  write_atomic(cfg.out / "deparam_error.csv", ecsv);

  Series params, errors;
  params.x.push_back(0);
  params.y.push_back(static_cast<double>(rep.initial_params));
  errors.x.push_back(0);
  errors.y.push_back(rep.baseline_relative_error);
  std::size_t k = 0;
  for (const auto& s : rep.steps) {
    if (!s.accepted) continue;
    ++k;
    params.x.push_back(static_cast<double>(k));
    params.y.push_back(static_cast<double>(s.params_after));
    errors.x.push_back(static_cast<double>(k));
    errors.y.push_back(s.relative_error);
  }
  write_atomic(cfg.out / "deparam_params.svg",
               svg_plot(params, {"Free parameters per step: " + sys.name, "step", "parameters", std::nullopt, "", true,
                                 true}));
  write_atomic(cfg.out / "deparam_error.svg",
               svg_plot(errors, {"Relative error per step: " + sys.name, "step", "relative error", rep.tolerance,
                                 "tolerance", false, true}));
  std::cout << "parameters " << rep.initial_params << " -> " << rep.final_params() << " in " << k
            << " accepted steps\n";
  return 0;
}

int cmd_dmet(const RunConfig& cfg) {
  if (cfg.integrals.empty()) throw ConfigError("dmet requires system.integrals");
  if (!cfg.fragments) throw ConfigError("dmet requires dmet.fragments");
  if (cfg.solvers.empty()) throw ConfigError("dmet.solvers is empty");
  const auto m = read_fcidump(cfg.integrals.string());
  try {
    cfg.fragments->validate(m.n_orbitals);
  } catch (const Error& e) {
    throw ConfigError(std::string("dmet.fragments: ") + e.what());
  }
  const auto mf = restricted_hartree_fock(m);
  std::optional<double> reference;
  if (m.n_orbitals <= kFciOrbitalCap) reference = solve_fci(m).energy;

  Json doc;
  doc["command"] = "dmet";
  doc["system"] = cfg.integrals.filename().string();
  doc["fragments"] = cfg.fragments->str();
  doc["window"] = cfg.dmet.solver.window ? Json(*cfg.dmet.solver.window) : Json(nullptr);
  doc["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  doc["hf_energy"] = mf.hf_energy;
  doc["reference_energy"] = reference ? Json(*reference) : Json(nullptr);
  doc["runs"] = Json::array();

  std::string table = "solver  energy            reference         rel_err(x1e-3)  mu            converged\n";
  std::string frag_table = "solver  fragment  orbitals  embedding  electrons     energy\n";
  bool all_converged = true;
  for (const auto kind : cfg.solvers) {
    DmetOptions o = cfg.dmet;
    o.solver.kind = kind;
    o.solver.vqe.seed = cfg.seed_or_zero();
    const auto r = run_dmet(m, mf, *cfg.fragments, o);
    all_converged = all_converged && r.converged;
    const std::string name = to_string(kind);

    Json run;
    run["solver"] = name;
    run["energy"] = r.energy;
    run["mu"] = r.mu;
    run["converged"] = r.converged;
    run["mu_iterations"] = r.trace.size();
    std::string rel_text = "-";
    if (reference) {
      const double rel = relative_error(r.energy, *reference);
      run["relative_error"] = rel;
      rel_text = fmt("%.2f", rel * 1e3);
      run["relative_error_e-3"] = rel_text;
    }
    run["fragments"] = Json::array();
    for (std::size_t f = 0; f < cfg.fragments->fragments.size(); ++f) {
      Json fr;
      fr["index"] = f;
      fr["orbitals"] = cfg.fragments->fragments[f];
      fr["embedding_orbitals"] = r.embedding_orbitals[f];
      fr["bath_orbitals"] = r.bath_orbitals[f];
      fr["electrons"] = r.fragment_electrons[f];
      fr["energy"] = r.fragment_energies[f];
      run["fragments"].push_back(fr);
      std::string orbs;
      for (auto i : cfg.fragments->fragments[f]) orbs += (orbs.empty() ? "" : ",") + std::to_string(i);
      char line[160];
      std::snprintf(line, sizeof line, "%-6s  %8zu  %8s  %9zu  %9.6f  %14.10f\n", name.c_str(), f, orbs.c_str(),
                    r.embedding_orbitals[f], r.fragment_electrons[f], r.fragment_energies[f]);
      frag_table += line;
    }
    run["notes"] = r.notes;
    doc["runs"].push_back(run);

    char line[200];
    std::snprintf(line, sizeof line, "%-6s  %16.10f  %16s  %14s  %12.8f  %s\n", name.c_str(), r.energy,
                  reference ? fmt("%.10f", *reference).c_str() : "-", rel_text.c_str(), r.mu,
                  r.converged ? "yes" : "no");
    table += line;
    write_atomic(cfg.out / ("mu_trace_" + name + ".csv"), mu_trace_csv(r));
    for (const auto& n : r.notes) std::cerr << name << ": " << n << '\n';
  }
  const std::string text = table + '\n' + frag_table;
  write_atomic(cfg.out / "dmet.json", dump(doc));
  write_atomic(cfg.out / "dmet_table.txt", text);
  std::cout << text;
  if (!all_converged) {
    std::cerr << "error: chemical potential did not converge; see the mu trace files\n";
    return 1;
  }
  return 0;
}

int cmd_resources(const RunConfig& cfg) {
  if (cfg.integrals.empty()) throw ConfigError("resources requires system.integrals");
  if (cfg.windows.empty()) throw ConfigError("resources requires resources.windows");
  const auto m = read_fcidump(cfg.integrals.string());
  const auto mf = restricted_hartree_fock(m);
  for (int k : cfg.windows) {
    if (k < 0) throw ConfigError("resources.windows: negative window " + std::to_string(k));
    const std::size_t homo = static_cast<std::size_t>(m.n_electrons / 2);
    if (homo < static_cast<std::size_t>(k) + 1 || homo + static_cast<std::size_t>(k) + 1 > m.n_orbitals) {
      throw ConfigError("resources.windows: window " + std::to_string(k) + " exceeds the " +
                        std::to_string(m.n_orbitals) + "-orbital range");
    }
  }
  const auto rows = estimate(m, mf, cfg.windows, cfg.mapping);
  const std::string table = resources_table(rows);
  write_atomic(cfg.out / "resources.txt", table);
  write_atomic(cfg.out / "resources.csv", resources_csv(rows));
  std::cout << table;
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const auto sys = load_problem(cfg);
  const auto g = ground_state_energy(sys.hamiltonian);
  Json j = header("oracle", cfg, sys);
  j["ground_energy"] = g.energy;
  if (sys.hf_energy) j["hf_energy"] = *sys.hf_energy;
  if (sys.fci_energy) j["fci_energy"] = *sys.fci_energy;
  write_atomic(cfg.out / "oracle.json", dump(j));
  std::cout << "ground_energy " << format_double(g.energy) << '\n';
  return 0;
}

}  // namespace qcarbon::cli
