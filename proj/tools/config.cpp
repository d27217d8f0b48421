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

#include "config.hpp"

#include <charconv>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qcarbon/estimator.hpp"

namespace qcarbon::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

bool RunConfig::stochastic() const {
  const bool random_starts = init == InitKind::random || restarts > 1;
  const bool vqe_fragments =
      std::find(solvers.begin(), solvers.end(), FragmentSolverKind::vqe) != solvers.end() && fragments.has_value();
  return shots > 0 || optimizer.kind == OptimizerKind::spsa || random_starts || vqe_fragments;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"system", {"integrals", "hamiltonian", "window"}},
      {"mapping", {"kind", "two_qubit_reduction"}},
      {"ansatz", {"layers", "init", "restarts"}},
      {"optimizer", {"kind", "iterations", "a", "c", "A", "alpha", "gamma", "target_step", "max_iter", "conv_tol",
                     "grad_step", "memory"}},
      {"estimator", {"shots", "noise", "readout_error", "mitigation", "calibration_shots"}},
      {"run", {"seed", "out"}},
      {"deparam", {"tolerance", "candidates"}},
      {"dmet", {"fragments", "solvers", "window", "mu_tol", "max_iter", "mu0", "layers", "restarts", "penalty",
                "number_tol"}},
      {"resources", {"windows"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const std::string t = trim(text);
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) {
    throw ConfigError("invalid value '" + text + "' for " + key);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key);
}

class Reader {
 public:
  Reader(const pt::ptree& tree, fs::path base) : tree_(tree), base_(std::move(base)) {}

  std::optional<std::string> str(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return trim(*v);
    return std::nullopt;
  }
  template <typename T>
  std::optional<T> num(const std::string& key) const {
    if (auto v = str(key)) return parse_number<T>(key, *v);
    return std::nullopt;
  }
  std::optional<bool> flag(const std::string& key) const {
    if (auto v = str(key)) return parse_bool(key, *v);
    return std::nullopt;
  }
  std::optional<fs::path> input(const std::string& key) const {
    auto v = str(key);
    if (!v) return std::nullopt;
    fs::path p = base_ / *v;
    if (!fs::exists(p)) throw ConfigError(key + ": file not found: " + p.string());
    return p.lexically_normal();
  }
  const fs::path& base() const { return base_; }

 private:
  const pt::ptree& tree_;
  fs::path base_;
};

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown config section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

template <typename F>
auto translate(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

RunConfig load_config(const fs::path& path, const Overrides& flags) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  check_schema(tree);
  const Reader r(tree, path.parent_path());
  RunConfig c;

  if (auto p = r.input("system.integrals")) c.integrals = *p;
  if (auto p = r.input("system.hamiltonian")) c.hamiltonian = *p;
  if (!c.integrals.empty() && !c.hamiltonian.empty()) {
    throw ConfigError("set only one of system.integrals and system.hamiltonian");
  }
  if (c.integrals.empty() && c.hamiltonian.empty()) {
    throw ConfigError("one of system.integrals or system.hamiltonian is required");
  }
  c.window = r.num<int>("system.window");

  if (auto v = r.str("mapping.kind")) c.mapping.kind = translate([&] { return mapping_kind_from_string(*v); });
  if (auto v = r.flag("mapping.two_qubit_reduction")) c.mapping.two_qubit_reduction = *v;

  if (auto v = r.num<std::size_t>("ansatz.layers")) c.layers = *v;
  if (auto v = r.str("ansatz.init")) {
    if (*v == "zeros") {
      c.init = InitKind::zeros;
    } else if (*v == "random") {
      c.init = InitKind::random;
    } else {
      throw ConfigError("ansatz.init must be zeros or random, got '" + *v + "'");
    }
  }
  if (auto v = r.num<std::size_t>("ansatz.restarts")) c.restarts = *v;
  if (c.restarts == 0) throw ConfigError("ansatz.restarts must be at least 1");

  auto& opt = c.optimizer;
  if (auto v = r.str("optimizer.kind")) opt.kind = translate([&] { return optimizer_from_string(*v); });
  if (auto v = r.num<std::size_t>("optimizer.iterations")) opt.spsa.iterations = *v;
  opt.spsa.a = r.num<double>("optimizer.a");
  if (auto v = r.num<double>("optimizer.c")) opt.spsa.c = *v;
  opt.spsa.A = r.num<double>("optimizer.A");
  if (auto v = r.num<double>("optimizer.alpha")) opt.spsa.alpha = *v;
  if (auto v = r.num<double>("optimizer.gamma")) opt.spsa.gamma = *v;
  if (auto v = r.num<double>("optimizer.target_step")) opt.spsa.target_step = *v;
  if (auto v = r.num<std::size_t>("optimizer.max_iter")) opt.quasi_newton.max_iter = *v;
  if (auto v = r.num<double>("optimizer.conv_tol")) opt.quasi_newton.conv_tol = *v;
  if (auto v = r.num<double>("optimizer.grad_step")) opt.quasi_newton.grad_step = *v;
  if (auto v = r.num<std::size_t>("optimizer.memory")) opt.quasi_newton.memory = *v;

  if (auto v = r.num<std::uint64_t>("estimator.shots")) c.shots = *v;
  if (auto p = r.input("estimator.noise")) c.noise = translate([&] { return read_noise_model(p->string()); });
  c.readout_error = r.num<double>("estimator.readout_error");
  if (c.noise && c.readout_error) throw ConfigError("set only one of estimator.noise and estimator.readout_error");
  if (c.readout_error && (*c.readout_error < 0.0 || *c.readout_error > 0.5)) {
    throw ConfigError("estimator.readout_error must lie in [0, 0.5]");
  }
  if (auto v = r.str("estimator.mitigation")) c.mitigation = translate([&] { return mitigation_from_string(*v); });
  if (auto v = r.num<std::uint64_t>("estimator.calibration_shots")) c.calibration_shots = *v;

  c.seed = r.num<std::uint64_t>("run.seed");
  if (auto v = r.str("run.out")) c.out = r.base() / *v;

  if (auto v = r.num<double>("deparam.tolerance")) c.deparam_tolerance = *v;
  if (auto v = r.str("deparam.candidates")) {
    for (const auto& s : split(*v, ',')) c.candidates.push_back(parse_number<double>("deparam.candidates", s));
  }

  if (auto v = r.str("dmet.fragments")) c.fragments = translate([&] { return Fragmentation::parse(*v); });
  if (auto v = r.str("dmet.solvers")) {
    c.solvers.clear();
    for (const auto& s : split(*v, ',')) c.solvers.push_back(translate([&] { return fragment_solver_from_string(s); }));
  }
  auto& d = c.dmet;
  d.solver.window = r.num<int>("dmet.window");
  if (auto v = r.num<double>("dmet.mu_tol")) d.mu_tol = *v;
  if (auto v = r.num<std::size_t>("dmet.max_iter")) d.max_iter = *v;
  if (auto v = r.num<double>("dmet.mu0")) d.mu0 = *v;
  if (auto v = r.num<std::size_t>("dmet.layers")) d.solver.vqe.layers = *v;
  if (auto v = r.num<std::size_t>("dmet.restarts")) d.solver.vqe.restarts = *v;
  if (auto v = r.num<double>("dmet.penalty")) d.solver.vqe.penalty = *v;
  if (auto v = r.num<double>("dmet.number_tol")) d.solver.vqe.number_tol = *v;

  if (auto v = r.str("resources.windows")) {
    for (const auto& s : split(*v, ',')) c.windows.push_back(parse_number<int>("resources.windows", s));
  }

  if (flags.seed) c.seed = flags.seed;
  if (flags.out) c.out = *flags.out;
  if (flags.shots) c.shots = *flags.shots;
  if (flags.mitigation) c.mitigation = translate([&] { return mitigation_from_string(*flags.mitigation); });

  if (c.mitigation != MitigationKind::none && c.shots == 0) {
    throw ConfigError("mitigation '" + to_string(c.mitigation) + "' requires estimator.shots > 0");
  }
  if (c.stochastic() && !c.seed) throw ConfigError("a seed is required (run.seed or --seed) for stochastic runs");
  return c;
}

}  // namespace qcarbon::cli
