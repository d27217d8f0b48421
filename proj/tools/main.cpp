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

#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace qcarbon::cli;
  CLI::App app{"qcarbon: VQE, deparameterisation, DMET and resource estimation on a statevector simulator"};
  app.require_subcommand(1);

  std::string config;
  Overrides flags;
  const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&)>>> verbs{
      {"vqe", {"Run VQE with a hardware-efficient ansatz", cmd_vqe}},
      {"deparam", {"Greedy deparameterisation after a VQE baseline", cmd_deparam}},
      {"dmet", {"One-shot DMET with exact or VQE fragment solvers", cmd_dmet}},
      {"resources", {"Qubit width and term counts per active-space window", cmd_resources}},
      {"oracle", {"Exact ground energy of the mapped Hamiltonian", cmd_oracle}},
  };
  for (const auto& [name, verb] : verbs) {
    auto* sub = app.add_subcommand(name, verb.first);
    sub->add_option("--config", config, "INI run configuration")->required();
    sub->add_option("--seed", flags.seed, "Seed for every stochastic component");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--shots", flags.shots, "Shots per measured group (0 = exact energies)");
    sub->add_option("--mitigation", flags.mitigation, "Readout mitigation")
        ->check(CLI::IsMember({"none", "m3", "trex"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(config, flags);
    return verbs.at(verb).second(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const qcarbon::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
