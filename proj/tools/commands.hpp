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

#include "config.hpp"

namespace qcarbon::cli {

// Each returns the process exit status; artifacts go under cfg.out.
int cmd_vqe(const RunConfig& cfg);
int cmd_deparam(const RunConfig& cfg);
int cmd_dmet(const RunConfig& cfg);
int cmd_resources(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);

}  // namespace qcarbon::cli
