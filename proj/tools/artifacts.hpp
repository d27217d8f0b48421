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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qcarbon::cli {

/// Write via a temporary sibling and rename, creating the directory if needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Dashed horizontal reference line with its legend text.
  std::optional<double> reference;
  std::string reference_label;
  bool steps = false;
  bool markers = false;
};

/// Self-contained SVG line plot.
std::string svg_plot(const Series& s, const PlotSpec& spec);

}  // namespace qcarbon::cli
