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

#include "artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qcarbon/error.hpp"

namespace qcarbon::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 90, kRight = 20, kTop = 40, kBottom = 55;

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo, hi;
  void pad() {
    if (hi - lo < 1e-12) {
      const double d = std::max(std::abs(lo) * 0.05, 1e-6);
      lo -= d;
      hi += d;
    } else {
      const double d = 0.05 * (hi - lo);
      lo -= d;
      hi += d;
    }
  }
};

}  // namespace

std::string svg_plot(const Series& s, const PlotSpec& spec) {
  if (s.x.size() != s.y.size()) throw Error("plot series lengths differ");
  Range xr{0.0, 1.0}, yr{0.0, 1.0};
  if (!s.x.empty()) {
    xr = {*std::min_element(s.x.begin(), s.x.end()), *std::max_element(s.x.begin(), s.x.end())};
    yr = {*std::min_element(s.y.begin(), s.y.end()), *std::max_element(s.y.begin(), s.y.end())};
  }
  if (spec.reference) {
    yr.lo = std::min(yr.lo, *spec.reference);
    yr.hi = std::max(yr.hi, *spec.reference);
  }
  if (xr.hi - xr.lo < 1e-12) xr.hi = xr.lo + 1.0;
  yr.pad();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") + "\" height=\"" +
                    num(kHeight, "%.0f") + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(spec.title) +
         "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    out += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
           num(fx, "%.4g") + "</text>\n";
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(fy) + 4) + "\" text-anchor=\"end\">" + num(fy, "%.6g") +
           "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  out += "<text transform=\"translate(16 " + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(spec.y_label) + "</text>\n";

  if (spec.reference) {
    const double y = py(*spec.reference);
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(y) +
           "\" stroke=\"firebrick\" stroke-dasharray=\"6 4\"/>\n";
    out += "<text x=\"" + num(kLeft + pw - 4) + "\" y=\"" + num(y - 5) +
           "\" text-anchor=\"end\" fill=\"firebrick\">" + escape(spec.reference_label) + "</text>\n";
  }

  if (!s.x.empty()) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.steps && i > 0) pts += num(px(s.x[i])) + ',' + num(py(s.y[i - 1])) + ' ';
      pts += num(px(s.x[i])) + ',' + num(py(s.y[i])) + ' ';
    }
    pts.pop_back();
    out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    if (spec.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"3\" fill=\"steelblue\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qcarbon::cli
