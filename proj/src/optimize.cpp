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

#include "qcarbon/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "qcarbon/error.hpp"
#include "qcarbon/pauli.hpp"

namespace qcarbon {

std::string trace_csv(const OptimizerTrace& trace, bool with_params) {
  std::string out = "iteration,objective";
  const std::size_t np = with_params && !trace.records.empty() ? trace.records.front().params.size() : 0;
  for (std::size_t i = 0; i < np; ++i) out += ",p" + std::to_string(i);
  out += '\n';
  for (const auto& r : trace.records) {
    out += std::to_string(r.iteration) + ',' + format_double(r.objective);
    for (std::size_t i = 0; i < np && i < r.params.size(); ++i) out += ',' + format_double(r.params[i]);
    out += '\n';
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

class Counted {
 public:
  explicit Counted(const Objective& f) : f_(f) {}
  double operator()(std::span<const double> x, std::size_t iteration) {
    ++count;
    const double v = f_(x);
    if (!std::isfinite(v)) {
      throw Error("objective returned a non-finite value at iteration " + std::to_string(iteration));
    }
    return v;
  }
  std::size_t count = 0;

 private:
  const Objective& f_;
};

void record(OptimizerTrace& t, std::size_t it, double value, const std::vector<double>& x, Clock::time_point& last) {
  const auto now = Clock::now();
  const double best = t.records.empty() ? value : std::min(t.records.back().best, value);
  t.records.push_back({it, value, best, x, std::chrono::duration<double>(now - last).count()});
  last = now;
}

}  // namespace

OptimizeResult spsa(const Objective& f, std::vector<double> theta, const SpsaConfig& cfg) {
  if (cfg.iterations < 1) throw Error("SPSA needs at least one iteration");
  if (!(cfg.c > 0.0)) throw Error("SPSA perturbation scale c must be positive");
  if (theta.empty()) throw Error("SPSA needs at least one parameter");
  const std::size_t n = theta.size();
  const double A = cfg.A.value_or(static_cast<double>(cfg.iterations) / 10.0);

  std::mt19937_64 rng(cfg.seed);
  auto rademacher = [&rng, n]() {
    std::vector<double> d(n);
    for (auto& v : d) v = (rng() >> 63) ? 1.0 : -1.0;
    return d;
  };
  Counted eval(f);
  std::vector<double> plus(n), minus(n);
  auto probe = [&](const std::vector<double>& x, const std::vector<double>& delta, double ck, std::size_t it) {
    for (std::size_t i = 0; i < n; ++i) {
      plus[i] = x[i] + ck * delta[i];
      minus[i] = x[i] - ck * delta[i];
    }
    return eval(plus, it) - eval(minus, it);
  };

  double a = 0.0;
  if (cfg.a) {
    a = *cfg.a;
  } else {
    double magnitude = 0.0;
    const std::size_t samples = std::max<std::size_t>(1, cfg.calibration_samples);
    for (std::size_t s = 0; s < samples; ++s) {
      magnitude += std::abs(probe(theta, rademacher(), cfg.c, 0)) / (2.0 * cfg.c);
    }
    magnitude /= static_cast<double>(samples);
    a = cfg.target_step * std::pow(1.0 + A, cfg.alpha) / (magnitude > 0.0 ? magnitude : 1.0);
  }

  OptimizeResult res;
  auto last = Clock::now();
  double value = eval(theta, 0);
  record(res.trace, 0, value, theta, last);
  res.params = theta;
  res.value = value;

  for (std::size_t k = 0; k < cfg.iterations; ++k) {
    const double ak = a / std::pow(static_cast<double>(k) + 1.0 + A, cfg.alpha);
    const double ck = cfg.c / std::pow(static_cast<double>(k) + 1.0, cfg.gamma);
    const auto delta = rademacher();
    const double diff = probe(theta, delta, ck, k + 1);
    for (std::size_t i = 0; i < n; ++i) theta[i] -= ak * diff / (2.0 * ck) * delta[i];
    value = eval(theta, k + 1);
    record(res.trace, k + 1, value, theta, last);
    if (value < res.value) {
      res.value = value;
      res.params = theta;
    }
  }
  res.evaluations = eval.count;
  res.converged = true;
  return res;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

OptimizeResult bounded_quasi_newton(const Objective& f, std::vector<double> x, const QuasiNewtonConfig& cfg) {
  const std::size_t n = x.size();
  if (!cfg.bounds.empty() && cfg.bounds.size() != n) throw Error("bounds length does not match parameter count");
  if (!(cfg.grad_step > 0.0)) throw Error("gradient step must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(n, -inf), hi(n, inf);
  for (std::size_t i = 0; i < cfg.bounds.size(); ++i) {
    lo[i] = cfg.bounds[i].first;
    hi[i] = cfg.bounds[i].second;
    if (lo[i] > hi[i]) throw Error("bound " + std::to_string(i) + " has lower > upper");
    if (x[i] < lo[i] || x[i] > hi[i]) throw Error("initial parameter " + std::to_string(i) + " lies outside its bounds");
  }
  auto project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
  };

  Counted eval(f);
  std::size_t iteration = 0;
  auto gradient = [&](const std::vector<double>& at) {
    std::vector<double> g(n), probe = at;
    for (std::size_t i = 0; i < n; ++i) {
      const double up = std::min(at[i] + cfg.grad_step, hi[i]);
      const double dn = std::max(at[i] - cfg.grad_step, lo[i]);
      probe[i] = up;
      const double fu = eval(probe, iteration);
      probe[i] = dn;
      const double fd = eval(probe, iteration);
      probe[i] = at[i];
      g[i] = (up > dn) ? (fu - fd) / (up - dn) : 0.0;
    }
    return g;
  };
  // Components pinned at a bound with the gradient pushing outward.
  auto free_mask = [&](const std::vector<double>& at, const std::vector<double>& g) {
    std::vector<bool> free(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      if ((at[i] <= lo[i] && g[i] > 0.0) || (at[i] >= hi[i] && g[i] < 0.0)) free[i] = false;
    }
    return free;
  };
  auto projected_grad_norm = [&](const std::vector<double>& at, const std::vector<double>& g) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = std::clamp(at[i] - g[i], lo[i], hi[i]) - at[i];
      m = std::max(m, std::abs(step));
    }
    return m;
  };

  OptimizeResult res;
  auto last = Clock::now();
  double fx = eval(x, 0);
  record(res.trace, 0, fx, x, last);
  if (n == 0) {
    res.params = x;
    res.value = fx;
    res.converged = true;
    res.evaluations = eval.count;
    return res;
  }
  std::vector<double> g = gradient(x);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;

  bool converged = false;
  while (iteration < cfg.max_iter) {
    if (projected_grad_norm(x, g) < cfg.conv_tol) {
      converged = true;
      break;
    }
    const auto free = free_mask(x, g);
    // Two-loop recursion on the free subspace.
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
    std::vector<double> alphas(memory.size());
    for (std::size_t j = memory.size(); j-- > 0;) {
      const auto& [s, y] = memory[j];
      alphas[j] = dot(s, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alphas[j] * y[i];
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      const double scale = dot(s, y) / dot(y, y);
      for (auto& v : q) v *= scale;
    }
    for (std::size_t j = 0; j < memory.size(); ++j) {
      const auto& [s, y] = memory[j];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) q[i] += s[i] * (alphas[j] - beta);
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -q[i] : 0.0;
    if (dot(d, g) >= 0.0) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -g[i] : 0.0;
    }

    ++iteration;
    // Projected backtracking (Armijo) line search.
    double step = 1.0;
    if (memory.empty()) {
      double dn = 0.0;
      for (double v : d) dn = std::max(dn, std::abs(v));
      if (dn > 1.0) step = 1.0 / dn;
    }
    std::vector<double> xn(n);
    double fn = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + step * d[i];
      project(xn);
      fn = eval(xn, iteration);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xn[i] - x[i]);
      if (fn <= fx + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (memory.empty()) {
        converged = true;  // no descent available at finite-difference resolution
        --iteration;
        break;
      }
      memory.clear();
      --iteration;
      continue;
    }
    const std::vector<double> gn = gradient(xn);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    if (dot(s, y) > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      memory.emplace_back(std::move(s), std::move(y));
      if (memory.size() > cfg.memory) memory.pop_front();
    }
    const double change = std::abs(fx - fn);
    x = xn;
    fx = fn;
    g = gn;
    record(res.trace, iteration, fx, x, last);
    if (change < cfg.conv_tol) {
      converged = true;
      break;
    }
  }
  res.params = x;
  res.value = fx;
  res.converged = converged;
  res.evaluations = eval.count;
  return res;
}

}  // namespace qcarbon
