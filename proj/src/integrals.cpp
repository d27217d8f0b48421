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

#include "qcarbon/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qcarbon/error.hpp"
#include "qcarbon/pauli.hpp"

namespace qcarbon {

void TwoBodyTensor::set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
                                  double v) {
  auto& t = *this;
  t(p, q, r, s) = v;
  t(q, p, r, s) = v;
  t(p, q, s, r) = v;
  t(q, p, s, r) = v;
  t(r, s, p, q) = v;
  t(s, r, p, q) = v;
  t(r, s, q, p) = v;
  t(s, r, q, p) = v;
}

void MolecularIntegrals::validate(double tol) const {
  const auto n = n_orbitals;
  if (one_body.rows() != static_cast<Eigen::Index>(n) || one_body.cols() != static_cast<Eigen::Index>(n)) {
    throw ParseError("one-body block has wrong shape");
  }
  if (two_body.dim() != n) throw ParseError("two-body block has wrong shape");
  if (n_electrons <= 0 || n_electrons > static_cast<int>(2 * n)) {
    throw ParseError("electron count " + std::to_string(n_electrons) + " invalid for " +
                     std::to_string(n) + " orbitals");
  }
  if ((one_body - one_body.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw ParseError("one-body integrals are not symmetric");
  }
  const auto& g = two_body;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = g(p, q, r, s);
          if (std::abs(v - g(q, p, r, s)) > tol || std::abs(v - g(p, q, s, r)) > tol ||
              std::abs(v - g(r, s, p, q)) > tol) {
            throw ParseError("two-body integrals break 8-fold permutational symmetry");
          }
        }
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double parse_fortran_double(std::string tok) {
  for (auto& c : tok) {
    if (c == 'D' || c == 'd') c = 'E';
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("invalid FCIDUMP value '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("invalid FCIDUMP value '" + tok + "'");
  return v;
}

long parse_index(const std::string& tok) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("invalid FCIDUMP index '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("invalid FCIDUMP index '" + tok + "'");
  return v;
}

}  // namespace

MolecularIntegrals parse_fcidump(std::istream& in) {
  // Header: everything up to a line holding '/' or '&END'.
  std::string header;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    const std::string u = upper(line);
    auto end_pos = u.find("&END");
    if (end_pos == std::string::npos) end_pos = u.find('/');
    if (end_pos != std::string::npos) {
      header += ' ' + u.substr(0, end_pos);
      header_done = true;
      break;
    }
    header += ' ' + u;
  }
  if (!header_done) throw ParseError("FCIDUMP header not terminated by '/' or '&END'");
  const auto fci = header.find("&FCI");
  if (fci == std::string::npos) throw ParseError("FCIDUMP header missing '&FCI'");
  header = header.substr(fci + 4);
  for (auto& c : header) {
    if (c == ',') c = ' ';
  }

  std::map<std::string, long> keys;
  {
    std::istringstream hs(header);
    std::string tok;
    std::string pending;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        if (!pending.empty()) {
          keys[pending] = parse_index(tok);
          pending.clear();
        }
        continue;
      }
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (val.empty()) {
        pending = key;
      } else {
        keys[key] = parse_index(val);
        pending.clear();
      }
    }
  }
  if (!keys.count("NORB") || !keys.count("NELEC")) {
    throw ParseError("FCIDUMP header must define NORB and NELEC");
  }
  if (keys["NORB"] <= 0) throw ParseError("FCIDUMP NORB must be positive");

  MolecularIntegrals m;
  m.n_orbitals = static_cast<std::size_t>(keys["NORB"]);
  m.n_electrons = static_cast<int>(keys["NELEC"]);
  const auto n = m.n_orbitals;
  m.one_body = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.two_body = TwoBodyTensor(n);

  std::map<std::array<long, 4>, double> seen;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tv, ti, tj, tk, tl;
    if (!(ls >> tv)) continue;
    std::string extra;
    if (!(ls >> ti >> tj >> tk >> tl) || (ls >> extra)) {
      throw ParseError("FCIDUMP record " + std::to_string(lineno) + ": expected 'value i j k l'");
    }
    const double v = parse_fortran_double(tv);
    long i = parse_index(ti), j = parse_index(tj), k = parse_index(tk), l = parse_index(tl);
    for (long idx : {i, j, k, l}) {
      if (idx < 0 || idx > static_cast<long>(n)) {
        throw ParseError("FCIDUMP record " + std::to_string(lineno) + ": index " +
                         std::to_string(idx) + " out of range 0.." + std::to_string(n));
      }
    }
    // Canonical key over the permutational symmetry of each record type.
    std::array<long, 4> key{};
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      key = {0, 0, 0, 0};
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) {
        throw ParseError("FCIDUMP record " + std::to_string(lineno) + ": one-body record with zero index");
      }
      key = {std::max(i, j), std::min(i, j), 0, 0};
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) {
        throw ParseError("FCIDUMP record " + std::to_string(lineno) +
                         ": unsupported index pattern (orbital energies are not accepted)");
      }
      std::array<long, 2> a{std::max(i, j), std::min(i, j)};
      std::array<long, 2> b{std::max(k, l), std::min(k, l)};
      if (a < b) std::swap(a, b);
      key = {a[0], a[1], b[0], b[1]};
    }
    auto [it, inserted] = seen.emplace(key, v);
    if (!inserted) {
      if (std::abs(it->second - v) > 1e-12) {
        throw ParseError("FCIDUMP record " + std::to_string(lineno) + ": conflicting duplicate of an earlier integral");
      }
      continue;
    }
    if (key[0] == 0) {
      m.core_energy = v;
    } else if (key[2] == 0) {
      const auto p = static_cast<Eigen::Index>(i - 1), q = static_cast<Eigen::Index>(j - 1);
      m.one_body(p, q) = v;
      m.one_body(q, p) = v;
    } else {
      m.two_body.set_symmetric(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                               static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l - 1), v);
    }
  }
  m.validate();
  return m;
}

MolecularIntegrals parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

MolecularIntegrals read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP file " + path);
  return parse_fcidump(in);
}

std::string to_fcidump(const MolecularIntegrals& m) {
  const auto n = m.n_orbitals;
  std::ostringstream out;
  out << "&FCI NORB=" << n << ",NELEC=" << m.n_electrons << ",MS2=0,\n";
  out << "  ORBSYM=";
  for (std::size_t i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n&END\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = m.two_body(i, j, k, l);
          if (v == 0.0) continue;
          out << format_double(v) << ' ' << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << l + 1 << '\n';
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = m.one_body(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v == 0.0) continue;
      out << format_double(v) << ' ' << i + 1 << ' ' << j + 1 << " 0 0\n";
    }
  out << format_double(m.core_energy) << " 0 0 0 0\n";
  return out.str();
}

Eigen::MatrixXd coulomb_exchange(const TwoBodyTensor& eri, const Eigen::MatrixXd& density) {
  const auto n = eri.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double d = density(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
          acc += d * (eri(p, q, r, s) - 0.5 * eri(p, r, s, q));
        }
      g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = acc;
    }
  return g;
}

MolecularIntegrals rotate(const MolecularIntegrals& m, const Eigen::MatrixXd& c) {
  const auto n = m.n_orbitals;
  if (c.rows() != static_cast<Eigen::Index>(n)) throw Error("rotation matrix has wrong row count");
  const auto k = static_cast<std::size_t>(c.cols());
  MolecularIntegrals out;
  out.n_orbitals = k;
  out.n_electrons = m.n_electrons;
  out.core_energy = m.core_energy;
  out.one_body = c.transpose() * m.one_body * c;
  out.one_body = 0.5 * (out.one_body + out.one_body.transpose()).eval();

  // Four quarter transformations, one index at a time.
  std::vector<double> t1(k * n * n * n, 0.0), t2(k * k * n * n, 0.0), t3(k * k * k * n, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t p = 0; p < n; ++p) {
      const double cpa = c(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a));
      if (cpa == 0.0) continue;
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) t1[((a * n + q) * n + r) * n + s] += cpa * m.two_body(p, q, r, s);
    }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t q = 0; q < n; ++q) {
        const double cqb = c(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(b));
        if (cqb == 0.0) continue;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) t2[((a * k + b) * n + r) * n + s] += cqb * t1[((a * n + q) * n + r) * n + s];
      }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t cc = 0; cc < k; ++cc)
        for (std::size_t r = 0; r < n; ++r) {
          const double crc = c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cc));
          if (crc == 0.0) continue;
          for (std::size_t s = 0; s < n; ++s) t3[((a * k + b) * k + cc) * n + s] += crc * t2[((a * k + b) * n + r) * n + s];
        }
  out.two_body = TwoBodyTensor(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t cc = 0; cc < k; ++cc)
        for (std::size_t d = 0; d < k; ++d) {
          double acc = 0.0;
          for (std::size_t s = 0; s < n; ++s) acc += c(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(d)) * t3[((a * k + b) * k + cc) * n + s];
          out.two_body(a, b, cc, d) = acc;
        }
  // Restore exact permutational symmetry lost to rounding.
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      for (std::size_t cc = 0; cc < k; ++cc)
        for (std::size_t d = 0; d <= cc; ++d) {
          if (a * (a + 1) / 2 + b < cc * (cc + 1) / 2 + d) continue;
          const auto& g = out.two_body;
          const double avg = (g(a, b, cc, d) + g(b, a, cc, d) + g(a, b, d, cc) + g(b, a, d, cc) +
                              g(cc, d, a, b) + g(d, cc, a, b) + g(cc, d, b, a) + g(d, cc, b, a)) / 8.0;
          out.two_body.set_symmetric(a, b, cc, d, avg);
        }
  return out;
}

double mean_field_energy(const MolecularIntegrals& m, const Eigen::MatrixXd& density) {
  const Eigen::MatrixXd g = coulomb_exchange(m.two_body, density);
  return m.core_energy + (density.array() * m.one_body.array()).sum() +
         0.5 * (density.array() * g.array()).sum();
}

namespace {

Eigen::MatrixXd aufbau_density(const Eigen::MatrixXd& coeffs, int n_occ) {
  const auto occ = coeffs.leftCols(n_occ);
  return 2.0 * occ * occ.transpose();
}

}  // namespace

MeanField restricted_hartree_fock(const MolecularIntegrals& m, const ScfOptions& opts) {
  if (m.n_electrons % 2 != 0) {
    throw Error("restricted Hartree-Fock needs an even electron count, got " + std::to_string(m.n_electrons));
  }
  const int n_occ = m.n_electrons / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.one_body);
  Eigen::MatrixXd density = aufbau_density(es.eigenvectors(), n_occ);

  MeanField mf;
  double change = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Eigen::MatrixXd fock = m.one_body + coulomb_exchange(m.two_body, density);
    es.compute(fock);
    const Eigen::MatrixXd built = aufbau_density(es.eigenvectors(), n_occ);
    change = (built - density).norm();
    mf.iterations = iter;
    if (change < opts.conv_tol) {
      mf.orbital_coeffs = es.eigenvectors();
      mf.orbital_energies = es.eigenvalues();
      mf.density = built;
      mf.hf_energy = mean_field_energy(m, built);
      mf.energy_trace.push_back(mf.hf_energy);
      return mf;
    }
    density = (1.0 - opts.damping) * built + opts.damping * density;
    mf.energy_trace.push_back(mean_field_energy(m, density));
  }
  throw ConvergenceError("RHF did not converge in " + std::to_string(opts.max_iter) +
                         " iterations (last density change " + format_double(change) + ")");
}

ActiveSpace active_space(const MolecularIntegrals& m, const MeanField& mf, std::optional<int> window) {
  const auto n = m.n_orbitals;
  if (m.n_electrons % 2 != 0) throw Error("active space selection needs a closed-shell reference");
  const auto n_occ = static_cast<std::size_t>(m.n_electrons / 2);

  std::size_t lo = 0;
  std::size_t hi = n;  // exclusive
  ActiveSpace out;
  if (window) {
    const int k = *window;
    if (k < 0) throw Error("active-space window must be non-negative");
    if (n_occ == 0 || n_occ >= n) throw Error("active-space window needs both a HOMO and a LUMO");
    const auto ku = static_cast<std::size_t>(k);
    if (ku + 1 > n_occ || n_occ + ku + 1 > n) {
      throw Error("window " + std::to_string(k) + " (HOMO-" + std::to_string(k) + " .. LUMO+" +
                  std::to_string(k) + ") exceeds the " + std::to_string(n) + "-orbital range");
    }
    lo = n_occ - 1 - ku;
    hi = n_occ + ku + 1;
  }

  const auto& eps = mf.orbital_energies;
  const double degen_tol = 1e-8;
  if (lo > 0 && std::abs(eps(static_cast<Eigen::Index>(lo)) - eps(static_cast<Eigen::Index>(lo - 1))) < degen_tol) {
    out.info.warnings.push_back("orbitals " + std::to_string(lo - 1) + " and " + std::to_string(lo) +
                                " are degenerate at the lower window boundary");
  }
  if (hi < n && std::abs(eps(static_cast<Eigen::Index>(hi)) - eps(static_cast<Eigen::Index>(hi - 1))) < degen_tol) {
    out.info.warnings.push_back("orbitals " + std::to_string(hi - 1) + " and " + std::to_string(hi) +
                                " are degenerate at the upper window boundary");
  }

  const MolecularIntegrals mo = rotate(m, mf.orbital_coeffs);
  for (std::size_t i = 0; i < lo; ++i) out.info.frozen_occupied.push_back(i);
  for (std::size_t i = lo; i < hi; ++i) out.info.active.push_back(i);
  for (std::size_t i = hi; i < n; ++i) out.info.frozen_virtual.push_back(i);

  double e_frozen = 0.0;
  for (auto i : out.info.frozen_occupied) {
    e_frozen += 2.0 * mo.one_body(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    for (auto j : out.info.frozen_occupied) {
      e_frozen += 2.0 * mo.two_body(i, i, j, j) - mo.two_body(i, j, j, i);
    }
  }
  out.info.frozen_energy = e_frozen;

  const std::size_t na = hi - lo;
  MolecularIntegrals& act = out.integrals;
  act.n_orbitals = na;
  act.n_electrons = m.n_electrons - 2 * static_cast<int>(lo);
  act.core_energy = m.core_energy + e_frozen;
  act.one_body.resize(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
  act.two_body = TwoBodyTensor(na);
  for (std::size_t p = 0; p < na; ++p)
    for (std::size_t q = 0; q < na; ++q) {
      double h = mo.one_body(static_cast<Eigen::Index>(p + lo), static_cast<Eigen::Index>(q + lo));
      for (auto i : out.info.frozen_occupied) {
        h += 2.0 * mo.two_body(p + lo, q + lo, i, i) - mo.two_body(p + lo, i, i, q + lo);
      }
      act.one_body(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = h;
      for (std::size_t r = 0; r < na; ++r)
        for (std::size_t s = 0; s < na; ++s) act.two_body(p, q, r, s) = mo.two_body(p + lo, q + lo, r + lo, s + lo);
    }
  return out;
}

}  // namespace qcarbon
