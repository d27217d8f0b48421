#!/usr/bin/env python3
# Copyright 2026 The qcarbon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generate the integral fixtures under tests/fixtures.

This is a self-contained reference path, independent of the C++ library:
STO-3G hydrogen integrals from closed-form s-Gaussian expressions, Lowdin
orthogonalisation, a plain RHF loop and a determinant-space FCI. The HF and
FCI energies are stored next to each FCIDUMP in a JSON metadata file.
"""

import itertools
import json
import math
import os
import sys

import numpy as np
from scipy.special import erf

STO3G_H_EXP = np.array([3.42525091, 0.62391373, 0.16885540])
STO3G_H_COEF = np.array([0.15432897, 0.53532814, 0.44463454])


def boys0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * erf(math.sqrt(t))


def prim_norm(a):
    return (2.0 * a / math.pi) ** 0.75


def ao_integrals(coords):
    """Overlap, core Hamiltonian and ERI over one STO-3G 1s per hydrogen."""
    n = len(coords)
    coords = np.asarray(coords, dtype=float)
    prims = [(STO3G_H_EXP, STO3G_H_COEF * prim_norm(STO3G_H_EXP), c) for c in coords]
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        ea, ca, A = prims[i]
        eb, cb, B = prims[j]
        ab2 = np.sum((A - B) ** 2)
        for a, da in zip(ea, ca):
            for b, db in zip(eb, cb):
                p = a + b
                mu = a * b / p
                P = (a * A + b * B) / p
                s = (math.pi / p) ** 1.5 * math.exp(-mu * ab2)
                S[i, j] += da * db * s
                T[i, j] += da * db * mu * (3.0 - 2.0 * mu * ab2) * s
                for C in coords:
                    pc2 = np.sum((P - C) ** 2)
                    V[i, j] -= da * db * 2.0 * math.pi / p * math.exp(-mu * ab2) * boys0(p * pc2)
    eri = np.zeros((n, n, n, n))
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if eri[i, j, k, l] != 0.0:
            continue
        ea, ca, A = prims[i]
        eb, cb, B = prims[j]
        ec, cc, C = prims[k]
        ed, cd, D = prims[l]
        val = 0.0
        for a, da in zip(ea, ca):
            for b, db in zip(eb, cb):
                p = a + b
                P = (a * A + b * B) / p
                kab = math.exp(-a * b / p * np.sum((A - B) ** 2))
                for c, dc in zip(ec, cc):
                    for d, dd in zip(ed, cd):
                        q = c + d
                        Q = (c * C + d * D) / q
                        kcd = math.exp(-c * d / q * np.sum((C - D) ** 2))
                        pre = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
                        val += da * db * dc * dd * pre * kab * kcd * boys0(p * q / (p + q) * np.sum((P - Q) ** 2))
        for (x, y, z, w) in {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                             (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}:
            eri[x, y, z, w] = val
    enuc = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            enuc += 1.0 / np.linalg.norm(coords[a] - coords[b])
    return S, T + V, eri, enuc


def lowdin(S, h, eri):
    w, U = np.linalg.eigh(S)
    X = U @ np.diag(w ** -0.5) @ U.T
    h2 = X.T @ h @ X
    g2 = np.einsum("pi,qj,rk,sl,pqrs->ijkl", X, X, X, X, eri, optimize=True)
    return symmetrize(h2, g2)


def symmetrize(h, g):
    h = 0.5 * (h + h.T)
    g = (g + g.transpose(1, 0, 2, 3) + g.transpose(0, 1, 3, 2) + g.transpose(1, 0, 3, 2)) / 4.0
    g = 0.5 * (g + g.transpose(2, 3, 0, 1))
    return h, g


def rhf(h, eri, nelec, enuc, tol=1e-12, max_iter=500):
    nocc = nelec // 2
    _, C = np.linalg.eigh(h)
    D = 2.0 * C[:, :nocc] @ C[:, :nocc].T
    e_old = None
    for _ in range(max_iter):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = h + J - 0.5 * K
        _, C = np.linalg.eigh(F)
        Dn = 2.0 * C[:, :nocc] @ C[:, :nocc].T
        J = np.einsum("pqrs,rs->pq", eri, Dn)
        K = np.einsum("prqs,rs->pq", eri, Dn)
        e = enuc + np.sum(Dn * h) + 0.5 * np.sum(Dn * (J - 0.5 * K))
        if e_old is not None and abs(e - e_old) < tol and np.linalg.norm(Dn - D) < 1e-10:
            return e
        e_old = e
        D = Dn
    raise RuntimeError("reference RHF did not converge")


def apply_excitation(det, ops):
    """Apply a product of fermionic operators (rightmost first). Returns (sign, det) or None."""
    sign = 1
    for idx, create in reversed(ops):
        occ = (det >> idx) & 1
        if create and occ:
            return None
        if not create and not occ:
            return None
        if bin(det & ((1 << idx) - 1)).count("1") % 2:
            sign = -sign
        det ^= 1 << idx
    return sign, det


def fci(h, eri, nelec, enuc):
    """Ground energy in the fixed-N, Sz=0 sector over interleaved spin orbitals."""
    n = h.shape[0]
    nso = 2 * n
    na = nb = nelec // 2
    dets = []
    for occ in itertools.combinations(range(nso), nelec):
        a = sum(1 for o in occ if o % 2 == 0)
        if a == na and nelec - a == nb:
            dets.append(sum(1 << o for o in occ))
    index = {d: i for i, d in enumerate(dets)}
    H = np.zeros((len(dets), len(dets)))
    for col, det in enumerate(dets):
        H[col, col] += enuc
        for P, Q in itertools.product(range(nso), repeat=2):
            if P % 2 != Q % 2:
                continue
            v = h[P // 2, Q // 2]
            if v == 0.0:
                continue
            r = apply_excitation(det, [(P, True), (Q, False)])
            if r:
                H[index[r[1]], col] += r[0] * v
        for P, Q, R, S in itertools.product(range(nso), repeat=4):
            if P % 2 != Q % 2 or R % 2 != S % 2:
                continue
            v = eri[P // 2, Q // 2, R // 2, S // 2]
            if v == 0.0:
                continue
            r = apply_excitation(det, [(P, True), (R, True), (S, False), (Q, False)])
            if r:
                H[index[r[1]], col] += 0.5 * r[0] * v
    return float(np.linalg.eigvalsh(H)[0])


def write_fcidump(path, h, eri, nelec, enuc):
    n = h.shape[0]
    lines = ["&FCI NORB=%d,NELEC=%d,MS2=0," % (n, nelec),
             "  ORBSYM=" + ",".join(["1"] * n) + ",",
             "  ISYM=1,",
             "&END"]
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    v = eri[i, j, k, l]
                    if abs(v) > 1e-14:
                        lines.append("%s %d %d %d %d" % (repr(float(v)), i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if abs(h[i, j]) > 1e-14:
                lines.append("%s %d %d 0 0" % (repr(float(h[i, j])), i + 1, j + 1))
    lines.append("%s 0 0 0 0" % repr(float(enuc)))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def emit(outdir, name, h, eri, nelec, enuc, meta, with_fci=True):
    write_fcidump(os.path.join(outdir, name + ".fcidump"), h, eri, nelec, enuc)
    # Re-read the rounded values the FCIDUMP actually contains.
    meta = dict(meta)
    meta["n_orbitals"] = int(h.shape[0])
    meta["n_electrons"] = int(nelec)
    meta["hf_energy"] = rhf(h, eri, nelec, enuc)
    if with_fci:
        meta["fci_energy"] = fci(h, eri, nelec, enuc)
    with open(os.path.join(outdir, name + ".json"), "w") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    print(name, meta.get("hf_energy"), meta.get("fci_energy"))


def hydrogen_chain(n, spacing):
    coords = [[0.0, 0.0, spacing * i] for i in range(n)]
    S, h, eri, enuc = ao_integrals(coords)
    h, eri = lowdin(S, h, eri)
    return h, eri, enuc


def hubbard_chain(n, t, u):
    h = np.zeros((n, n))
    for i in range(n - 1):
        h[i, i + 1] = h[i + 1, i] = -t
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        eri[i, i, i, i] = u
    return h, eri


def five_qubit_chain(path):
    # Transverse-field Ising chain with site-dependent longitudinal fields.
    fields = [0.9, -0.6, 0.7, -0.8, 0.5]
    terms = []
    for i, f in enumerate(fields):
        w = ["I"] * 5
        w[i] = "Z"
        terms.append((f, "".join(w)))
    for i in range(4):
        w = ["I"] * 5
        w[i] = w[i + 1] = "Z"
        terms.append((0.4, "".join(w)))
    for i in range(5):
        w = ["I"] * 5
        w[i] = "X"
        terms.append((0.15, "".join(w)))
    terms.append((-1.0, "IIIII"))
    with open(path, "w") as f:
        f.write("nqubits=5\n")
        for c, w in sorted(terms, key=lambda t: t[1]):
            f.write("%s 0 %s\n" % (repr(c), w))


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")
    os.makedirs(outdir, exist_ok=True)

    h, eri, enuc = hydrogen_chain(2, 1.4)
    emit(outdir, "h2", h, eri, 2, enuc,
         {"system": "H2", "basis": "STO-3G, Lowdin-orthogonalised", "bond_bohr": 1.4})

    h, eri, enuc = hydrogen_chain(4, 1.8)
    emit(outdir, "h4_chain", h, eri, 4, enuc,
         {"system": "linear H4", "basis": "STO-3G, Lowdin-orthogonalised", "spacing_bohr": 1.8})

    h, eri = hubbard_chain(4, 1.0, 4.0)
    emit(outdir, "hubbard4", h, eri, 4, 0.0,
         {"system": "open 4-site Hubbard chain", "t": 1.0, "U": 4.0})

    h, eri, enuc = hydrogen_chain(10, 1.8)
    emit(outdir, "h10_chain", h, eri, 10, enuc,
         {"system": "linear H10", "basis": "STO-3G, Lowdin-orthogonalised", "spacing_bohr": 1.8},
         with_fci=False)

    five_qubit_chain(os.path.join(outdir, "ising5.ham"))


if __name__ == "__main__":
    main()
