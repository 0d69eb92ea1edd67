"""One- and two-electron integrals over contracted cartesian Gaussians.

Hermite-Gaussian (McMurchie-Davidson) scheme: products of two Gaussians are
expanded in Hermite functions via the E recurrence; Coulomb-type integrals
contract those expansions with Hermite Coulomb integrals R built on the Boys
function.  Only s and p shells are needed here, so all loops are short.
"""

from __future__ import annotations

import numpy as np
from scipy.special import hyp1f1

from hamgen.basis import BasisFunction


def boys(m: int, x: float) -> float:
    return float(hyp1f1(m + 0.5, m + 1.5, -x)) / (2.0 * m + 1.0)


def hermite_e(i: int, j: int, t: int, q: float, a: float, b: float) -> float:
    """Expansion coefficient E_t^{ij} for exponents a, b and A_x - B_x = q."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return float(np.exp(-mu * q * q))
    if j == 0:
        # decrement i
        return (
            hermite_e(i - 1, j, t - 1, q, a, b) / (2.0 * p)
            - (b * q / p) * hermite_e(i - 1, j, t, q, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, q, a, b)
        )
    return (
        hermite_e(i, j - 1, t - 1, q, a, b) / (2.0 * p)
        + (a * q / p) * hermite_e(i, j - 1, t, q, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, q, a, b)
    )


def hermite_coulomb(t: int, u: int, v: int, n: int, p: float, pc: np.ndarray) -> float:
    """R^n_{tuv}(p, P - C) by downward recursion onto the Boys function."""
    if t < 0 or u < 0 or v < 0:
        return 0.0
    if t == u == v == 0:
        r2 = float(pc @ pc)
        return (-2.0 * p) ** n * boys(n, p * r2)
    if t > 0:
        return (t - 1) * hermite_coulomb(
            t - 2, u, v, n + 1, p, pc
        ) + pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc)
    if u > 0:
        return (u - 1) * hermite_coulomb(
            t, u - 2, v, n + 1, p, pc
        ) + pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc)
    return (v - 1) * hermite_coulomb(
        t, u, v - 2, n + 1, p, pc
    ) + pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc)


def _overlap_prim(a, la, A, b, lb, B) -> float:
    p = a + b
    out = (np.pi / p) ** 1.5
    for d in range(3):
        out *= hermite_e(la[d], lb[d], 0, A[d] - B[d], a, b)
    return float(out)


def _kinetic_prim(a, la, A, b, lb, B) -> float:
    # T = sum_d t_d * prod_{e != d} s_e with the 1D kinetic factor over d
    s = [hermite_e(la[d], lb[d], 0, A[d] - B[d], a, b) for d in range(3)]

    def s_shift(d, db):
        j = lb[d] + db
        if j < 0:
            return 0.0
        return hermite_e(la[d], j, 0, A[d] - B[d], a, b)

    total = 0.0
    for d in range(3):
        j = lb[d]
        t_d = b * (2 * j + 1) * s[d] - 2.0 * b * b * s_shift(d, 2)
        if j >= 2:
            t_d -= 0.5 * j * (j - 1) * s_shift(d, -2)
        prod = t_d
        for e in range(3):
            if e != d:
                prod *= s[e]
        total += prod
    p = a + b
    return float(total * (np.pi / p) ** 1.5)


def _nuclear_prim(a, la, A, b, lb, B, charges, centers) -> float:
    p = a + b
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    ex = [
        [hermite_e(la[d], lb[d], t, A[d] - B[d], a, b) for t in range(la[d] + lb[d] + 1)]
        for d in range(3)
    ]
    total = 0.0
    for z, c in zip(charges, centers):
        pc = P - np.asarray(c)
        acc = 0.0
        for t in range(la[0] + lb[0] + 1):
            for u in range(la[1] + lb[1] + 1):
                for v in range(la[2] + lb[2] + 1):
                    acc += (
                        ex[0][t] * ex[1][u] * ex[2][v]
                        * hermite_coulomb(t, u, v, 0, p, pc)
                    )
        total -= z * acc
    return float(total * 2.0 * np.pi / p)


def _pairs(f1: BasisFunction, f2: BasisFunction):
    """Primitive pair data: (c1*c2, a, b) with exponents kept separate."""
    for c1, a in zip(f1.coeffs, f1.exps):
        for c2, b in zip(f2.coeffs, f2.exps):
            yield c1 * c2, a, b


def overlap_matrix(funcs: list[BasisFunction]) -> np.ndarray:
    n = len(funcs)
    out = np.zeros((n, n))
    for i in range(n):
        fi = funcs[i]
        la = (fi.lx, fi.ly, fi.lz)
        for j in range(i, n):
            fj = funcs[j]
            lb = (fj.lx, fj.ly, fj.lz)
            acc = 0.0
            for cc, a, b in _pairs(fi, fj):
                acc += cc * _overlap_prim(a, la, fi.center, b, lb, fj.center)
            out[i, j] = out[j, i] = acc
    return out


def kinetic_matrix(funcs: list[BasisFunction]) -> np.ndarray:
    n = len(funcs)
    out = np.zeros((n, n))
    for i in range(n):
        fi = funcs[i]
        la = (fi.lx, fi.ly, fi.lz)
        for j in range(i, n):
            fj = funcs[j]
            lb = (fj.lx, fj.ly, fj.lz)
            acc = 0.0
            for cc, a, b in _pairs(fi, fj):
                acc += cc * _kinetic_prim(a, la, fi.center, b, lb, fj.center)
            out[i, j] = out[j, i] = acc
    return out


def nuclear_matrix(
    funcs: list[BasisFunction], charges: list[float], centers: np.ndarray
) -> np.ndarray:
    n = len(funcs)
    out = np.zeros((n, n))
    for i in range(n):
        fi = funcs[i]
        la = (fi.lx, fi.ly, fi.lz)
        for j in range(i, n):
            fj = funcs[j]
            lb = (fj.lx, fj.ly, fj.lz)
            acc = 0.0
            for cc, a, b in _pairs(fi, fj):
                acc += cc * _nuclear_prim(
                    a, la, fi.center, b, lb, fj.center, charges, centers
                )
            out[i, j] = out[j, i] = acc
    return out


class _HermiteExpansion:
    """Per function-pair primitive expansion, cached for the ERI loops."""

    __slots__ = ("coefs", "ps", "centers", "ranges")

    def __init__(self, f1: BasisFunction, f2: BasisFunction):
        la = (f1.lx, f1.ly, f1.lz)
        lb = (f2.lx, f2.ly, f2.lz)
        A, B = np.asarray(f1.center), np.asarray(f2.center)
        self.ranges = tuple(la[d] + lb[d] + 1 for d in range(3))
        self.coefs = []
        self.ps = []
        self.centers = []
        for cc, a, b in _pairs(f1, f2):
            p = a + b
            P = (a * A + b * B) / p
            e = np.zeros(self.ranges)
            for t in range(self.ranges[0]):
                et = hermite_e(la[0], lb[0], t, A[0] - B[0], a, b)
                for u in range(self.ranges[1]):
                    eu = hermite_e(la[1], lb[1], u, A[1] - B[1], a, b)
                    for v in range(self.ranges[2]):
                        ev = hermite_e(la[2], lb[2], v, A[2] - B[2], a, b)
                        e[t, u, v] = et * eu * ev
            self.coefs.append(cc * e)
            self.ps.append(p)
            self.centers.append(P)


def eri_tensor(funcs: list[BasisFunction]) -> np.ndarray:
    """Chemist-notation (ij|kl) with full 8-fold symmetry filled in."""
    n = len(funcs)
    out = np.zeros((n, n, n, n))
    expansions: dict[tuple[int, int], _HermiteExpansion] = {}

    def expansion(i, j):
        key = (i, j)
        if key not in expansions:
            expansions[key] = _HermiteExpansion(funcs[i], funcs[j])
        return expansions[key]

    pair_list = [(i, j) for i in range(n) for j in range(i, n)]
    for pi, (i, j) in enumerate(pair_list):
        bra = expansion(i, j)
        for k, l in pair_list[pi:]:
            ket = expansion(k, l)
            val = _eri_contracted(bra, ket)
            for a, b in ((i, j), (j, i)):
                for c, d in ((k, l), (l, k)):
                    out[a, b, c, d] = out[c, d, a, b] = val
    return out


def _eri_contracted(bra: _HermiteExpansion, ket: _HermiteExpansion) -> float:
    total = 0.0
    r1, r2 = bra.ranges, ket.ranges
    for e1, p, P in zip(bra.coefs, bra.ps, bra.centers):
        for e2, q, Q in zip(ket.coefs, ket.ps, ket.centers):
            alpha = p * q / (p + q)
            pq = P - Q
            pref = 2.0 * np.pi**2.5 / (p * q * np.sqrt(p + q))
            acc = 0.0
            for t in range(r1[0]):
                for u in range(r1[1]):
                    for v in range(r1[2]):
                        c1 = e1[t, u, v]
                        if c1 == 0.0:
                            continue
                        for tt in range(r2[0]):
                            for uu in range(r2[1]):
                                for vv in range(r2[2]):
                                    c2 = e2[tt, uu, vv]
                                    if c2 == 0.0:
                                        continue
                                    sign = -1.0 if (tt + uu + vv) % 2 else 1.0
                                    acc += (
                                        c1 * c2 * sign
                                        * hermite_coulomb(
                                            t + tt, u + uu, v + vv, 0, alpha, pq
                                        )
                                    )
            total += pref * acc
    return total


def nuclear_repulsion(charges: list[float], centers: np.ndarray) -> float:
    e = 0.0
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            r = float(np.linalg.norm(centers[i] - centers[j]))
            e += charges[i] * charges[j] / r
    return e
