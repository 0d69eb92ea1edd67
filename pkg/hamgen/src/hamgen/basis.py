"""Contracted Gaussian basis-set data and shell expansion.

Exponents/coefficients are the standard published STO-3G and 6-31G
parameters for the elements this generator supports.  SP shells share
exponents between their s and p contractions.  Coefficients refer to
normalized primitives; contracted functions are renormalized numerically
when integrals are formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

ATOMIC_NUMBER = {"H": 1, "Li": 3, "Be": 4, "F": 9}

# element -> list of (shell_type, [(exponent, coeff...), ...])
# shell_type "s": one coefficient per primitive; "sp": (c_s, c_p) pairs.
STO_3G = {
    "H": [
        ("s", [(3.42525091, 0.15432897), (0.62391373, 0.53532814), (0.16885540, 0.44463454)]),
    ],
    "Li": [
        ("s", [(16.1195750, 0.15432897), (2.9362007, 0.53532814), (0.7946505, 0.44463454)]),
        ("sp", [
            (0.6362897, -0.09996723, 0.15591627),
            (0.1478601, 0.39951283, 0.60768372),
            (0.0480887, 0.70011547, 0.39195739),
        ]),
    ],
    "Be": [
        ("s", [(30.1678710, 0.15432897), (5.4951153, 0.53532814), (1.4871927, 0.44463454)]),
        ("sp", [
            (1.3148331, -0.09996723, 0.15591627),
            (0.3055389, 0.39951283, 0.60768372),
            (0.0993707, 0.70011547, 0.39195739),
        ]),
    ],
    "F": [
        ("s", [(166.6791300, 0.15432897), (30.3608120, 0.53532814), (8.2168207, 0.44463454)]),
        ("sp", [
            (6.4648032, -0.09996723, 0.15591627),
            (1.5022812, 0.39951283, 0.60768372),
            (0.4885885, 0.70011547, 0.39195739),
        ]),
    ],
}

SIX_31G = {
    "H": [
        ("s", [(18.7311370, 0.03349460), (2.8253937, 0.23472695), (0.6401217, 0.81375733)]),
        ("s", [(0.1612778, 1.0)]),
    ],
    "F": [
        ("s", [
            (7001.7130900, 0.0018196169),
            (1051.3660900, 0.0139160796),
            (239.2856900, 0.0684053245),
            (67.3974453, 0.2331857601),
            (19.5244096, 0.4712674392),
            (6.1683462, 0.3566185462),
        ]),
        ("sp", [
            (26.3357492, -0.1085069750, 0.0716287243),
            (5.7257723, -0.1464516580, 0.3459121030),
            (1.5658151, 1.1286885800, 0.7224699570),
        ]),
        ("sp", [(0.3581514, 1.0, 1.0)]),
    ],
}

BASIS_SETS = {"sto-3g": STO_3G, "6-31g": SIX_31G}


@dataclass(frozen=True)
class Shell:
    """One contracted shell of pure angular momentum l on a center."""

    l: int  # 0 = s, 1 = p
    exps: tuple[float, ...]
    coeffs: tuple[float, ...]
    center: tuple[float, float, float]
    atom: int


@dataclass(frozen=True)
class BasisFunction:
    """A single cartesian AO: shell data plus powers (lx, ly, lz)."""

    lx: int
    ly: int
    lz: int
    exps: tuple[float, ...]
    coeffs: tuple[float, ...]  # normalized-contraction coefficients
    center: tuple[float, float, float]
    atom: int


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(alpha: float, lx: int, ly: int, lz: int) -> float:
    l = lx + ly + lz
    num = (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** (l / 2.0)
    den = np.sqrt(
        _double_factorial(2 * lx - 1)
        * _double_factorial(2 * ly - 1)
        * _double_factorial(2 * lz - 1)
    )
    return num / den


def _self_overlap(exps, scaled_coeffs, lx, ly, lz) -> float:
    """<f|f> for f = sum_i c_i g_i, the c_i already carrying primitive norms."""
    l = lx + ly + lz
    dfs = (
        _double_factorial(2 * lx - 1)
        * _double_factorial(2 * ly - 1)
        * _double_factorial(2 * lz - 1)
    )
    acc = 0.0
    for ci, ai in zip(scaled_coeffs, exps):
        for cj, aj in zip(scaled_coeffs, exps):
            p = ai + aj
            acc += ci * cj * dfs * (np.pi / p) ** 1.5 / (2.0 * p) ** l
    return acc


def expand_shells(shells: list[Shell]) -> list[BasisFunction]:
    """Cartesian basis functions with fully normalized contractions."""
    funcs: list[BasisFunction] = []
    for sh in shells:
        powers = [(0, 0, 0)] if sh.l == 0 else [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        for lx, ly, lz in powers:
            scaled = [
                c * primitive_norm(a, lx, ly, lz)
                for c, a in zip(sh.coeffs, sh.exps)
            ]
            self_ov = _self_overlap(sh.exps, scaled, lx, ly, lz)
            final = tuple(c / np.sqrt(self_ov) for c in scaled)
            funcs.append(
                BasisFunction(
                    lx=lx, ly=ly, lz=lz,
                    exps=sh.exps, coeffs=final,
                    center=sh.center, atom=sh.atom,
                )
            )
    return funcs


def build_shells(
    symbols: list[str], coords_bohr: np.ndarray, basis: str
) -> list[Shell]:
    try:
        table = BASIS_SETS[basis.lower()]
    except KeyError:
        raise ValueError(
            f"unknown basis {basis!r}; have {sorted(BASIS_SETS)}"
        ) from None
    shells: list[Shell] = []
    for idx, sym in enumerate(symbols):
        if sym not in table:
            raise ValueError(f"no {basis} parameters for element {sym!r}")
        center = tuple(float(v) for v in coords_bohr[idx])
        for kind, rows in table[sym]:
            exps = tuple(r[0] for r in rows)
            if kind == "s":
                shells.append(Shell(0, exps, tuple(r[1] for r in rows), center, idx))
            elif kind == "sp":
                shells.append(Shell(0, exps, tuple(r[1] for r in rows), center, idx))
                shells.append(Shell(1, exps, tuple(r[2] for r in rows), center, idx))
            else:
                raise ValueError(f"unsupported shell kind {kind!r}")
    return shells
