"""Molecular problem input: integral files, Jordan-Wigner mapping, reference
states, and the interpolation schedule.

Two JSON file formats are understood.  ``integrals.v1`` carries spin-orbital
integrals defining

    H = e_offset + sum_ij h1[i][j] a_j^dag a_i
        + 1/2 sum_ijkl h2[i][j][k][l] a_l^dag a_k^dag a_j a_i

with mode k mapped to qubit k.  ``pauli.v1`` carries an already-mapped qubit
operator together with the reference occupation.  ``e_offset`` is a scalar
(nuclear repulsion plus any frozen-core energy) added to reported energies,
never to the operator itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from cdadapt.pauli import PauliSum, PauliTerm, mul

ORDERINGS = ("alpha_beta", "beta_alpha", "interleaved")


class ProblemFormatError(ValueError):
    """Malformed or inconsistent problem file."""


class ScheduleRangeError(ValueError):
    """Schedule evaluated outside [0, T]."""


@dataclass
class IntegralsFile:
    n_spin_orbitals: int
    n_electrons: int
    h1: np.ndarray
    h2: np.ndarray
    e_offset: float = 0.0
    ordering: str = "alpha_beta"
    metadata: dict[str, Any] = field(default_factory=dict)

    def validate(self, tol: float = 1e-8) -> None:
        n = self.n_spin_orbitals
        if n < 1:
            raise ProblemFormatError("n_spin_orbitals must be positive")
        if not 0 < self.n_electrons <= n:
            raise ProblemFormatError(
                f"n_electrons={self.n_electrons} out of range for {n} spin orbitals"
            )
        if self.ordering not in ORDERINGS:
            raise ProblemFormatError(f"unknown ordering {self.ordering!r}")
        if self.h1.shape != (n, n):
            raise ProblemFormatError(f"h1 shape {self.h1.shape}, expected {(n, n)}")
        if self.h2.shape != (n, n, n, n):
            raise ProblemFormatError(f"h2 shape {self.h2.shape}, expected 4d")
        if not np.allclose(self.h1, self.h1.T.conj(), atol=tol):
            raise ProblemFormatError("h1 is not Hermitian")
        # particle-exchange symmetry of the two-body integrand
        if not np.allclose(self.h2, self.h2.transpose(1, 0, 3, 2), atol=tol):
            raise ProblemFormatError("h2 violates particle-exchange symmetry")
        # real orbitals: conjugation symmetry
        if not np.allclose(self.h2, self.h2.transpose(3, 2, 1, 0).conj(), atol=tol):
            raise ProblemFormatError("h2 violates conjugation symmetry")


@dataclass
class MolecularProblem:
    h_f: PauliSum
    hf_bits: str
    n_electrons: int
    e_offset: float = 0.0
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return self.h_f.n_qubits

    def validate(self) -> None:
        if len(self.hf_bits) != self.n_qubits:
            raise ProblemFormatError(
                f"hf_bits length {len(self.hf_bits)} != n_qubits {self.n_qubits}"
            )
        if set(self.hf_bits) - {"0", "1"}:
            raise ProblemFormatError(f"bad hf_bits {self.hf_bits!r}")
        if self.hf_bits.count("1") != self.n_electrons:
            raise ProblemFormatError(
                f"hf_bits occupation {self.hf_bits.count('1')} != "
                f"n_electrons {self.n_electrons}"
            )


# -- Jordan-Wigner ---------------------------------------------------------


@lru_cache(maxsize=256)
def jw_creation(n_qubits: int, k: int) -> PauliSum:
    """a_k^dag = (X_k - i Y_k)/2 times Z on all lower qubits."""
    if not 0 <= k < n_qubits:
        raise ValueError(f"mode {k} out of range for {n_qubits} qubits")
    zstr = (1 << k) - 1
    x = 1 << k
    return PauliSum(
        n_qubits,
        {(x, zstr): 0.5 + 0.0j, (x, zstr | x): -0.5j},
    )


def jw_annihilation(n_qubits: int, k: int) -> PauliSum:
    return jw_creation(n_qubits, k).dagger()


def jw_map(ints: IntegralsFile, threshold: float = 1e-12) -> PauliSum:
    """Map the integral operator (without e_offset) to qubits."""
    ints.validate()
    n = ints.n_spin_orbitals
    cre = [jw_creation(n, k) for k in range(n)]
    ann = [jw_annihilation(n, k) for k in range(n)]
    acc: dict[tuple[int, int], complex] = {}

    def add(op: PauliSum, scale: complex) -> None:
        for key, w in op.raw_items():
            acc[key] = acc.get(key, 0.0 + 0.0j) + scale * w

    for i, j in np.argwhere(np.abs(ints.h1) > 0.0):
        add(mul(cre[j], ann[i]), complex(ints.h1[i, j]))
    pair_cache: dict[tuple[int, int], PauliSum] = {}
    for i, j, k, l in np.argwhere(np.abs(ints.h2) > 0.0):
        key = (int(l), int(k))
        left = pair_cache.get(key)
        if left is None:
            left = mul(cre[l], cre[k])
            pair_cache[key] = left
        add(mul(left, mul(ann[j], ann[i])), 0.5 * complex(ints.h2[i, j, k, l]))
    return PauliSum(n, acc).simplify(threshold)


def hartree_fock_state(
    n_qubits: int, n_electrons: int, ordering: str = "alpha_beta"
) -> str:
    """Reference occupation bitstring in text order (qubit 0 rightmost).

    Spatial orbitals are filled from the bottom; for odd electron counts the
    first spin block receives the extra electron.
    """
    if ordering not in ORDERINGS:
        raise ValueError(f"unknown ordering {ordering!r}")
    if n_qubits % 2:
        raise ValueError("spin-orbital count must be even")
    if not 0 < n_electrons <= n_qubits:
        raise ValueError(f"n_electrons={n_electrons} out of range")
    m = n_qubits // 2
    n_a = (n_electrons + 1) // 2
    n_b = n_electrons - n_a
    if n_a > m or n_b > m:
        raise ValueError("more electrons of one spin than spatial orbitals")
    occ = 0
    if ordering == "alpha_beta":
        for i in range(n_a):
            occ |= 1 << i
        for i in range(n_b):
            occ |= 1 << (m + i)
    elif ordering == "beta_alpha":
        for i in range(n_b):
            occ |= 1 << i
        for i in range(n_a):
            occ |= 1 << (m + i)
    else:  # interleaved
        for i in range(n_a):
            occ |= 1 << (2 * i)
        for i in range(n_b):
            occ |= 1 << (2 * i + 1)
    return format(occ, f"0{n_qubits}b")


def occupied_qubits(bits: str) -> list[int]:
    n = len(bits)
    return [n - 1 - pos for pos, ch in enumerate(bits) if ch == "1"]


def build_initial_hamiltonian(bits: str) -> PauliSum:
    """Sum of single Z's whose unique ground state is the given bitstring.

    Occupied qubits get +Z (so the occupied |1> is locally lowest),
    unoccupied get -Z; the reference energy is -n_qubits and the gap is 2.
    """
    n = len(bits)
    if n == 0 or set(bits) - {"0", "1"}:
        raise ValueError(f"bad bitstring {bits!r}")
    occ = set(occupied_qubits(bits))
    pairs = []
    for k in range(n):
        sign = 1.0 if k in occ else -1.0
        pairs.append((PauliTerm.single(n, "Z", k), complex(sign)))
    return PauliSum.from_terms(n, pairs)


def build_adiabatic(h_i: PauliSum, h_f: PauliSum, lam: float) -> PauliSum:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1]")
    return ((1.0 - lam) * h_i + lam * h_f).simplify()


# -- schedule --------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Nested-sine ramp lambda(t) = sin^2(pi/2 sin^2(pi t / 2T)) on [0, T]."""

    T: float = 1.0

    def __post_init__(self) -> None:
        if self.T <= 0.0:
            raise ValueError(f"T must be positive, got {self.T}")


def schedule_eval(s: Schedule, t: float) -> tuple[float, float]:
    """(lambda, dlambda/dt) at time t; t must lie in [0, T]."""
    if t < -1e-12 or t > s.T + 1e-12:
        raise ScheduleRangeError(f"t={t} outside [0, {s.T}]")
    t = min(max(t, 0.0), s.T)
    u = math.pi * t / (2.0 * s.T)
    inner = math.sin(u) ** 2
    lam = math.sin(0.5 * math.pi * inner) ** 2
    dlam = (
        (math.pi**2 / (4.0 * s.T))
        * math.sin(math.pi * inner)
        * math.sin(math.pi * t / s.T)
    )
    return lam, dlam


# -- file I/O --------------------------------------------------------------


def _load_json(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"{path}: not valid JSON ({exc})") from exc


def load_integrals(path: str) -> IntegralsFile:
    payload = _load_json(path)
    if payload.get("schema") != "integrals.v1":
        raise ProblemFormatError(
            f"{path}: schema {payload.get('schema')!r}, expected 'integrals.v1'"
        )
    try:
        ints = IntegralsFile(
            n_spin_orbitals=int(payload["n_spin_orbitals"]),
            n_electrons=int(payload["n_electrons"]),
            h1=np.asarray(payload["h1"], dtype=np.float64),
            h2=np.asarray(payload["h2"], dtype=np.float64),
            e_offset=float(payload.get("e_offset", 0.0)),
            ordering=payload.get("ordering", "alpha_beta"),
            metadata=payload.get("metadata", {}),
        )
    except KeyError as exc:
        raise ProblemFormatError(f"{path}: missing field {exc}") from exc
    ints.validate()
    return ints


def load_problem(path: str, fmt: str | None = None) -> MolecularProblem:
    """Read either file format into a qubit-space problem."""
    payload = _load_json(path)
    schema = fmt or payload.get("schema")
    if schema == "integrals.v1":
        ints = load_integrals(path)
        h_f = jw_map(ints)
        bits = hartree_fock_state(ints.n_spin_orbitals, ints.n_electrons, ints.ordering)
        meta = dict(ints.metadata)
        meta.setdefault("ordering", ints.ordering)
        prob = MolecularProblem(
            h_f=h_f,
            hf_bits=bits,
            n_electrons=ints.n_electrons,
            e_offset=ints.e_offset,
            metadata=meta,
        )
    elif schema == "pauli.v1":
        try:
            n = int(payload["n_qubits"])
            h_f = PauliSum.from_json_terms(n, payload["terms"])
            prob = MolecularProblem(
                h_f=h_f,
                hf_bits=payload["hf_bits"],
                n_electrons=int(payload["n_electrons"]),
                e_offset=float(payload.get("e_offset", 0.0)),
                metadata=payload.get("metadata", {}),
            )
        except KeyError as exc:
            raise ProblemFormatError(f"{path}: missing field {exc}") from exc
    else:
        raise ProblemFormatError(f"{path}: unknown schema {schema!r}")
    prob.validate()
    return prob


def dump_problem(prob: MolecularProblem, path: str) -> None:
    """Write a pauli.v1 file."""
    payload = {
        "schema": "pauli.v1",
        "n_qubits": prob.n_qubits,
        "n_electrons": prob.n_electrons,
        "hf_bits": prob.hf_bits,
        "e_offset": prob.e_offset,
        "terms": prob.h_f.to_json_terms(),
        "metadata": prob.metadata,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
