"""Jordan-Wigner mapping of the spin-orbital tensors to Pauli strings.

Operators are dicts mapping label strings to complex weights.  Labels follow
text order: the character at position p addresses qubit n_qubits - 1 - p, so
qubit 0 (spin orbital 0) is the rightmost character.  Implemented over plain
strings on purpose, as an independent cross-check of bit-packed algebras.
"""

from __future__ import annotations

import numpy as np

from hamgen.active import ActiveSpaceProblem, hf_occupation

# single-qubit products: (left, right) -> (phase, result)
_PROD = {
    ("I", "I"): (1.0, "I"),
    ("I", "X"): (1.0, "X"),
    ("I", "Y"): (1.0, "Y"),
    ("I", "Z"): (1.0, "Z"),
    ("X", "I"): (1.0, "X"),
    ("Y", "I"): (1.0, "Y"),
    ("Z", "I"): (1.0, "Z"),
    ("X", "X"): (1.0, "I"),
    ("Y", "Y"): (1.0, "I"),
    ("Z", "Z"): (1.0, "I"),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

PauliDict = dict[str, complex]


def multiply(a: PauliDict, b: PauliDict) -> PauliDict:
    out: PauliDict = {}
    for la, wa in a.items():
        for lb, wb in b.items():
            phase = wa * wb
            chars = []
            for ca, cb in zip(la, lb):
                ph, cr = _PROD[(ca, cb)]
                phase *= ph
                chars.append(cr)
            label = "".join(chars)
            out[label] = out.get(label, 0.0) + phase
    return {l: w for l, w in out.items() if w != 0.0}


def add_into(acc: PauliDict, other: PauliDict, scale: complex = 1.0) -> None:
    for l, w in other.items():
        acc[l] = acc.get(l, 0.0) + scale * w


def creation(k: int, n_qubits: int) -> PauliDict:
    """a_k^dag = (X_k - i Y_k)/2 with Z on every lower qubit."""
    left = "I" * (n_qubits - 1 - k)
    z_tail = "Z" * k
    return {left + "X" + z_tail: 0.5, left + "Y" + z_tail: -0.5j}


def annihilation(k: int, n_qubits: int) -> PauliDict:
    left = "I" * (n_qubits - 1 - k)
    z_tail = "Z" * k
    return {left + "X" + z_tail: 0.5, left + "Y" + z_tail: 0.5j}


def map_problem(problem: ActiveSpaceProblem, threshold: float = 1e-12) -> PauliDict:
    """Qubit operator for the tensors (e_offset not folded in)."""
    n = problem.n_spin_orbitals
    acc: PauliDict = {}
    cre = [creation(k, n) for k in range(n)]
    ann = [annihilation(k, n) for k in range(n)]

    for i, j in np.argwhere(np.abs(problem.h1) > threshold):
        add_into(acc, multiply(cre[j], ann[i]), problem.h1[i, j])
    for i, j, k, l in np.argwhere(np.abs(problem.h2) > threshold):
        if i == j or k == l:
            continue
        term = multiply(multiply(cre[l], cre[k]), multiply(ann[j], ann[i]))
        add_into(acc, term, 0.5 * problem.h2[i, j, k, l])
    return {l: w for l, w in acc.items() if abs(w) > threshold}


def hf_bits(problem: ActiveSpaceProblem) -> str:
    occ = set(hf_occupation(problem.n_spin_orbitals, problem.n_electrons))
    n = problem.n_spin_orbitals
    return "".join("1" if (n - 1 - p) in occ else "0" for p in range(n))


_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(op: PauliDict, n_qubits: int) -> np.ndarray:
    """Full matrix; leftmost label character is the highest qubit."""
    out = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=complex)
    for label, w in op.items():
        m = np.eye(1, dtype=complex)
        for ch in label:
            m = np.kron(m, _MATS[ch])
        out += w * m
    return out


def diagonal_expectation(op: PauliDict, bits: str) -> complex:
    """<bits|op|bits>: only I/Z strings contribute; Z gives -1 on occupied."""
    total = 0.0 + 0.0j
    for label, w in op.items():
        if set(label) - {"I", "Z"}:
            continue
        sign = 1.0
        for ch, b in zip(label, bits):
            if ch == "Z" and b == "1":
                sign = -sign
        total += w * sign
    return total
