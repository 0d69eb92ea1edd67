"""Exact diagonalization in the fixed-particle-number occupation basis.

States are integers whose bit k is the occupation of spin orbital k.  The
Hamiltonian is applied directly from the second-quantized tensors with
explicit fermionic sign bookkeeping, so this is independent of any qubit
mapping and serves as a cross-check for mapped operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hamgen.active import ActiveSpaceProblem


def sector_states(n_spin_orbitals: int, n_electrons: int) -> np.ndarray:
    """All occupation integers with the given particle number, ascending."""
    states = np.arange(1 << n_spin_orbitals, dtype=np.uint64)
    return states[np.bitwise_count(states) == n_electrons]


def _parity_below(states: np.ndarray, k: int) -> np.ndarray:
    """(-1)^(number of set bits below position k) for each state."""
    mask = np.uint64((1 << k) - 1)
    return 1.0 - 2.0 * (np.bitwise_count(states & mask) % 2).astype(np.float64)


def build_hamiltonian(problem: ActiveSpaceProblem) -> tuple[np.ndarray, np.ndarray]:
    """Dense Hamiltonian over the particle-number sector.

    Returns (matrix, states); matrix includes e_offset on the diagonal.
    """
    n = problem.n_spin_orbitals
    states = sector_states(n, problem.n_electrons)
    dim = states.size
    h = np.zeros((dim, dim))
    occ = [((states >> np.uint64(i)) & np.uint64(1)).astype(bool) for i in range(n)]
    bit = [np.uint64(1 << i) for i in range(n)]

    # one-body: h1[i][j] a_j^dag a_i
    nz1 = np.argwhere(np.abs(problem.h1) > 1e-14)
    for i, j in nz1:
        sel = occ[i].copy()
        mid = states[sel] & ~bit[i]
        sign = _parity_below(states[sel], i)
        if i != j:
            keep = (mid & bit[j]) == 0
            mid, sign = mid[keep], sign[keep]
            src = states[sel][keep]
        else:
            src = states[sel]
        sign = sign * _parity_below(mid, j)
        dst = mid | bit[j]
        rows = np.searchsorted(states, dst)
        cols = np.searchsorted(states, src)
        np.add.at(h, (rows, cols), problem.h1[i, j] * sign)

    # two-body: 1/2 h2[i][j][k][l] a_l^dag a_k^dag a_j a_i
    nz2 = np.argwhere(np.abs(problem.h2) > 1e-14)
    for i, j, k, l in nz2:
        if i == j or k == l:
            continue
        sel = occ[i] & occ[j]
        src = states[sel]
        if src.size == 0:
            continue
        sign = _parity_below(src, i)
        s1 = src & ~bit[i]
        sign = sign * _parity_below(s1, j)
        s2 = s1 & ~bit[j]
        keep = (s2 & bit[k]) == 0
        src, sign, s2 = src[keep], sign[keep], s2[keep]
        if src.size == 0:
            continue
        sign = sign * _parity_below(s2, k)
        s3 = s2 | bit[k]
        keep = (s3 & bit[l]) == 0
        src, sign, s3 = src[keep], sign[keep], s3[keep]
        if src.size == 0:
            continue
        sign = sign * _parity_below(s3, l)
        dst = s3 | bit[l]
        rows = np.searchsorted(states, dst)
        cols = np.searchsorted(states, src)
        np.add.at(h, (rows, cols), 0.5 * problem.h2[i, j, k, l] * sign)

    h += problem.e_offset * np.eye(dim)
    return h, states


@dataclass
class FCIResult:
    energy: float
    vector: np.ndarray
    states: np.ndarray  # occupation integers indexing the vector


def fci_ground(problem: ActiveSpaceProblem) -> FCIResult:
    h, states = build_hamiltonian(problem)
    asym = float(np.abs(h - h.T).max())
    if asym > 1e-9:
        raise RuntimeError(f"sector Hamiltonian not symmetric (max dev {asym:.2e})")
    vals, vecs = np.linalg.eigh(0.5 * (h + h.T))
    return FCIResult(energy=float(vals[0]), vector=vecs[:, 0], states=states)
