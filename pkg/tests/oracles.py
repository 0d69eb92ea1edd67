"""Independent reference implementations used only by the tests.

Everything here is deliberately built from a different representation than
the package under test: dense Kronecker products for Pauli labels, explicit
occupation-number ladder operators for fermions, and ODE integration for
continuum dynamics.  Slow and obvious on purpose.
"""

from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI_MATS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def dense_from_label(label: str) -> np.ndarray:
    """Kron down the label; leftmost char is the highest qubit."""
    out = np.array([[1.0 + 0.0j]])
    for ch in label:
        out = np.kron(out, PAULI_MATS[ch])
    return out


def dense_from_pairs(pairs: list[tuple[str, complex]]) -> np.ndarray:
    n = len(pairs[0][0])
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for lbl, w in pairs:
        out += w * dense_from_label(lbl)
    return out


def dense_from_sum(ps) -> np.ndarray:
    """Dense matrix of a PauliSum via labels only (ignores its to_dense)."""
    pairs = ps.sorted_labels()
    if not pairs:
        return np.zeros((2**ps.n_qubits, 2**ps.n_qubits), dtype=np.complex128)
    return dense_from_pairs(pairs)


def random_label(rng: np.random.Generator, n: int, allow_identity: bool = True) -> str:
    chars = "IXYZ" if allow_identity else "XYZ"
    while True:
        lbl = "".join(rng.choice(list(chars)) for _ in range(n))
        if allow_identity or lbl != "I" * n:
            return lbl


def random_pairs(
    rng: np.random.Generator, n: int, n_terms: int
) -> list[tuple[str, complex]]:
    labels = set()
    while len(labels) < n_terms:
        labels.add(random_label(rng, n))
    return [
        (lbl, complex(rng.normal(), rng.normal())) for lbl in sorted(labels)
    ]


# -- fermions in the occupation-number basis --------------------------------
#
# Basis state index f encodes occupations with mode k at bit k.  The sign of
# a ladder operator acting on mode k counts occupied modes below k, which
# matches a Jordan-Wigner string on lower qubits.


def creation_dense(n_modes: int, k: int) -> np.ndarray:
    dim = 1 << n_modes
    out = np.zeros((dim, dim), dtype=np.complex128)
    for f in range(dim):
        if (f >> k) & 1:
            continue
        sign = (-1.0) ** bin(f & ((1 << k) - 1)).count("1")
        out[f | (1 << k), f] = sign
    return out


def annihilation_dense(n_modes: int, k: int) -> np.ndarray:
    return creation_dense(n_modes, k).conj().T


def hamiltonian_from_integrals(h1: np.ndarray, h2: np.ndarray, e_offset: float = 0.0) -> np.ndarray:
    """H = sum h1[i,j] a_j^dag a_i + 1/2 sum h2[i,j,k,l] a_l^dag a_k^dag a_j a_i."""
    n = h1.shape[0]
    dim = 1 << n
    cre = [creation_dense(n, k) for k in range(n)]
    ann = [m.conj().T for m in cre]
    H = e_offset * np.eye(dim, dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            if h1[i, j] != 0.0:
                H += h1[i, j] * (cre[j] @ ann[i])
    nz = np.argwhere(np.abs(h2) > 0)
    for i, j, k, l in nz:
        H += 0.5 * h2[i, j, k, l] * (cre[l] @ cre[k] @ ann[j] @ ann[i])
    return H


def number_op_dense(n_modes: int, k: int) -> np.ndarray:
    dim = 1 << n_modes
    occ = (np.arange(dim) >> k) & 1
    return np.diag(occ.astype(np.complex128))


# -- exact gauge potential ---------------------------------------------------


def exact_agp_dense(h_dense: np.ndarray, dh_dense: np.ndarray, degeneracy_tol: float = 1e-9) -> np.ndarray:
    """Matrix elements i <m|dH|n> / (E_n - E_m) in the eigenbasis, m != n."""
    evals, vecs = np.linalg.eigh(h_dense)
    dh_eig = vecs.conj().T @ dh_dense @ vecs
    denom = evals[None, :] - evals[:, None]
    amp = np.zeros_like(dh_eig)
    mask = np.abs(denom) > degeneracy_tol
    amp[mask] = 1j * dh_eig[mask] / denom[mask]
    return vecs @ amp @ vecs.conj().T


def central_diff(f, x: float, h: float = 1e-5) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
