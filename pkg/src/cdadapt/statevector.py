"""Dense statevector simulation specialised to Pauli-string generators.

States are plain complex128 numpy arrays of length ``2**n`` indexed so that
bit ``k`` of the basis index is the occupation of qubit ``k``.  Applying a
canonical string P(x, z) permutes amplitudes by XOR with ``x`` and scales
them by cached diagonal signs, so H|psi> and exp(-i theta P)|psi> never
materialize a matrix.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from cdadapt.pauli import (
    DenseLimitError,
    PauliSum,
    PauliTerm,
    _I4,
    _popcount,
    dense_limit,
)


def n_qubits_of(psi: np.ndarray) -> int:
    n = int(psi.shape[0]).bit_length() - 1
    if 1 << n != psi.shape[0]:
        raise ValueError(f"statevector length {psi.shape[0]} is not a power of two")
    return n


def prepare_basis(bits: str | int, n_qubits: int | None = None) -> np.ndarray:
    """Computational basis state.  String input uses text order, i.e. the
    leftmost character is the highest qubit."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"bad bitstring {bits!r}")
        if n_qubits is None:
            n_qubits = len(bits)
        elif n_qubits != len(bits):
            raise ValueError(f"bitstring {bits!r} does not match n_qubits={n_qubits}")
        index = int(bits, 2) if bits else 0
    else:
        if n_qubits is None:
            raise ValueError("integer basis index needs an explicit n_qubits")
        index = int(bits)
    if not 0 <= index < (1 << n_qubits):
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    psi = np.zeros(1 << n_qubits, dtype=np.complex128)
    psi[index] = 1.0
    return psi


@lru_cache(maxsize=2048)
def _term_arrays(n: int, x: int, z: int):
    """(phase, signs, perm) with P(x,z)|j> = phase * signs[j] * |j ^ x>."""
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1).astype(np.float64)
    perm = idx ^ x
    phase = _I4[_popcount(x & z) % 4]
    signs.setflags(write=False)
    perm.setflags(write=False)
    return phase, signs, perm


def apply_pauli_term(psi: np.ndarray, term: PauliTerm) -> np.ndarray:
    n = n_qubits_of(psi)
    if n != term.n_qubits:
        raise ValueError(f"state on {n} qubits, term on {term.n_qubits}")
    phase, signs, perm = _term_arrays(n, term.x, term.z)
    return (phase * signs * psi)[perm]


def _exp_single(psi: np.ndarray, n: int, x: int, z: int, theta: float) -> np.ndarray:
    # exp(-i theta P) = cos(theta) I - i sin(theta) P  since P^2 = I
    phase, signs, perm = _term_arrays(n, x, z)
    return math.cos(theta) * psi + (-1j * math.sin(theta) * phase) * (signs * psi)[perm]


def apply_pauli_exp(
    psi: np.ndarray, gen: PauliTerm | PauliSum, theta: float, sign: float = -1.0
) -> np.ndarray:
    """exp(sign * i * theta * G)|psi> for G a string or a real-weighted sum
    of mutually commuting strings (factors applied in sorted label order)."""
    n = n_qubits_of(psi)
    t = -sign * theta  # internal formula is exp(-i t P)
    if isinstance(gen, PauliTerm):
        if n != gen.n_qubits:
            raise ValueError(f"state on {n} qubits, generator on {gen.n_qubits}")
        return _exp_single(psi, n, gen.x, gen.z, t)
    if n != gen.n_qubits:
        raise ValueError(f"state on {n} qubits, generator on {gen.n_qubits}")
    out = psi
    for lbl, w in gen.sorted_labels():
        if abs(w.imag) > 1e-12:
            raise ValueError("exponential of a sum needs real weights")
        term = PauliTerm.from_label(lbl)
        out = _exp_single(out, n, term.x, term.z, t * w.real)
    return out


class CompiledSum:
    """A PauliSum frozen for fast repeated application to statevectors.

    Terms sharing an X mask differ only by diagonal signs, so they are
    pre-summed into one coefficient vector per distinct mask.
    """

    __slots__ = ("n_qubits", "_perms", "_coeffs")

    def __init__(self, op: PauliSum):
        self.n_qubits = op.n_qubits
        dim = 1 << op.n_qubits
        idx = np.arange(dim, dtype=np.int64)
        by_x: dict[int, np.ndarray] = {}
        for (x, z), w in op.raw_items():
            phase = _I4[_popcount(x & z) % 4] * w
            vec = by_x.get(x)
            if vec is None:
                vec = np.zeros(dim, dtype=np.complex128)
                by_x[x] = vec
            signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1).astype(np.float64)
            vec += phase * signs
        self._perms = [idx ^ x for x in sorted(by_x)]
        self._coeffs = [by_x[x] for x in sorted(by_x)]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        for perm, coeff in zip(self._perms, self._coeffs):
            out += (coeff * psi)[perm]
        return out

    def expectation(self, psi: np.ndarray) -> float:
        return float(np.vdot(psi, self.apply(psi)).real)


def compile_sum(op: PauliSum) -> CompiledSum:
    return CompiledSum(op)


def apply_sum(psi: np.ndarray, op: PauliSum | CompiledSum) -> np.ndarray:
    if isinstance(op, CompiledSum):
        return op.apply(psi)
    out = np.zeros_like(psi)
    n = n_qubits_of(psi)
    if n != op.n_qubits:
        raise ValueError(f"state on {n} qubits, operator on {op.n_qubits}")
    for (x, z), w in op.raw_items():
        phase, signs, perm = _term_arrays(n, x, z)
        out += (phase * w) * (signs * psi)[perm]
    return out


def expectation(psi: np.ndarray, op: PauliSum | CompiledSum) -> float:
    """<psi|O|psi> for Hermitian O (real part returned)."""
    return float(np.vdot(psi, apply_sum(psi, op)).real)


def adapt_gradient(
    psi: np.ndarray,
    ham: PauliSum | CompiledSum,
    gen: PauliTerm | PauliSum,
    h_psi: np.ndarray | None = None,
    sign: float = -1.0,
) -> float:
    """d/d theta of <psi| exp(-s i theta G) H exp(s i theta G) |psi> at 0.

    For the default sign s = -1 (ansatz factors exp(-i theta G)) this is
    -2 Im <G psi | H psi>.  Flipping ``sign`` negates the gradient.
    """
    if h_psi is None:
        h_psi = apply_sum(psi, ham)
    if isinstance(gen, PauliTerm):
        g_psi = apply_pauli_term(psi, gen)
    else:
        g_psi = apply_sum(psi, gen)
    val = -2.0 * float(np.vdot(g_psi, h_psi).imag)
    return val if sign == -1.0 else -val


def fix_phase(psi: np.ndarray) -> np.ndarray:
    """Deterministic global phase: largest-magnitude amplitude real positive."""
    k = int(np.argmax(np.abs(psi)))
    a = psi[k]
    if abs(a) == 0.0:
        return psi
    return psi * (a.conjugate() / abs(a))


def exact_ground(
    op: PauliSum, dense_limit_override: int | None = None
) -> tuple[float, np.ndarray]:
    """Lowest eigenpair.  Dense eigh up to the dense limit, otherwise a
    matrix-free Lanczos on the compiled operator."""
    n = op.n_qubits
    lim = dense_limit(dense_limit_override)
    if n <= lim:
        mat = op.to_dense(limit=lim)
        evals, vecs = np.linalg.eigh(mat)
        return float(evals[0]), fix_phase(vecs[:, 0].astype(np.complex128))
    comp = CompiledSum(op)
    dim = 1 << n
    lin = LinearOperator(
        (dim, dim), matvec=comp.apply, dtype=np.complex128
    )
    rng = np.random.default_rng(12345)
    v0 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    evals, vecs = eigsh(lin, k=1, which="SA", v0=v0, maxiter=5000, tol=0.0)
    return float(evals[0]), fix_phase(vecs[:, 0])


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


__all__ = [
    "prepare_basis",
    "apply_pauli_term",
    "apply_pauli_exp",
    "apply_sum",
    "expectation",
    "adapt_gradient",
    "CompiledSum",
    "compile_sum",
    "exact_ground",
    "fidelity",
    "fix_phase",
    "n_qubits_of",
    "DenseLimitError",
]
