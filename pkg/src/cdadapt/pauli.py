"""Phase-free symplectic algebra for Pauli strings.

A Pauli string on ``n`` qubits is stored as a pair of bitmasks ``(x, z)``;
bit ``k`` of ``x`` / ``z`` says whether an X / Z factor acts on qubit ``k``.
The canonical operator attached to the masks is

    P(x, z) = i**popcount(x & z) * (X**x) * (Z**z)

which is Hermitian with eigenvalues +-1 (``Y = i X Z``).  Products of
canonical strings are again canonical up to a power of i, which is folded
into the complex weight of a :class:`PauliSum`.  Qubit 0 is the least
significant bit; in text labels qubit ``k`` sits at position ``n - 1 - k``
(rightmost character = qubit 0).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

_I4 = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_CHAR_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_CHAR = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

DENSE_LIMIT_ENV = "CDADAPT_DENSE_LIMIT"
DEFAULT_DENSE_LIMIT = 14

# numpy int64 packing of (x, z) keys needs 2*n bits
_PACK_MAX_QUBITS = 31


class QubitCountError(ValueError):
    """Operands act on different qubit counts."""


class DenseLimitError(ValueError):
    """Dense materialization refused: qubit count above the allowed limit."""


def dense_limit(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(DENSE_LIMIT_ENV)
    return int(env) if env else DEFAULT_DENSE_LIMIT


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, slots=True)
class PauliTerm:
    """A single canonical Pauli string (no weight, no phase)."""

    n_qubits: int
    x: int
    z: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        mask = (1 << self.n_qubits) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z masks exceed qubit count")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliTerm":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliTerm":
        """Parse e.g. ``"XIZY"`` (qubit 0 is the rightmost character)."""
        n = len(label)
        x = z = 0
        for pos, ch in enumerate(label):
            try:
                xb, zb = _CHAR_TO_XZ[ch]
            except KeyError:
                raise ValueError(f"bad Pauli character {ch!r} in {label!r}") from None
            k = n - 1 - pos
            x |= xb << k
            z |= zb << k
        return cls(n, x, z)

    @classmethod
    def single(cls, n_qubits: int, kind: str, qubit: int) -> "PauliTerm":
        """One-qubit X/Y/Z (or I) embedded on ``qubit``."""
        if not 0 <= qubit < n_qubits:
            raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
        xb, zb = _CHAR_TO_XZ[kind]
        return cls(n_qubits, xb << qubit, zb << qubit)

    def label(self) -> str:
        chars = []
        for k in range(self.n_qubits - 1, -1, -1):
            chars.append(_XZ_TO_CHAR[((self.x >> k) & 1, (self.z >> k) & 1)])
        return "".join(chars)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return _popcount(self.x | self.z)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes_with(self, other: "PauliTerm") -> bool:
        _check_n(self.n_qubits, other.n_qubits)
        return _popcount((self.x & other.z) ^ (self.z & other.x)) % 2 == 0

    def to_dense(self) -> np.ndarray:
        return PauliSum.from_terms(self.n_qubits, [(self, 1.0 + 0.0j)]).to_dense(
            limit=self.n_qubits
        )

    def __str__(self) -> str:
        return self.label()


def _check_n(na: int, nb: int) -> None:
    if na != nb:
        raise QubitCountError(f"qubit count mismatch: {na} vs {nb}")


def phase_exponent(ax: int, az: int, bx: int, bz: int) -> int:
    """Exponent e in P(a) P(b) = i**e P(a xor b), mod 4."""
    cx, cz = ax ^ bx, az ^ bz
    e = _popcount(ax & az) + _popcount(bx & bz) - _popcount(cx & cz)
    e += 2 * _popcount(az & bx)
    return e % 4


def mul_terms(a: PauliTerm, b: PauliTerm) -> tuple[complex, PauliTerm]:
    """Product of canonical strings: returns (phase, canonical string)."""
    _check_n(a.n_qubits, b.n_qubits)
    e = phase_exponent(a.x, a.z, b.x, b.z)
    return _I4[e], PauliTerm(a.n_qubits, a.x ^ b.x, a.z ^ b.z)


class PauliSum:
    """Weighted sum of canonical Pauli strings over a fixed qubit count.

    Backed by a dict ``{(x, z): weight}``; all mutating helpers return new
    instances, callers may treat sums as values.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: Mapping[tuple[int, int], complex] | None = None):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        self.n_qubits = n_qubits
        self._terms: dict[tuple[int, int], complex] = dict(terms) if terms else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, weight: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): complex(weight)})

    @classmethod
    def from_terms(
        cls, n_qubits: int, pairs: Iterable[tuple[PauliTerm, complex]]
    ) -> "PauliSum":
        out: dict[tuple[int, int], complex] = {}
        for term, w in pairs:
            _check_n(n_qubits, term.n_qubits)
            key = (term.x, term.z)
            out[key] = out.get(key, 0.0 + 0.0j) + complex(w)
        return cls(n_qubits, out)

    @classmethod
    def from_labels(cls, pairs: Iterable[tuple[str, complex]]) -> "PauliSum":
        pairs = list(pairs)
        if not pairs:
            raise ValueError("from_labels needs at least one term")
        n = len(pairs[0][0])
        return cls.from_terms(
            n, [(PauliTerm.from_label(lbl), w) for lbl, w in pairs]
        )

    # -- access ------------------------------------------------------------

    def items(self) -> Iterator[tuple[PauliTerm, complex]]:
        n = self.n_qubits
        for (x, z), w in self._terms.items():
            yield PauliTerm(n, x, z), w

    def raw_items(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(self._terms.items())

    def weight_of(self, term: PauliTerm | str) -> complex:
        if isinstance(term, str):
            term = PauliTerm.from_label(term)
        _check_n(self.n_qubits, term.n_qubits)
        return self._terms.get((term.x, term.z), 0.0 + 0.0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: PauliTerm) -> bool:
        return (term.x, term.z) in self._terms

    def max_weight(self) -> int:
        """Largest tensor weight over the support (0 for the zero sum)."""
        return max((_popcount(x | z) for (x, z) in self._terms), default=0)

    def norm2(self) -> float:
        """Normalized Hilbert-Schmidt norm sqrt(sum |w|^2)."""
        return math.sqrt(sum((w * w.conjugate()).real for w in self._terms.values()))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "PauliSum") -> "PauliSum":
        _check_n(self.n_qubits, other.n_qubits)
        out = dict(self._terms)
        for key, w in other._terms.items():
            out[key] = out.get(key, 0.0 + 0.0j) + w
        return PauliSum(self.n_qubits, out)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "PauliSum":
        if isinstance(scalar, PauliSum):
            return mul(self, scalar)
        s = complex(scalar)
        return PauliSum(self.n_qubits, {k: w * s for k, w in self._terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return (-1.0) * self

    def dagger(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: w.conjugate() for k, w in self._terms.items()})

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(w.imag) <= tol for w in self._terms.values())

    def is_anti_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(w.real) <= tol for w in self._terms.values())

    def simplify(self, threshold: float = 0.0) -> "PauliSum":
        """Drop terms with |weight| <= threshold (exact zeros always go)."""
        out = {k: w for k, w in self._terms.items() if abs(w) > threshold}
        return PauliSum(self.n_qubits, out)

    # -- dense -------------------------------------------------------------

    def to_dense(self, limit: int | None = None) -> np.ndarray:
        n = self.n_qubits
        lim = dense_limit(limit)
        if n > lim:
            raise DenseLimitError(
                f"dense matrix for {n} qubits exceeds limit {lim}; "
                f"set {DENSE_LIMIT_ENV} to raise it"
            )
        dim = 1 << n
        mat = np.zeros((dim, dim), dtype=np.complex128)
        cols = np.arange(dim, dtype=np.int64)
        for (x, z), w in self._terms.items():
            phase = _I4[_popcount(x & z) % 4] * w
            signs = 1.0 - 2.0 * (np.bitwise_count(cols & z) & 1).astype(np.float64)
            mat[cols ^ x, cols] += phase * signs
        return mat

    # -- serialization -----------------------------------------------------

    def sorted_labels(self) -> list[tuple[str, complex]]:
        pairs = [(PauliTerm(self.n_qubits, x, z).label(), w) for (x, z), w in self._terms.items()]
        pairs.sort(key=lambda p: p[0])
        return pairs

    def to_text(self) -> str:
        lines = [
            f"({w.real:.17g}{w.imag:+.17g}j) {lbl}" for lbl, w in self.sorted_labels()
        ]
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        pairs: list[tuple[str, complex]] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            coeff_s, lbl = line.rsplit(None, 1)
            pairs.append((lbl, complex(coeff_s)))
        if not pairs:
            if n_qubits is None:
                raise ValueError("empty text and no qubit count given")
            return cls.zero(n_qubits)
        out = cls.from_labels(pairs)
        if n_qubits is not None and out.n_qubits != n_qubits:
            raise QubitCountError(
                f"text declares {out.n_qubits} qubits, expected {n_qubits}"
            )
        return out

    def to_json_terms(self) -> list[dict]:
        return [
            {"pauli": lbl, "re": w.real, "im": w.imag} for lbl, w in self.sorted_labels()
        ]

    @classmethod
    def from_json_terms(cls, n_qubits: int, terms: list[dict]) -> "PauliSum":
        pairs = [
            (PauliTerm.from_label(t["pauli"]), complex(t["re"], t.get("im", 0.0)))
            for t in terms
        ]
        if not pairs:
            return cls.zero(n_qubits)
        return cls.from_terms(n_qubits, pairs)

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self)})"

    def __str__(self) -> str:
        return self.to_text() if self._terms else f"0 on {self.n_qubits} qubits"


# -- products and commutators ---------------------------------------------


def _as_sum(op: PauliSum | PauliTerm) -> PauliSum:
    if isinstance(op, PauliTerm):
        return PauliSum.from_terms(op.n_qubits, [(op, 1.0 + 0.0j)])
    return op


def _pack(terms: dict[tuple[int, int], complex], n: int):
    """Split a term dict into parallel int64/complex arrays (n <= 31)."""
    m = len(terms)
    xs = np.empty(m, dtype=np.int64)
    zs = np.empty(m, dtype=np.int64)
    ws = np.empty(m, dtype=np.complex128)
    for i, ((x, z), w) in enumerate(terms.items()):
        xs[i] = x
        zs[i] = z
        ws[i] = w
    return xs, zs, ws


_PHASE_TABLE = np.array(_I4, dtype=np.complex128)


def _accumulate_keys(n: int, keys: np.ndarray, ws: np.ndarray, threshold: float):
    uniq, inv = np.unique(keys, return_inverse=True)
    wr = np.bincount(inv, weights=ws.real, minlength=uniq.size)
    wi = np.bincount(inv, weights=ws.imag, minlength=uniq.size)
    w = wr + 1j * wi
    keep = np.abs(w) > threshold
    mask = (1 << n) - 1
    out: dict[tuple[int, int], complex] = {}
    for key, wv in zip(uniq[keep].tolist(), w[keep].tolist()):
        out[(key >> n, key & mask)] = wv
    return out


def _pair_chunks(ma: int, mb: int, budget: int = 1 << 22) -> int:
    rows = max(1, budget // max(mb, 1))
    return min(ma, rows)


def _commutator_numpy(a: PauliSum, b: PauliSum, threshold: float) -> PauliSum:
    n = a.n_qubits
    ax, az, aw = _pack(a._terms, n)
    bx, bz, bw = _pack(b._terms, n)
    ya = np.bitwise_count(ax & az).astype(np.int64)
    yb = np.bitwise_count(bx & bz).astype(np.int64)
    key_chunks: list[np.ndarray] = []
    w_chunks: list[np.ndarray] = []
    step = _pair_chunks(ax.size, bx.size)
    for i0 in range(0, ax.size, step):
        i1 = min(i0 + step, ax.size)
        AX, AZ = ax[i0:i1, None], az[i0:i1, None]
        anti = (np.bitwise_count((AX & bz[None, :]) ^ (AZ & bx[None, :])) & 1).astype(bool)
        if not anti.any():
            continue
        ia, ib = np.nonzero(anti)
        cx = ax[i0 + ia] ^ bx[ib]
        cz = az[i0 + ia] ^ bz[ib]
        e = ya[i0 + ia] + yb[ib] - np.bitwise_count(cx & cz)
        e = (e + 2 * np.bitwise_count(az[i0 + ia] & bx[ib])) & 3
        w = 2.0 * aw[i0 + ia] * bw[ib] * _PHASE_TABLE[e]
        key_chunks.append((cx << n) | cz)
        w_chunks.append(w)
    if not key_chunks:
        return PauliSum.zero(n)
    keys = np.concatenate(key_chunks)
    ws = np.concatenate(w_chunks)
    return PauliSum(n, _accumulate_keys(n, keys, ws, threshold))


def _commutator_python(a: PauliSum, b: PauliSum, threshold: float) -> PauliSum:
    n = a.n_qubits
    out: dict[tuple[int, int], complex] = {}
    for (ax, az), aw in a._terms.items():
        for (bx, bz), bw in b._terms.items():
            if _popcount((ax & bz) ^ (az & bx)) % 2 == 0:
                continue
            e = phase_exponent(ax, az, bx, bz)
            key = (ax ^ bx, az ^ bz)
            out[key] = out.get(key, 0.0 + 0.0j) + 2.0 * aw * bw * _I4[e]
    if threshold >= 0.0:
        out = {k: w for k, w in out.items() if abs(w) > threshold}
    return PauliSum(n, out)


def commutator(
    a: PauliSum | PauliTerm, b: PauliSum | PauliTerm, threshold: float = 0.0
) -> PauliSum:
    """[A, B] = AB - BA.

    Only anticommuting string pairs contribute; each gives twice the product.
    Terms whose accumulated |weight| <= threshold are dropped.
    """
    a, b = _as_sum(a), _as_sum(b)
    _check_n(a.n_qubits, b.n_qubits)
    if not a._terms or not b._terms:
        return PauliSum.zero(a.n_qubits)
    if a.n_qubits <= _PACK_MAX_QUBITS and len(a) * len(b) > 64:
        return _commutator_numpy(a, b, threshold)
    return _commutator_python(a, b, threshold)


def _mul_numpy(a: PauliSum, b: PauliSum, threshold: float) -> PauliSum:
    n = a.n_qubits
    ax, az, aw = _pack(a._terms, n)
    bx, bz, bw = _pack(b._terms, n)
    ya = np.bitwise_count(ax & az).astype(np.int64)
    yb = np.bitwise_count(bx & bz).astype(np.int64)
    key_chunks: list[np.ndarray] = []
    w_chunks: list[np.ndarray] = []
    step = _pair_chunks(ax.size, bx.size)
    for i0 in range(0, ax.size, step):
        i1 = min(i0 + step, ax.size)
        ia, ib = np.meshgrid(
            np.arange(i0, i1, dtype=np.int64),
            np.arange(bx.size, dtype=np.int64),
            indexing="ij",
        )
        ia, ib = ia.ravel(), ib.ravel()
        cx = ax[ia] ^ bx[ib]
        cz = az[ia] ^ bz[ib]
        e = ya[ia] + yb[ib] - np.bitwise_count(cx & cz)
        e = (e + 2 * np.bitwise_count(az[ia] & bx[ib])) & 3
        key_chunks.append((cx << n) | cz)
        w_chunks.append(aw[ia] * bw[ib] * _PHASE_TABLE[e])
    keys = np.concatenate(key_chunks)
    ws = np.concatenate(w_chunks)
    return PauliSum(n, _accumulate_keys(n, keys, ws, threshold))


def mul(
    a: PauliSum | PauliTerm, b: PauliSum | PauliTerm, threshold: float = 0.0
) -> PauliSum:
    """Operator product of two sums (or term x sum), weights merged."""
    a, b = _as_sum(a), _as_sum(b)
    _check_n(a.n_qubits, b.n_qubits)
    if not a._terms or not b._terms:
        return PauliSum.zero(a.n_qubits)
    if a.n_qubits <= _PACK_MAX_QUBITS and len(a) * len(b) > 64:
        return _mul_numpy(a, b, threshold)
    n = a.n_qubits
    out: dict[tuple[int, int], complex] = {}
    for (ax, az), aw in a._terms.items():
        for (bx, bz), bw in b._terms.items():
            e = phase_exponent(ax, az, bx, bz)
            key = (ax ^ bx, az ^ bz)
            out[key] = out.get(key, 0.0 + 0.0j) + aw * bw * _I4[e]
    out = {k: w for k, w in out.items() if abs(w) > threshold}
    return PauliSum(n, out)


def hs_inner(a: PauliSum | PauliTerm, b: PauliSum | PauliTerm) -> complex:
    """Normalized Hilbert-Schmidt inner product Tr(A^dag B) / 2^n.

    Canonical strings are orthonormal under this product, so it reduces to
    a sparse dot of the weight vectors.
    """
    a, b = _as_sum(a), _as_sum(b)
    _check_n(a.n_qubits, b.n_qubits)
    small, big, conj_small = (
        (a, b, True) if len(a) <= len(b) else (b, a, False)
    )
    acc = 0.0 + 0.0j
    for key, w in small._terms.items():
        other = big._terms.get(key)
        if other is None:
            continue
        acc += (w.conjugate() * other) if conj_small else (other.conjugate() * w)
    return acc


def simplify(a: PauliSum, threshold: float = 0.0) -> PauliSum:
    return a.simplify(threshold)


def to_dense(a: PauliSum | PauliTerm, limit: int | None = None) -> np.ndarray:
    return _as_sum(a).to_dense(limit=limit)


def dump_text(a: PauliSum, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n_qubits={a.n_qubits}\n")
        fh.write(a.to_text())
        fh.write("\n")


def load_text(path: str) -> PauliSum:
    with open(path) as fh:
        content = fh.read()
    n = None
    for line in content.splitlines():
        if line.startswith("# n_qubits="):
            n = int(line.split("=", 1)[1])
            break
    return PauliSum.from_text(content, n_qubits=n)


def dump_json(a: PauliSum, path: str) -> None:
    payload = {"n_qubits": a.n_qubits, "terms": a.to_json_terms()}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_json(path: str) -> PauliSum:
    with open(path) as fh:
        payload = json.load(fh)
    return PauliSum.from_json_terms(payload["n_qubits"], payload["terms"])
