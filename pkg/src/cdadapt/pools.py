"""Operator pools from approximate adiabatic gauge potentials.

The interpolating Hamiltonian is H(lam) = (1-lam) H_i + lam H_f.  Nested
commutators are built by the recursion

    O_1     = [H_i, H_f]
    O_{k+1} = (1-lam) [H_i, O_k] + lam [H_f, O_k]

and tracked symbolically as polynomial "buckets": a map (p, q) -> PauliSum
standing for (1-lam)^p lam^q times that sum, so one build serves every lam.
An order-l gauge-potential ansatz is A = i sum_k alpha_k O_{2k-1} with the
alpha fixed by a least-squares condition; the variational pool is the set of
strings supporting the odd operators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from cdadapt.molham import Schedule, schedule_eval
from cdadapt.pauli import PauliSum, PauliTerm, commutator, hs_inner

Buckets = dict[tuple[int, int], PauliSum]

DEFAULT_POOL_THRESHOLD = 1e-6
DEFAULT_BASIS_THRESHOLD = 1e-12


class EmptyPoolError(ValueError):
    """Pool has no generators above threshold."""


@dataclass(frozen=True)
class GroupedGenerator:
    """One variational parameter driving a real sum of commuting strings."""

    label: str
    terms: PauliSum

    def validate(self) -> None:
        pairs = [(PauliTerm.from_label(l), w) for l, w in self.terms.sorted_labels()]
        for _, w in pairs:
            if abs(w.imag) > 1e-12:
                raise ValueError(f"generator {self.label}: weights must be real")
        for i, (a, _) in enumerate(pairs):
            for b, _ in pairs[i + 1 :]:
                if not a.commutes_with(b):
                    raise ValueError(
                        f"generator {self.label}: strings {a} and {b} do not commute"
                    )


Generator = PauliTerm | GroupedGenerator


def generator_sum(gen: Generator) -> PauliSum:
    if isinstance(gen, PauliTerm):
        return PauliSum.from_terms(gen.n_qubits, [(gen, 1.0 + 0.0j)])
    return gen.terms


def generator_label(gen: Generator) -> str:
    if isinstance(gen, PauliTerm):
        return gen.label()
    return gen.label


@dataclass
class NestedCommutatorBasis:
    """Orders 1..2l of the commutator recursion in bucket form."""

    n_qubits: int
    order: int  # l
    h_i: PauliSum
    h_f: PauliSum
    orders: dict[int, Buckets]
    threshold: float

    def buckets(self, k: int) -> Buckets:
        try:
            return self.orders[k]
        except KeyError:
            raise KeyError(f"order {k} not built (have 1..{2 * self.order})") from None

    def evaluate(self, k: int, lam: float) -> PauliSum:
        """O_k at a concrete lambda."""
        out: dict[tuple[int, int], complex] = {}
        for (p, q), op in self.buckets(k).items():
            c = (1.0 - lam) ** p * lam**q
            if c == 0.0:
                continue
            for key, w in op.raw_items():
                out[key] = out.get(key, 0.0 + 0.0j) + c * w
        return PauliSum(self.n_qubits, out).simplify(self.threshold)

    def odd_orders(self) -> list[int]:
        return list(range(1, 2 * self.order, 2))


def build_nested_basis(
    h_i: PauliSum,
    h_f: PauliSum,
    order: int,
    threshold: float = DEFAULT_BASIS_THRESHOLD,
) -> NestedCommutatorBasis:
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if h_i.n_qubits != h_f.n_qubits:
        raise ValueError("H_i and H_f qubit counts differ")
    n = h_i.n_qubits
    orders: dict[int, Buckets] = {}
    first = commutator(h_i, h_f, threshold=threshold)
    orders[1] = {(0, 0): first}
    for k in range(1, 2 * order):
        nxt: Buckets = {}

        def add(key: tuple[int, int], op: PauliSum) -> None:
            if len(op) == 0:
                return
            cur = nxt.get(key)
            nxt[key] = op if cur is None else (cur + op).simplify(threshold)

        for (p, q), op in orders[k].items():
            add((p + 1, q), commutator(h_i, op, threshold=threshold))
            add((p, q + 1), commutator(h_f, op, threshold=threshold))
        orders[k + 1] = nxt
    return NestedCommutatorBasis(
        n_qubits=n, order=order, h_i=h_i, h_f=h_f, orders=orders, threshold=threshold
    )


# -- coefficient solve ------------------------------------------------------


@dataclass
class AlphaSolution:
    order: int
    lam: float
    alpha: np.ndarray
    residual: float
    g_norm2: float  # normalized HS norm^2 of the least-squares target
    status: str  # "ok" | "degenerate" | "residual_fail"


def solve_alpha(
    basis: NestedCommutatorBasis,
    lam: float,
    order: int | None = None,
    residual_tol: float = 1e-8,
) -> AlphaSolution:
    """Least-squares coefficients minimizing |dH + sum_k alpha_k O_2k|.

    The minimizer of the Frobenius objective solves M alpha = b with
    M_kj = <O_2k, O_2j> and b_k = -<O_2k, dH>, dH = H_f - H_i.
    """
    l = basis.order if order is None else order
    if not 1 <= l <= basis.order:
        raise ValueError(f"order {l} outside built range 1..{basis.order}")
    evens = [basis.evaluate(2 * k, lam) for k in range(1, l + 1)]
    dh = (basis.h_f - basis.h_i).simplify(basis.threshold)
    m = np.empty((l, l))
    for a in range(l):
        for b in range(a, l):
            v = hs_inner(evens[a], evens[b]).real
            m[a, b] = m[b, a] = v
    rhs = np.array([-hs_inner(ev, dh).real for ev in evens])
    b_norm = float(np.linalg.norm(rhs))
    if b_norm < 1e-14:
        g = dh
        return AlphaSolution(
            order=l,
            lam=lam,
            alpha=np.zeros(l),
            residual=0.0,
            g_norm2=hs_inner(g, g).real,
            status="degenerate",
        )
    alpha, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.linalg.norm(m @ alpha - rhs)) / b_norm
    g = dh
    for k in range(l):
        g = g + float(alpha[k]) * evens[k]
    status = "ok" if residual <= residual_tol else "residual_fail"
    return AlphaSolution(
        order=l,
        lam=lam,
        alpha=np.asarray(alpha, dtype=np.float64),
        residual=residual,
        g_norm2=hs_inner(g, g).real,
        status=status,
    )


def gauge_potential(
    basis: NestedCommutatorBasis, lam: float, order: int | None = None
) -> tuple[PauliSum, AlphaSolution]:
    """A(lam) = i sum_k alpha_k O_{2k-1}(lam) with solved coefficients."""
    sol = solve_alpha(basis, lam, order=order)
    l = sol.order
    acc: dict[tuple[int, int], complex] = {}
    for k in range(1, l + 1):
        odd = basis.evaluate(2 * k - 1, lam)
        c = 1j * float(sol.alpha[k - 1])
        for key, w in odd.raw_items():
            acc[key] = acc.get(key, 0.0 + 0.0j) + c * w
    return PauliSum(basis.n_qubits, acc).simplify(basis.threshold), sol


# -- pools ------------------------------------------------------------------


@dataclass
class OperatorPool:
    n_qubits: int
    kind: str  # "cd-static" | "cd-time" | "fermionic"
    generators: list[Generator]
    provenance: list[frozenset] | None = None  # cd pools: {(order, p, q), ...}
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.generators)

    def labels(self) -> list[str]:
        return [generator_label(g) for g in self.generators]

    def string_set(self) -> set[str]:
        out: set[str] = set()
        for g in self.generators:
            if isinstance(g, PauliTerm):
                out.add(g.label())
            else:
                out.update(l for l, _ in g.terms.sorted_labels())
        return out

    def require_nonempty(self) -> None:
        if not self.generators:
            raise EmptyPoolError(f"{self.kind} pool has no generators")


def extract_pool_static(
    basis: NestedCommutatorBasis,
    order: int | None = None,
    pool_threshold: float = DEFAULT_POOL_THRESHOLD,
) -> OperatorPool:
    """Union of strings supporting O_1, O_3, ..., O_{2l-1} in any bucket.

    Lambda is never evaluated: a string enters if any bucket weight clears
    the threshold, so the pool covers the whole path at once.
    """
    l = basis.order if order is None else order
    if not 1 <= l <= basis.order:
        raise ValueError(f"order {l} outside built range 1..{basis.order}")
    prov: dict[tuple[int, int], set] = {}
    for k in range(1, 2 * l, 2):
        for (p, q), op in basis.buckets(k).items():
            for key, w in op.raw_items():
                if abs(w) > pool_threshold:
                    prov.setdefault(key, set()).add((k, p, q))
    keys = sorted(prov, key=lambda key: PauliTerm(basis.n_qubits, *key).label())
    gens: list[Generator] = [PauliTerm(basis.n_qubits, x, z) for x, z in keys]
    return OperatorPool(
        n_qubits=basis.n_qubits,
        kind="cd-static",
        generators=gens,
        provenance=[frozenset(prov[k]) for k in keys],
        meta={"order": l, "pool_threshold": pool_threshold},
    )


def extract_pool_time(
    basis: NestedCommutatorBasis,
    t_prime: float,
    order: int | None = None,
    schedule: Schedule | None = None,
    pool_threshold: float = DEFAULT_POOL_THRESHOLD,
) -> OperatorPool:
    """Strings supporting the odd operators at the single time t' in [0, 1]."""
    if not 0.0 <= t_prime <= 1.0:
        raise ValueError(f"t_prime={t_prime} outside [0, 1]")
    l = basis.order if order is None else order
    if not 1 <= l <= basis.order:
        raise ValueError(f"order {l} outside built range 1..{basis.order}")
    sched = schedule or Schedule(T=1.0)
    lam, _ = schedule_eval(sched, t_prime * sched.T)
    prov: dict[tuple[int, int], set] = {}
    for k in range(1, 2 * l, 2):
        evaluated = basis.evaluate(k, lam)
        for key, w in evaluated.raw_items():
            if abs(w) > pool_threshold:
                contributing = {
                    (k, p, q)
                    for (p, q), op in basis.buckets(k).items()
                    if dict(op.raw_items()).get(key)
                }
                prov.setdefault(key, set()).update(contributing)
    keys = sorted(prov, key=lambda key: PauliTerm(basis.n_qubits, *key).label())
    gens: list[Generator] = [PauliTerm(basis.n_qubits, x, z) for x, z in keys]
    return OperatorPool(
        n_qubits=basis.n_qubits,
        kind="cd-time",
        generators=gens,
        provenance=[frozenset(prov[k]) for k in keys],
        meta={
            "order": l,
            "t_prime": t_prime,
            "lambda": lam,
            "pool_threshold": pool_threshold,
        },
    )


# -- fermionic reference pool ----------------------------------------------


def _excitation_sum(n: int, cre: tuple[int, ...], ann: tuple[int, ...]) -> PauliSum:
    """i (a_cre^dag ... a_ann ... - h.c.) mapped to strings (real weights)."""
    from cdadapt.molham import jw_annihilation, jw_creation
    from cdadapt.pauli import mul

    fwd = PauliSum.identity(n)
    for c in cre:
        fwd = mul(fwd, jw_creation(n, c))
    for a in ann:
        fwd = mul(fwd, jw_annihilation(n, a))
    gen = (1j * (fwd - fwd.dagger())).simplify(1e-14)
    return gen


def build_fermionic_pool(
    n_qubits: int,
    n_electrons: int,
    ordering: str = "alpha_beta",
    grouped: bool = True,
) -> OperatorPool:
    """Spin- and particle-conserving singles + doubles from the reference.

    Each excitation gives the Hermitian generator i(T - T^dag); its strings
    mutually commute, so a grouped exponential factorizes exactly.  With
    grouped=False every string becomes its own generator.
    """
    from cdadapt.molham import hartree_fock_state, occupied_qubits

    bits = hartree_fock_state(n_qubits, n_electrons, ordering)
    occ = set(occupied_qubits(bits))
    m = n_qubits // 2
    if ordering == "alpha_beta":
        spin_qubits = {0: list(range(m)), 1: list(range(m, n_qubits))}
    elif ordering == "beta_alpha":
        spin_qubits = {1: list(range(m)), 0: list(range(m, n_qubits))}
    else:  # interleaved
        spin_qubits = {0: list(range(0, n_qubits, 2)), 1: list(range(1, n_qubits, 2))}
    occ_s = {s: [q for q in spin_qubits[s] if q in occ] for s in (0, 1)}
    vir_s = {s: [q for q in spin_qubits[s] if q not in occ] for s in (0, 1)}

    entries: list[tuple[str, tuple[int, ...], tuple[int, ...]]] = []
    for s in (0, 1):
        for i in occ_s[s]:
            for a in vir_s[s]:
                entries.append((f"s_{i}^{a}", (a,), (i,)))
    for s in (0, 1):  # same-spin doubles
        for ii, i in enumerate(occ_s[s]):
            for j in occ_s[s][ii + 1 :]:
                for ai, a in enumerate(vir_s[s]):
                    for b in vir_s[s][ai + 1 :]:
                        entries.append((f"d_{i}{j}^{a}{b}", (b, a), (j, i)))
    for i in occ_s[0]:  # opposite-spin doubles
        for j in occ_s[1]:
            for a in vir_s[0]:
                for b in vir_s[1]:
                    entries.append((f"d_{i}{j}^{a}{b}", (b, a), (j, i)))

    gens: list[Generator] = []
    seen: set[str] = set()
    for label, cre, ann in entries:
        op = _excitation_sum(n_qubits, cre, ann)
        if len(op) == 0:
            continue
        if grouped:
            g = GroupedGenerator(label=label, terms=op)
            g.validate()
            gens.append(g)
        else:
            for lbl, _ in op.sorted_labels():
                if lbl not in seen:
                    seen.add(lbl)
                    gens.append(PauliTerm.from_label(lbl))
    if not grouped:
        gens.sort(key=lambda t: t.label())
    return OperatorPool(
        n_qubits=n_qubits,
        kind="fermionic",
        generators=gens,
        provenance=None,
        meta={
            "n_electrons": n_electrons,
            "ordering": ordering,
            "grouped": grouped,
            "reference": bits,
        },
    )


# -- pool file I/O ----------------------------------------------------------


def dump_pool(pool: OperatorPool, path: str) -> None:
    gens_payload = []
    for g in pool.generators:
        if isinstance(g, PauliTerm):
            gens_payload.append({"pauli": g.label()})
        else:
            gens_payload.append({"label": g.label, "terms": g.terms.to_json_terms()})
    payload: dict[str, Any] = {
        "schema": "pool.v1",
        "n_qubits": pool.n_qubits,
        "kind": pool.kind,
        "meta": pool.meta,
        "generators": gens_payload,
    }
    if pool.provenance is not None:
        payload["provenance"] = [sorted(map(list, fs)) for fs in pool.provenance]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_pool(path: str) -> OperatorPool:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema") != "pool.v1":
        raise ValueError(f"{path}: schema {payload.get('schema')!r}, expected 'pool.v1'")
    n = int(payload["n_qubits"])
    gens: list[Generator] = []
    for entry in payload["generators"]:
        if "pauli" in entry:
            gens.append(PauliTerm.from_label(entry["pauli"]))
        else:
            g = GroupedGenerator(
                label=entry["label"],
                terms=PauliSum.from_json_terms(n, entry["terms"]),
            )
            g.validate()
            gens.append(g)
    prov = None
    if "provenance" in payload:
        prov = [frozenset(tuple(t) for t in fs) for fs in payload["provenance"]]
    return OperatorPool(
        n_qubits=n,
        kind=payload.get("kind", "cd-static"),
        generators=gens,
        provenance=prov,
        meta=payload.get("meta", {}),
    )
