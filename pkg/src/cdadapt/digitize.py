"""Digitized counterdiabatic evolution and circuit resource accounting.

In the impulse (fast-drive) regime only the gauge-potential term survives:
the state is transported by d psi / d lambda = -i A(lambda) psi.  The
digitized protocol evaluates A on a uniform time grid t_k = k dt, k = 1..N,
and applies one product formula step per grid point with angles

    theta_{j,k} = dlambda/dt(t_k) * a_j(lambda(t_k)) * dt

where a_j are the (real) string weights of A.  The last grid point sits at
t = T where the schedule velocity vanishes, so its step is inert; it stays
in the plan and in resource counts — the protocol is taken literally, not
what a peephole optimizer would leave.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from cdadapt.engine import AdaptResult, AnsatzState
from cdadapt.molham import Schedule, schedule_eval
from cdadapt.pauli import PauliTerm
from cdadapt.pools import (
    NestedCommutatorBasis,
    OperatorPool,
    gauge_potential,
    generator_sum,
)
from cdadapt.statevector import apply_pauli_exp, n_qubits_of

RESOURCE_MODEL = "staircase-no-cancellation"


@dataclass
class TrotterStep:
    index: int  # 1-based grid index
    t: float
    lam: float
    dlam: float
    angles: list[tuple[PauliTerm, float]]


@dataclass
class TrotterPlan:
    n_qubits: int
    n_steps: int
    order: int
    schedule: Schedule
    steps: list[TrotterStep]
    meta: dict[str, Any] = field(default_factory=dict)

    def all_angles(self) -> Iterable[tuple[PauliTerm, float]]:
        for step in self.steps:
            yield from step.angles


def plan_dcqo(
    basis: NestedCommutatorBasis,
    n_steps: int,
    schedule: Schedule | None = None,
    order: int | None = None,
    threshold: float = 0.0,
) -> TrotterPlan:
    """Build the digitized plan on the right-endpoint grid k = 1..n_steps.

    ``threshold`` prunes strings by |weight| in A before angles are formed;
    the default keeps everything, zero angles included.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    sched = schedule or Schedule(T=1.0)
    l = basis.order if order is None else order
    dt = sched.T / n_steps
    steps: list[TrotterStep] = []
    statuses = []
    for k in range(1, n_steps + 1):
        t = k * dt
        lam, dlam = schedule_eval(sched, t)
        a_op, sol = gauge_potential(basis, lam, order=l)
        statuses.append(sol.status)
        angles = []
        for lbl, w in a_op.sorted_labels():
            if abs(w) <= threshold:
                continue
            angles.append((PauliTerm.from_label(lbl), dlam * w.real * dt))
        steps.append(TrotterStep(index=k, t=t, lam=lam, dlam=dlam, angles=angles))
    return TrotterPlan(
        n_qubits=basis.n_qubits,
        n_steps=n_steps,
        order=l,
        schedule=sched,
        steps=steps,
        meta={
            "threshold": threshold,
            "alpha_statuses": sorted(set(statuses)),
        },
    )


def execute_plan(plan: TrotterPlan, psi: np.ndarray) -> np.ndarray:
    """Apply the plan to a state, steps in grid order, strings in label order."""
    if n_qubits_of(psi) != plan.n_qubits:
        raise ValueError("state qubit count does not match plan")
    out = psi
    for step in plan.steps:
        for term, theta in step.angles:
            out = apply_pauli_exp(out, term, theta)
    return out


# -- resources --------------------------------------------------------------


@dataclass
class ResourceEstimate:
    n_parameters: int
    n_exponentials: int
    n_cnots: int
    n_single_qubit: int
    model: str = RESOURCE_MODEL


def string_cost(term: PauliTerm) -> tuple[int, int]:
    """(cnots, single-qubit gates) for one exponential of a weight-w string:
    a CNOT staircase 2(w-1) plus basis changes (2 per X, 2 per Y) and one Rz."""
    w = term.weight
    cnots = 2 * (w - 1) if w >= 2 else 0
    n_x = bin(term.x & ~term.z).count("1")
    n_y = bin(term.x & term.z).count("1")
    singles = 1 + 2 * (n_x + n_y)
    return cnots, singles


def _tally(terms: Iterable[PauliTerm], n_parameters: int) -> ResourceEstimate:
    n_exp = n_cnot = n_single = 0
    for term in terms:
        c, s = string_cost(term)
        n_exp += 1
        n_cnot += c
        n_single += s
    return ResourceEstimate(
        n_parameters=n_parameters,
        n_exponentials=n_exp,
        n_cnots=n_cnot,
        n_single_qubit=n_single,
    )


def estimate_resources(
    obj: TrotterPlan | AnsatzState | AdaptResult | OperatorPool,
) -> ResourceEstimate:
    """Gate counts, zero-angle exponentials included (no cancellation)."""
    if isinstance(obj, TrotterPlan):
        return _tally((term for term, _ in obj.all_angles()), n_parameters=0)
    if isinstance(obj, AdaptResult):
        obj = obj.ansatz
    if isinstance(obj, AnsatzState):
        terms: list[PauliTerm] = []
        for gen in obj.generators:
            if isinstance(gen, PauliTerm):
                terms.append(gen)
            else:
                terms.extend(
                    PauliTerm.from_label(lbl) for lbl, _ in gen.terms.sorted_labels()
                )
        return _tally(terms, n_parameters=obj.n_params)
    if isinstance(obj, OperatorPool):
        terms = []
        for gen in obj.generators:
            terms.extend(
                PauliTerm.from_label(lbl)
                for lbl, _ in generator_sum(gen).sorted_labels()
            )
        return _tally(terms, n_parameters=len(obj.generators))
    raise TypeError(f"cannot estimate resources for {type(obj).__name__}")
