"""ADAPT outer loop and the inner variational optimization.

The ansatz is an ordered product of Pauli-string (or grouped) exponentials
acting on a computational reference.  Each outer iteration screens the pool
by analytic energy gradients, appends the best generator, and re-optimizes
every angle with L-BFGS-B using reverse-mode analytic gradients.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import minimize

from cdadapt.molham import MolecularProblem
from cdadapt.pauli import PauliSum, PauliTerm
from cdadapt.pools import Generator, OperatorPool, generator_label
from cdadapt.statevector import (
    CompiledSum,
    adapt_gradient,
    apply_pauli_exp,
    apply_pauli_term,
    apply_sum,
    expectation,
    prepare_basis,
)

STAGNATION_TOL = 1e-12


@dataclass
class AdaptConfig:
    epsilon: float = 1e-2  # pool gradient-norm stopping threshold
    max_iterations: int = 200
    gtol: float = 1e-9  # inner optimizer: projected-gradient infinity norm
    ftol: float = 1e-12  # inner optimizer: relative energy decrease
    maxfun: int = 100000
    exp_sign: float = -1.0  # ansatz factors exp(-i theta G)
    stop_norm: str = "l2"  # "l2" | "max" over the screened gradient vector
    bound_strings: bool = True  # clamp bare-string angles to [-pi, pi]

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.stop_norm not in ("l2", "max"):
            raise ValueError(f"unknown stop_norm {self.stop_norm!r}")
        if self.exp_sign not in (-1.0, 1.0):
            raise ValueError("exp_sign must be -1.0 or +1.0")


@dataclass
class AnsatzState:
    reference: str
    generators: list[Generator] = field(default_factory=list)
    thetas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_params(self) -> int:
        return len(self.generators)

    def state(self, exp_sign: float = -1.0) -> np.ndarray:
        psi = prepare_basis(self.reference)
        for gen, theta in zip(self.generators, self.thetas):
            psi = apply_pauli_exp(psi, _gen_arg(gen), float(theta), sign=exp_sign)
        return psi

    def labels(self) -> list[str]:
        return [generator_label(g) for g in self.generators]


def _gen_arg(gen: Generator) -> PauliTerm | PauliSum:
    return gen if isinstance(gen, PauliTerm) else gen.terms


def screen_pool(
    psi: np.ndarray,
    ham: CompiledSum | PauliSum,
    pool: OperatorPool,
    exp_sign: float = -1.0,
) -> np.ndarray:
    """Energy gradient of appending each pool generator at angle zero."""
    pool.require_nonempty()
    h_psi = apply_sum(psi, ham)
    out = np.empty(len(pool.generators))
    for i, gen in enumerate(pool.generators):
        out[i] = adapt_gradient(psi, ham, _gen_arg(gen), h_psi=h_psi, sign=exp_sign)
    return out


def select_operator(gradients: np.ndarray) -> int:
    """Index of the largest-magnitude gradient; ties go to the first
    (pools are canonically sorted, so this is deterministic)."""
    if gradients.size == 0:
        raise ValueError("empty gradient vector")
    return int(np.argmax(np.abs(gradients)))


def _energy_and_grad(
    thetas: np.ndarray,
    reference: str,
    generators: list[Generator],
    ham: CompiledSum,
    exp_sign: float,
) -> tuple[float, np.ndarray]:
    psi = prepare_basis(reference)
    for gen, theta in zip(generators, thetas):
        psi = apply_pauli_exp(psi, _gen_arg(gen), float(theta), sign=exp_sign)
    l_vec = ham.apply(psi)
    energy = float(np.vdot(psi, l_vec).real)
    grads = np.empty(len(generators))
    r_vec = psi
    for k in range(len(generators) - 1, -1, -1):
        arg = _gen_arg(generators[k])
        if isinstance(arg, PauliTerm):
            g_r = apply_pauli_term(r_vec, arg)
        else:
            g_r = apply_sum(r_vec, arg)
        grads[k] = -2.0 * float(np.vdot(g_r, l_vec).imag)
        theta = float(thetas[k])
        r_vec = apply_pauli_exp(r_vec, arg, -theta, sign=exp_sign)
        l_vec = apply_pauli_exp(l_vec, arg, -theta, sign=exp_sign)
    if exp_sign == 1.0:
        grads = -grads
    return energy, grads


@dataclass
class VqeResult:
    energy: float
    thetas: np.ndarray
    n_evals: int
    converged: bool
    message: str


def vqe_minimize(
    ansatz: AnsatzState,
    ham: CompiledSum | PauliSum,
    config: AdaptConfig | None = None,
) -> VqeResult:
    """Optimize all angles of the ansatz in place (warm start from current)."""
    config = config or AdaptConfig()
    comp = ham if isinstance(ham, CompiledSum) else CompiledSum(ham)
    if ansatz.n_params == 0:
        e0 = comp.expectation(prepare_basis(ansatz.reference))
        return VqeResult(e0, np.zeros(0), 0, True, "no parameters")
    bounds = []
    for gen in ansatz.generators:
        if config.bound_strings and isinstance(gen, PauliTerm):
            bounds.append((-math.pi, math.pi))
        else:
            bounds.append((None, None))
    res = minimize(
        _energy_and_grad,
        np.asarray(ansatz.thetas, dtype=np.float64),
        args=(ansatz.reference, ansatz.generators, comp, config.exp_sign),
        method="L-BFGS-B",
        jac=True,
        bounds=bounds,
        options={
            "gtol": config.gtol,
            "ftol": config.ftol,
            "maxfun": config.maxfun,
        },
    )
    ansatz.thetas = np.asarray(res.x, dtype=np.float64)
    return VqeResult(
        energy=float(res.fun),
        thetas=ansatz.thetas.copy(),
        n_evals=int(res.nfev),
        converged=bool(res.success),
        message=str(res.message),
    )


@dataclass
class IterationRecord:
    iteration: int
    selected: str
    gradient_norm: float
    max_gradient: float
    energy: float
    theta: float
    n_evals: int


@dataclass
class AdaptResult:
    status: str  # "converged" | "max_iterations" | "stagnated"
    ansatz: AnsatzState
    energies: list[float]  # reference energy first, then per iteration
    gradient_norms: list[float]
    iterations: list[IterationRecord]
    final_energy: float
    e_offset: float = 0.0
    wall_time: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def total_energy(self) -> float:
        return self.final_energy + self.e_offset

    @property
    def n_params(self) -> int:
        return self.ansatz.n_params


def run_adapt(
    problem: MolecularProblem,
    pool: OperatorPool,
    config: AdaptConfig | None = None,
) -> AdaptResult:
    config = config or AdaptConfig()
    pool.require_nonempty()
    if pool.n_qubits != problem.n_qubits:
        raise ValueError(
            f"pool on {pool.n_qubits} qubits, problem on {problem.n_qubits}"
        )
    t0 = time.perf_counter()
    comp = CompiledSum(problem.h_f)
    ansatz = AnsatzState(reference=problem.hf_bits)
    psi = ansatz.state(config.exp_sign)
    energies = [comp.expectation(psi)]
    grad_norms: list[float] = []
    records: list[IterationRecord] = []
    status = "max_iterations"
    prev_idx = -1
    for it in range(1, config.max_iterations + 1):
        grads = screen_pool(psi, comp, pool, exp_sign=config.exp_sign)
        max_g = float(np.max(np.abs(grads)))
        norm = float(np.linalg.norm(grads)) if config.stop_norm == "l2" else max_g
        grad_norms.append(norm)
        if norm < config.epsilon:
            status = "converged"
            break
        idx = select_operator(grads)
        ansatz.generators.append(pool.generators[idx])
        ansatz.thetas = np.append(ansatz.thetas, 0.0)
        vqe = vqe_minimize(ansatz, comp, config)
        new_theta = float(ansatz.thetas[-1])
        if idx == prev_idx and abs(new_theta) < STAGNATION_TOL:
            # the same generator came straight back and did nothing
            ansatz.generators.pop()
            ansatz.thetas = ansatz.thetas[:-1]
            status = "stagnated"
            break
        prev_idx = idx
        psi = ansatz.state(config.exp_sign)
        energies.append(vqe.energy)
        records.append(
            IterationRecord(
                iteration=it,
                selected=generator_label(pool.generators[idx]),
                gradient_norm=norm,
                max_gradient=max_g,
                energy=vqe.energy,
                theta=new_theta,
                n_evals=vqe.n_evals,
            )
        )
    return AdaptResult(
        status=status,
        ansatz=ansatz,
        energies=energies,
        gradient_norms=grad_norms,
        iterations=records,
        final_energy=energies[-1],
        e_offset=problem.e_offset,
        wall_time=time.perf_counter() - t0,
        meta={
            "pool_kind": pool.kind,
            "pool_size": len(pool.generators),
            "epsilon": config.epsilon,
            "stop_norm": config.stop_norm,
        },
    )


def evaluate_energy(problem: MolecularProblem, ansatz: AnsatzState, exp_sign: float = -1.0) -> float:
    return expectation(ansatz.state(exp_sign), problem.h_f)
