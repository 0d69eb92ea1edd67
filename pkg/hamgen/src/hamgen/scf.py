"""Restricted Hartree-Fock for closed-shell molecules.

Plain AO-basis SCF: symmetric orthogonalization, DIIS on the commutator
FDS - SDF, dense diagonalization every cycle.  Basis sets here are tiny so
no integral screening or incremental Fock builds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hamgen.basis import BasisFunction, expand_shells
from hamgen.integrals import (
    eri_tensor,
    kinetic_matrix,
    nuclear_matrix,
    nuclear_repulsion,
    overlap_matrix,
)


class SCFConvergenceError(RuntimeError):
    pass


@dataclass
class AOIntegrals:
    """AO-basis operator matrices plus geometry bookkeeping."""

    s: np.ndarray
    t: np.ndarray
    v: np.ndarray
    eri: np.ndarray  # chemist notation (ij|kl)
    e_nuc: float
    n_electrons: int
    funcs: list[BasisFunction] = field(repr=False, default_factory=list)

    @property
    def hcore(self) -> np.ndarray:
        return self.t + self.v

    @property
    def n_basis(self) -> int:
        return self.s.shape[0]


@dataclass
class RHFResult:
    energy: float  # total energy incl. nuclear repulsion
    e_electronic: float
    mo_coeff: np.ndarray  # columns are MOs, sorted by energy
    mo_energy: np.ndarray
    density: np.ndarray  # D = 2 C_occ C_occ^T
    fock: np.ndarray
    n_occ: int
    converged: bool
    n_iter: int


def compute_ao_integrals(
    shells, charges: list[float], centers: np.ndarray, n_electrons: int
) -> AOIntegrals:
    funcs = expand_shells(shells)
    return AOIntegrals(
        s=overlap_matrix(funcs),
        t=kinetic_matrix(funcs),
        v=nuclear_matrix(funcs, charges, centers),
        eri=eri_tensor(funcs),
        e_nuc=nuclear_repulsion(charges, centers),
        n_electrons=n_electrons,
        funcs=funcs,
    )


def fock_matrix(hcore: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return hcore + j - 0.5 * k


def run_rhf(
    ao: AOIntegrals,
    max_cycles: int = 200,
    conv_tol: float = 1e-10,
    diis_depth: int = 8,
) -> RHFResult:
    if ao.n_electrons % 2:
        raise ValueError("restricted solver needs an even electron count")
    n_occ = ao.n_electrons // 2

    sval, svec = np.linalg.eigh(ao.s)
    if sval.min() < 1e-10:
        raise SCFConvergenceError("overlap matrix is numerically singular")
    x = svec @ np.diag(sval**-0.5) @ svec.T

    hcore = ao.hcore

    def diagonalize(f):
        fp = x.T @ f @ x
        energies, cp = np.linalg.eigh(fp)
        c = x @ cp
        return energies, c

    mo_energy, c = diagonalize(hcore)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T

    errs: list[np.ndarray] = []
    focks: list[np.ndarray] = []
    e_old = 0.0
    for cycle in range(1, max_cycles + 1):
        f = fock_matrix(hcore, ao.eri, density)
        # DIIS error in the orthonormal basis
        err = x.T @ (f @ density @ ao.s - ao.s @ density @ f) @ x
        errs.append(err)
        focks.append(f)
        if len(errs) > diis_depth:
            errs.pop(0)
            focks.pop(0)
        if len(errs) > 1:
            f = _diis_extrapolate(errs, focks)

        mo_energy, c = diagonalize(f)
        density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        e_elec = 0.5 * float(np.sum(density * (hcore + fock_matrix(hcore, ao.eri, density))))
        de = abs(e_elec - e_old)
        rms = float(np.sqrt(np.mean(err**2)))
        e_old = e_elec
        if de < conv_tol and rms < np.sqrt(conv_tol):
            f_final = fock_matrix(hcore, ao.eri, density)
            return RHFResult(
                energy=e_elec + ao.e_nuc,
                e_electronic=e_elec,
                mo_coeff=c,
                mo_energy=mo_energy,
                density=density,
                fock=f_final,
                n_occ=n_occ,
                converged=True,
                n_iter=cycle,
            )
    raise SCFConvergenceError(f"no convergence in {max_cycles} cycles (dE={de:.3e})")


def _diis_extrapolate(errs: list[np.ndarray], focks: list[np.ndarray]) -> np.ndarray:
    m = len(errs)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = float(np.sum(errs[i] * errs[j]))
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        coeff = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    out = np.zeros_like(focks[-1])
    for c, f in zip(coeff, focks):
        out += c * f
    return out
