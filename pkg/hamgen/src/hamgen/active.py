"""Active-space reduction and spin-orbital tensors.

Freezes the lowest RHF orbitals into a mean-field core, keeps a window of
active MOs, and expands the result over spin orbitals in block order (all
alpha, then all beta).  The emitted tensors follow the convention

    H = e_offset + sum_ij h1[i][j] a_j^dag a_i
        + 1/2 sum_ijkl h2[i][j][k][l] a_l^dag a_k^dag a_j a_i

so h2[i,j,k,l] = (sp_i sp_l | sp_j sp_k) delta_spin(i,l) delta_spin(j,k)
with chemist-notation spatial integrals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hamgen.scf import AOIntegrals, RHFResult


@dataclass
class ActiveSpaceProblem:
    """Second-quantized problem over active spin orbitals."""

    n_spin_orbitals: int
    n_electrons: int
    e_offset: float  # nuclear repulsion + frozen-core mean-field energy
    h1: np.ndarray  # (n_so, n_so)
    h2: np.ndarray  # (n_so,)*4, convention in the module docstring
    n_frozen: int
    rotated_pairs: list[tuple[int, int]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def mo_integrals(ao: AOIntegrals, mo_coeff: np.ndarray):
    """Full MO-basis hcore and chemist-notation (pq|rs)."""
    c = mo_coeff
    h = c.T @ ao.hcore @ c
    g = np.einsum("pi,qj,pqrs,rk,sl->ijkl", c, c, ao.eri, c, c, optimize=True)
    return h, g


DEGENERACY_TOL = 1e-6


def split_degenerate_pairs(
    mo_energy: np.ndarray, n_frozen: int, n_active_orbitals: int
) -> list[tuple[int, int]]:
    """Near-degenerate MO pairs cut by the active-window boundaries."""
    pairs = []
    for lo in (n_frozen - 1, n_frozen + n_active_orbitals - 1):
        hi = lo + 1
        if 0 <= lo and hi < mo_energy.size:
            if abs(mo_energy[hi] - mo_energy[lo]) < DEGENERACY_TOL:
                pairs.append((lo, hi))
    return pairs


def reduce_active_space(
    ao: AOIntegrals,
    rhf: RHFResult,
    n_active_electrons: int | None = None,
    n_active_orbitals: int | None = None,
    degenerate_gauge: str = "generic",
) -> ActiveSpaceProblem:
    n_elec = ao.n_electrons
    n_mo = ao.n_basis
    if n_active_electrons is None:
        n_active_electrons = n_elec
    if n_active_orbitals is None:
        n_active_orbitals = n_mo

    n_core_elec = n_elec - n_active_electrons
    if n_core_elec < 0 or n_core_elec % 2:
        raise ValueError(
            f"cannot freeze {n_core_elec} electrons (need a non-negative even count)"
        )
    n_frozen = n_core_elec // 2
    if n_frozen + n_active_orbitals > n_mo:
        raise ValueError(
            f"{n_frozen} frozen + {n_active_orbitals} active orbitals "
            f"exceed {n_mo} MOs"
        )
    if n_active_electrons > 2 * n_active_orbitals:
        raise ValueError("more active electrons than active spin orbitals")
    if degenerate_gauge not in ("generic", "aligned"):
        raise ValueError(f"unknown degenerate_gauge {degenerate_gauge!r}")

    # When a window boundary cuts through a (near-)degenerate MO pair, the
    # kept member is gauge-arbitrary: any rotation inside the pair is an
    # equally valid canonical choice, but it changes the truncated space and
    # the operator's sparsity pattern.  "generic" fixes a deterministic
    # mixed representative (45 deg); "aligned" keeps the solver's output,
    # which for symmetric molecules tends to the symmetry-adapted (sparser)
    # choice.
    c = rhf.mo_coeff
    rotated: list[tuple[int, int]] = []
    if degenerate_gauge == "generic":
        pairs = split_degenerate_pairs(rhf.mo_energy, n_frozen, n_active_orbitals)
        if pairs:
            c = c.copy()
            th = np.pi / 4
            rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
            for lo, hi in pairs:
                c[:, lo : hi + 1] = c[:, lo : hi + 1] @ rot
                rotated.append((lo, hi))
    c_core = c[:, :n_frozen]
    c_act = c[:, n_frozen : n_frozen + n_active_orbitals]

    # Mean-field core: fold the frozen density into a one-body operator and
    # a scalar energy shift.
    d_core = 2.0 * c_core @ c_core.T
    j = np.einsum("pqrs,rs->pq", ao.eri, d_core)
    k = np.einsum("prqs,rs->pq", ao.eri, d_core)
    f_core = ao.hcore + j - 0.5 * k
    e_core = 0.5 * float(np.sum(d_core * (ao.hcore + f_core)))

    h1_act = c_act.T @ f_core @ c_act
    g_act = np.einsum(
        "pi,qj,pqrs,rk,sl->ijkl", c_act, c_act, ao.eri, c_act, c_act, optimize=True
    )

    h1_so, h2_so = spin_orbital_tensors(h1_act, g_act)
    return ActiveSpaceProblem(
        n_spin_orbitals=2 * n_active_orbitals,
        n_electrons=n_active_electrons,
        e_offset=ao.e_nuc + e_core,
        h1=h1_so,
        h2=h2_so,
        n_frozen=n_frozen,
        rotated_pairs=rotated,
    )


def spin_orbital_tensors(h1_spatial: np.ndarray, g_chemist: np.ndarray):
    """Expand spatial tensors over spin orbitals, alpha block then beta block."""
    n_o = h1_spatial.shape[0]
    n_so = 2 * n_o
    sp = np.arange(n_so) % n_o
    sigma = np.arange(n_so) // n_o

    h1 = np.zeros((n_so, n_so))
    h1[:n_o, :n_o] = h1_spatial
    h1[n_o:, n_o:] = h1_spatial

    d_il = (sigma[:, None, None, None] == sigma[None, None, None, :]).astype(float)
    d_jk = (sigma[None, :, None, None] == sigma[None, None, :, None]).astype(float)
    h2 = (
        g_chemist[
            sp[:, None, None, None],
            sp[None, None, None, :],
            sp[None, :, None, None],
            sp[None, None, :, None],
        ]
        * d_il
        * d_jk
    )
    return h1, h2


def hf_occupation(n_spin_orbitals: int, n_electrons: int) -> list[int]:
    """Occupied spin-orbital indices for the closed-shell reference
    (block order: alpha spatial 0..n/2-1, then beta)."""
    n_o = n_spin_orbitals // 2
    n_a = (n_electrons + 1) // 2
    n_b = n_electrons - n_a
    return list(range(n_a)) + list(range(n_o, n_o + n_b))


def reference_energy(problem: ActiveSpaceProblem) -> float:
    """<HF|H|HF> including e_offset, straight from the tensors."""
    occ = hf_occupation(problem.n_spin_orbitals, problem.n_electrons)
    e = problem.e_offset
    for i in occ:
        e += problem.h1[i, i]
    for i in occ:
        for j in occ:
            e += 0.5 * (problem.h2[i, j, j, i] - problem.h2[i, j, i, j])
    return float(e)
