"""End-to-end generation and verification of problem files.

``generate`` runs geometry -> integrals -> RHF -> active space and writes an
``integrals.v1`` file plus a matching ``pauli.v1`` file mapped here with the
package's own Jordan-Wigner implementation.  ``verify`` re-derives everything
it can from a file's own contents and reports mismatches.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from hamgen import active, fci, jw, molecules
from hamgen.scf import compute_ao_integrals, run_rhf

FCI_DIM_LIMIT = 4000  # sector dimension above which generation skips FCI


@dataclass
class GeneratedProblem:
    problem: active.ActiveSpaceProblem
    e_rhf: float
    e_fci: float | None
    pauli: jw.PauliDict
    hf_bits: str
    integrals_path: str | None = None
    pauli_path: str | None = None


def build_problem(
    molecule: str,
    basis: str,
    distance: float,
    n_active_electrons: int | None = None,
    n_active_orbitals: int | None = None,
    degenerate_gauge: str = "generic",
) -> GeneratedProblem:
    mol = molecules.build(molecule, distance)
    shells = molecules.shells_for(mol, basis)
    ao = compute_ao_integrals(shells, mol.charges, mol.coords, mol.n_electrons)
    rhf = run_rhf(ao)
    problem = active.reduce_active_space(
        ao, rhf, n_active_electrons, n_active_orbitals,
        degenerate_gauge=degenerate_gauge,
    )

    e_ref = active.reference_energy(problem)
    if abs(e_ref - rhf.energy) > 1e-8:
        raise RuntimeError(
            f"active-space reference energy {e_ref:.10f} does not reproduce "
            f"the mean-field energy {rhf.energy:.10f}"
        )

    dim = fci.sector_states(problem.n_spin_orbitals, problem.n_electrons).size
    e_fci = fci.fci_ground(problem).energy if dim <= FCI_DIM_LIMIT else None

    op = jw.map_problem(problem)
    bits = jw.hf_bits(problem)

    problem.metadata = {
        "molecule": molecule,
        "basis": basis,
        "distance_angstrom": distance,
        "n_frozen_orbitals": problem.n_frozen,
        "e_rhf": rhf.energy,
        "degenerate_gauge": degenerate_gauge,
        "generator": "hamgen-0.1.0",
    }
    if problem.rotated_pairs:
        problem.metadata["rotated_mo_pairs"] = [list(p) for p in problem.rotated_pairs]
    if e_fci is not None:
        problem.metadata["e_fci"] = e_fci
    return GeneratedProblem(
        problem=problem, e_rhf=rhf.energy, e_fci=e_fci, pauli=op, hf_bits=bits
    )


def _atomic_write(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def integrals_payload(gen: GeneratedProblem) -> dict:
    p = gen.problem
    return {
        "schema": "integrals.v1",
        "n_spin_orbitals": p.n_spin_orbitals,
        "n_electrons": p.n_electrons,
        "e_offset": p.e_offset,
        "ordering": "alpha_beta",
        "h1": p.h1.tolist(),
        "h2": p.h2.tolist(),
        "metadata": p.metadata,
    }


def pauli_payload(gen: GeneratedProblem) -> dict:
    p = gen.problem
    terms = [
        {"pauli": label, "re": w.real, "im": w.imag}
        for label, w in sorted(gen.pauli.items())
    ]
    return {
        "schema": "pauli.v1",
        "n_qubits": p.n_spin_orbitals,
        "n_electrons": p.n_electrons,
        "hf_bits": gen.hf_bits,
        "e_offset": p.e_offset,
        "terms": terms,
        "metadata": p.metadata,
    }


def file_stem(
    molecule: str,
    basis: str,
    distance: float,
    n_active_electrons: int | None,
    n_active_orbitals: int | None,
) -> str:
    stem = f"{molecule.lower()}_{basis.lower().replace('-', '')}_{distance:.3f}"
    if n_active_electrons is not None or n_active_orbitals is not None:
        stem += f"_{n_active_electrons}e{n_active_orbitals}o"
    return stem


def generate(
    molecule: str,
    basis: str,
    distance: float,
    out_dir: str,
    n_active_electrons: int | None = None,
    n_active_orbitals: int | None = None,
    degenerate_gauge: str = "generic",
) -> GeneratedProblem:
    gen = build_problem(
        molecule, basis, distance, n_active_electrons, n_active_orbitals,
        degenerate_gauge=degenerate_gauge,
    )
    os.makedirs(out_dir, exist_ok=True)
    stem = file_stem(molecule, basis, distance, n_active_electrons, n_active_orbitals)
    gen.integrals_path = os.path.join(out_dir, stem + ".integrals.json")
    gen.pauli_path = os.path.join(out_dir, stem + ".pauli.json")
    _atomic_write(gen.integrals_path, integrals_payload(gen))
    _atomic_write(gen.pauli_path, pauli_payload(gen))
    return gen


def verify(path: str, tol: float = 1e-8) -> list[str]:
    """Re-derive invariants from a problem file; return mismatch messages."""
    with open(path) as fh:
        payload = json.load(fh)
    schema = payload.get("schema")
    if schema == "integrals.v1":
        return _verify_integrals(payload, tol)
    if schema == "pauli.v1":
        return _verify_pauli(payload, tol)
    return [f"unknown schema {schema!r}"]


def _problem_from_payload(payload: dict) -> active.ActiveSpaceProblem:
    return active.ActiveSpaceProblem(
        n_spin_orbitals=int(payload["n_spin_orbitals"]),
        n_electrons=int(payload["n_electrons"]),
        e_offset=float(payload.get("e_offset", 0.0)),
        h1=np.asarray(payload["h1"], dtype=float),
        h2=np.asarray(payload["h2"], dtype=float),
        n_frozen=int(payload.get("metadata", {}).get("n_frozen_orbitals", 0)),
        metadata=payload.get("metadata", {}),
    )


def _verify_integrals(payload: dict, tol: float) -> list[str]:
    errors: list[str] = []
    problem = _problem_from_payload(payload)
    n = problem.n_spin_orbitals
    if payload.get("ordering", "alpha_beta") != "alpha_beta":
        errors.append(f"unsupported ordering {payload.get('ordering')!r}")
    if problem.h1.shape != (n, n):
        errors.append(f"h1 shape {problem.h1.shape} != {(n, n)}")
        return errors
    if problem.h2.shape != (n, n, n, n):
        errors.append(f"h2 shape {problem.h2.shape} != {(n,) * 4}")
        return errors
    if np.abs(problem.h1 - problem.h1.T).max() > tol:
        errors.append("h1 not symmetric")
    if np.abs(problem.h2 - problem.h2.transpose(1, 0, 3, 2)).max() > tol:
        errors.append("h2 violates particle-exchange symmetry")
    if np.abs(problem.h2 - problem.h2.transpose(3, 2, 1, 0)).max() > tol:
        errors.append("h2 violates conjugation symmetry")
    if errors:
        return errors  # energy re-derivation is meaningless on broken tensors

    meta = payload.get("metadata", {})
    e_ref = active.reference_energy(problem)
    if "e_rhf" in meta and abs(e_ref - meta["e_rhf"]) > max(tol, 1e-8):
        errors.append(
            f"reference energy {e_ref:.10f} != recorded e_rhf {meta['e_rhf']:.10f}"
        )
    dim = fci.sector_states(n, problem.n_electrons).size
    if dim <= FCI_DIM_LIMIT:
        e = fci.fci_ground(problem).energy
        if e > e_ref + 1e-9:
            errors.append(
                f"exact sector energy {e:.10f} above reference {e_ref:.10f}"
            )
        if "e_fci" in meta and abs(e - meta["e_fci"]) > max(tol, 1e-8):
            errors.append(
                f"sector ground energy {e:.10f} != recorded e_fci {meta['e_fci']:.10f}"
            )
    return errors


def _verify_pauli(payload: dict, tol: float) -> list[str]:
    errors: list[str] = []
    n = int(payload["n_qubits"])
    bits = payload.get("hf_bits", "")
    if len(bits) != n or set(bits) - {"0", "1"}:
        errors.append(f"bad hf_bits {bits!r}")
        return errors
    if bits.count("1") != int(payload["n_electrons"]):
        errors.append(
            f"hf_bits occupation {bits.count('1')} != n_electrons "
            f"{payload['n_electrons']}"
        )
    op: jw.PauliDict = {}
    for t in payload["terms"]:
        label = t["pauli"]
        if len(label) != n or set(label) - set("IXYZ"):
            errors.append(f"bad pauli label {label!r}")
            return errors
        op[label] = op.get(label, 0.0) + complex(t["re"], t.get("im", 0.0))
    imag = max((abs(w.imag) for w in op.values()), default=0.0)
    if imag > tol:
        errors.append(f"operator not Hermitian (max imaginary weight {imag:.2e})")

    meta = payload.get("metadata", {})
    offset = float(payload.get("e_offset", 0.0))
    e_hf = jw.diagonal_expectation(op, bits).real + offset
    if "e_rhf" in meta and abs(e_hf - meta["e_rhf"]) > max(tol, 1e-8):
        errors.append(
            f"<hf_bits|H|hf_bits> = {e_hf:.10f} != recorded e_rhf "
            f"{meta['e_rhf']:.10f}"
        )
    if n <= 10:  # variational sanity by direct diagonalization
        e0 = float(np.linalg.eigvalsh(jw.dense(op, n))[0]) + offset
        if e0 > e_hf + 1e-9:
            errors.append(f"ground energy {e0:.10f} above reference {e_hf:.10f}")
        if "e_fci" in meta and abs(e0 - meta["e_fci"]) > max(tol, 1e-8):
            errors.append(
                f"ground energy {e0:.10f} != recorded e_fci {meta['e_fci']:.10f}"
            )
    return errors
