"""Geometry builders for the small closed-shell systems used here.

Coordinates are produced in bohr; the distance argument is in angstrom since
that is how bond lengths are quoted everywhere in the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hamgen.basis import ANGSTROM_TO_BOHR, ATOMIC_NUMBER, Shell, build_shells


@dataclass(frozen=True)
class Molecule:
    name: str
    symbols: tuple[str, ...]
    coords: np.ndarray  # (n_atoms, 3), bohr
    n_electrons: int

    @property
    def charges(self) -> list[float]:
        return [float(ATOMIC_NUMBER[s]) for s in self.symbols]


def _mol(name: str, symbols: list[str], coords: list[list[float]]) -> Molecule:
    arr = np.asarray(coords, dtype=float)
    n_e = sum(ATOMIC_NUMBER[s] for s in symbols)
    return Molecule(name=name, symbols=tuple(symbols), coords=arr, n_electrons=n_e)


def h2(distance: float) -> Molecule:
    r = distance * ANGSTROM_TO_BOHR
    return _mol("H2", ["H", "H"], [[0.0, 0.0, 0.0], [0.0, 0.0, r]])


def lih(distance: float) -> Molecule:
    r = distance * ANGSTROM_TO_BOHR
    return _mol("LiH", ["Li", "H"], [[0.0, 0.0, 0.0], [0.0, 0.0, r]])


def hf(distance: float) -> Molecule:
    r = distance * ANGSTROM_TO_BOHR
    return _mol("HF", ["H", "F"], [[0.0, 0.0, 0.0], [0.0, 0.0, r]])


def beh2(distance: float) -> Molecule:
    """Linear, symmetric: Be at the origin, hydrogens at +/- r on z."""
    r = distance * ANGSTROM_TO_BOHR
    return _mol(
        "BeH2",
        ["H", "Be", "H"],
        [[0.0, 0.0, -r], [0.0, 0.0, 0.0], [0.0, 0.0, r]],
    )


BUILDERS = {"H2": h2, "LiH": lih, "HF": hf, "BeH2": beh2}


def build(name: str, distance: float) -> Molecule:
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown molecule {name!r}; choose from {sorted(BUILDERS)}"
        ) from None
    return builder(distance)


def shells_for(mol: Molecule, basis: str) -> list[Shell]:
    return build_shells(list(mol.symbols), mol.coords, basis)
