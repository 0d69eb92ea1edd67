"""cdadapt: adiabatic-gauge-potential operator pools for ADAPT-VQE."""

from cdadapt.pauli import PauliSum, PauliTerm, commutator, hs_inner, mul, simplify, to_dense

__all__ = [
    "PauliTerm",
    "PauliSum",
    "mul",
    "commutator",
    "hs_inner",
    "simplify",
    "to_dense",
]

__version__ = "0.1.0"
