"""hamgen: Gaussian-orbital integrals, RHF, and active-space problem files."""

__version__ = "0.1.0"
