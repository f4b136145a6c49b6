"""MPS-pretrained, noise-mitigated variational quantum eigensolver toolkit."""

from . import circuit, hamio, kernels, mps, pauli, sim, vqe, zne
from .errors import NumericalError, SizeGuardError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "circuit", "hamio", "kernels", "mps", "pauli", "sim", "vqe", "zne",
    "NumericalError", "SizeGuardError", "ValidationError", "__version__",
]
