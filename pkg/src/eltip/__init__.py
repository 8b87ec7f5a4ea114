"""Eigenvalue-invariant energy-landscape transformations for Ising problems."""
from ._backend import BACKEND
from .ising import (
    IsingProblem,
    PromotedProblem,
    SpinConfig,
    Spectrum,
    energy,
    fix_ancilla,
    full_spectrum,
    gauge_flip,
    hamming_distance,
    parity_transform,
    promote_with_ancilla,
)

__version__ = "0.1.0"
