"""Discrete quantum mechanics on Z_n with path-integral bases drawn from the
roots of X^m -+ 1, computed exactly in cyclotomic fields."""

from .exactfield import CyclotomicElement, GaloisAutomorphism, embed_complex, galois_group, make_rootset
from .classical import PotentialSpec, cycle_census, step_classical
from .quantize import WaveFunction, hamiltonian, propagate_forward
from .spectra import char_poly, eigen_solve, total_energies

__version__ = "0.1.0"

__all__ = [
    "CyclotomicElement",
    "GaloisAutomorphism",
    "PotentialSpec",
    "WaveFunction",
    "char_poly",
    "cycle_census",
    "eigen_solve",
    "embed_complex",
    "galois_group",
    "hamiltonian",
    "make_rootset",
    "propagate_forward",
    "step_classical",
    "total_energies",
]
