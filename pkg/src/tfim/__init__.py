"""TFIM Module.

Exact solution of the open Ising chain with an imaginary transverse field:
bulk dispersion, secular equations, zero modes, mode shapes and EPs.
"""
from .chain import (
    theta_couplings, pbc_dispersion, bloch_matrix, bogoliubov,
    matrix_c, matrix_c_prime, dense_hamiltonian, many_body_levels
)
from .solver import (
    TfimSolution, ZeroMode, chebyshev_u, obc_spectrum, trivial_zero_momentum,
    c_spectrum_mismatch, zero_mode, zero_mode_estimate, eigenvector, exceptional_points
)

__all__ = [
    "theta_couplings",
    "pbc_dispersion",
    "bloch_matrix",
    "bogoliubov",
    "matrix_c",
    "matrix_c_prime",
    "dense_hamiltonian",
    "many_body_levels",
    "TfimSolution",
    "ZeroMode",
    "chebyshev_u",
    "obc_spectrum",
    "trivial_zero_momentum",
    "c_spectrum_mismatch",
    "zero_mode",
    "zero_mode_estimate",
    "eigenvector",
    "exceptional_points",
]
