"""Oracle Module.

Brute-force superoperators at small N and the checks built on them.
"""
from .superoperator import (
    SuperoperatorMatrix, term_matrices, build_superoperator, dense_superoperator
)
from .verify import Check, VerificationReport, verify_fragmentation, verify_conservation

__all__ = [
    "SuperoperatorMatrix",
    "term_matrices",
    "build_superoperator",
    "dense_superoperator",
    "Check",
    "VerificationReport",
    "verify_fragmentation",
    "verify_conservation",
]
