"""Pauli Strings Module.

Bit-packed signed Pauli-string arithmetic and the symplectic basis maps
used to move between the physical and tilde bases.
"""
from .strings import (
    PauliString, anticommutes, multiply, conjugation_sign, symplectic_product,
    commutator_action, iter_strings, string_index, MAX_DENSE_QUBITS
)
from .symplectic import (
    SymplecticMap, apply_map, gf2_rref, gf2_rank, gf2_inverse,
    check_commutation_preserved
)

__all__ = [
    "PauliString",
    "SymplecticMap",
    "anticommutes",
    "multiply",
    "conjugation_sign",
    "symplectic_product",
    "commutator_action",
    "apply_map",
    "iter_strings",
    "string_index",
    "gf2_rref",
    "gf2_rank",
    "gf2_inverse",
    "check_commutation_preserved",
    "MAX_DENSE_QUBITS",
]
