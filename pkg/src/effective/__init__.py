"""Effective Models Module.

Restricted generators in the pseudospin basis and the Ising-chain mapping of
ZIZ-jump subsystems.
"""
from .generator import (
    EffectiveGenerator, restrict, action_matrix, y_coefficients,
    jump_signature, pseudospin_state, render_term, render_terms
)
from .ising import TfimSpec, ziz_tfim, chain_offset

__all__ = [
    "EffectiveGenerator",
    "restrict",
    "action_matrix",
    "y_coefficients",
    "jump_signature",
    "pseudospin_state",
    "render_term",
    "render_terms",
    "TfimSpec",
    "ziz_tfim",
    "chain_offset",
]
