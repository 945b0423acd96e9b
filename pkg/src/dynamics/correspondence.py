"""Pseudospin states as Pauli-string operators, and the Ising dual basis."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from errors import DimensionError, ModelError
from fragments import Fragment
from models import TildeModel
from pauli import PauliString


@dataclass
class OperatorImage:
    """Operator an effective-model state stands for: sum of amplitude * string."""
    terms: List[Tuple[complex, PauliString, PauliString]]  # (amplitude, tilde, physical)

    @property
    def is_single(self) -> bool:
        return len(self.terms) == 1

    @property
    def tilde(self) -> PauliString:
        if not self.is_single:
            raise ModelError("state is a superposition of several strings")
        return self.terms[0][1]

    @property
    def physical(self) -> PauliString:
        if not self.is_single:
            raise ModelError("state is a superposition of several strings")
        return self.terms[0][2]

    def describe(self) -> List[str]:
        return [f"{amp:.6g} * {t} (physical {p})" for amp, t, p in self.terms]


def operator_correspondence(
    model: TildeModel, fragment: Fragment, state: np.ndarray, tol: float = 1e-12
) -> OperatorImage:
    """Pauli strings (tilde and physical) whose evolution ``state`` represents.

    Basis index b of the pseudospin space is fragment.basis_string(b); the
    physical operator follows through the inverse of the tilde map.
    """
    if fragment.labels is None:
        raise ModelError("operator correspondence needs a label fragment")
    vec = np.asarray(state, dtype=complex).ravel()
    if vec.size != fragment.dim:
        raise DimensionError(f"state of size {vec.size} does not fit fragment of dim {fragment.dim}")
    scale = float(np.max(np.abs(vec), initial=0.0))
    if scale == 0:
        raise ModelError("zero state has no operator")
    terms = []
    for b in np.flatnonzero(np.abs(vec) > tol * scale):
        tilde = fragment.basis_string(int(b))
        terms.append((complex(vec[b]), tilde, model.to_physical(tilde)))
    return OperatorImage(terms)


def dual_to_pseudospin(bits: Sequence[int], tau0: int = 1) -> np.ndarray:
    """Map an Ising computational state on M+1 sites to the M-pseudospin state.

    Pseudospin l carries tau_l = tau0 * prod_{j <= l} sz_j, with sz = +1 for
    bit 0. The last Ising site is fixed by the parity constraint and dropped.
    """
    if tau0 not in (1, -1):
        raise ModelError("tau0 must be +1 or -1")
    bits = [int(b) for b in bits]
    if len(bits) < 2 or any(b not in (0, 1) for b in bits):
        raise DimensionError("need at least two Ising bits, each 0 or 1")
    spins = 1 - 2 * np.array(bits[:-1])
    taus = tau0 * np.cumprod(spins)
    index = 0
    for tau in taus:
        index = 2 * index + (tau < 0)
    out = np.zeros(1 << len(taus), dtype=complex)
    out[index] = 1.0
    return out
