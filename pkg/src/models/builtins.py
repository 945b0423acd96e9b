"""Reference cluster models.

Both use the open-chain cluster Hamiltonian H = J sum_{l=2}^{N-1} Z_{l-1} X_l Z_{l+1}
and differ in their jumps: Y_j on every site (cluster_y) or Z_{j-1} Z_{j+1}
on the bulk sites (cluster_ziz).
"""
from __future__ import annotations

import logging
from typing import List, Tuple

from config import BuiltinName, BuiltinSpec, ModelFile
from errors import ModelError
from pauli import PauliString
from .lindblad import BasisTag, LindbladModel

logger = logging.getLogger(__name__)

MIN_QUBITS = 4


def _string(n: int, ops: List[Tuple[int, str]]) -> PauliString:
    chars = ["I"] * n
    for site, label in ops:
        chars[site - 1] = label
    return PauliString.from_text("".join(chars))


def cluster_terms(n: int) -> List[PauliString]:
    return [_string(n, [(l - 1, "Z"), (l, "X"), (l + 1, "Z")]) for l in range(2, n)]


def builtin(name: str, n_qubits: int, J: float = 1.0, kappa: float = 0.5) -> LindbladModel:
    """Build a reference model.

    Args:
        name: 'cluster_y' or 'cluster_ziz'
        n_qubits: chain length, at least 4
        J: uniform Hamiltonian coefficient
        kappa: uniform jump rate

    Raises:
        ModelError: unknown name or chain too short
    """
    try:
        kind = BuiltinName(name)
    except ValueError:
        raise ModelError(f"unknown builtin model {name!r}") from None
    if n_qubits < MIN_QUBITS:
        raise ModelError(f"{kind.value} needs at least {MIN_QUBITS} qubits, got {n_qubits}")
    if kappa < 0:
        raise ModelError(f"kappa must be nonnegative, got {kappa}")

    terms = tuple((float(J), h) for h in cluster_terms(n_qubits))
    if kind is BuiltinName.CLUSTER_Y:
        jumps = [_string(n_qubits, [(j, "Y")]) for j in range(1, n_qubits + 1)]
    else:
        jumps = [_string(n_qubits, [(j - 1, "Z"), (j + 1, "Z")]) for j in range(2, n_qubits)]
    logger.debug(f"Built {kind.value} with {n_qubits} qubits, J={J}, kappa={kappa}")
    return LindbladModel(
        n_qubits, terms, tuple((float(kappa), f) for f in jumps), BasisTag.PHYSICAL, kind.value
    )


def from_config(model_file: ModelFile) -> LindbladModel:
    """Turn a validated model file into a LindbladModel."""
    if model_file.builtin is not None:
        spec: BuiltinSpec = model_file.builtin
        return builtin(spec.name.value, spec.n, spec.J, spec.kappa)
    return LindbladModel.from_text(
        [(t.coeff, t.pauli) for t in model_file.hamiltonian],
        [(j.rate, j.pauli) for j in model_file.jumps],
    )
