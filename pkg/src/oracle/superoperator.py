"""Full Lindbladian superoperator in the Pauli basis for small N.

Two independent constructions: Pauli algebra on tilde strings, and dense
2^N matrices on physical strings permuted into tilde order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config import load_settings
from errors import DimensionError, ModelError
from models import TildeModel
from pauli import PauliString, anticommutes, conjugation_sign, iter_strings, multiply, string_index

logger = logging.getLogger(__name__)


@dataclass
class SuperoperatorMatrix:
    """Matrix of L on operator space; column b is L(basis[b]) expanded over the basis.

    The basis is every phase-free tilde string in lexicographic I<X<Y<Z
    order with site 1 most significant.
    """
    n_qubits: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def basis(self) -> List[PauliString]:
        return list(iter_strings(self.n_qubits))

    def block(self, indices: List[int]) -> np.ndarray:
        idx = np.asarray(indices, dtype=int)
        return self.matrix[np.ix_(idx, idx)]


def _check_size(n: int, cap: Optional[int]) -> None:
    cap = cap if cap is not None else load_settings().limits.oracle_max_qubits
    if n > cap:
        raise DimensionError(f"oracle is limited to {cap} qubits, model has {n}")


def term_matrices(model: TildeModel, cap: Optional[int] = None) -> List[Tuple[str, np.ndarray]]:
    """Superoperator of each u_l = [h_l, .] and d_j = 2(f_j . f_j - .), unscaled."""
    n = model.n_qubits
    _check_size(n, cap)
    basis = list(iter_strings(n))
    dim = len(basis)
    out: List[Tuple[str, np.ndarray]] = []
    for l, (_, h) in enumerate(model.base.hamiltonian_terms):
        u = np.zeros((dim, dim), dtype=complex)
        for b, p in enumerate(basis):
            if anticommutes(h, p):
                q = multiply(h, p)
                u[string_index(q), b] += 2 * q.coefficient()
        out.append((f"u{l + 1}", u))
    for j, (_, f) in enumerate(model.base.jumps):
        diag = [2.0 * (conjugation_sign(f, p) - 1) for p in basis]
        out.append((f"d{j + 1}", np.diag(np.array(diag, dtype=complex))))
    return out


def build_superoperator(model: TildeModel, cap: Optional[int] = None) -> SuperoperatorMatrix:
    """L = -i sum_l J_l u_l + sum_j kappa_j d_j, column by column on tilde strings."""
    terms = term_matrices(model, cap)
    weights = [-1j * c for c, _ in model.base.hamiltonian_terms] + [r for r, _ in model.base.jumps]
    dim = 4 ** model.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for w, (_, m) in zip(weights, terms):
        matrix += w * m
    logger.info(f"Superoperator built: N={model.n_qubits}, dim {matrix.shape[0]}")
    return SuperoperatorMatrix(model.n_qubits, matrix)


def dense_superoperator(model: TildeModel, cap: Optional[int] = None) -> SuperoperatorMatrix:
    """Superoperator from dense physical-basis matrices, permuted into tilde order.

    Entry (a, b) is Tr(P_a L(P_b)) / 2^N on physical strings; tilde string t
    maps to s_t P_pi(t), giving L_tilde[a, b] = s_a s_b L_phys[pi(a), pi(b)].
    """
    n = model.n_qubits
    _check_size(n, cap)
    d = 1 << n
    phys = model.physical
    paulis = np.array([p.to_dense() for p in iter_strings(n)])
    terms = [(c, h.to_dense()) for c, h in phys.hamiltonian_terms]
    jumps = [(r, f.to_dense()) for r, f in phys.jumps]

    dim = len(paulis)
    l_phys = np.zeros((dim, dim), dtype=complex)
    for b, rho in enumerate(paulis):
        out = np.zeros((d, d), dtype=complex)
        for c, h in terms:
            out += -1j * c * (h @ rho - rho @ h)
        for r, f in jumps:
            out += r * 2.0 * (f @ rho @ f.conj().T - rho)
        l_phys[:, b] = np.einsum("aij,ji->a", paulis, out) / d

    perm = np.empty(dim, dtype=int)
    signs = np.empty(dim)
    for a, t in enumerate(iter_strings(n)):
        image = model.to_physical(t)
        if image.phase not in (0, 2):
            raise ModelError(f"tilde string {t} maps to a non-Hermitian string {image}")
        perm[a] = string_index(image)
        signs[a] = 1.0 if image.phase == 0 else -1.0
    matrix = signs[:, None] * l_phys[np.ix_(perm, perm)] * signs[None, :]
    return SuperoperatorMatrix(n, matrix)
