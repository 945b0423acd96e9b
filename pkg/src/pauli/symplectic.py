"""GF(2) linear algebra and symplectic (Clifford) basis maps."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from errors import DimensionError, ModelError
from .strings import PauliString, anticommutes, multiply

logger = logging.getLogger(__name__)


def gf2_rref(matrix: np.ndarray) -> Tuple[np.ndarray, List[int], np.ndarray]:
    """Row-reduce over GF(2).

    Returns:
        (R, pivots, T) with R = T @ matrix (mod 2) in reduced row echelon form,
        ``pivots`` the pivot column of each nonzero row of R.
    """
    work = (np.asarray(matrix, dtype=np.uint8) & 1).copy()
    rows, cols = work.shape
    transform = np.eye(rows, dtype=np.uint8)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(work[r:, c])[0]
        if candidates.size == 0:
            continue
        p = r + candidates[0]
        if p != r:
            work[[r, p]] = work[[p, r]]
            transform[[r, p]] = transform[[p, r]]
        others = np.nonzero(work[:, c])[0]
        for o in others:
            if o != r:
                work[o] ^= work[r]
                transform[o] ^= transform[r]
        pivots.append(c)
        r += 1
    return work, pivots, transform


def gf2_rank(matrix: np.ndarray) -> int:
    return len(gf2_rref(matrix)[1])


def gf2_inverse(matrix: np.ndarray) -> np.ndarray:
    """Inverse of a square GF(2) matrix; raises ModelError when singular."""
    n = matrix.shape[0]
    reduced, pivots, transform = gf2_rref(matrix)
    if len(pivots) != n:
        raise ModelError(f"matrix is singular over GF(2) (rank {len(pivots)} < {n})")
    return transform


def symplectic_form(n_qubits: int) -> np.ndarray:
    zero = np.zeros((n_qubits, n_qubits), dtype=np.uint8)
    one = np.eye(n_qubits, dtype=np.uint8)
    return np.block([[zero, one], [one, zero]])


@dataclass(frozen=True)
class SymplecticMap:
    """Clifford basis change given by the images of X_1..X_N, Z_1..Z_N.

    ``images[s]`` is the image of X_{s+1} and ``images[N + s]`` the image of
    Z_{s+1}; all images are Hermitian strings.
    """
    n_qubits: int
    images: Tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.images) != 2 * self.n_qubits:
            raise DimensionError(
                f"expected {2 * self.n_qubits} basis images, got {len(self.images)}"
            )
        for img in self.images:
            if img.n_qubits != self.n_qubits:
                raise DimensionError("basis image has wrong qubit count")
            if not img.is_hermitian:
                raise ModelError(f"basis image {img} is not Hermitian")

    @classmethod
    def identity(cls, n_qubits: int) -> "SymplecticMap":
        xs = [PauliString.single(n_qubits, s, "X") for s in range(1, n_qubits + 1)]
        zs = [PauliString.single(n_qubits, s, "Z") for s in range(1, n_qubits + 1)]
        return cls(n_qubits, tuple(xs + zs))

    @classmethod
    def from_pairs(
        cls, x_images: Sequence[PauliString], z_images: Sequence[PauliString]
    ) -> "SymplecticMap":
        return cls(len(x_images), tuple(x_images) + tuple(z_images))

    @cached_property
    def matrix(self) -> np.ndarray:
        """2N x 2N GF(2) matrix; row k holds the (x|z) bits of basis image k."""
        return np.array([img.bits() for img in self.images], dtype=np.uint8)

    @cached_property
    def sign_table(self) -> np.ndarray:
        return np.array([1 if img.phase == 0 else -1 for img in self.images], dtype=np.int8)

    def x_image(self, site: int) -> PauliString:
        return self.images[site - 1]

    def z_image(self, site: int) -> PauliString:
        return self.images[self.n_qubits + site - 1]

    def is_symplectic(self) -> bool:
        m = self.matrix.astype(np.int64)
        omega = symplectic_form(self.n_qubits).astype(np.int64)
        return bool(np.array_equal((m @ omega @ m.T) % 2, omega))

    def apply(self, p: PauliString) -> PauliString:
        if p.n_qubits != self.n_qubits:
            raise DimensionError(f"map acts on {self.n_qubits} qubits, string has {p.n_qubits}")
        # p = i^{e + #Y} prod_s X_s^{x_s} Z_s^{z_s}
        out = PauliString.identity(self.n_qubits).with_phase(p.phase + p.y_count)
        n = self.n_qubits
        for s in range(n):
            if (p.x_bits >> s) & 1:
                out = multiply(out, self.images[s])
            if (p.z_bits >> s) & 1:
                out = multiply(out, self.images[n + s])
        return out

    def inverse(self) -> "SymplecticMap":
        n = self.n_qubits
        inv = gf2_inverse(self.matrix)  # row-vector convention: y = v @ matrix
        preimages: List[PauliString] = []
        identity = SymplecticMap.identity(n)
        for k in range(2 * n):
            candidate = PauliString.from_bits(inv[k])
            image = self.apply(candidate)
            target = identity.images[k]
            if image.canonical() != target:
                raise ModelError("inverse construction failed; map is not a bijection")
            if image.phase != 0:
                candidate = candidate.negate()
            preimages.append(candidate)
        return SymplecticMap(n, tuple(preimages))

    def compose(self, other: "SymplecticMap") -> "SymplecticMap":
        """Map p -> self.apply(other.apply(p))."""
        return SymplecticMap(self.n_qubits, tuple(self.apply(img) for img in other.images))


def apply_map(mapping: SymplecticMap, p: PauliString) -> PauliString:
    return mapping.apply(p)


def check_commutation_preserved(mapping: SymplecticMap, strings: Sequence[PauliString]) -> bool:
    images = [mapping.apply(s) for s in strings]
    for i, a in enumerate(strings):
        for j in range(i + 1, len(strings)):
            if anticommutes(a, strings[j]) != anticommutes(images[i], images[j]):
                return False
    return True
