"""Dense non-Hermitian eigendecomposition and spectrum comparison helpers."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from config import load_settings
from errors import DimensionError, NumericalError

logger = logging.getLogger(__name__)


@dataclass
class ComplexSpectrum:
    """Eigenvalues of a dense matrix, with optional right eigenvectors (columns)."""
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    source_tag: str = ""

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=complex).ravel()
        if not np.all(np.isfinite(self.eigenvalues)):
            raise NumericalError(f"non-finite eigenvalues in spectrum {self.source_tag!r}")
        if self.eigenvectors is not None and self.eigenvectors.shape[1] != len(self.eigenvalues):
            raise DimensionError("eigenvector count does not match eigenvalue count")

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def shifted(self, offset: complex) -> "ComplexSpectrum":
        return ComplexSpectrum(self.eigenvalues + offset, self.eigenvectors, self.source_tag)

    def save_csv(self, path: Union[str, Path]) -> None:
        """Write one eigenvalue per row as ``re,im`` with 17 significant digits."""
        data = np.column_stack([self.eigenvalues.real, self.eigenvalues.imag])
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header="re,im", comments="")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source_tag,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
        }


def load_spectrum(path: Union[str, Path], source_tag: Optional[str] = None) -> ComplexSpectrum:
    """Read a ``re,im`` CSV written by save_csv (a header row is optional)."""
    path = Path(path)
    with open(path, "r") as f:
        first = f.readline()
    skip = 0 if first.strip() and first.strip()[0] in "+-.0123456789" else 1
    data = np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2))
    if data.shape[1] != 2:
        raise DimensionError(f"{path}: expected two columns re,im")
    return ComplexSpectrum(data[:, 0] + 1j * data[:, 1], source_tag=source_tag or path.stem)


def eigendecompose(
    matrix: Union[np.ndarray, sp.spmatrix],
    vectors: bool = False,
    source_tag: str = "",
    cap: Optional[int] = None,
) -> ComplexSpectrum:
    """Full spectrum of a square matrix via the general dense eigensolver.

    Real input is solved in real arithmetic, so its spectrum is exactly
    closed under conjugation.

    Raises:
        DimensionError: non-square input or dimension above the cap
        NumericalError: LAPACK non-convergence or a large backward error
    """
    if sp.issparse(matrix):
        matrix = matrix.toarray()
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    settings = load_settings()
    cap = cap if cap is not None else settings.limits.dense_cap_dim
    if a.shape[0] > cap:
        raise DimensionError(f"dimension {a.shape[0]} exceeds the dense cap {cap}")
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real

    try:
        if vectors:
            values, vecs = sla.eig(a, right=True)
        else:
            values, vecs = sla.eigvals(a), None
    except (sla.LinAlgError, ValueError) as e:
        raise NumericalError(f"eigensolver failed on {source_tag or 'matrix'}: {e}") from e

    if vecs is not None:
        norm = max(np.linalg.norm(a), np.finfo(float).tiny)
        residual = np.linalg.norm(a @ vecs - vecs * values, axis=0) / norm
        worst = float(residual.max(initial=0.0))
        if worst > 1e-10:
            raise NumericalError(f"eigenpair backward error {worst:.2e} on {source_tag or 'matrix'}")
    logger.debug(f"eigendecompose {source_tag or 'matrix'}: dim {a.shape[0]}")
    return ComplexSpectrum(values, vecs, source_tag)


def conjugation_distance(values: np.ndarray) -> float:
    """Largest distance from an eigenvalue to the conjugated multiset."""
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return 0.0
    tree = cKDTree(np.column_stack([values.real, -values.imag]))
    dist, _ = tree.query(np.column_stack([values.real, values.imag]))
    return float(dist.max())


def multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest pairwise distance under the optimal one-to-one matching of two spectra."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
