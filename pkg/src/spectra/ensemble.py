"""Pseudo-Hermitian random-matrix ensemble and parameter sweeps.

A = chi (P H P + Q H Q) + (P H Q - Q H P) with H = (X + X^T) / 2, X standard
normal, and P, Q the projectors onto eta = +1 / -1. In components
A_ij = H_ij * (chi if eta_i == eta_j else eta_i), so eta A eta = A^T.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from errors import DimensionError, ModelError, NumericalError
from .decompose import eigendecompose
from .statistics import eccentricity, real_fraction

logger = logging.getLogger(__name__)


@dataclass
class RmtSample:
    n: int
    chi: float
    seed: int
    matrix: np.ndarray
    eta: np.ndarray

    def is_pseudo_hermitian(self, atol: float = 0.0) -> bool:
        twisted = self.eta[:, None] * self.matrix * self.eta[None, :]
        return bool(np.allclose(twisted, self.matrix.T, rtol=0, atol=atol))


def spin_parity(n: int) -> np.ndarray:
    """eta = prod sigma^z on n = 2^m basis states: (-1)^popcount(i)."""
    if n <= 0 or n & (n - 1):
        raise DimensionError(f"spin parity needs n = 2^m, got {n}")
    return np.array([1 - 2 * (bin(i).count("1") & 1) for i in range(n)], dtype=float)


def rmt_sample(n: int, chi: float, seed: int, eta: Optional[np.ndarray] = None) -> RmtSample:
    """Draw one ensemble member from a PCG64 stream seeded with ``seed``."""
    if chi < 0:
        raise ModelError(f"chi must be nonnegative, got {chi}")
    if eta is None:
        eta = spin_parity(n)
    else:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (n,) or not np.all(np.abs(eta) == 1):
            raise DimensionError("eta must be a length-n vector of +-1")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.standard_normal((n, n))
    h = 0.5 * (x + x.T)
    same = eta[:, None] == eta[None, :]
    a = h * np.where(same, chi, eta[:, None])
    return RmtSample(n=n, chi=float(chi), seed=seed, matrix=a, eta=eta)


@dataclass
class SweepPoint:
    """Sample-averaged statistics at one parameter value."""
    parameter: float
    f_r: float
    f_r_err: float
    eccentricity: Optional[float]
    eccentricity_err: Optional[float]
    samples: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameter": self.parameter,
            "f_r": self.f_r,
            "f_r_err": self.f_r_err,
            "eccentricity": self.eccentricity,
            "eccentricity_err": self.eccentricity_err,
            "samples": self.samples,
        }


def _measure(matrix: np.ndarray, real_tol: Optional[float], tag: str):
    values = eigendecompose(matrix, source_tag=tag).eigenvalues
    fr = real_fraction(values, real_tol)
    try:
        ecc = eccentricity(values, real_tol=real_tol)
    except NumericalError:
        ecc = None
    return fr, ecc


def _aggregate(parameter: float, results) -> SweepPoint:
    frs = np.array([r[0] for r in results])
    eccs = np.array([r[1] for r in results if r[1] is not None])
    n = len(frs)
    stderr = (lambda v: float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0)
    return SweepPoint(
        parameter=parameter,
        f_r=float(frs.mean()),
        f_r_err=stderr(frs),
        eccentricity=float(eccs.mean()) if eccs.size else None,
        eccentricity_err=stderr(eccs) if eccs.size else None,
        samples=n,
    )


def ensemble_sweep(
    n: int,
    chis: Sequence[float],
    samples: int,
    seed: int,
    real_tol: Optional[float] = None,
    workers: int = 1,
) -> List[SweepPoint]:
    """f_r and eccentricity of the ensemble over chi; sample s uses seed + s."""
    points = []
    for chi in chis:
        def one(s: int, chi=chi):
            return _measure(rmt_sample(n, chi, seed + s).matrix, real_tol, f"rmt chi={chi} s={s}")

        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(one, range(samples)))
        point = _aggregate(float(chi), results)
        logger.info(f"chi={chi}: f_r={point.f_r:.4f}, eccentricity={point.eccentricity}")
        points.append(point)
    return points


def sweep_real_fraction(
    gen_factory: Callable[[float], Any],
    ratios: Sequence[float],
    real_tol: Optional[float] = None,
) -> List[SweepPoint]:
    """f_r and eccentricity of a family of matrices, one per kappa/J ratio.

    ``gen_factory(ratio)`` returns a dense matrix or anything with a
    ``matrix`` attribute (an EffectiveGenerator).
    """
    points = []
    for ratio in ratios:
        built = gen_factory(ratio)
        matrix = getattr(built, "matrix", built)
        fr, ecc = _measure(matrix, real_tol, f"kappa/J={ratio}")
        points.append(SweepPoint(float(ratio), fr, 0.0, ecc, None, 1))
        logger.debug(f"kappa/J={ratio}: f_r={fr:.4f}")
    return points
