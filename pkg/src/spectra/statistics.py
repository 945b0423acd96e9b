"""Spectral statistics for non-Hermitian spectra.

Complex spacing ratios z = (l_NN - l) / (l_NNN - l) are computed separately
for the upper and lower half-planes; purely real eigenvalues are treated as
their own one-dimensional set and their ratios stored as |z|.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from config import load_settings
from errors import NumericalError
from .decompose import ComplexSpectrum

logger = logging.getLogger(__name__)

_MIN_SUBSET = 3


@dataclass
class SpectrumStats:
    """Summary statistics of one spectrum.

    Attributes:
        f_r: fraction of purely real eigenvalues
        eccentricity: sqrt(1 - (b/a)^2) of the nonreal cloud; None when degenerate
        complex_ratios: spacing ratios of nonreal eigenvalues, |z| <= 1
        real_ratios: |z| of the real-line ratios
        filter_meta: ellipse filter parameters per analysed subset
    """
    f_r: float
    eccentricity: Optional[float]
    complex_ratios: np.ndarray
    real_ratios: np.ndarray
    filter_meta: Dict[str, Any] = field(default_factory=dict)
    n_eigenvalues: int = 0

    @property
    def mean_abs_complex(self) -> Optional[float]:
        return float(np.mean(np.abs(self.complex_ratios))) if self.complex_ratios.size else None

    @property
    def mean_real(self) -> Optional[float]:
        return float(np.mean(self.real_ratios)) if self.real_ratios.size else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_eigenvalues": self.n_eigenvalues,
            "f_r": self.f_r,
            "eccentricity": self.eccentricity,
            "mean_abs_complex_ratio": self.mean_abs_complex,
            "mean_real_ratio": self.mean_real,
            "complex_ratio_count": int(self.complex_ratios.size),
            "real_ratio_count": int(self.real_ratios.size),
            "filter": self.filter_meta,
        }


def _values(spec) -> np.ndarray:
    if isinstance(spec, ComplexSpectrum):
        return spec.eigenvalues
    return np.asarray(spec, dtype=complex).ravel()


def real_mask(values: np.ndarray, real_tol: Optional[float] = None) -> np.ndarray:
    """True where |Im l| < real_tol * max|l| (relative tolerance)."""
    if real_tol is None:
        real_tol = load_settings().tolerances.real_tol
    scale = float(np.max(np.abs(values), initial=0.0)) or 1.0
    return np.abs(values.imag) < real_tol * scale


def real_fraction(spec, real_tol: Optional[float] = None) -> float:
    values = _values(spec)
    if values.size == 0:
        return 0.0
    return float(np.mean(real_mask(values, real_tol)))


def eccentricity(spec, exclude_real: bool = False, real_tol: Optional[float] = None) -> float:
    """Eccentricity of the eigenvalue cloud from the spreads of Re and Im.

    a is the larger of the two standard deviations and b the smaller, so the
    result lies in [0, 1). ``exclude_real`` measures only the nonreal part of
    the spectrum. A cloud with b <= real_tol * a is a line and has no
    eccentricity below 1.

    Raises:
        NumericalError: fewer than two eigenvalues left, or all of them on one line
    """
    if real_tol is None:
        real_tol = load_settings().tolerances.real_tol
    values = _values(spec)
    if exclude_real:
        values = values[~real_mask(values, real_tol)]
    if values.size < 2:
        raise NumericalError("eccentricity needs at least two eigenvalues")
    b, a = sorted([float(np.std(values.real)), float(np.std(values.imag))])
    if a == 0:
        return 0.0
    if b <= real_tol * a:
        raise NumericalError("eigenvalues lie on a line; eccentricity is not below 1")
    return float(np.sqrt(1.0 - (b / a) ** 2))


def ellipse_filter(values: np.ndarray, keep_fraction: float) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Keep the central ``keep_fraction`` of points inside a variance-shaped ellipse.

    The ellipse is centred on the centroid with semi-axes c * (std Re, std Im);
    c is bisected until the retained count reaches ceil(keep_fraction * n).
    """
    n = values.size
    target = int(np.ceil(keep_fraction * n))
    center = complex(values.mean())
    s_re, s_im = float(np.std(values.real)), float(np.std(values.imag))
    dx = (values.real - center.real) / (s_re if s_re > 0 else 1.0)
    dy = (values.imag - center.imag) / (s_im if s_im > 0 else 1.0)
    radius = np.hypot(dx, dy)

    lo, hi = 0.0, float(radius.max()) + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.count_nonzero(radius <= mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-14 * max(hi, 1.0):
            break
    mask = radius <= hi
    meta = {
        "center": [center.real, center.imag],
        "axes": [hi * s_re, hi * s_im],
        "c": hi,
        "kept": int(mask.sum()),
        "total": int(n),
    }
    return mask, meta


def _neighbour_ratios(points: np.ndarray) -> np.ndarray:
    """z for every point from its nearest and next-nearest neighbours in the set."""
    coords = np.column_stack([points.real, points.imag])
    _, idx = cKDTree(coords).query(coords, k=3)
    nn, nnn = points[idx[:, 1]], points[idx[:, 2]]
    with np.errstate(invalid="ignore", divide="ignore"):
        z = (nn - points) / (nnn - points)
    return z


def _subset_ratios(
    points: np.ndarray, keep_fraction: Optional[float], label: str, meta: Dict[str, Any]
) -> np.ndarray:
    if points.size < _MIN_SUBSET:
        logger.warning(f"Skipping {label} subset: {points.size} eigenvalues (need {_MIN_SUBSET})")
        return np.zeros(0, dtype=complex)
    z = _neighbour_ratios(points)
    if keep_fraction is not None:
        mask, meta[label] = ellipse_filter(points, keep_fraction)
        z = z[mask]
    bad = ~np.isfinite(z)
    if bad.any():
        logger.warning(f"Dropping {int(bad.sum())} degenerate ratios in {label} subset")
        z = z[~bad]
    return z


def spacing_ratios(
    spec,
    keep_fraction: Optional[float] = None,
    real_tol: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray, Dict[str, Any]]:
    """Complex and real-line spacing ratios.

    Args:
        spec: ComplexSpectrum or array of eigenvalues
        keep_fraction: central fraction kept by the ellipse filter; None disables it
        real_tol: relative tolerance for "purely real"

    Returns:
        (complex ratios, real |z| ratios, filter metadata)

    Raises:
        NumericalError: no subset had enough eigenvalues
    """
    values = _values(spec)
    real = real_mask(values, real_tol)
    meta: Dict[str, Any] = {}
    upper = values[~real & (values.imag > 0)]
    lower = values[~real & (values.imag < 0)]
    line = values[real].real.astype(complex)

    complex_parts = [
        _subset_ratios(upper, keep_fraction, "upper", meta),
        _subset_ratios(lower, keep_fraction, "lower", meta),
    ]
    complex_z = np.concatenate(complex_parts)
    real_z = np.abs(_subset_ratios(line, keep_fraction, "real", meta)).astype(float)
    if complex_z.size == 0 and real_z.size == 0:
        raise NumericalError("too few eigenvalues for spacing ratios")
    return complex_z, real_z, meta


def spectrum_stats(
    spec,
    keep_fraction: Optional[float] = None,
    real_tol: Optional[float] = None,
    exclude_real: bool = False,
) -> SpectrumStats:
    values = _values(spec)
    complex_z, real_z, meta = spacing_ratios(values, keep_fraction, real_tol)
    try:
        ecc: Optional[float] = eccentricity(values, exclude_real, real_tol)
    except NumericalError:
        logger.info("Eccentricity undefined: too few eigenvalues off a single line")
        ecc = None
    return SpectrumStats(
        f_r=real_fraction(values, real_tol),
        eccentricity=ecc,
        complex_ratios=complex_z,
        real_ratios=real_z,
        filter_meta=meta,
        n_eigenvalues=int(values.size),
    )


def poisson_baseline(
    n_points: int,
    dim: int = 2,
    samples: int = 200,
    seed: int = 0,
    keep_fraction: Optional[float] = 1.0 / 3.0,
) -> Tuple[float, float]:
    """Mean and standard error of |z| for independent uniformly scattered points.

    ``dim`` = 2 scatters in the unit square (complex ratios), 1 on the unit
    interval (real-line ratios).
    """
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    means = np.empty(samples)
    for s in range(samples):
        pts = rng.uniform(size=n_points).astype(complex)
        if dim == 2:
            pts = pts + 1j * rng.uniform(size=n_points)
        z = _neighbour_ratios(pts)
        if keep_fraction is not None:
            mask, _ = ellipse_filter(pts, keep_fraction)
            z = z[mask]
        means[s] = np.mean(np.abs(z[np.isfinite(z)]))
    return float(means.mean()), float(means.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
