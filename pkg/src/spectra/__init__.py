"""Spectra Module.

Dense eigendecomposition, spacing-ratio statistics, real fraction and
eccentricity, and the pseudo-Hermitian random ensemble.
"""
from .decompose import (
    ComplexSpectrum, eigendecompose, load_spectrum, conjugation_distance, multiset_distance
)
from .statistics import (
    SpectrumStats, real_mask, real_fraction, eccentricity, ellipse_filter,
    spacing_ratios, spectrum_stats, poisson_baseline
)
from .ensemble import (
    RmtSample, SweepPoint, spin_parity, rmt_sample, ensemble_sweep, sweep_real_fraction
)

__all__ = [
    "ComplexSpectrum",
    "eigendecompose",
    "load_spectrum",
    "conjugation_distance",
    "multiset_distance",
    "SpectrumStats",
    "real_mask",
    "real_fraction",
    "eccentricity",
    "ellipse_filter",
    "spacing_ratios",
    "spectrum_stats",
    "poisson_baseline",
    "RmtSample",
    "SweepPoint",
    "spin_parity",
    "rmt_sample",
    "ensemble_sweep",
    "sweep_real_fraction",
]
