"""Dynamics Module.

Echo evolution under restricted generators, regime classification and the
state-to-operator correspondence.
"""
from .echo import (
    Regime, EchoSeries, RegimePoint, all_up_state, default_times,
    adaptive_times, beat_frequency, evolve_echo, classify_regime, scan_regimes, largest_count_jump
)
from .correspondence import OperatorImage, operator_correspondence, dual_to_pseudospin

__all__ = [
    "Regime",
    "EchoSeries",
    "RegimePoint",
    "all_up_state",
    "default_times",
    "adaptive_times",
    "beat_frequency",
    "evolve_echo",
    "classify_regime",
    "scan_regimes",
    "largest_count_jump",
    "OperatorImage",
    "operator_correspondence",
    "dual_to_pseudospin",
]
