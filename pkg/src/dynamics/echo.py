"""Loschmidt-echo dynamics under a restricted generator."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla
from scipy.signal import find_peaks

from config import load_settings
from effective import EffectiveGenerator, TfimSpec
from errors import DimensionError, NumericalError
from tfim import dense_hamiltonian, theta_couplings

logger = logging.getLogger(__name__)


class Regime(str, Enum):
    OSCILLATORY = "oscillatory"
    OVERDAMPED = "overdamped"
    UNDETERMINED = "undetermined"


@dataclass
class EchoSeries:
    """Renormalized echo E(t) = <O(0)|O(t)> / ||O(t)||.

    Attributes:
        times: increasing time grid
        values: complex echo per time
        norm_values: ||O(t)|| before renormalization (inf once it overflows)
        log_norm_values: log ||O(t)||, always finite
        regime: classification of |E(t)| after the transient
        extrema: strict local extrema counted for the regime
        method: "eigen" or "expm"
    """
    times: np.ndarray
    values: np.ndarray
    norm_values: np.ndarray
    log_norm_values: np.ndarray
    regime: Regime = Regime.UNDETERMINED
    extrema: int = 0
    method: str = "eigen"

    def rows(self) -> List[Tuple[float, float, float, float, float]]:
        """(t, Re E, Im E, |E|, ||O(t)||) per grid point."""
        return [
            (float(t), float(e.real), float(e.imag), float(abs(e)), float(n))
            for t, e, n in zip(self.times, self.values, self.norm_values)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "regime": self.regime.value,
            "extrema": self.extrema,
            "method": self.method,
            "rows": [list(r) for r in self.rows()],
        }


def all_up_state(n_sites: int) -> np.ndarray:
    """Computational basis vector with every (pseudo)spin up: index 0 of 2^n."""
    if n_sites < 0:
        raise DimensionError("n_sites must be nonnegative")
    state = np.zeros(1 << n_sites, dtype=complex)
    state[0] = 1.0
    return state


def default_times(J: float = 1.0) -> np.ndarray:
    echo = load_settings().echo
    scale = abs(J) if J else 1.0
    return np.linspace(0.0, echo.tmax_over_J / scale, echo.steps)


def beat_frequency(L: np.ndarray, psi0: np.ndarray) -> Optional[float]:
    """Slowest persistent oscillation frequency of the evolved state, if any.

    Modes of L that overlap ``psi0`` and share the largest growth rate
    dominate at late times; two of them with different frequencies beat
    forever. Returns the smallest such frequency difference, or None when a
    single frequency dominates.
    """
    values, vecs = sla.eig(L)
    try:
        coeffs = np.linalg.solve(vecs, psi0)
    except np.linalg.LinAlgError:
        coeffs = np.linalg.lstsq(vecs, psi0, rcond=None)[0]
    weights = np.abs(coeffs) * np.linalg.norm(vecs, axis=0)
    if not np.all(np.isfinite(weights)) or weights.max() == 0:
        return None
    scale = max(1.0, float(np.max(np.abs(values))))
    live = values[weights > 1e-6 * weights.max()]
    top = live[live.real >= live.real.max() - 1e-7 * scale]
    freqs = np.sort(top.imag)
    gaps = np.diff(freqs)
    gaps = gaps[gaps > 1e-6 * scale]
    return float(gaps.min()) if gaps.size else None


def adaptive_times(L: np.ndarray, psi0: np.ndarray, J: float = 1.0) -> np.ndarray:
    """Default grid, stretched to hold ``beat_periods`` of the slowest persistent beat.

    Close to an exceptional point the beat slows down without bound, so a
    fixed window would see the oscillation fade before the regime changes.
    Resolution per unit time is kept; the stretch is capped at ``max_stretch``.
    """
    echo = load_settings().echo
    base = default_times(J)
    omega = beat_frequency(L, psi0)
    if omega is None:
        return base
    window = echo.beat_periods * 2 * np.pi / omega
    stretch = min(max(1.0, window / base[-1]), echo.max_stretch)
    if stretch == 1.0:
        return base
    logger.debug(f"beat frequency {omega:.3e}: echo window stretched {stretch:.1f}x")
    return np.linspace(0.0, base[-1] * stretch, int(np.ceil(echo.steps * stretch)))


def _generator_matrix(gen: Union[EffectiveGenerator, TfimSpec, np.ndarray]) -> np.ndarray:
    if isinstance(gen, TfimSpec):
        return -1j * dense_hamiltonian(gen)
    if isinstance(gen, EffectiveGenerator):
        return np.asarray(gen.matrix, dtype=complex)
    return np.asarray(gen, dtype=complex)


def _propagate_eigen(L: np.ndarray, psi0: np.ndarray, times: np.ndarray, max_cond: float):
    values, vecs = sla.eig(L)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > max_cond:
        logger.warning(f"Eigenvector condition {cond:.2e} above {max_cond:.1e}; using expm")
        return None
    coeffs = np.linalg.solve(vecs, psi0)
    growth = float(values.real.max())
    states = np.empty((len(times), len(psi0)), dtype=complex)
    log_norms = np.empty(len(times))
    for i, t in enumerate(times):
        # shift by the fastest growth rate so exp() stays bounded
        psi = vecs @ (coeffs * np.exp((values - growth) * t))
        norm = np.linalg.norm(psi)
        states[i] = psi / norm if norm > 0 else psi
        log_norms[i] = growth * t + (np.log(norm) if norm > 0 else -np.inf)
    return states, log_norms


def _propagate_expm(L: np.ndarray, psi0: np.ndarray, times: np.ndarray):
    states = np.empty((len(times), len(psi0)), dtype=complex)
    log_norms = np.empty(len(times))
    steps = np.diff(times, prepend=times[0])
    uniform = len(times) > 1 and np.allclose(steps[1:], steps[1], rtol=1e-12, atol=0)
    step_op = sla.expm(L * steps[1]) if uniform else None
    psi, log_norm = psi0.copy(), 0.0
    for i, dt in enumerate(steps):
        if dt > 0:
            psi = (step_op if uniform else sla.expm(L * dt)) @ psi
        norm = np.linalg.norm(psi)
        if not np.isfinite(norm):
            raise NumericalError(f"propagation overflowed at t={times[i]}")
        if norm > 0:
            psi = psi / norm
            log_norm += np.log(norm)
        states[i] = psi
        log_norms[i] = log_norm if norm > 0 else -np.inf
    return states, log_norms


def classify_regime(
    times: np.ndarray,
    values: np.ndarray,
    transient_fraction: Optional[float] = None,
    prominence: Optional[float] = None,
) -> Tuple[Regime, int]:
    """Count strict local extrema of |E(t)| after the transient.

    Three or more extrema read as oscillatory, none as overdamped.
    """
    echo = load_settings().echo
    transient_fraction = echo.transient_fraction if transient_fraction is None else transient_fraction
    prominence = echo.prominence if prominence is None else prominence
    y = np.abs(np.asarray(values))
    y = y[int(len(times) * transient_fraction):]
    if y.size < 3:
        return Regime.UNDETERMINED, 0
    floor = prominence * max(float(y.max()), np.finfo(float).tiny)
    peaks, _ = find_peaks(y, prominence=floor)
    troughs, _ = find_peaks(-y, prominence=floor)
    count = len(peaks) + len(troughs)
    if count >= 3:
        return Regime.OSCILLATORY, count
    if count == 0:
        return Regime.OVERDAMPED, count
    return Regime.UNDETERMINED, count


def evolve_echo(
    gen: Union[EffectiveGenerator, TfimSpec, np.ndarray],
    initial: np.ndarray,
    times: Optional[Sequence[float]] = None,
) -> EchoSeries:
    """Evolve ``initial`` under the generator and record the renormalized echo.

    A TfimSpec evolves under -iH on all M+1 sites; an EffectiveGenerator under
    its restricted Lindbladian block.
    Without ``times`` the grid comes from adaptive_times.

    Raises:
        DimensionError: state and generator sizes differ, or non-increasing times
        NumericalError: non-finite propagation
    """
    settings = load_settings()
    L = _generator_matrix(gen)
    psi0 = np.asarray(initial, dtype=complex).ravel()
    if L.shape != (psi0.size, psi0.size):
        raise DimensionError(f"state of size {psi0.size} does not fit generator {L.shape}")
    if L.shape[0] > settings.limits.dense_cap_dim:
        raise DimensionError(f"dimension {L.shape[0]} exceeds the dense cap")
    norm0 = np.linalg.norm(psi0)
    if norm0 == 0:
        raise DimensionError("initial state is zero")
    psi0 = psi0 / norm0
    if times is None:
        times = adaptive_times(L, psi0, gen.J if isinstance(gen, TfimSpec) else 1.0)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0):
        raise DimensionError("times must be a non-empty strictly increasing grid")

    method = "eigen"
    result = _propagate_eigen(L, psi0, times, settings.tolerances.propagation_condition)
    if result is None:
        method = "expm"
        result = _propagate_expm(L, psi0, times)
    states, log_norms = result
    if not np.all(np.isfinite(states)):
        raise NumericalError("propagation produced non-finite states")

    values = states @ psi0.conj()
    with np.errstate(over="ignore"):
        norms = np.exp(log_norms)
    regime, count = classify_regime(times, values)
    logger.debug(f"evolve_echo dim={psi0.size} method={method} regime={regime.value} extrema={count}")
    return EchoSeries(times, values, norms, log_norms, regime, count, method)


@dataclass
class RegimePoint:
    theta: float
    extrema: int
    regime: Regime


def scan_regimes(
    spec: TfimSpec,
    thetas: Sequence[float],
    times: Optional[Sequence[float]] = None,
    workers: int = 1,
) -> List[RegimePoint]:
    """Echo regime from the all-up state at each theta (J, kappa = theta_couplings)."""
    initial = all_up_state(spec.n_sites)

    def one(theta: float) -> RegimePoint:
        J, kappa = theta_couplings(theta)
        series = evolve_echo(replace(spec, J=J, kappa=kappa), initial, times)
        return RegimePoint(float(theta), series.extrema, series.regime)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(one, thetas))


def largest_count_jump(points: Sequence[RegimePoint]) -> Tuple[float, float, int]:
    """Neighbouring thetas with the largest change in extremum count, and that change."""
    if len(points) < 2:
        raise ValueError("need at least two scan points")
    ordered = sorted(points, key=lambda p: p.theta)
    best = max(zip(ordered, ordered[1:]), key=lambda pair: abs(pair[1].extrema - pair[0].extrema))
    return best[0].theta, best[1].theta, abs(best[1].extrema - best[0].extrema)
