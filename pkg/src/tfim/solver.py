"""Open-chain solution: secular equations, zero modes, mode shapes and EPs.

With x = cos k and mu = -i kappa the single-particle eigenvalues of C are
lambda = J^2 + mu^2 - 2 mu J x. The allowed x depend on which edge fields are
present:

    (1, 0), (0, 1): k = alpha pi / (M + 1), alpha = 1..M, plus lambda = 0
    (1, 1):         (mu / J) U_{M+1}(x) - U_M(x) = 0
    (0, 0):         U_M(x) - (mu / J) U_{M-1}(x) = 0, plus lambda = 0

with U_n the Chebyshev polynomials of the second kind.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.cluster.hierarchy import fclusterdata
from scipy.optimize import linear_sum_assignment

from config import load_settings
from effective import TfimSpec
from errors import ModelError, NumericalError
from .chain import matrix_c, matrix_c_prime, theta_couplings

logger = logging.getLogger(__name__)

_POLISH_STEPS = 50
_BISECT_STEPS = 64


@dataclass
class TfimSolution:
    """Momenta and energies of one open chain.

    Attributes:
        spec: chain parameters
        momenta: k_alpha (nan for a trivial zero at kappa = 0)
        lambdas: epsilon^2, branch free
        energies: epsilon, principal square root
        residuals: relative secular residual per momentum
        has_zero_mode: True when a trivial zero or an edge zero mode exists
        zero_mode_index: index of that mode in the arrays
    """
    spec: TfimSpec
    momenta: np.ndarray
    lambdas: np.ndarray
    energies: np.ndarray
    residuals: np.ndarray
    has_zero_mode: bool = False
    zero_mode_index: Optional[int] = None
    trivial: List[int] = field(default_factory=list)

    @property
    def zero_mode_momentum(self) -> Optional[complex]:
        if self.zero_mode_index is None:
            return None
        k = self.momenta[self.zero_mode_index]
        return None if np.isnan(k) else complex(k)

    @property
    def zero_mode_energy(self) -> Optional[complex]:
        if self.zero_mode_index is None:
            return None
        return complex(self.energies[self.zero_mode_index])

    def rows(self) -> List[Tuple[float, float, float, float]]:
        """(Re k, Im k, Re eps, Im eps) per mode."""
        return [(k.real, k.imag, e.real, e.imag) for k, e in zip(self.momenta, self.energies)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "modes": [
                {"k": [k.real, k.imag], "epsilon": [e.real, e.imag], "lambda": [l.real, l.imag]}
                for k, e, l in zip(self.momenta, self.energies, self.lambdas)
            ],
            "max_residual": float(np.max(self.residuals, initial=0.0)),
            "has_zero_mode": self.has_zero_mode,
        }


def chebyshev_u(n: int) -> np.ndarray:
    """U_n expanded in the Chebyshev T basis."""
    if n < 0:
        return np.zeros(1)
    coeffs = np.zeros(n + 1)
    coeffs[n % 2::2] = 2.0
    if n % 2 == 0:
        coeffs[0] = 1.0
    return coeffs


def _secular(spec: TfimSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Chebyshev coefficients of the secular function and of its residual scale."""
    m, ratio = spec.M, spec.mu / spec.J
    if spec.zeta == (1, 1):
        hi, lo = chebyshev_u(m + 1), chebyshev_u(m)
        f = cheb.chebsub(ratio * hi, lo)
        scale = (abs(ratio) * hi, lo)
    else:
        hi, lo = chebyshev_u(m), chebyshev_u(m - 1)
        f = cheb.chebsub(hi, ratio * lo)
        scale = (hi, abs(ratio) * lo)
    return f, scale


def _polish(f: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Simultaneous Newton refinement with mutual repulsion (Aberth) of every root of f."""
    df = cheb.chebder(f)
    x = roots.astype(complex)
    stop = 4 * np.finfo(float).eps
    for _ in range(_POLISH_STEPS):
        d = cheb.chebval(x, df)
        w = np.where(d != 0, cheb.chebval(x, f) / np.where(d != 0, d, 1), 0)
        diffs = x[:, None] - x[None, :]
        # coincident roots exert no repulsion on each other
        diffs[diffs == 0] = np.inf
        repulsion = np.sum(1.0 / diffs, axis=1)
        denom = 1 - w * repulsion
        step = np.where(denom != 0, w / np.where(denom != 0, denom, 1), w)
        x = x - step
        if np.all(np.abs(step) <= stop * np.maximum(1.0, np.abs(x))):
            break
    return x


def _relative_residual(f: np.ndarray, scale, x: np.ndarray) -> np.ndarray:
    num = np.abs(cheb.chebval(x, f))
    den = np.abs(cheb.chebval(x, scale[0])) + np.abs(cheb.chebval(x, scale[1]))
    return num / np.where(den > 0, den, 1.0)


def trivial_zero_momentum(spec: TfimSpec) -> complex:
    """Momentum of the lambda = 0 mode; nan when kappa = 0."""
    if spec.kappa == 0:
        return complex(np.nan, np.nan)
    x0 = (spec.J ** 2 + spec.mu ** 2) / (2 * spec.mu * spec.J)
    return complex(np.arccos(complex(x0)))


def obc_spectrum(spec: TfimSpec) -> TfimSolution:
    """Solve the open chain for all M+1 modes.

    Raises:
        NumericalError: root finding left a residual above tolerance
    """
    if spec.J == 0:
        raise ModelError("obc_spectrum needs J != 0")
    tol = load_settings().tolerances.secular_residual
    m = spec.M
    J2mu2 = spec.J ** 2 + spec.mu ** 2
    trivial: List[int] = []

    if spec.kappa == 0 or spec.zeta in ((1, 0), (0, 1)):
        ks = np.arange(1, m + 1) * np.pi / (m + 1)
        xs = np.cos(ks).astype(complex)
        residuals = np.zeros(m)
        trivial_zero = True
    else:
        f, scale = _secular(spec)
        xs = _polish(f, cheb.chebroots(f))
        residuals = _relative_residual(f, scale, xs)
        trivial_zero = spec.zeta == (0, 0)
    lambdas = J2mu2 - 2 * spec.mu * spec.J * xs
    momenta = np.arccos(xs.astype(complex))

    if trivial_zero:
        trivial.append(len(lambdas))
        momenta = np.append(momenta, trivial_zero_momentum(spec))
        lambdas = np.append(lambdas, 0j)
        residuals = np.append(residuals, 0.0)

    if not np.all(np.isfinite(residuals)):
        raise NumericalError(f"secular roots are not finite for {spec}")
    worst = float(np.max(residuals, initial=0.0))
    if worst > tol:
        raise NumericalError(f"secular residual {worst:.3e} exceeds {tol:.1e} for {spec}")

    zero_index: Optional[int] = trivial[0] if trivial else None
    has_zero = bool(trivial)
    if spec.zeta == (1, 1) and spec.kappa > 0 and m >= 1:
        # det C = mu^(2(M+1)) pins the smallest eigenvalue more accurately than 1 - x cancellation
        idx = int(np.argmin(np.abs(lambdas)))
        others = np.delete(lambdas, idx)
        if np.all(others != 0):
            lambdas[idx] = spec.mu ** (2 * (m + 1)) / np.prod(others)
        if spec.kappa < abs(spec.J):
            zero_index, has_zero = idx, True

    solution = TfimSolution(
        spec=spec,
        momenta=momenta,
        lambdas=lambdas,
        energies=np.sqrt(lambdas.astype(complex)),
        residuals=residuals,
        has_zero_mode=has_zero,
        zero_mode_index=zero_index,
        trivial=trivial,
    )
    logger.debug(f"obc_spectrum {spec.zeta} M={m}: max residual {worst:.2e}")
    return solution


def zero_mode_estimate(J: float, kappa: float) -> Optional[complex]:
    """Thermodynamic-limit zero-mode momentum -pi/2 - i log(kappa/J), or None for kappa >= J."""
    if kappa <= 0 or kappa >= abs(J):
        return None
    return complex(-np.pi / 2, -np.log(kappa / abs(J)))


def c_spectrum_mismatch(solution: TfimSolution, cluster_tol: float = 1e-6) -> float:
    """Largest distance between the solution's lambdas and the eigenvalues of matrix C.

    Eigenvalues of C closer than ``cluster_tol`` (relative to the spectral
    scale) are compared through cluster means: near a coalescence each one is
    only fixed to about the square root of machine precision, their mean to
    machine precision.
    """
    ours = np.asarray(solution.lambdas, dtype=complex)
    dense = np.linalg.eigvals(matrix_c(solution.spec))
    if ours.size != dense.size:
        return float("inf")
    if ours.size < 2:
        return float(np.max(np.abs(ours - dense), initial=0.0))
    rows, cols = linear_sum_assignment(np.abs(dense[:, None] - ours[None, :]))
    matched = ours[cols[np.argsort(rows)]]
    scale = max(1.0, float(np.max(np.abs(dense))))
    labels = fclusterdata(
        np.column_stack([dense.real, dense.imag]), cluster_tol * scale, criterion="distance", method="single"
    )
    return max(
        float(abs(dense[labels == c].mean() - matched[labels == c].mean())) for c in np.unique(labels)
    )


@dataclass
class ZeroMode:
    """Edge zero mode of a chain with both edge fields."""
    momentum: complex
    energy: complex

    @property
    def abs_energy(self) -> float:
        return float(abs(self.energy))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "momentum": [self.momentum.real, self.momentum.imag],
            "energy": [self.energy.real, self.energy.imag],
            "abs_energy": self.abs_energy,
        }


def zero_mode(spec: TfimSpec) -> Optional[ZeroMode]:
    """Edge zero mode of a chain with both edge fields, or None for kappa >= J.

    The momentum is the finite-size secular root closest to the
    thermodynamic estimate, on the representative (+-arccos) nearest to it.
    Its |epsilon| falls off exponentially in M.
    """
    if spec.zeta != (1, 1):
        raise ModelError("zero_mode is defined for chains with both edge fields")
    estimate = zero_mode_estimate(spec.J, spec.kappa)
    if estimate is None:
        return None
    solution = obc_spectrum(spec)
    candidates = np.concatenate([solution.momenta, -solution.momenta])
    best = complex(candidates[np.argmin(np.abs(candidates - estimate))])
    idx = int(np.argmin(np.abs(np.abs(solution.momenta) - abs(best))))
    mode = ZeroMode(momentum=best, energy=complex(solution.energies[idx]))
    logger.info(f"Zero mode k={best:.6g}, |epsilon|={mode.abs_energy:.3e}")
    return mode


def _mode_residual(matrix: np.ndarray, vec: np.ndarray, lam: complex) -> float:
    scale = max(np.linalg.norm(matrix), 1.0)
    return float(np.linalg.norm(matrix @ vec - lam * vec) / scale)


def eigenvector(spec: TfimSpec, k: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Mode shapes psi (u_j) and phi (v_j), j = 1..M+1, each of unit length.

    Raises:
        ModelError: no left edge field, or k is not a secular root
    """
    if spec.zeta_L != 1:
        raise ModelError("mode shapes are given for chains with a left edge field")
    if np.isnan(k):
        raise ModelError("the trivial zero has no mode shape")
    tol = 100 * load_settings().tolerances.eigen_residual
    m = spec.M
    j = np.arange(1, m + 2)
    alternating = (-1.0) ** j
    psi = alternating * np.sin(k * j)
    phi = alternating * np.sin(k * (j - m - 2))
    psi = psi / np.linalg.norm(psi)
    phi = phi / np.linalg.norm(phi)

    lam = spec.J ** 2 + spec.mu ** 2 - 2 * spec.mu * spec.J * np.cos(k)
    residual = _mode_residual(matrix_c(spec), psi, lam)
    if spec.zeta_R == 1:
        residual = max(residual, _mode_residual(matrix_c_prime(spec), phi, lam))
    if residual > tol:
        raise ModelError(f"k={k} is not a secular root (residual {residual:.2e})")
    return psi, phi


def _eigenvalues(spec: TfimSpec, theta: float) -> np.ndarray:
    J, kappa = theta_couplings(theta)
    return np.linalg.eigvals(matrix_c(replace(spec, J=J, kappa=kappa)))


def _real_count(lams: np.ndarray) -> int:
    scale = max(1.0, float(np.max(np.abs(lams))))
    return int(np.sum(np.abs(lams.imag) <= 1e-9 * scale))


def _min_gap(lams: np.ndarray) -> float:
    diffs = np.abs(lams[:, None] - lams[None, :])
    np.fill_diagonal(diffs, np.inf)
    return float(diffs.min())


def exceptional_points(spec: TfimSpec, theta_grid: Sequence[float]) -> List[float]:
    """theta values in the grid range where two eigenvalues of C coalesce.

    theta follows theta_couplings: J = cos(theta pi / 2), kappa = sin(theta pi / 2),
    and the couplings of ``spec`` are replaced at every grid point. A finite
    chain has its EP below theta = 0.5 (about 0.416 for M + 1 = 8); it moves
    towards 0.5, where kappa = J, only as the chain grows.

    A change by two in the number of real eigenvalues between neighbouring
    grid points brackets an EP; the bracket is bisected down to machine
    precision and the endpoint with the smaller gap is checked against the
    coalescence and condition-number thresholds.
    """
    tols = load_settings().tolerances
    # the kappa = 0 endpoint is degenerate but diagonalizable
    grid = sorted(float(t) for t in theta_grid if 0.0 < t < 1.0)
    if len(grid) < 2:
        return []
    counts = [_real_count(_eigenvalues(spec, t)) for t in grid]
    found: List[float] = []
    for (a, ca), (b, cb) in zip(zip(grid, counts), zip(grid[1:], counts[1:])):
        if ca == cb:
            continue
        lo, hi = a, b
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _real_count(_eigenvalues(spec, mid)) == ca:
                lo = mid
            else:
                hi = mid
        # the gap opens like sqrt(theta - theta_EP), so only a bracket near machine precision resolves it
        theta = min((lo, hi), key=lambda t: _min_gap(_eigenvalues(spec, t)))
        J, kappa = theta_couplings(theta)
        C = matrix_c(replace(spec, J=J, kappa=kappa))
        lams, vecs = np.linalg.eig(C)
        scale = max(1.0, float(np.max(np.abs(lams))))
        gap = _min_gap(lams)
        condition = float(np.linalg.cond(vecs))
        if gap < tols.ep_gap * scale or condition > tols.ep_condition:
            logger.info(f"EP at theta={theta:.12f} (gap {gap:.2e}, cond {condition:.2e})")
            found.append(theta)
        else:
            logger.warning(
                f"Real-count change near theta={theta:.6f} without coalescence "
                f"(gap {gap:.2e}, cond {condition:.2e})"
            )
    return found
