"""Single-particle objects of the imaginary-field Ising chain."""
from __future__ import annotations

import logging
from typing import Optional, Tuple, Union

import numpy as np

from config import load_settings
from effective import TfimSpec
from errors import DimensionError, ExceptionalPointError, ModelError

logger = logging.getLogger(__name__)

ArrayLike = Union[complex, np.ndarray]

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_CONTINUATION_STEPS = 200


def theta_couplings(theta: float) -> Tuple[float, float]:
    """(J, kappa) = (cos(theta pi / 2), sin(theta pi / 2))."""
    return float(np.cos(theta * np.pi / 2)), float(np.sin(theta * np.pi / 2))


def _band_squared(k: ArrayLike, J: float, kappa: float) -> ArrayLike:
    return (J * np.cos(k) + 1j * kappa) ** 2 + (J * np.sin(k)) ** 2


def pbc_dispersion(k: ArrayLike, J: float, kappa: float) -> ArrayLike:
    """Bulk quasiparticle energy epsilon_k.

    The square-root branch is followed continuously from kappa = 0, where
    epsilon_k = |J|, along a straight path in kappa.
    """
    scalar = np.ndim(k) == 0
    k = np.asarray(k, dtype=complex)
    eps = np.full(k.shape, abs(J), dtype=complex)
    for kap in np.linspace(0.0, kappa, _CONTINUATION_STEPS + 1)[1:]:
        root = np.sqrt(_band_squared(k, J, kap))
        flip = np.abs(-root - eps) < np.abs(root - eps)
        tie = np.isclose(np.abs(-root - eps), np.abs(root - eps), rtol=0, atol=1e-14)
        eps = np.where(tie, np.where(root.real >= 0, root, -root), np.where(flip, -root, root))
    return complex(eps) if scalar else eps


def bloch_matrix(k: complex, J: float, kappa: float) -> np.ndarray:
    """2x2 Bogoliubov-de Gennes block at momentum k; its eigenvalues are +-epsilon_k."""
    z = J * np.cos(k) + 1j * kappa
    y = -J * np.sin(k)
    return np.array([[z, -1j * y], [1j * y, -z]], dtype=complex)


def bogoliubov(k: complex, J: float, kappa: float) -> Tuple[complex, complex]:
    """Coefficients (u_k, v_k) of the non-unitary Bogoliubov rotation, u^2 - v^2 = 1.

    Raises:
        ExceptionalPointError: epsilon_k = 0
    """
    if abs(_band_squared(k, J, kappa)) < 1e-12:
        raise ExceptionalPointError(
            f"epsilon_k vanishes at k={k}, J={J}, kappa={kappa}: exceptional point"
        )
    eps = pbc_dispersion(k, J, kappa)
    z = J * np.cos(k) + 1j * kappa
    y = -J * np.sin(k)
    if abs(eps + z) < 1e-12:
        # the other root branch; u -> 0 while v carries the mode
        return 0j, 1j
    norm = np.sqrt(2 * eps * (eps + z))
    return complex((eps + z) / norm), complex(1j * y / norm)


def _fields(spec: TfimSpec) -> Tuple[np.ndarray, np.ndarray]:
    n = spec.n_sites
    h = np.full(n, spec.mu, dtype=complex)
    h[0] *= spec.zeta_L
    h[-1] *= spec.zeta_R
    bonds = np.full(n, spec.J, dtype=complex)
    bonds[-1] = 0.0
    return h, bonds


def matrix_c(spec: TfimSpec) -> np.ndarray:
    """Tridiagonal C = (A - B)(A + B); its eigenvalues are epsilon^2."""
    h, bonds = _fields(spec)
    diag = h ** 2 + bonds ** 2
    off = h[1:] * bonds[:-1]
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def matrix_c_prime(spec: TfimSpec) -> np.ndarray:
    """C' = (A + B)(A - B), the partner matrix for the phi components."""
    h, bonds = _fields(spec)
    shifted = np.concatenate([[0.0], bonds[:-1]])
    diag = h ** 2 + shifted ** 2
    off = h[:-1] * bonds[:-1]
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for s in range(n):
        out = np.kron(out, op if s == site else np.eye(2))
    return out


def dense_hamiltonian(spec: TfimSpec, sector: Optional[int] = None) -> np.ndarray:
    """Many-body Hamiltonian on M+1 sites, optionally projected onto a parity sector.

    Site 1 is the most significant factor; the sector is the eigenvalue of
    prod tz, i.e. (-1)^popcount of the basis index.
    """
    n = spec.n_sites
    cap = load_settings().limits.dense_cap_sites
    if n > cap:
        raise DimensionError(f"{n} sites exceed the dense cap of {cap}")
    xs = [_site_operator(_X, s, n) for s in range(n)]
    zs = [_site_operator(_Z, s, n) for s in range(n)]
    field = np.full(n, 1j * spec.kappa)
    field[0] *= spec.zeta_L
    field[-1] *= spec.zeta_R
    H = sum(spec.J * xs[s] @ xs[s + 1] for s in range(n - 1))
    H = H + sum(field[s] * zs[s] for s in range(n))
    if sector is None:
        return H
    if sector not in (1, -1):
        raise ModelError("sector must be +1 or -1")
    parity = np.array([(-1) ** bin(i).count("1") for i in range(1 << n)])
    keep = np.flatnonzero(parity == sector)
    return H[np.ix_(keep, keep)]


def many_body_levels(energies: np.ndarray) -> np.ndarray:
    """All sums of +-epsilon over the modes: the free-fermion many-body spectrum."""
    levels = np.zeros(1, dtype=complex)
    for e in energies:
        levels = np.concatenate([levels + e, levels - e])
    return levels
