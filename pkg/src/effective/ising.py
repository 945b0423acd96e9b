"""ZIZ-jump subsystems as Ising chains with an imaginary transverse field.

A path-shaped subsystem of the cluster model with Z_{j-1} Z_{j+1} jumps has
M active generator sites joined by M-1 sigma^z sigma^z bonds, with optional
single-site fields on the two ends. The Kramers-Wannier dual of that chain is

    H = J sum_{l=1}^{M} tx_l tx_{l+1} + i kappa sum_{l=2}^{M} tz_l
        + i kappa (zeta_L tz_1 + zeta_R tz_{M+1})

on M+1 sites, and the restricted Lindbladian equals -2i H + offset inside the
parity sector fixed by the bond and edge signs.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Collection, Dict, Tuple

import numpy as np

from errors import ModelError
from fragments import Fragment
from frustration import build_graph, is_path
from models import TildeModel
from .generator import jump_signature

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TfimSpec:
    """Open Ising chain with imaginary transverse field.

    Attributes:
        n_sites: M + 1
        J: Ising coupling
        kappa: imaginary field strength (mu = -i kappa)
        zeta_L, zeta_R: 1 when the edge field is present
        sector: parity sector of prod tz the fragment lives in
        epsilon_L, epsilon_R: edge field signs, 0 where the field is absent
        offset: constant part of the restricted Lindbladian
        active_sites: tilde sites of the pseudospins the chain came from
    """
    n_sites: int
    J: float
    kappa: float
    zeta_L: int = 1
    zeta_R: int = 1
    sector: int = 1
    epsilon_L: int = 0
    epsilon_R: int = 0
    offset: float = 0.0
    active_sites: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_sites < 2:
            raise ModelError(f"an Ising chain needs at least 2 sites, got {self.n_sites}")
        if self.zeta_L not in (0, 1) or self.zeta_R not in (0, 1):
            raise ModelError("zeta flags must be 0 or 1")
        if self.sector not in (1, -1):
            raise ModelError("sector must be +1 or -1")

    @property
    def M(self) -> int:
        return self.n_sites - 1

    @property
    def mu(self) -> complex:
        return -1j * self.kappa

    @property
    def zeta(self) -> Tuple[int, int]:
        return self.zeta_L, self.zeta_R

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["active_sites"] = list(self.active_sites)
        return out


def _uniform(values, what: str) -> float:
    values = list(values)
    if not values:
        raise ModelError(f"no {what} in subsystem")
    if not np.allclose(values, values[0], rtol=0, atol=1e-12):
        raise ModelError(f"{what} is not uniform across the subsystem: {values}")
    return float(values[0])


def _jump_center(model: TildeModel, j: int) -> float:
    support = model.physical.jumps[j][1].support
    return sum(support) / len(support)


def ziz_tfim(model: TildeModel, fragment: Fragment, subsystem: Collection) -> TfimSpec:
    """Map a path subsystem of a cluster_ziz fragment to its dual Ising chain.

    Args:
        model: tilde model built from the cluster_ziz builtin
        fragment: label fragment
        subsystem: vertex set from frustration.subsystem_components

    Raises:
        ModelError: wrong model, subsystem not a path, or no active sites
    """
    if model.name != "cluster_ziz":
        raise ModelError("ziz_tfim applies to the cluster_ziz model only")
    if fragment.labels is None:
        raise ModelError("ziz_tfim needs a label fragment")
    graph = build_graph(model, fragment)
    component = frozenset(subsystem)
    if not component or not is_path(graph, component):
        raise ModelError("subsystem is not a path")

    site_of_term = {}
    for l, exps in enumerate(model.term_exponents):
        if sum(exps) == 1:
            site_of_term[l] = model.generator_sites[exps.index(1)]
    units = sorted(idx for kind, idx in component if kind == "u")
    active_sites = tuple(sorted(site_of_term[l] for l in units))
    if not active_sites:
        raise ModelError("subsystem has no active sites")
    positions = {s: i for i, s in enumerate(active_sites)}
    m = len(active_sites)

    J = _uniform((model.site_couplings[s] for s in active_sites), "coupling")
    jumps = sorted(idx for kind, idx in component if kind == "d")
    kappa = _uniform((model.base.jumps[j][0] for j in jumps), "jump rate") if jumps else 0.0

    sector = 1
    eps = {"L": 0, "R": 0}
    bonds = 0
    for j in jumps:
        sign, string = jump_signature(model.base.jumps[j][1], fragment, positions)
        if len(string) == 2:
            if string[1] - string[0] != 1:
                raise ModelError(f"jump {j} couples non-adjacent pseudospins {string}")
            bonds += 1
        elif len(string) == 1:
            left = string[0] == 0 and _jump_center(model, j) < _physical_site(model, active_sites[0])
            side = "L" if left else "R"
            if side == "R" and string[0] != m - 1:
                raise ModelError(f"edge field of jump {j} sits inside the chain")
            if eps[side]:
                raise ModelError(f"two {side} edge fields in subsystem")
            eps[side] = sign
        else:
            raise ModelError(f"jump {j} acts on {len(string)} pseudospins")
        sector *= sign
    if bonds != m - 1:
        raise ModelError("subsystem is not a path")

    zeta_L, zeta_R = int(eps["L"] != 0), int(eps["R"] != 0)
    if not (zeta_L and zeta_R):
        # a missing edge field leaves tx on that end conserved and both sectors isospectral
        sector = 1
    offset = -2.0 * kappa * len(jumps)
    spec = TfimSpec(
        n_sites=m + 1, J=J, kappa=kappa, zeta_L=zeta_L, zeta_R=zeta_R, sector=sector,
        epsilon_L=eps["L"], epsilon_R=eps["R"], offset=offset, active_sites=active_sites,
    )
    logger.debug(f"ZIZ subsystem on sites {active_sites} -> {spec}")
    return spec


def _physical_site(model: TildeModel, tilde_site: int) -> float:
    """Physical position of the Hamiltonian term whose generator sits at ``tilde_site``."""
    for l, exps in enumerate(model.term_exponents):
        if sum(exps) == 1 and model.generator_sites[exps.index(1)] == tilde_site:
            support = model.physical.hamiltonian_terms[l][1].support
            return sum(support) / len(support)
    raise ModelError(f"no term has its generator at site {tilde_site}")


def chain_offset(spec: TfimSpec) -> float:
    """Constant offset of the chain, -2 kappa (M - 1 + zeta_L + zeta_R)."""
    return -2.0 * spec.kappa * (spec.M - 1 + spec.zeta_L + spec.zeta_R)
