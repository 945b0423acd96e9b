"""Restricted Lindbladian generator on a fragment.

Inside a label fragment every active site is a pseudospin with X~ = up and
Y~ = down. A single-generator unitary term becomes 2 sigma^y on its site and a
dissipator becomes 2 (s_j prod sigma^z - 1), the product running over active
sites where the jump has an X~ or Y~ factor.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Collection, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from config import load_settings
from errors import DimensionError, ModelError
from fragments import Fragment, SiteLabel
from models import TildeModel
from pauli import PauliString, anticommutes, conjugation_sign, multiply

logger = logging.getLogger(__name__)

_SIGMA = {
    "I": sp.identity(2, dtype=complex, format="csr"),
    "X": sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex)),
    "Y": sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex)),
    "Z": sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex)),
}


def render_term(ops: str) -> sp.csr_matrix:
    """Kronecker product of pseudospin Paulis; the first character is the most significant factor."""
    out = sp.identity(1, dtype=complex, format="csr")
    for ch in ops:
        out = sp.kron(out, _SIGMA[ch], format="csr")
    return out


def render_terms(terms: Sequence[Tuple[complex, str]], k: int) -> sp.csr_matrix:
    out = sp.csr_matrix((1 << k, 1 << k), dtype=complex)
    for coeff, ops in terms:
        if coeff != 0:
            out = out + coeff * render_term(ops)
    return out


@dataclass
class EffectiveGenerator:
    """Fragment block of the Lindbladian in the pseudospin basis.

    Attributes:
        fragment: the fragment (possibly restricted to a subsystem)
        active_sites: tilde sites carrying the pseudospins, ascending
        unitary_terms: pseudospin string -> coefficient from -i sum J u
        dissipative_terms: pseudospin string -> coefficient from sum kappa d,
            identity part included
        explicit: dense matrix for reachability fragments, which have no
            pseudospin decomposition
        model: tilde model the block was taken from
    """
    fragment: Fragment
    active_sites: Tuple[int, ...]
    unitary_terms: Dict[str, complex] = field(default_factory=dict)
    dissipative_terms: Dict[str, complex] = field(default_factory=dict)
    explicit: Optional[np.ndarray] = None
    dense_cap: int = 14
    model: Optional[TildeModel] = field(default=None, repr=False)

    @property
    def n_sites(self) -> int:
        return len(self.active_sites)

    @property
    def dim(self) -> int:
        if self.explicit is not None:
            return self.explicit.shape[0]
        return 1 << self.n_sites

    @property
    def term_decomposition(self) -> List[Tuple[complex, str]]:
        terms = list(self.unitary_terms.items()) + list(self.dissipative_terms.items())
        return [(coeff, ops) for ops, coeff in terms]

    @property
    def constant_offset(self) -> float:
        """Identity part of the dissipators."""
        return float(np.real(self.dissipative_terms.get("I" * self.n_sites, 0.0)))

    def sparse_matrix(self) -> sp.csr_matrix:
        if self.explicit is not None:
            return sp.csr_matrix(self.explicit)
        return render_terms(self.term_decomposition, self.n_sites)

    def dissipative_matrix(self) -> sp.csr_matrix:
        items = [(c, ops) for ops, c in self.dissipative_terms.items()]
        return render_terms(items, self.n_sites)

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.explicit is not None:
            return self.explicit
        if self.n_sites > self.dense_cap:
            raise DimensionError(
                f"{self.n_sites} pseudospins exceed the dense cap of {self.dense_cap}; "
                "use term_decomposition or sparse_matrix()"
            )
        return self.sparse_matrix().toarray()

    def describe(self) -> List[str]:
        """Human-readable term list."""
        lines = []
        for coeff, ops in self.term_decomposition:
            if coeff == 0:
                continue
            factors = [f"s{ch.lower()}_{i + 1}" for i, ch in enumerate(ops) if ch != "I"]
            lines.append(f"({coeff.real:+.6g}{coeff.imag:+.6g}j) " + (" ".join(factors) or "1"))
        return lines


def _add(terms: Dict[str, complex], ops: str, coeff: complex) -> None:
    terms[ops] = terms.get(ops, 0.0) + coeff


def _local_anticommute(a: str, b: str) -> bool:
    return a != "I" and b != "I" and a != b


def jump_signature(
    jump: PauliString, fragment: Fragment, positions: Dict[int, int]
) -> Tuple[int, List[int]]:
    """Sign s_j and pseudospin positions of the sigma^z string for one jump.

    Fixed (frozen or free) sites contribute their conjugation sign; active
    sites contribute sigma^z for an X~ or Y~ factor, with an extra -1 for Y~,
    and a constant -1 for a Z~ factor.
    """
    sign = 1
    string: List[int] = []
    for site in jump.support:
        f = jump.label(site)
        lab = fragment.labels[site - 1]
        if lab is SiteLabel.ACTIVE:
            if f in "XY":
                if site in positions:
                    string.append(positions[site])
                if f == "Y":
                    sign = -sign
            else:
                sign = -sign
        elif _local_anticommute(f, lab.pauli):
            sign = -sign
    return sign, sorted(string)


def _vertex_filter(subsystem: Optional[Collection]) -> Tuple[Optional[set], Optional[set]]:
    if subsystem is None:
        return None, None
    units = {idx for kind, idx in subsystem if kind == "u"}
    jumps = {idx for kind, idx in subsystem if kind == "d"}
    return units, jumps


def restrict(
    model: TildeModel,
    fragment: Fragment,
    subsystem: Optional[Collection] = None,
    dense_cap: Optional[int] = None,
) -> EffectiveGenerator:
    """Restrict the Lindbladian to ``fragment``.

    Args:
        model: tilde model the fragment belongs to
        fragment: label or reachability fragment
        subsystem: optional vertex set from frustration.subsystem_components;
            only its terms and active sites are kept
        dense_cap: pseudospin limit for dense materialization (settings default)
    """
    if fragment.n_qubits != model.n_qubits:
        raise ModelError("fragment and model have different sizes")
    if dense_cap is None:
        dense_cap = load_settings().limits.dense_cap_sites

    if fragment.labels is None:
        if subsystem is not None:
            raise ModelError("subsystem restriction needs a label fragment")
        matrix = action_matrix(model, list(fragment.members))
        return EffectiveGenerator(
            fragment, fragment.active_sites, explicit=matrix, dense_cap=dense_cap, model=model
        )
    if not model.is_single_generator:
        raise ModelError("label fragments require single-generator Hamiltonian terms")

    units, jumps = _vertex_filter(subsystem)
    site_of_term = {}
    for l, exps in enumerate(model.term_exponents):
        if sum(exps) == 1:
            site_of_term[l] = model.generator_sites[exps.index(1)]

    active = set(fragment.active_sites)
    if units is not None:
        kept = {site_of_term[l] for l in units if l in site_of_term} & active
        active_sites = tuple(sorted(kept))
    else:
        active_sites = fragment.active_sites
    positions = {s: i for i, s in enumerate(active_sites)}
    k = len(active_sites)
    identity = "I" * k

    gen = EffectiveGenerator(fragment, active_sites, dense_cap=dense_cap, model=model)
    for l, ((coeff, _), sign) in enumerate(zip(model.base.hamiltonian_terms, model.term_signs)):
        site = site_of_term.get(l)
        if site is None or site not in positions or (units is not None and l not in units):
            continue
        ops = identity[:positions[site]] + "Y" + identity[positions[site] + 1:]
        _add(gen.unitary_terms, ops, -2j * sign * coeff)

    for j, (rate, f) in enumerate(model.base.jumps):
        if jumps is not None and j not in jumps:
            continue
        sign, string = jump_signature(f, fragment, positions)
        ops = "".join("Z" if i in string else "I" for i in range(k))
        _add(gen.dissipative_terms, ops, 2.0 * rate * sign)
        _add(gen.dissipative_terms, identity, -2.0 * rate)

    logger.debug(
        f"Restricted to fragment {fragment.label_text()}: {k} pseudospins, "
        f"{len(gen.term_decomposition)} terms"
    )
    return gen


def action_matrix(model: TildeModel, members: Sequence[PauliString]) -> np.ndarray:
    """Generator block built by applying every u_l and d_j to each basis string.

    Column b holds L(members[b]) expanded over ``members``.
    """
    index = {p.canonical(): i for i, p in enumerate(members)}
    dim = len(members)
    out = np.zeros((dim, dim), dtype=complex)
    for b, p in enumerate(members):
        for coeff, h in model.base.hamiltonian_terms:
            if h.is_identity or not anticommutes(h, p):
                continue
            q = multiply(h, p)
            a = index.get(q.canonical())
            if a is None:
                raise ModelError(f"basis is not closed: {h} maps {p} outside")
            out[a, b] += -1j * coeff * 2 * q.coefficient()
        for rate, f in model.base.jumps:
            out[b, b] += 2.0 * rate * (conjugation_sign(f, p) - 1)
    return out


def y_coefficients(gen: EffectiveGenerator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, beta, gamma) of the three-, two- and one-site sigma^z strings.

    Coefficients are in units of 2 kappa and taken over consecutive pseudospins:
    alpha[i] multiplies sz_i sz_{i+1} sz_{i+2}, beta[i] sz_i sz_{i+1}, gamma[i] sz_i.
    """
    model = gen.model
    if model is None or model.name != "cluster_y":
        raise ModelError("y_coefficients applies to the cluster_y model only")
    rates = {rate for rate, _ in model.base.jumps}
    if len(rates) != 1:
        raise ModelError("y_coefficients needs a uniform jump rate")
    kappa = rates.pop()
    k = gen.n_sites
    alpha = np.zeros(max(k - 2, 0))
    beta = np.zeros(max(k - 1, 0))
    gamma = np.zeros(k)
    if kappa == 0:
        return alpha, beta, gamma
    for ops, coeff in gen.dissipative_terms.items():
        where = [i for i, ch in enumerate(ops) if ch == "Z"]
        if not where:
            continue
        value = float(np.real(coeff)) / (2.0 * kappa)
        if where != list(range(where[0], where[0] + len(where))) or len(where) > 3:
            raise ModelError(f"unexpected interaction {ops} for cluster_y")
        target = {1: gamma, 2: beta, 3: alpha}[len(where)]
        target[where[0]] += value
    return alpha, beta, gamma


def pseudospin_state(fragment: Fragment, p: PauliString, active_sites: Optional[Sequence[int]] = None) -> np.ndarray:
    """Basis vector of the pseudospin state representing tilde string ``p``."""
    sites = tuple(active_sites) if active_sites is not None else fragment.active_sites
    if not fragment.contains(p):
        raise ModelError(f"{p} is not in fragment {fragment.label_text()}")
    index = 0
    for s in sites:
        index = 2 * index + (p.label(s) == "Y")
    out = np.zeros(1 << len(sites), dtype=complex)
    out[index] = 1.0
    return out
