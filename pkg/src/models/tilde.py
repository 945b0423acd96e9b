"""Stabilizer-generator (tilde) basis.

``to_tilde`` picks independent Hamiltonian terms as generators and builds a
Clifford map sending each generator to a single-site Z~. The map is not
unique; the construction below is fully deterministic:

1. generators are the independent terms in input order;
2. their (x|z) matrix is row-reduced with columns x_1..x_N, z_1..z_N; each
   pivot gives a single-qubit destabilizer (Z_s for an x_s pivot, X_s for a
   z_s pivot), transformed back onto the original generators and then made
   mutually commuting;
3. a generator sits on its pivot site when pivot sites are distinct, otherwise
   generators take tilde sites 1..M;
4. remaining sites are filled by symplectic Gram-Schmidt over single-qubit
   candidates, free sites first.

Every basis image except the generators carries phase +1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from errors import ModelError
from pauli import (
    PauliString, SymplecticMap, anticommutes, gf2_rank, gf2_rref, multiply
)
from .lindblad import BasisTag, LindbladModel, require_valid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TildeModel:
    """A model rewritten in the tilde basis.

    Attributes:
        base: the model with every term and jump replaced by its tilde image
        physical: the original model
        generator_sites: tilde site of each generator, in generator order
        term_exponents: per Hamiltonian term, exponent of each generator
        term_signs: +1/-1 with h_l = sign * prod Z~^n
        map: tilde -> physical basis map
        inverse_map: physical -> tilde basis map
    """
    base: LindbladModel
    physical: LindbladModel
    generator_sites: Tuple[int, ...]
    term_exponents: Tuple[Tuple[int, ...], ...]
    term_signs: Tuple[int, ...]
    map: SymplecticMap
    inverse_map: SymplecticMap

    @property
    def n_qubits(self) -> int:
        return self.base.n_qubits

    @property
    def n_generators(self) -> int:
        return len(self.generator_sites)

    @property
    def name(self) -> Optional[str]:
        return self.physical.name

    @cached_property
    def free_sites(self) -> Tuple[int, ...]:
        used = set(self.generator_sites)
        return tuple(s for s in range(1, self.n_qubits + 1) if s not in used)

    @cached_property
    def is_single_generator(self) -> bool:
        """True when every Hamiltonian term is (up to sign) one generator or the identity."""
        return all(sum(n) <= 1 for n in self.term_exponents)

    @cached_property
    def site_couplings(self) -> Dict[int, float]:
        """Signed unitary coefficient per generator site (single-generator models)."""
        out = {s: 0.0 for s in self.generator_sites}
        for (coeff, _), exps, sign in zip(
            self.base.hamiltonian_terms, self.term_exponents, self.term_signs
        ):
            if sum(exps) == 1:
                out[self.generator_sites[exps.index(1)]] += sign * coeff
        return out

    def tilde_terms(self) -> List[Tuple[float, PauliString]]:
        """Hamiltonian terms as (signed coefficient, +Z~ product)."""
        return [
            (sign * coeff, h.canonical())
            for (coeff, h), sign in zip(self.base.hamiltonian_terms, self.term_signs)
        ]

    def to_physical(self, p: PauliString) -> PauliString:
        return self.map.apply(p)

    def to_tilde_string(self, p: PauliString) -> PauliString:
        return self.inverse_map.apply(p)


def _independent_terms(terms: Sequence[PauliString]) -> List[int]:
    chosen: List[int] = []
    rows: List[np.ndarray] = []
    for i, h in enumerate(terms):
        if h.is_identity:
            continue
        trial = rows + [h.bits()]
        if gf2_rank(np.array(trial)) == len(trial):
            rows = trial
            chosen.append(i)
    return chosen


def _product(strings: Sequence[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for s in strings:
        out = multiply(out, s)
    return out


def _project(v: PauliString, pairs: Sequence[Tuple[PauliString, PauliString]]) -> PauliString:
    """Make ``v`` commute with every (z, x) pair."""
    for z_img, x_img in pairs:
        if anticommutes(v, x_img):
            v = multiply(v, z_img)
        if anticommutes(v, z_img):
            v = multiply(v, x_img)
    return v.canonical()


def _complete_basis(
    n: int,
    pairs: List[Tuple[PauliString, PauliString]],
    free_sites: Sequence[int],
) -> List[Tuple[PauliString, PauliString]]:
    pool: List[PauliString] = []
    for s in list(free_sites) + [s for s in range(1, n + 1) if s not in free_sites]:
        pool.append(PauliString.single(n, s, "X"))
        pool.append(PauliString.single(n, s, "Z"))

    added: List[Tuple[PauliString, PauliString]] = []
    while len(pairs) + len(added) < n:
        current = pairs + added
        projected = [_project(v, current) for v in pool]
        z_new = next((w for w in projected if not w.is_identity), None)
        if z_new is None:
            raise ModelError("symplectic completion failed")
        x_new = next((w for w in projected if anticommutes(w, z_new)), None)
        if x_new is None:
            raise ModelError("symplectic completion found no partner")
        added.append((z_new, x_new))
    return added


def to_tilde(model: LindbladModel) -> TildeModel:
    """Rewrite a valid physical model in its stabilizer-generator basis.

    Raises:
        ModelError: invalid model, or an internal rank failure.
    """
    require_valid(model)
    n = model.n_qubits
    terms = [h for _, h in model.hamiltonian_terms]
    gen_index = _independent_terms(terms)
    generators = [terms[i] for i in gen_index]
    m = len(generators)
    logger.debug(f"Selected {m} generators from {len(terms)} terms: {gen_index}")

    gen_pairs: List[Tuple[PauliString, PauliString]] = []
    pivot_sites: List[int] = []
    if m:
        reduced, pivots, transform = gf2_rref(np.array([g.bits() for g in generators]))
        if len(pivots) != m:
            raise ModelError("rank failure in generator selection")
        singles = []
        for col in pivots:
            site = col % n + 1
            pivot_sites.append(site)
            singles.append(PauliString.single(n, site, "Z" if col < n else "X"))
        # destabilizer of generator k = prod_i singles[i]^{T[i, k]}
        destabilizers = [
            _product([singles[i] for i in range(m) if transform[i, k]], n).canonical()
            for k in range(m)
        ]
        for i in range(m):
            for j in range(i):
                if anticommutes(destabilizers[i], destabilizers[j]):
                    destabilizers[i] = multiply(destabilizers[i], generators[j]).canonical()
        gen_pairs = list(zip(generators, destabilizers))
        # generator k takes the pivot of a reduced row it contributes to
        gen_idx, row_idx = linear_sum_assignment(1 - transform.T.astype(int))
        row_of = dict(zip(gen_idx.tolist(), row_idx.tolist()))
        pivot_sites = [pivot_sites[row_of[k]] for k in range(m)]

    if len(set(pivot_sites)) == m:
        gen_sites = pivot_sites
    else:
        gen_sites = list(range(1, m + 1))
        logger.debug("Pivot sites collide; generators placed on tilde sites 1..M")
    free_sites = [s for s in range(1, n + 1) if s not in gen_sites]
    free_pairs = _complete_basis(n, list(gen_pairs), free_sites)

    z_images: List[Optional[PauliString]] = [None] * n
    x_images: List[Optional[PauliString]] = [None] * n
    for site, (z_img, x_img) in zip(gen_sites, gen_pairs):
        z_images[site - 1], x_images[site - 1] = z_img, x_img
    for site, (z_img, x_img) in zip(free_sites, free_pairs):
        z_images[site - 1], x_images[site - 1] = z_img, x_img

    forward = SymplecticMap.from_pairs(x_images, z_images)
    if not forward.is_symplectic():
        raise ModelError("constructed tilde map is not symplectic")
    inverse = forward.inverse()

    tilde_terms: List[Tuple[float, PauliString]] = []
    exponents: List[Tuple[int, ...]] = []
    signs: List[int] = []
    gen_mask = sum(1 << (s - 1) for s in gen_sites)
    for coeff, h in model.hamiltonian_terms:
        image = inverse.apply(h)
        if image.x_bits or image.z_bits & ~gen_mask:
            raise ModelError(f"term {h} is not a product of generators")
        exponents.append(tuple((image.z_bits >> (s - 1)) & 1 for s in gen_sites))
        signs.append(1 if image.phase == 0 else -1)
        tilde_terms.append((coeff, image))
    tilde_jumps = tuple((rate, inverse.apply(f)) for rate, f in model.jumps)

    base = LindbladModel(n, tuple(tilde_terms), tilde_jumps, BasisTag.TILDE, model.name)
    logger.info(f"Tilde basis: {m} generators at sites {gen_sites}, free sites {free_sites}")
    return TildeModel(
        base=base,
        physical=model,
        generator_sites=tuple(gen_sites),
        term_exponents=tuple(exponents),
        term_signs=tuple(signs),
        map=forward,
        inverse_map=inverse,
    )
