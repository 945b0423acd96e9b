"""Fragment discovery, enumeration and counting."""
from __future__ import annotations

import itertools
import logging
from collections import deque
from math import comb
from typing import Dict, Iterator, List, Set

from errors import DimensionError, ModelError
from models import TildeModel
from pauli import PauliString, anticommutes, iter_strings, multiply, string_index
from .labels import FREE_LABELS, GENERATOR_LABELS, Fragment, SiteLabel

logger = logging.getLogger(__name__)

_FREE_BY_CHAR = {lab.pauli: lab for lab in FREE_LABELS}


def _require_single_generator(model: TildeModel) -> None:
    if not model.is_single_generator:
        raise ModelError(
            "model has multi-generator Hamiltonian terms; labels do not apply, "
            "use fragment_of (reachability) instead"
        )


def fragment_of(model: TildeModel, seed: PauliString) -> Fragment:
    """Fragment generated by repeated action of the Lindbladian on ``seed``.

    Args:
        model: tilde model
        seed: tilde-basis string (phase ignored)

    Returns:
        Label fragment for single-generator models, otherwise the explicit
        member set of the reachability closure.
    """
    if seed.n_qubits != model.n_qubits:
        raise DimensionError(f"seed has {seed.n_qubits} qubits, model has {model.n_qubits}")
    if model.is_single_generator:
        return _label_fragment(model, seed)
    return _reachable_fragment(model, seed)


def _label_fragment(model: TildeModel, seed: PauliString) -> Fragment:
    generator_sites = set(model.generator_sites)
    couplings = model.site_couplings
    labels: List[SiteLabel] = []
    for site in range(1, model.n_qubits + 1):
        ch = seed.label(site)
        if site not in generator_sites:
            labels.append(_FREE_BY_CHAR[ch])
        elif ch == "I":
            labels.append(SiteLabel.FROZEN_I)
        elif ch == "Z":
            labels.append(SiteLabel.FROZEN_Z)
        else:
            labels.append(SiteLabel.ACTIVE)
    fragment = Fragment(model.n_qubits, labels=tuple(labels))
    silent = [s for s in fragment.active_sites if couplings.get(s, 0.0) == 0.0]
    if silent:
        logger.debug(f"Active sites {silent} have zero net coupling")
    return fragment


def _neighbors(model: TildeModel, p: PauliString) -> Iterator[PauliString]:
    for _, h in model.base.hamiltonian_terms:
        if not h.is_identity and anticommutes(h, p):
            yield multiply(h, p).canonical()


def _reachable_fragment(model: TildeModel, seed: PauliString) -> Fragment:
    start = seed.canonical()
    seen: Set[PauliString] = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for q in _neighbors(model, p):
            if q not in seen:
                seen.add(q)
                queue.append(q)
    members = tuple(sorted(seen, key=string_index))
    logger.debug(f"Reachability closure of {seed} has {len(members)} members")
    return Fragment(model.n_qubits, members=members)


def enumerate_fragments(model: TildeModel) -> Iterator[Fragment]:
    """Yield every label fragment once, in canonical order, lazily."""
    _require_single_generator(model)
    generator_sites = set(model.generator_sites)
    options = [
        GENERATOR_LABELS if site in generator_sites else FREE_LABELS
        for site in range(1, model.n_qubits + 1)
    ]
    for labels in itertools.product(*options):
        yield Fragment(model.n_qubits, labels=labels)


def enumerate_reachable(model: TildeModel) -> List[Fragment]:
    """Partition all 4^N tilde strings into reachability fragments (small N only)."""
    assigned: Set[PauliString] = set()
    out: List[Fragment] = []
    for p in iter_strings(model.n_qubits):
        if p in assigned:
            continue
        fragment = _reachable_fragment(model, p)
        assigned.update(fragment.members)
        out.append(fragment)
    return out


def count_by_size(model: TildeModel) -> Dict[int, int]:
    """Map k (active sites, dim 2^k) to the number of fragments of that size."""
    _require_single_generator(model)
    m = model.n_generators
    free = model.n_qubits - m
    return {k: comb(m, k) * 2 ** (m - k) * 4 ** free for k in range(m + 1)}


def total_count(model: TildeModel) -> int:
    _require_single_generator(model)
    return 3 ** model.n_generators * 4 ** (model.n_qubits - model.n_generators)
