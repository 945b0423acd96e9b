"""Frustration graphs of Lindbladian superoperator terms.

One vertex per unitary term u_l and per dissipator d_j (constant parts
dropped); an edge joins two vertices whose underlying Pauli strings
anticommute.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from errors import ModelError
from fragments import Fragment, SiteLabel
from models import TildeModel
from pauli import PauliString, anticommutes

logger = logging.getLogger(__name__)

UNITARY = "unitary"
DISSIPATIVE = "dissipative"

Vertex = Tuple[str, int]  # ("u", term index) or ("d", jump index)


@dataclass(frozen=True)
class Claw:
    center: Vertex
    leaves: Tuple[Vertex, Vertex, Vertex]


@dataclass
class FrustrationGraph:
    """Anticommutation graph; node attributes: kind, support, frozen, string."""
    graph: nx.Graph
    fragment: Optional[Fragment] = None

    @property
    def vertices(self) -> List[Vertex]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        return sorted(tuple(sorted(e)) for e in self.graph.edges)

    def is_frozen(self, v: Vertex) -> bool:
        return self.graph.nodes[v]["frozen"]

    def kind(self, v: Vertex) -> str:
        return self.graph.nodes[v]["kind"]

    def support(self, v: Vertex) -> Tuple[int, ...]:
        return self.graph.nodes[v]["support"]

    def dynamic_subgraph(self) -> nx.Graph:
        keep = [v for v in self.graph.nodes if not self.is_frozen(v)]
        return self.graph.subgraph(keep)


def _check_fragment(model: TildeModel, fragment: Fragment) -> None:
    if fragment.n_qubits != model.n_qubits:
        raise ModelError("fragment and model have different sizes")
    if fragment.labels is None:
        return
    generator_sites = set(model.generator_sites)
    for site, lab in enumerate(fragment.labels, 1):
        if (site in generator_sites) == lab.is_free:
            raise ModelError(f"fragment label {lab.name} at site {site} does not fit the model")


def _acts_as_zero(term: PauliString, fragment: Fragment) -> bool:
    if fragment.labels is not None:
        active = set(fragment.active_sites)
        hits = sum(1 for s in term.support if s in active)
        # Z~ factors on frozen/free sites commute with the fixed labels there
        fixed_anticommute = sum(
            1 for s in term.support
            if s not in active and fragment.labels[s - 1] is not SiteLabel.ACTIVE
            and _local_anticommute(term.label(s), fragment.labels[s - 1].pauli)
        )
        return (hits + fixed_anticommute) % 2 == 0
    return all(not anticommutes(term, m) for m in fragment.members)


def _local_anticommute(a: str, b: str) -> bool:
    return a != "I" and b != "I" and a != b


def build_graph(model: TildeModel, fragment: Optional[Fragment] = None) -> FrustrationGraph:
    """Build the frustration graph, marking unitary vertices that vanish on ``fragment``."""
    if fragment is not None:
        _check_fragment(model, fragment)
    g = nx.Graph()
    strings: Dict[Vertex, PauliString] = {}
    for l, (_, h) in enumerate(model.base.hamiltonian_terms):
        if h.is_identity:
            continue
        frozen = fragment is not None and _acts_as_zero(h, fragment)
        strings[("u", l)] = h
        g.add_node(("u", l), kind=UNITARY, support=h.support, frozen=frozen, string=h.to_text())
    for j, (_, f) in enumerate(model.base.jumps):
        strings[("d", j)] = f
        g.add_node(("d", j), kind=DISSIPATIVE, support=f.support, frozen=False, string=f.to_text())
    for a, b in itertools.combinations(sorted(strings), 2):
        if anticommutes(strings[a], strings[b]):
            g.add_edge(a, b)
    logger.debug(f"Frustration graph: {g.number_of_nodes()} vertices, {g.number_of_edges()} edges")
    return FrustrationGraph(g, fragment)


def find_claws(graph: FrustrationGraph) -> List[Claw]:
    """All induced K_{1,3} among non-frozen vertices."""
    g = graph.dynamic_subgraph()
    claws: List[Claw] = []
    for center in sorted(g.nodes):
        neighbours = sorted(g.neighbors(center))
        for a, b, c in itertools.combinations(neighbours, 3):
            if not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c)):
                claws.append(Claw(center, (a, b, c)))
    return claws


def subsystem_components(graph: FrustrationGraph) -> List[FrozenSet[Vertex]]:
    """Connected components after deleting frozen vertices, in canonical order."""
    g = graph.dynamic_subgraph()
    components = [frozenset(c) for c in nx.connected_components(g)]
    return sorted(components, key=lambda c: min(c))


def is_path(graph: FrustrationGraph, component: FrozenSet[Vertex]) -> bool:
    """True when the induced subgraph is a simple path (a single vertex counts)."""
    sub = graph.graph.subgraph(component)
    if sub.number_of_nodes() == 1:
        return True
    return nx.is_tree(sub) and max(d for _, d in sub.degree) <= 2


def to_dot(graph: FrustrationGraph, name: str = "frustration") -> str:
    """DOT rendering: unitary red, dissipative green, frozen gray."""
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for v in graph.vertices:
        attrs = graph.graph.nodes[v]
        color = "gray" if attrs["frozen"] else ("red" if attrs["kind"] == UNITARY else "green")
        label = f"{v[0]}{v[1] + 1}"
        lines.append(
            f'  {v[0]}{v[1]} [label="{label}", fillcolor={color}, tooltip="{attrs["string"]}"];'
        )
    for a, b in graph.edges:
        lines.append(f"  {a[0]}{a[1]} -- {b[0]}{b[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def summary(graph: FrustrationGraph) -> Dict[str, Any]:
    claws = find_claws(graph)
    components = subsystem_components(graph)
    return {
        "vertices": graph.graph.number_of_nodes(),
        "edges": graph.graph.number_of_edges(),
        "frozen": sum(1 for v in graph.vertices if graph.is_frozen(v)),
        "claws": len(claws),
        "components": [len(c) for c in components],
        "candidate_free_fermion": not claws,
    }
