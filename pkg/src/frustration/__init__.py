"""Frustration Graph Module."""
from .graph import (
    FrustrationGraph, Claw, Vertex, UNITARY, DISSIPATIVE,
    build_graph, find_claws, subsystem_components, is_path, to_dot, summary
)

__all__ = [
    "FrustrationGraph",
    "Claw",
    "Vertex",
    "UNITARY",
    "DISSIPATIVE",
    "build_graph",
    "find_claws",
    "subsystem_components",
    "is_path",
    "to_dot",
    "summary",
]
