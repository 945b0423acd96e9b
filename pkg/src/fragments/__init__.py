"""Fragments Module.

Krylov-subspace fragments of operator space: labels, lazy enumeration,
reachability closure and the counting identities.
"""
from .labels import SiteLabel, Fragment, GENERATOR_LABELS, FREE_LABELS, labels_from_text
from .enumeration import (
    fragment_of, enumerate_fragments, enumerate_reachable, count_by_size, total_count
)

__all__ = [
    "SiteLabel",
    "Fragment",
    "GENERATOR_LABELS",
    "FREE_LABELS",
    "labels_from_text",
    "fragment_of",
    "enumerate_fragments",
    "enumerate_reachable",
    "count_by_size",
    "total_count",
]
