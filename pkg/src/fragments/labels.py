"""Fragment labels and membership."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Iterator, Optional, Tuple

from errors import DimensionError
from pauli import PauliString, string_index


class SiteLabel(str, Enum):
    """Per-site fragment label.

    Generator sites are Frozen_I, Frozen_Z or Active; free sites carry their
    fixed Pauli label.
    """
    FROZEN_I = "I"
    FROZEN_Z = "Z"
    ACTIVE = "."
    FREE_I = "i"
    FREE_X = "x"
    FREE_Y = "y"
    FREE_Z = "z"

    @property
    def is_free(self) -> bool:
        return self in FREE_LABELS

    @property
    def pauli(self) -> Optional[str]:
        """Fixed Pauli character, or None for active sites."""
        if self is SiteLabel.ACTIVE:
            return None
        return self.value.upper()


GENERATOR_LABELS = (SiteLabel.FROZEN_I, SiteLabel.FROZEN_Z, SiteLabel.ACTIVE)
FREE_LABELS = (SiteLabel.FREE_I, SiteLabel.FREE_X, SiteLabel.FREE_Y, SiteLabel.FREE_Z)
SORT_KEY = {label: i for i, label in enumerate(GENERATOR_LABELS + FREE_LABELS)}


@dataclass(frozen=True)
class Fragment:
    """Invariant subspace of operator space.

    Label fragments store one SiteLabel per tilde site; fragments found by
    reachability on multi-generator models store their member strings instead.
    Pseudospin index b of a label fragment has its most significant bit on the
    first active site; bit 0 means X~, bit 1 means Y~.
    """
    n_qubits: int
    labels: Optional[Tuple[SiteLabel, ...]] = None
    members: Optional[Tuple[PauliString, ...]] = None

    def __post_init__(self):
        if (self.labels is None) == (self.members is None):
            raise ValueError("a fragment needs exactly one of labels or members")
        if self.labels is not None and len(self.labels) != self.n_qubits:
            raise DimensionError(f"expected {self.n_qubits} labels, got {len(self.labels)}")

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    @cached_property
    def active_sites(self) -> Tuple[int, ...]:
        if self.labels is not None:
            return tuple(s for s, lab in enumerate(self.labels, 1) if lab is SiteLabel.ACTIVE)
        first = self.members[0]
        varying = set()
        for p in self.members[1:]:
            diff = (p.x_bits ^ first.x_bits) | (p.z_bits ^ first.z_bits)
            varying.update(s + 1 for s in range(self.n_qubits) if (diff >> s) & 1)
        return tuple(sorted(varying))

    @property
    def n_active(self) -> int:
        return len(self.active_sites)

    @property
    def dim(self) -> int:
        if self.labels is not None:
            return 1 << self.n_active
        return len(self.members)

    @property
    def frozen_count(self) -> int:
        if self.labels is None:
            return 0
        return sum(1 for lab in self.labels if lab in (SiteLabel.FROZEN_I, SiteLabel.FROZEN_Z))

    def label_text(self) -> str:
        if self.labels is not None:
            return "".join(lab.value for lab in self.labels)
        return "{" + ",".join(p.labels() for p in self.members) + "}"

    def sort_key(self) -> Tuple[int, ...]:
        if self.labels is None:
            return tuple(string_index(p) for p in self.members)
        return tuple(SORT_KEY[lab] for lab in self.labels)

    def basis_string(self, index: int) -> PauliString:
        """Tilde string of pseudospin basis state ``index``."""
        if not 0 <= index < self.dim:
            raise DimensionError(f"index {index} outside fragment of dimension {self.dim}")
        if self.members is not None:
            return self.members[index]
        k = self.n_active
        chars = []
        position = 0
        for lab in self.labels:
            if lab is SiteLabel.ACTIVE:
                bit = (index >> (k - 1 - position)) & 1
                chars.append("Y" if bit else "X")
                position += 1
            else:
                chars.append(lab.pauli)
        return PauliString.from_text("".join(chars))

    def index_of(self, p: PauliString) -> Optional[int]:
        """Pseudospin index of ``p`` (phase ignored), or None when not a member."""
        if p.n_qubits != self.n_qubits:
            raise DimensionError("string and fragment sizes differ")
        if self.members is not None:
            target = p.canonical()
            for i, q in enumerate(self.members):
                if q == target:
                    return i
            return None
        index = 0
        for site, lab in enumerate(self.labels, 1):
            ch = p.label(site)
            if lab is SiteLabel.ACTIVE:
                if ch not in "XY":
                    return None
                index = 2 * index + (ch == "Y")
            elif ch != lab.pauli:
                return None
        return index

    def contains(self, p: PauliString) -> bool:
        return self.index_of(p) is not None

    def iter_members(self) -> Iterator[PauliString]:
        for index in range(self.dim):
            yield self.basis_string(index)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label_text(),
            "active_sites": list(self.active_sites),
            "active_count": self.n_active,
            "dim": self.dim,
        }


def labels_from_text(text: str) -> Tuple[SiteLabel, ...]:
    """Parse the label rendering produced by :meth:`Fragment.label_text`."""
    return tuple(SiteLabel(ch) for ch in text)
