"""Packed signed Pauli strings.

A string on N qubits is stored as two Python-int bitsets (bit s is site s+1)
and a phase exponent e, representing i^e * P_1 ... P_N with Hermitian
single-site factors P in {I, X, Y, Z} and the convention Y = iXZ.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from errors import DimensionError, ModelError

logger = logging.getLogger(__name__)

MAX_DENSE_QUBITS = 14

_LABELS = "IXZY"  # index = x + 2z
_LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PATTERN = re.compile(r"^([+\-−]?)(i?)")

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli string."""
    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ModelError(f"n_qubits must be positive, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if self.x_bits < 0 or self.z_bits < 0 or self.x_bits >= limit or self.z_bits >= limit:
            raise DimensionError(f"bit vectors do not fit in {self.n_qubits} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # --- construction ---

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def single(cls, n_qubits: int, site: int, label: str) -> "PauliString":
        """Single-site operator; ``site`` is 1-based."""
        if not 1 <= site <= n_qubits:
            raise DimensionError(f"site {site} outside 1..{n_qubits}")
        x, z = _LABEL_BITS[label]
        return cls(n_qubits, x << (site - 1), z << (site - 1))

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse ``[sign]CHARS`` where sign is one of +, -, +i, -i.

        Whitespace is ignored so tilde-basis seeds may be grouped, e.g.
        ``"ZXY I XYXY"``.
        """
        compact = "".join(text.split())
        match = _PREFIX_PATTERN.match(compact)
        sign, imag = match.group(1), match.group(2)
        body = compact[match.end():]
        if not body:
            raise ModelError(f"empty Pauli string: {text!r}")
        bad = set(body) - set(_LABEL_BITS)
        if bad:
            raise ModelError(f"invalid Pauli characters {sorted(bad)} in {text!r}")
        x_bits = z_bits = 0
        for i, ch in enumerate(body):
            x, z = _LABEL_BITS[ch]
            x_bits |= x << i
            z_bits |= z << i
        phase = (2 if sign in ("-", "−") else 0) + (1 if imag else 0)
        return cls(len(body), x_bits, z_bits, phase)

    @classmethod
    def from_bits(cls, bits: np.ndarray, phase: int = 0) -> "PauliString":
        """Build from a concatenated (x|z) 0/1 vector of length 2N."""
        n = len(bits) // 2
        x_bits = sum(1 << i for i in range(n) if bits[i])
        z_bits = sum(1 << i for i in range(n) if bits[n + i])
        return cls(n, x_bits, z_bits, phase)

    # --- inspection ---

    def label(self, site: int) -> str:
        """Single-site label at 1-based ``site``."""
        shift = site - 1
        return _LABELS[((self.x_bits >> shift) & 1) + 2 * ((self.z_bits >> shift) & 1)]

    def labels(self) -> str:
        return "".join(self.label(s) for s in range(1, self.n_qubits + 1))

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def support(self) -> Tuple[int, ...]:
        mask = self.x_bits | self.z_bits
        return tuple(s + 1 for s in range(self.n_qubits) if (mask >> s) & 1)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def canonical(self) -> "PauliString":
        """Same Pauli operator with phase +1."""
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, 0)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, phase)

    def negate(self) -> "PauliString":
        return self.with_phase(self.phase + 2)

    def bits(self) -> np.ndarray:
        """Concatenated (x|z) vector of length 2N as uint8."""
        n = self.n_qubits
        out = np.zeros(2 * n, dtype=np.uint8)
        for s in range(n):
            out[s] = (self.x_bits >> s) & 1
            out[n + s] = (self.z_bits >> s) & 1
        return out

    def coefficient(self) -> complex:
        return 1j ** self.phase

    def to_text(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.labels()

    def __str__(self) -> str:
        return self.to_text()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def to_dense(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix; site 1 is the leftmost Kronecker factor."""
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise DimensionError(
                f"dense rendering limited to {MAX_DENSE_QUBITS} qubits, got {self.n_qubits}"
            )
        out = np.array([[1.0 + 0j]])
        for ch in self.labels():
            out = np.kron(out, _SINGLE[ch])
        return self.coefficient() * out


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def symplectic_product(a: PauliString, b: PauliString) -> int:
    """<a, b> = a.x.b.z + a.z.b.x over GF(2)."""
    _check_sizes(a, b)
    return ((a.x_bits & b.z_bits) ^ (a.z_bits & b.x_bits)).bit_count() & 1


def anticommutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_product(a, b) == 1


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Operator product ab with exact phase."""
    _check_sizes(a, b)
    x = a.x_bits ^ b.x_bits
    z = a.z_bits ^ b.z_bits
    # i^{e+y} X^x Z^z form; moving Z^{za} past X^{xb} costs (-1)^{|za & xb|}
    exponent = (
        a.phase + b.phase + a.y_count + b.y_count
        + 2 * (a.z_bits & b.x_bits).bit_count()
        - (x & z).bit_count()
    )
    return PauliString(a.n_qubits, x, z, exponent)


def conjugation_sign(f: PauliString, m: PauliString) -> int:
    """Return eps with f m f = eps m for a Hermitian involutory ``f``."""
    if not f.is_hermitian:
        raise ModelError(f"conjugating string must be Hermitian with square 1, got {f}")
    return -1 if symplectic_product(f, m) else 1


def commutator_action(h: PauliString, m: PauliString) -> Optional[PauliString]:
    """Return hm when the strings anticommute (so [h, m] = 2hm), else None."""
    if not anticommutes(h, m):
        return None
    return multiply(h, m)


def iter_strings(n_qubits: int) -> Iterator[PauliString]:
    """All 4^N phase-free strings in lexicographic I<X<Y<Z order, site 1 most significant."""
    order = "IXYZ"
    for index in range(4 ** n_qubits):
        chars: List[str] = []
        for _ in range(n_qubits):
            chars.append(order[index % 4])
            index //= 4
        yield PauliString.from_text("".join(reversed(chars)))


def string_index(p: PauliString) -> int:
    """Position of ``p`` (phase ignored) in :func:`iter_strings` order."""
    digit = {"I": 0, "X": 1, "Y": 2, "Z": 3}
    index = 0
    for ch in p.labels():
        index = 4 * index + digit[ch]
    return index
