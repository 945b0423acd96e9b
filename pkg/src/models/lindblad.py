"""Pauli-Lindblad model definition and validation."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from errors import DimensionError, ModelError
from pauli import PauliString, anticommutes

logger = logging.getLogger(__name__)


class BasisTag(str, Enum):
    PHYSICAL = "physical"
    TILDE = "tilde"


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian H = sum J_l h_l and jumps with rates kappa_j.

    The Lindbladian acts as L(rho) = -i[H, rho] + sum_j kappa_j (2 F rho F - 2 rho)
    for Hermitian involutory F_j.
    """
    n_qubits: int
    hamiltonian_terms: Tuple[Tuple[float, PauliString], ...]
    jumps: Tuple[Tuple[float, PauliString], ...]
    basis_tag: BasisTag = BasisTag.PHYSICAL
    name: Optional[str] = None

    def __post_init__(self):
        for _, p in list(self.hamiltonian_terms) + list(self.jumps):
            if p.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"string {p} has {p.n_qubits} qubits, model has {self.n_qubits}"
                )

    @classmethod
    def from_text(
        cls,
        terms: Sequence[Tuple[float, str]],
        jumps: Sequence[Tuple[float, str]],
        name: Optional[str] = None,
    ) -> "LindbladModel":
        h = tuple((float(c), PauliString.from_text(t)) for c, t in terms)
        f = tuple((float(r), PauliString.from_text(t)) for r, t in jumps)
        strings = [p for _, p in h + f]
        if not strings:
            raise ModelError("model needs at least one term or jump")
        return cls(strings[0].n_qubits, h, f, BasisTag.PHYSICAL, name)

    @property
    def coefficients(self) -> List[float]:
        return [c for c, _ in self.hamiltonian_terms]

    @property
    def rates(self) -> List[float]:
        return [r for r, _ in self.jumps]

    def with_couplings(self, J: Optional[float] = None, kappa: Optional[float] = None) -> "LindbladModel":
        """Copy with every coefficient set to J and every rate set to kappa."""
        terms = self.hamiltonian_terms if J is None else tuple((J, p) for _, p in self.hamiltonian_terms)
        jumps = self.jumps if kappa is None else tuple((kappa, p) for _, p in self.jumps)
        return LindbladModel(self.n_qubits, terms, jumps, self.basis_tag, self.name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_qubits": self.n_qubits,
            "basis": self.basis_tag.value,
            "name": self.name,
            "hamiltonian": [{"coeff": c, "pauli": p.to_text()} for c, p in self.hamiltonian_terms],
            "jumps": [{"rate": r, "pauli": p.to_text()} for r, p in self.jumps],
        }


@dataclass
class ValidationReport:
    """Result of :func:`validate`; the model is accepted iff ``errors`` is empty."""
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def to_dict(self) -> Dict[str, Any]:
        return {"is_valid": self.is_valid, "errors": self.errors, "warnings": self.warnings}


def validate(model: LindbladModel) -> ValidationReport:
    report = ValidationReport()

    for i, (coeff, h) in enumerate(model.hamiltonian_terms):
        if not h.is_hermitian:
            report.errors.append(f"Hamiltonian term {i} ({h}) is not Hermitian")
        if h.is_identity:
            report.warnings.append(f"Hamiltonian term {i} is proportional to the identity")
    for j, (rate, f) in enumerate(model.jumps):
        if not f.is_hermitian:
            report.errors.append(f"jump {j} ({f}) is not Hermitian")
        if rate < 0:
            report.errors.append(f"jump {j} has negative rate {rate}")

    terms = [h for _, h in model.hamiltonian_terms]
    for i in range(len(terms)):
        for k in range(i + 1, len(terms)):
            if anticommutes(terms[i], terms[k]):
                report.errors.append(
                    f"non-commuting Hamiltonian terms {i} ({terms[i]}) and {k} ({terms[k]})"
                )

    if model.jumps and terms and report.is_valid:
        if not any(anticommutes(h, f) for h in terms for _, f in model.jumps):
            report.warnings.append(
                "every jump commutes with every Hamiltonian term: model is trivially solvable"
            )
    if not model.jumps:
        report.warnings.append("model has no jump operators")

    logger.debug(
        f"Validated model ({model.n_qubits} qubits): "
        f"{len(report.errors)} errors, {len(report.warnings)} warnings"
    )
    return report


def require_valid(model: LindbladModel) -> None:
    report = validate(model)
    if not report.is_valid:
        raise ModelError("; ".join(report.errors))
