"""Block-structure and conservation checks against the full superoperator."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import load_settings
from effective import restrict
from errors import DimensionError
from fragments import Fragment, enumerate_fragments, enumerate_reachable
from models import TildeModel
from pauli import iter_strings, string_index
from spectra import multiset_distance
from .superoperator import SuperoperatorMatrix, build_superoperator, term_matrices

logger = logging.getLogger(__name__)


@dataclass
class Check:
    """One measured quantity against its threshold."""
    name: str
    passed: bool
    value: float
    threshold: float
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name, "passed": self.passed, "value": self.value,
            "threshold": self.threshold, "message": self.message,
        }


@dataclass
class VerificationReport:
    """Aggregated results of an oracle run."""
    kind: str
    checks: List[Check] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def add_check(self, check: Check) -> None:
        self.checks.append(check)
        if not check.passed:
            self.errors.append(f"{check.name}: {check.message or check.value}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "errors": self.errors,
            "warnings": self.warnings,
            "details": self.details,
        }

    def output(self, format: str = "json") -> str:
        return json.dumps(self.to_dict(), indent=2, default=str)


def _fragments_of(model: TildeModel) -> List[Fragment]:
    if model.is_single_generator:
        return list(enumerate_fragments(model))
    return enumerate_reachable(model)


def _members(fragment: Fragment) -> List[int]:
    return [string_index(p) for p in fragment.iter_members()]


def verify_fragmentation(
    model: TildeModel,
    superop: Optional[SuperoperatorMatrix] = None,
    fragments: Optional[Sequence[Fragment]] = None,
) -> VerificationReport:
    """Check that L is block diagonal over the fragments and each block matches restrict.

    Strings claimed by no fragment each form their own block, so a wrong
    label shows up as an off-block entry.
    """
    tols = load_settings().tolerances
    superop = superop or build_superoperator(model)
    fragments = list(fragments) if fragments is not None else _fragments_of(model)
    report = VerificationReport("fragmentation")
    dim = superop.dim

    owner = np.full(dim, -1, dtype=int)
    for f_id, fragment in enumerate(fragments):
        for idx in _members(fragment):
            if owner[idx] >= 0:
                report.errors.append(f"string {idx} claimed by fragments {owner[idx]} and {f_id}")
            owner[idx] = f_id
    orphans = np.flatnonzero(owner < 0)
    if orphans.size:
        report.errors.append(f"{orphans.size} strings belong to no fragment")
        owner[orphans] = len(fragments) + np.arange(orphans.size)

    off_block = owner[:, None] != owner[None, :]
    leaked = np.where(off_block, superop.matrix, 0)
    off_norm = float(np.linalg.norm(leaked))
    check = Check("off_block_norm", off_norm < tols.oracle_block, off_norm, tols.oracle_block)
    if not check.passed:
        row, col = np.unravel_index(np.argmax(np.abs(leaked)), leaked.shape)
        basis = superop.basis()
        check.message = (
            f"off-block norm {off_norm:.3e}; largest entry {abs(leaked[row, col]):.3e} "
            f"from {basis[col]} to {basis[row]}"
        )
        report.details["largest_off_block"] = {"row": str(basis[row]), "col": str(basis[col])}
    report.add_check(check)

    worst_spectrum = 0.0
    worst_entry = 0.0
    for fragment in fragments:
        idx = _members(fragment)
        block = superop.block(idx)
        gen = restrict(model, fragment)
        worst_entry = max(worst_entry, float(np.max(np.abs(block - gen.matrix), initial=0.0)))
        dist = multiset_distance(np.linalg.eigvals(block), np.linalg.eigvals(gen.matrix))
        worst_spectrum = max(worst_spectrum, dist)
    report.add_check(Check(
        "block_spectra", worst_spectrum < tols.spectrum_match, worst_spectrum, tols.spectrum_match
    ))
    report.add_check(Check(
        "block_entries", worst_entry < tols.oracle_block, worst_entry, tols.oracle_block
    ))
    report.details["fragments"] = len(fragments)
    logger.info(f"verify_fragmentation: {len(fragments)} fragments, passed={report.passed}")
    return report


def _commutator_norm(diagonal: np.ndarray, matrix: np.ndarray) -> float:
    return float(np.linalg.norm((diagonal[:, None] - diagonal[None, :]) * matrix))


def verify_conservation(
    model: TildeModel, superop: Optional[SuperoperatorMatrix] = None
) -> VerificationReport:
    """Commutators of the per-site projectors with every u_l and d_j.

    Fine projectors onto I~ and Z~ at each generator site are tested, and so
    is the coarse projector onto {I~, Z~}. A single-generator model must
    conserve the fine projectors; other models only need the coarse one and
    get a warning when the fine level fails. A given superoperator is
    checked at both levels alongside the individual terms.
    """
    tols = load_settings().tolerances
    cap = min(4, load_settings().limits.oracle_max_qubits)
    if model.n_qubits > cap:
        raise DimensionError(f"conservation checks are limited to {cap} qubits")
    matrices = [m for _, m in term_matrices(model)]
    if superop is not None:
        matrices.append(superop.matrix)
    labels = [p.labels() for p in iter_strings(model.n_qubits)]
    report = VerificationReport("conservation")

    fine_ok, coarse_ok = True, True
    per_site: Dict[int, Dict[str, float]] = {}
    for site in model.generator_sites:
        chars = np.array([lab[site - 1] for lab in labels])
        p_i = (chars == "I").astype(float)
        p_z = (chars == "Z").astype(float)
        fine = max(
            (max(_commutator_norm(p_i, m), _commutator_norm(p_z, m)) for m in matrices), default=0.0
        )
        coarse = max((_commutator_norm(p_i + p_z, m) for m in matrices), default=0.0)
        per_site[site] = {"fine": fine, "coarse": coarse}
        fine_ok &= fine < tols.oracle_block
        coarse_ok &= coarse < tols.oracle_block

    level = "fine" if fine_ok else ("coarse" if coarse_ok else "none")
    report.details.update({"sites": per_site, "level": level})
    worst_coarse = max((v["coarse"] for v in per_site.values()), default=0.0)
    worst_fine = max((v["fine"] for v in per_site.values()), default=0.0)
    report.add_check(Check("coarse_projectors", coarse_ok, worst_coarse, tols.oracle_block))
    if model.is_single_generator:
        report.add_check(Check("fine_projectors", fine_ok, worst_fine, tols.oracle_block))
    elif not fine_ok:
        report.warnings.append(f"fine projectors not conserved (worst commutator {worst_fine:.3e})")
    logger.info(f"verify_conservation: level={level}")
    return report
