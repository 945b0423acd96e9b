"""Pydantic models for model files and run settings."""
from __future__ import annotations
from enum import Enum
from typing import List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator

_PAULI_CHARS = set("IXYZ")


def _check_pauli_text(value: str) -> str:
    body = "".join(value.split()).lstrip("+-−").lstrip("i")
    if not body or set(body) - _PAULI_CHARS:
        raise ValueError(f"not a Pauli string: {value!r}")
    return value


class BuiltinName(str, Enum):
    """Reference models shipped with the package."""
    CLUSTER_Y = "cluster_y"
    CLUSTER_ZIZ = "cluster_ziz"


# --- Model file ---

class TermSpec(BaseModel):
    """One Hamiltonian term J_l h_l."""
    coeff: float = Field(..., description="Real coefficient J_l")
    pauli: str = Field(..., description="Pauli text, e.g. 'ZXZIIIII'")

    @field_validator("pauli")
    @classmethod
    def validate_pauli(cls, v: str) -> str:
        return _check_pauli_text(v)


class JumpSpec(BaseModel):
    """One jump operator with its rate kappa_j."""
    rate: float = Field(..., ge=0.0, description="Nonnegative rate kappa_j")
    pauli: str = Field(..., description="Pauli text of F_j")

    @field_validator("pauli")
    @classmethod
    def validate_pauli(cls, v: str) -> str:
        return _check_pauli_text(v)


class BuiltinSpec(BaseModel):
    """Reference to a builtin model."""
    name: BuiltinName
    n: int = Field(..., ge=4, description="Number of qubits")
    J: float = Field(default=1.0, description="Uniform Hamiltonian coefficient")
    kappa: float = Field(default=0.5, ge=0.0, description="Uniform jump rate")


class ModelFile(BaseModel):
    """Root schema of a model file (JSON or YAML)."""
    builtin: Optional[BuiltinSpec] = None
    n_qubits: Optional[int] = Field(default=None, ge=1)
    hamiltonian: List[TermSpec] = Field(default_factory=list)
    jumps: List[JumpSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self) -> "ModelFile":
        if self.builtin is not None:
            if self.n_qubits is not None or self.hamiltonian or self.jumps:
                raise ValueError("give either 'builtin' or explicit terms, not both")
            return self
        if self.n_qubits is None:
            raise ValueError("'n_qubits' is required for explicit models")
        for item in list(self.hamiltonian) + list(self.jumps):
            body = "".join(item.pauli.split()).lstrip("+-−").lstrip("i")
            if len(body) != self.n_qubits:
                raise ValueError(
                    f"Pauli string {item.pauli!r} has length {len(body)}, expected {self.n_qubits}"
                )
        return self


# --- Settings ---

class Tolerances(BaseModel):
    """Numerical thresholds; every value must be positive."""
    real_tol: float = Field(default=1e-10, gt=0, description="Relative |Im| threshold for real eigenvalues")
    ep_gap: float = Field(default=1e-6, gt=0)
    ep_condition: float = Field(default=1e6, gt=0)
    propagation_condition: float = Field(default=1e8, gt=0)
    oracle_block: float = Field(default=1e-12, gt=0)
    spectrum_match: float = Field(default=1e-10, gt=0)
    secular_residual: float = Field(default=1e-9, gt=0)
    eigen_residual: float = Field(default=1e-10, gt=0)


class Limits(BaseModel):
    dense_cap_sites: int = Field(default=14, ge=1)
    dense_cap_dim: int = Field(default=16384, ge=1)
    oracle_max_qubits: int = Field(default=5, ge=1, le=6)


class EchoDefaults(BaseModel):
    steps: int = Field(default=400, ge=2)
    tmax_over_J: float = Field(default=20.0, gt=0)
    transient_fraction: float = Field(default=0.1, ge=0, lt=1)
    prominence: float = Field(default=1e-3, gt=0)
    beat_periods: float = Field(default=4.0, gt=0, description="Persistent beats the default window must hold")
    max_stretch: float = Field(default=50.0, ge=1, description="Cap on the window stretch relative to tmax_over_J")


class FilterDefaults(BaseModel):
    keep_fraction: float = Field(default=1.0 / 3.0, gt=0, le=1)


class Settings(BaseModel):
    """Root settings schema loaded from defaults.yaml."""
    version: str = "1.0"
    tolerances: Tolerances = Field(default_factory=Tolerances)
    limits: Limits = Field(default_factory=Limits)
    echo: EchoDefaults = Field(default_factory=EchoDefaults)
    filter: FilterDefaults = Field(default_factory=FilterDefaults)
