"""Models Module.

Pauli-Lindblad model definition, validation, the reference cluster models and
the stabilizer-generator (tilde) basis transformation.
"""
from .lindblad import BasisTag, LindbladModel, ValidationReport, validate, require_valid
from .builtins import builtin, from_config, cluster_terms
from .tilde import TildeModel, to_tilde

__all__ = [
    "BasisTag",
    "LindbladModel",
    "ValidationReport",
    "validate",
    "require_valid",
    "builtin",
    "from_config",
    "cluster_terms",
    "TildeModel",
    "to_tilde",
]
