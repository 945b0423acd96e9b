"""Configuration Module.

Pydantic schemas for model files and run settings, and their YAML loaders.
"""
from .schema import (
    BuiltinName, BuiltinSpec, TermSpec, JumpSpec, ModelFile,
    Settings, Tolerances, Limits, EchoDefaults, FilterDefaults
)
from .loader import load_settings, load_model_file, activate_settings, DEFAULTS_PATH

__all__ = [
    "BuiltinName",
    "BuiltinSpec",
    "TermSpec",
    "JumpSpec",
    "ModelFile",
    "Settings",
    "Tolerances",
    "Limits",
    "EchoDefaults",
    "FilterDefaults",
    "load_settings",
    "load_model_file",
    "activate_settings",
    "DEFAULTS_PATH",
]
