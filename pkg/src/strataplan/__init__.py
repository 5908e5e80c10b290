"""Stratified collision-free motion planners on the annulus and the disc,
with braid linking invariants."""

from . import annulus, braids, disc, harness
from .geometry import (
    AnnulusPoint,
    Configuration,
    DEFAULT_TOLERANCES,
    PlanePoint,
    Tolerances,
    annulus_config,
    canonicalize,
    config_distance,
    disc_config,
    matched_distance,
    min_separation,
)
from .paths import PathPlan, ValidationReport, evaluate_path, validate_path

__all__ = [
    "AnnulusPoint",
    "Configuration",
    "DEFAULT_TOLERANCES",
    "PathPlan",
    "PlanePoint",
    "Tolerances",
    "ValidationReport",
    "annulus",
    "annulus_config",
    "braids",
    "canonicalize",
    "config_distance",
    "disc",
    "disc_config",
    "evaluate_path",
    "harness",
    "matched_distance",
    "min_separation",
    "validate_path",
]

__version__ = "0.1.0"
