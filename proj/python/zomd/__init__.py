"""Certified zeroth-order mirror descent."""

import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    InfeasibleError,
    bregman,
    compute_alpha,
    eta_feasible_max,
    floor_radius,
    kantorovich_cos,
    minimize,
    mirror_step,
    star_c,
    tight_dominance_alpha,
)


def run_config(text: str) -> dict:
    """Run the descent described by a key = value config and return report.json as a dict."""
    return json.loads(_core._run_config(text))


def certify_config(text: str) -> dict:
    """Run the verifier suite on the configured problem; one entry per check."""
    return json.loads(_core._certify_config(text))


__all__ = [
    "ConfigError",
    "DomainError",
    "InfeasibleError",
    "bregman",
    "certify_config",
    "compute_alpha",
    "eta_feasible_max",
    "floor_radius",
    "kantorovich_cos",
    "minimize",
    "mirror_step",
    "run_config",
    "star_c",
    "tight_dominance_alpha",
]
