"""Penalized constrained Langevin sampling."""

import json

from ._pcula import (
    ConfigError,
    ConvexDomain,
    DivergenceError,
    Error,
    InvalidArgument,
    NormalStream,
    PenalizedPotential,
    Potential,
    ProjectionNotConverged,
    ProjectionResult,
    Trajectory,
    accuracy_in_domain,
    run_chain,
    w2_1d,
    w2_assignment,
)
from . import _pcula


def fig2(**kwargs):
    return json.loads(_pcula.fig2(**kwargs))


def penalty_sweep_quadrature(base, domain, n_list, dx=1e-4):
    return json.loads(_pcula.penalty_sweep_quadrature(base, domain, n_list, dx))


def run_config(text, threads=0):
    """Run a config document; returns (report dict, echoed config text)."""
    report, echo = _pcula.run_config(text, threads)
    return json.loads(report), echo


__all__ = [
    "ConfigError",
    "ConvexDomain",
    "DivergenceError",
    "Error",
    "InvalidArgument",
    "NormalStream",
    "PenalizedPotential",
    "Potential",
    "ProjectionNotConverged",
    "ProjectionResult",
    "Trajectory",
    "accuracy_in_domain",
    "fig2",
    "penalty_sweep_quadrature",
    "run_chain",
    "run_config",
    "w2_1d",
    "w2_assignment",
]
