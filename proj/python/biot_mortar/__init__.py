"""Multiscale mortar domain decomposition for poroelasticity."""

import json

from ._core import (
    InputError,
    ManufacturedSolution,
    NumericalError,
    Simulation as _Simulation,
    field_checksum,
    run_convergence,
    synthetic_fields,
    tracked_quantities,
    youngs_modulus,
)
from ._core import run as _run

__all__ = [
    "InputError",
    "ManufacturedSolution",
    "NumericalError",
    "Simulation",
    "field_checksum",
    "run",
    "run_convergence",
    "synthetic_fields",
    "tracked_quantities",
    "youngs_modulus",
]


def _as_text(config):
    return config if isinstance(config, str) else json.dumps(config)


def run(config):
    """Run a config given as a dict or JSON text. Returns (metrics dict, VTK text)."""
    metrics, vtk = _run(_as_text(config))
    return json.loads(metrics), vtk


class Simulation(_Simulation):
    """Step-by-step access to a solver built from a run config (dict or JSON text)."""

    def __init__(self, config):
        super().__init__(_as_text(config))
