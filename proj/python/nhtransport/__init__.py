"""Non-Hermitian zigzag lattice transport (bindings to the C++ core)."""

import json as _json

from ._core import (
    ConfigError,
    ContractError,
    DomainError,
    LatticeParams,
    NumericalError,
    ResourceError,
    asymptotic_amplitude,
    bloch_integral,
    chain_spectrum,
    command_names,
    dispersion,
    draw_disorder,
    evolve,
    min_lattice_size,
    minibands,
    run_checks,
    run_ensemble,
    saddle_constants,
)
from ._core import run_command as _run_command

__all__ = [
    "ConfigError",
    "ContractError",
    "DomainError",
    "LatticeParams",
    "NumericalError",
    "ResourceError",
    "asymptotic_amplitude",
    "bloch_integral",
    "chain_spectrum",
    "command_names",
    "dispersion",
    "draw_disorder",
    "evolve",
    "min_lattice_size",
    "minibands",
    "run",
    "run_checks",
    "run_ensemble",
    "saddle_constants",
]


def run(name, config=None, out_dir=".", seed=None, threads=None):
    """Run a subcommand like the CLI does; config is a dict. Returns (files, ok)."""
    return _run_command(name, _json.dumps(config or {}), str(out_dir), seed, threads)
