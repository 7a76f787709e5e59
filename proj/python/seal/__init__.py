"""SEAL: spatial agent-based economy simulator."""

from ._core import (
    DAYS_PER_MONTH,
    ConsistencyError,
    InputError,
    Params,
    RunResult,
    SamplingError,
    Simulation,
    SnapshotError,
    World,
    __version__,
    cli,
    economic_param_names,
    general_columns,
    gini,
    linspace,
    load_snapshot,
    load_world,
    regional_columns,
    run,
    sensitivity_grid,
    synthetic_world,
    wage_base,
)

__all__ = [
    "DAYS_PER_MONTH",
    "ConsistencyError",
    "InputError",
    "Params",
    "RunResult",
    "SamplingError",
    "Simulation",
    "SnapshotError",
    "World",
    "__version__",
    "cli",
    "economic_param_names",
    "general_columns",
    "gini",
    "linspace",
    "load_snapshot",
    "load_world",
    "regional_columns",
    "run",
    "sensitivity_grid",
    "synthetic_world",
    "wage_base",
]
