"""Mixed finite element solver and preconditioner lab for multicomponent diffusion."""

from ._osm import (
    CellResult,
    Error,
    experiment_names,
    read_csv,
    render_table,
    run,
    write_csv,
)

__all__ = [
    "CellResult",
    "Error",
    "experiment_names",
    "read_csv",
    "render_table",
    "run",
    "write_csv",
]
