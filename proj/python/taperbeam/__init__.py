"""Static bending of tapered perforated beams on a Pasternak foundation."""

from taperbeam._core import (
    BeamConfig,
    __version__,
    analytic_solid_ss,
    fd_solve,
    reference_table_ids,
    reproduce_table,
    solve,
    stiffness_factor,
)

__all__ = [
    "BeamConfig",
    "__version__",
    "analytic_solid_ss",
    "fd_solve",
    "reference_table_ids",
    "reproduce_table",
    "solve",
    "stiffness_factor",
]
