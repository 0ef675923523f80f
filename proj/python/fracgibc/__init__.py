"""FEM solver for time-fractional diffusion with a generalized impedance subregion.

The heavy lifting lives in the C++ extension ``fracgibc._core``; this package
re-exports its public surface.
"""

from ._core import (
    Curve,
    Mesh,
    Problem,
    __version__,
    build_annulus_mesh,
    caputo_symbol,
    l1_solve_scalar,
    l1_weights,
    separation,
    signal_transform,
)

__all__ = [
    "Curve",
    "Mesh",
    "Problem",
    "__version__",
    "build_annulus_mesh",
    "caputo_symbol",
    "l1_solve_scalar",
    "l1_weights",
    "separation",
    "signal_transform",
]
