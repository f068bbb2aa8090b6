"""Exact rearrangement-invariant functionals, dyadic packings and covers for step functions."""

__version__ = "0.1.0"

from .grid import CellSet, DyadicCube, Grid, Packing, StepFunction, make_cell_set, make_step_function  # noqa: E402
from .curves import StepCurve, distribution, rearrange, tail_integral  # noqa: E402
from .functionals import (  # noqa: E402
    bmo_dyadic,
    double_sharp,
    l1_tail_sup,
    oneil_functional,
    sharp_norm,
    weak_norm,
    weak_star_norm,
)
from .packing import garo_norm_dyadic, jn_norm_dyadic  # noqa: E402
from .covering import dyadic_cover, verify_cover  # noqa: E402
from .tensor import tensor_distribution  # noqa: E402
