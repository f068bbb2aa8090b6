"""Step-function generators: closed-form profiles and seeded random laws."""
from __future__ import annotations

import numpy as np

from .grid import Grid, StepFunction

__all__ = ["LAWS", "gen_power", "gen_log", "gen_random", "gen_spikes", "gen_random_cellset"]

LAWS = ("uniform", "two-point", "heavy-tail")
HEAVY_TAIL_EXPONENTS = (1.5, 2.0, 3.0)


def _edges(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    if grid.dim != 1:
        raise ValueError("profile generators are one-dimensional (n = 1)")
    if grid.level < 1:
        raise ValueError("profile generators need level >= 1")
    k = np.arange(grid.per_axis, dtype=np.float64)
    h = grid.cell_side
    return k * h, (k + 1) * h


def gen_power(p: float, grid: Grid, shift: float = 0.0) -> StepFunction:
    """Cell averages of ``x^{-1/p} - shift`` over ``[0, side)``.

    Averages come from the antiderivative ``x^{1-1/p} / (1 - 1/p)``, so the
    integral over every dyadic interval is exact; with ``shift = 0`` the
    L1 norm is ``p' side^{1/p'}``.
    """
    p = float(p)
    if not p > 1:
        raise ValueError(f"gen_power needs p > 1, got {p}")
    a, b = _edges(grid)
    e = 1.0 - 1.0 / p
    vals = (b ** e - a ** e) / (e * (b - a))
    return StepFunction(grid, vals - shift)


def gen_log(grid: Grid) -> StepFunction:
    """Cell averages of ``log(1/x)`` over ``[0, side)``."""
    a, b = _edges(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        alog = np.where(a > 0, a * np.log(np.where(a > 0, a, 1.0)), 0.0)
    anti_b = b * np.log(b) - b
    anti_a = alog - a
    return StepFunction(grid, -(anti_b - anti_a) / (b - a))


def gen_spikes(grid: Grid, height: float = 1.0) -> StepFunction:
    """Zero except ``+height`` on the first cell and ``-height`` on the last.

    On ``Q0`` with ``k`` cells the Gini mean difference is ``2 - 2/k`` times
    the mean oscillation, close to the factor 2 allowed between them.
    """
    v = np.zeros(grid.cell_count)
    if grid.cell_count >= 2:
        v[0], v[-1] = height, -height
    return StepFunction(grid, v)


def gen_random(seed: int, grid: Grid, law: str) -> StepFunction:
    """Seeded random step function.

    ``uniform``: values in [0, 1).  ``two-point``: signed values whose
    moduli take at most two levels.  ``heavy-tail``: ``|value| = U^{-1/q}``
    with ``q`` drawn from {1.5, 2, 3} and random signs.
    """
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; expected one of {LAWS}")
    rng = np.random.default_rng([int(seed) & (2**64 - 1), grid.dim, grid.level, LAWS.index(law)])
    n = grid.cell_count
    if law == "uniform":
        vals = rng.random(n)
    elif law == "two-point":
        levels = rng.random(2)
        vals = levels[rng.integers(0, 2, n)] * rng.choice([-1.0, 1.0], n)
    else:
        q = HEAVY_TAIL_EXPONENTS[int(rng.integers(0, len(HEAVY_TAIL_EXPONENTS)))]
        u = 1.0 - rng.random(n)  # (0, 1]
        vals = u ** (-1.0 / q) * rng.choice([-1.0, 1.0], n)
    return StepFunction(grid, vals)


def gen_random_cellset(rng: np.random.Generator, grid: Grid):
    """Random nonempty cell set with at most half of the cells."""
    from .grid import CellSet

    n = grid.cell_count
    size = int(rng.integers(1, max(n // 2, 1) + 1))
    members = np.zeros(n, dtype=bool)
    members[rng.choice(n, size=size, replace=False)] = True
    return CellSet(grid, members)
