"""Whitney-type dyadic covers of a cell set.

Given ``Omega`` with ``|Omega| <= |Q0| / 2``, :func:`dyadic_cover` returns
pairwise disjoint dyadic cubes ``Q_i`` with

(i)   ``|Omega ∩ Q_i| <= |Q_i| / 2 <= |Omega^c ∩ Q_i|``
(ii)  ``Omega ⊂ ∪ Q_i ⊂ Q0``
(iii) ``|Omega| <= sum |Q_i| <= 2^{n+1} |Omega|``.

Construction: each member cell ``c`` picks the smallest dyadic ancestor
with Omega-density at most 1/2 (``Q0`` always qualifies); the cover is the
set of maximal cubes among these choices.  A chosen cube has a child of
density > 1/2, which gives the ``2^{n+1}`` bound in (iii).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import CellSet, DyadicCube, Grid, Packing

__all__ = ["CoverReport", "CoverPreconditionError", "dyadic_cover", "verify_cover"]


class CoverPreconditionError(ValueError):
    """``|Omega| > |Q0| / 2``: no such cover exists for this set."""


@dataclass(frozen=True)
class CoverReport:
    cover: Packing
    densities: tuple
    total_measure: float
    omega_measure: float

    def to_dict(self) -> dict:
        return {
            "cover": self.cover.to_list(),
            "densities": list(self.densities),
            "total_measure": self.total_measure,
            "omega_measure": self.omega_measure,
        }


def _member_counts(grid: Grid, dyadic_membership: np.ndarray) -> list[np.ndarray]:
    counts = dyadic_membership.astype(np.int64)
    return [counts.reshape(grid.cubes_at(d), grid.block(d)).sum(axis=1) for d in range(grid.level + 1)]


def dyadic_cover(omega: CellSet) -> CoverReport:
    g = omega.grid
    if 2 * omega.count > g.cell_count:
        raise CoverPreconditionError(
            f"|Omega| = {omega.measure} exceeds |Q0|/2 = {g.measure / 2}; "
            "the covering needs |Omega| <= |Q0|/2"
        )
    dm = omega.membership[g.dyadic_order]
    counts = _member_counts(g, dm)
    members = np.flatnonzero(dm)
    chosen = np.full(members.size, -1, dtype=np.int64)
    for d in range(g.level + 1):
        idx = members >> (g.dim * (g.level - d))
        ok = 2 * counts[d][idx] <= g.block(d)
        chosen = np.where(ok, d, chosen)
    picks = set(zip(chosen.tolist(), (members >> (g.dim * (g.level - chosen))).tolist()))
    # keep the maximal picks: those with no picked ancestor
    keep = sorted(
        (d, j) for d, j in picks
        if not any((e, j >> (g.dim * (d - e))) in picks for e in range(d))
    )
    cubes = [DyadicCube.from_index(g.dim, d, j) for d, j in keep]
    dens = [float(counts[d][j] / g.block(d)) for d, j in keep]
    cover = Packing(g, cubes)
    return CoverReport(cover, tuple(dens), cover.total_measure, omega.measure)


def verify_cover(omega: CellSet, report: CoverReport) -> tuple[bool, bool, bool]:
    """Recheck (i)-(iii) from raw canonical-order cell data.

    Cubes are cut out of the row-major cell array by coordinate slices,
    without the dyadic ordering used by :func:`dyadic_cover`.  Disjointness
    is part of (ii).
    """
    g = omega.grid
    shape = (g.per_axis,) * g.dim
    members = omega.membership.reshape(shape)
    covered = np.zeros(shape, dtype=np.int64)
    density_ok = True
    total_cells = 0
    for q in report.cover.cubes:
        w = 1 << (g.level - q.depth)
        box = tuple(slice(c * w, (c + 1) * w) for c in q.coords)
        size = w ** g.dim
        hits = int(np.count_nonzero(members[box]))
        density_ok &= 2 * hits <= size
        covered[box] += 1
        total_cells += size
    disjoint = bool(np.all(covered <= 1))
    covers = bool(np.all(covered[members] >= 1))
    n_omega = omega.count
    measure_ok = n_omega <= total_cells <= (2 ** (g.dim + 1)) * n_omega
    return bool(density_ok), disjoint and covers, bool(measure_ok)
