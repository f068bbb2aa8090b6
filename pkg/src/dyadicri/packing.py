"""John-Nirenberg and Garsia-Rodemich functionals over dyadic packings.

A packing is an antichain of the dyadic cube tree.  Both functionals are
suprema over all packings and are computed exactly:

* ``jn_norm_dyadic`` -- additive objective, so a bottom-up antichain DP
  ``best(Q) = max(w(Q), sum_children best(child))``.
* ``garo_norm_dyadic`` -- ratio objective ``sum N(Q_i) / (sum |Q_i|)^{1/p'}``.
  A tree knapsack keyed by the integer number of covered cells gives, for
  every cube and every cell count ``m``, the best numerator; children are
  combined by max-plus convolution.

``enumerate_packings`` / ``brute_force_optimum`` are the exhaustive oracle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .grid import DyadicCube, Grid, Packing, StepFunction

__all__ = [
    "OscillationTables",
    "OptimalPacking",
    "PackingGuardError",
    "oscillation_tables",
    "mean_oscillation",
    "double_oscillation",
    "jn_weights",
    "garo_weights",
    "jn_objective",
    "garo_objective",
    "jn_norm_dyadic",
    "garo_norm_dyadic",
    "count_packings",
    "enumerate_packings",
    "packing_incidence",
    "packing_sums",
    "brute_force_optimum",
    "recursive_optimum",
    "MAX_ENUMERATED_CELLS",
    "MAX_ENUMERATED_PACKINGS",
]

MAX_ENUMERATED_CELLS = 256
MAX_ENUMERATED_PACKINGS = 2_000_000


class PackingGuardError(ValueError):
    pass


@dataclass(frozen=True)
class OscillationTables:
    """Per-depth arrays over cubes in dyadic order.

    ``mean_osc[d][j]`` = ``(1/|Q|) int_Q |f - f_Q|``;
    ``double_osc[d][j]`` = ``(1/|Q|) int_Q int_Q |f(x) - f(y)| dx dy``.
    """

    grid: Grid
    mean_osc: tuple
    double_osc: tuple


def oscillation_tables(f: StepFunction, kernels=None) -> OscillationTables:
    k = kernels or _kernels
    g = f.grid
    mu = g.cell_measure
    dv = f.dyadic_values
    means, doubles = [], []
    for d in range(g.level + 1):
        b = g.block(d)
        rows = dv.reshape(g.cubes_at(d), b)
        avg = rows.mean(axis=1)
        means.append(np.abs(rows - avg[:, None]).mean(axis=1))
        # (1/|Q|) sum_{a,b} |v_a - v_b| mu^2 = 2 mu P / b,  P = sum_{a<b} |v_a - v_b|
        pair = k.sorted_pair_sums(np.sort(rows, axis=1))
        doubles.append(2.0 * mu * pair / b)
    return OscillationTables(g, tuple(means), tuple(doubles))


def _cube_values(f: StepFunction, cube: DyadicCube) -> np.ndarray:
    return f.dyadic_values[cube.dyadic_slice(f.grid)]


def mean_oscillation(f: StepFunction, cube: DyadicCube) -> float:
    v = _cube_values(f, cube)
    return float(np.abs(v - v.mean()).mean())


def double_oscillation(f: StepFunction, cube: DyadicCube) -> float:
    """``(1/|Q|) int_Q int_Q |f(x) - f(y)|`` via sorting and prefix sums."""
    v = np.sort(_cube_values(f, cube))
    pair = float(_kernels.sorted_pair_sums(v[None, :])[0])
    return 2.0 * f.grid.cell_measure * pair / v.size


def jn_weights(tables: OscillationTables, p: float) -> list[np.ndarray]:
    g = tables.grid
    return [g.cube_measure(d) * m ** p for d, m in enumerate(tables.mean_osc)]


def garo_weights(tables: OscillationTables) -> list[np.ndarray]:
    return list(tables.double_osc)


def _conj(p: float) -> float:
    return p / (p - 1.0)


def jn_objective(f: StepFunction, packing: Packing, p: float) -> float:
    """``(sum_i |Q_i| osc(Q_i)^p)^{1/p}`` for one packing."""
    terms = [packing.grid.cube_measure(q.depth) * mean_oscillation(f, q) ** p for q in packing]
    return math.fsum(terms) ** (1.0 / p)


def garo_objective(f: StepFunction, packing: Packing, p: float) -> float:
    """``sum_i double_osc(Q_i) / (sum_i |Q_i|)^{1/p'}`` for one packing."""
    if len(packing) == 0:
        raise ValueError("the ratio is undefined for the empty packing")
    num = math.fsum(double_oscillation(f, q) for q in packing)
    return num / packing.total_measure ** (1.0 / _conj(p))


@dataclass(frozen=True)
class OptimalPacking:
    value: float
    packing: Packing
    contributions: tuple

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "packing": self.packing.to_list(),
            "contributions": list(self.contributions),
        }


def _check_p(p, lo_inclusive):
    p = float(p)
    if not math.isfinite(p) or p < 1 or (p == 1 and not lo_inclusive):
        raise ValueError(f"p out of range: {p}")
    return p


def jn_norm_dyadic(f: StepFunction, p: float, tables: OscillationTables | None = None) -> OptimalPacking:
    """Dyadic ``JN_p(f, Q0)`` with an optimal packing.

    Ties between a cube and its children prefer the cube.  A zero optimum
    is reported with the empty packing.
    """
    p = _check_p(p, lo_inclusive=True)
    g = f.grid
    tables = tables or oscillation_tables(f)
    w = jn_weights(tables, p)
    L, fan = g.level, 1 << g.dim
    best = [None] * (L + 1)
    own = [None] * (L + 1)
    best[L] = w[L]
    own[L] = np.ones_like(w[L], dtype=bool)
    for d in range(L - 1, -1, -1):
        kids = best[d + 1].reshape(-1, fan).sum(axis=1)
        own[d] = w[d] >= kids
        best[d] = np.where(own[d], w[d], kids)
    total = float(best[0][0])
    cubes, contrib = [], []
    if total > 0:
        stack = [(0, 0)]
        while stack:
            d, j = stack.pop()
            if own[d][j]:
                if w[d][j] > 0:
                    cubes.append(DyadicCube.from_index(g.dim, d, j))
                    contrib.append(float(w[d][j]))
            else:
                stack.extend((d + 1, (j << g.dim) + c) for c in range(fan - 1, -1, -1))
    packing = Packing(g, cubes)
    order = {(q.depth, q.index): i for i, q in enumerate(cubes)}
    contrib = tuple(contrib[order[(q.depth, q.index)]] for q in packing.cubes)
    return OptimalPacking(total ** (1.0 / p), packing, contrib)


@dataclass
class _Knapsack:
    table: list      # table[d]: (cubes_at(d), block(d) + 1) best numerators
    stages: list     # stages[d][c-1]: argmax of the c-th convolution stage
    own: list        # own[d]: bool, the cube itself is used at full count


def _garo_knapsack(grid: Grid, weights, kernels) -> _Knapsack:
    L, fan = grid.level, 1 << grid.dim
    table = [None] * (L + 1)
    stages = [None] * (L + 1)
    own = [None] * (L + 1)
    leaf = np.zeros((grid.cubes_at(L), 2))
    leaf[:, 1] = weights[L]
    table[L] = leaf
    own[L] = np.ones(grid.cubes_at(L), dtype=bool)
    for d in range(L - 1, -1, -1):
        kids = table[d + 1].reshape(grid.cubes_at(d), fan, -1)
        acc = kids[:, 0, :]
        st = []
        for c in range(1, fan):
            acc, arg = kernels.maxplus_conv(acc, kids[:, c, :])
            st.append(arg)
        full = acc[:, -1].copy()
        own[d] = weights[d] >= full
        acc = acc.copy()
        acc[:, -1] = np.where(own[d], weights[d], full)
        table[d], stages[d] = acc, st
    return _Knapsack(table, stages, own)


def _trace(grid: Grid, ks: _Knapsack, m: int) -> list[DyadicCube]:
    L, fan = grid.level, 1 << grid.dim
    cubes = []
    stack = [(0, 0, m)]
    while stack:
        d, j, m = stack.pop()
        if m == 0:
            continue
        if m == grid.block(d) and ks.own[d][j]:
            cubes.append(DyadicCube.from_index(grid.dim, d, j))
            continue
        alloc = [0] * fan
        rest = m
        for c in range(fan - 1, 0, -1):
            i = int(ks.stages[d][c - 1][j, rest])
            alloc[c] = rest - i
            rest = i
        alloc[0] = rest
        for c in range(fan - 1, -1, -1):
            stack.append((d + 1, (j << grid.dim) + c, alloc[c]))
    return cubes


def garo_norm_dyadic(
    f: StepFunction, p: float, tables: OscillationTables | None = None, kernels=None
) -> OptimalPacking:
    """Dyadic ``GaRo_p(f, Q0)`` as a supremum of ratios, with an optimal packing.

    Cost is ``O(cells^2)`` for the root convolution.  Among equal ratios the
    smallest covered cell count wins; inside the knapsack, the cube itself
    beats its children on ties and convolution ties give the smaller share
    to earlier children's accumulated block.
    """
    p = _check_p(p, lo_inclusive=False)
    k = kernels or _kernels
    g = f.grid
    tables = tables or oscillation_tables(f, k)
    w = garo_weights(tables)
    ks = _garo_knapsack(g, w, k)
    root = ks.table[0][0]
    m = np.arange(1, root.size)
    ratios = root[1:] / (m * g.cell_measure) ** (1.0 / _conj(p))
    best_m = int(np.argmax(ratios)) + 1
    packing = Packing(g, _trace(g, ks, best_m))
    contrib = tuple(float(w[q.depth][q.index]) for q in packing)
    return OptimalPacking(float(ratios[best_m - 1]), packing, contrib)


# -- exhaustive oracle ----------------------------------------------------------

def count_packings(grid: Grid) -> int:
    """Number of nonempty antichains of the dyadic tree."""
    a = 2  # a leaf: {} or {leaf}
    for _ in range(grid.level):
        a = a ** (1 << grid.dim) + 1
    return a - 1


def _antichains(dim, level, depth, index):
    """All antichains (as tuples of (depth, index)) under one cube, empty included."""
    if depth == level:
        return [(), ((depth, index),)]
    parts = [
        _antichains(dim, level, depth + 1, (index << dim) + c) for c in range(1 << dim)
    ]
    out = [((depth, index),)]
    for combo in itertools.product(*parts):
        out.append(tuple(itertools.chain.from_iterable(combo)))
    return out


def _guard(grid: Grid):
    if grid.cell_count > MAX_ENUMERATED_CELLS:
        raise PackingGuardError(
            f"{grid.cell_count} cells exceeds the enumeration guard ({MAX_ENUMERATED_CELLS})"
        )
    n = count_packings(grid)
    if n > MAX_ENUMERATED_PACKINGS:
        raise PackingGuardError(
            f"{n} packings exceeds the enumeration guard ({MAX_ENUMERATED_PACKINGS})"
        )


@lru_cache(maxsize=16)
def _raw_packings(dim: int, level: int) -> tuple:
    return tuple(a for a in _antichains(dim, level, 0, 0) if a)


def enumerate_packings(grid: Grid):
    """Yield every nonempty packing of the dyadic tree exactly once."""
    _guard(grid)
    for raw in _raw_packings(grid.dim, grid.level):
        yield Packing(grid, [DyadicCube.from_index(grid.dim, d, j) for d, j in raw])


@lru_cache(maxsize=16)
def _incidence(dim: int, level: int):
    """Sparse rows: cube columns of every packing, flattened, plus row starts."""
    raw = _raw_packings(dim, level)
    offsets = [((1 << (dim * d)) - 1) // ((1 << dim) - 1) for d in range(level + 1)]
    cols = np.fromiter(
        (offsets[d] + j for pk in raw for d, j in pk), dtype=np.int64
    )
    starts = np.zeros(len(raw), dtype=np.int64)
    np.cumsum([len(pk) for pk in raw[:-1]], out=starts[1:])
    ncubes = offsets[-1] + (1 << (dim * level))
    for arr in (cols, starts):
        arr.flags.writeable = False
    return cols, starts, ncubes


def packing_incidence(grid: Grid) -> np.ndarray:
    """Boolean matrix: row = packing (enumeration order), column = cube.

    Columns list cubes by depth, then dyadic index.
    """
    _guard(grid)
    cols, starts, ncubes = _incidence(grid.dim, grid.level)
    mat = np.zeros((starts.size, ncubes), dtype=bool)
    rows = np.repeat(np.arange(starts.size), np.diff(np.append(starts, cols.size)))
    mat[rows, cols] = True
    return mat


def packing_sums(grid: Grid, weights: np.ndarray) -> np.ndarray:
    """``sum of weights[cube]`` over the cubes of every enumerated packing.

    ``weights`` is indexed like the columns of :func:`packing_incidence`.
    """
    _guard(grid)
    cols, starts, ncubes = _incidence(grid.dim, grid.level)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (ncubes,):
        raise ValueError(f"need {ncubes} cube weights, got shape {weights.shape}")
    return np.add.reduceat(weights[cols], starts)


def _direct_weights(f: StepFunction, p: float):
    """Per-cube (|Q| osc^p, double oscillation) by direct O(k^2) double sums."""
    g = f.grid
    jn, garo = [], []
    for cube in itertools.chain.from_iterable(
        (DyadicCube.from_index(g.dim, d, j) for j in range(g.cubes_at(d))) for d in range(g.level + 1)
    ):
        v = f.values[cube.cells(g)]
        size = g.cube_measure(cube.depth)
        mean = math.fsum(v.tolist()) / v.size
        osc = math.fsum(abs(x - mean) for x in v.tolist()) / v.size
        jn.append(size * osc ** p)
        pairs = math.fsum(np.abs(v[:, None] - v[None, :]).ravel().tolist())
        garo.append(pairs * g.cell_measure ** 2 / size)
    return np.array(jn), np.array(garo)


def brute_force_optimum(f: StepFunction, p: float, functional: str) -> tuple[float, Packing]:
    """Maximum of the JN or GaRo objective over every enumerated packing.

    Cube weights come from direct double sums, independent of the DP path.
    """
    g = f.grid
    measures = np.concatenate([np.full(g.cubes_at(d), g.cube_measure(d)) for d in range(g.level + 1)])
    w_jn, w_garo = _direct_weights(f, p)
    if functional == "jn":
        scores = packing_sums(g, w_jn) ** (1.0 / p)
    elif functional == "garo":
        scores = packing_sums(g, w_garo) / packing_sums(g, measures) ** (1.0 / _conj(p))
    else:
        raise ValueError(f"unknown functional {functional!r}")
    r = int(np.argmax(scores))
    raw = _raw_packings(g.dim, g.level)[r]
    return float(scores[r]), Packing(g, [DyadicCube.from_index(g.dim, d, j) for d, j in raw])


def recursive_optimum(f: StepFunction, p: float, functional: str) -> tuple[float, Packing]:
    """Exact optimum by top-down recursion over cubes, for grids too large to enumerate.

    Uses the direct double-sum weights and plain dictionaries keyed by the
    number of covered cells, sharing no code with the DP solvers.
    """
    g = f.grid
    w_jn, w_garo = _direct_weights(f, p)
    offsets = [((1 << (g.dim * d)) - 1) // ((1 << g.dim) - 1) for d in range(g.level + 1)]
    fan = 1 << g.dim

    if functional == "jn":
        def best(d, j):
            own = w_jn[offsets[d] + j]
            if d == g.level:
                return own, [(d, j)]
            total, cubes = 0.0, []
            for c in range(fan):
                v, cs = best(d + 1, j * fan + c)
                total += v
                cubes += cs
            return (own, [(d, j)]) if own >= total else (total, cubes)

        value, raw = best(0, 0)
        if value <= 0:
            raw = []
        raw = [(d, j) for d, j in raw if w_jn[offsets[d] + j] > 0]
        return value ** (1.0 / p), Packing(g, [DyadicCube.from_index(g.dim, d, j) for d, j in raw])

    if functional != "garo":
        raise ValueError(f"unknown functional {functional!r}")

    def options(d, j):
        """Map cell count -> (best numerator, antichain) for antichains under (d, j)."""
        block = 1 << (g.dim * (g.level - d))
        if d == g.level:
            return {0: (0.0, ()), 1: (w_garo[offsets[d] + j], ((d, j),))}
        acc = {0: (0.0, ())}
        for c in range(fan):
            kid = options(d + 1, j * fan + c)
            nxt = {}
            for m1, (v1, a1) in acc.items():
                for m2, (v2, a2) in kid.items():
                    v = v1 + v2
                    if m1 + m2 not in nxt or v > nxt[m1 + m2][0]:
                        nxt[m1 + m2] = (v, a1 + a2)
            acc = nxt
        own = w_garo[offsets[d] + j]
        if own >= acc[block][0]:
            acc[block] = (own, ((d, j),))
        return acc

    table = options(0, 0)
    best_val, best_raw = -math.inf, ()
    for m in sorted(table):
        if m == 0:
            continue
        v, raw = table[m]
        r = v / (m * g.cell_measure) ** (1.0 / _conj(p))
        if r > best_val:
            best_val, best_raw = r, raw
    return best_val, Packing(g, [DyadicCube.from_index(g.dim, d, j) for d, j in best_raw])
