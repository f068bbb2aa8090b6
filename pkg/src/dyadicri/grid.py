"""Cube Q0, its dyadic tree, and cell-indexed step functions.

Cells of a level-``L`` grid in ``n`` dimensions are stored in *canonical
order*: row-major (lexicographic over cell coordinates, last axis fastest).
This is the order used by ``values`` arrays and by the JSON file format.

Internally, cube computations use *dyadic order* (Morton / Z-order): the
cell index is the concatenation, from coarsest to finest level, of one
``n``-bit digit per level, each digit lexicographic over the axes.  In
dyadic order the cells of every dyadic cube form one contiguous block and
the children of cube ``j`` at depth ``d`` are ``j * 2**n + k``,
``k = 0 .. 2**n - 1``.  For ``n = 1`` both orders coincide.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Grid",
    "ProductGrid",
    "DyadicCube",
    "StepFunction",
    "CellSet",
    "Packing",
    "InvalidPackingError",
    "make_step_function",
    "make_cell_set",
    "cube_mean",
    "enumerate_cubes",
    "load_step_function",
    "step_function_from_dict",
    "step_function_to_dict",
    "dump_step_function",
]


class InvalidPackingError(ValueError):
    """A cube list is not an antichain of the dyadic tree."""


@dataclass(frozen=True)
class Grid:
    """Uniform dyadic partition of the cube ``origin + [0, side)**dim``."""

    dim: int
    level: int
    side: float = 1.0
    origin: tuple = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if int(self.level) != self.level or self.level < 0:
            raise ValueError(f"level must be a nonnegative integer, got {self.level!r}")
        if not (math.isfinite(self.side) and self.side > 0):
            raise ValueError(f"side must be a positive real, got {self.side!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "side", float(self.side))
        origin = (0.0,) * self.dim if self.origin is None else tuple(float(o) for o in self.origin)
        if len(origin) != self.dim:
            raise ValueError("origin must have dim coordinates")
        object.__setattr__(self, "origin", origin)

    @property
    def per_axis(self) -> int:
        return 1 << self.level

    @property
    def cell_count(self) -> int:
        return 1 << (self.dim * self.level)

    @property
    def cell_side(self) -> float:
        return self.side / self.per_axis

    @property
    def measure(self) -> float:
        return self.side ** self.dim

    @property
    def cell_measure(self) -> float:
        return self.cube_measure(self.level)

    def cube_measure(self, depth: int) -> float:
        # division by a power of two is exact
        return self.side ** self.dim / float(1 << (self.dim * depth))

    def cubes_at(self, depth: int) -> int:
        return 1 << (self.dim * depth)

    def block(self, depth: int) -> int:
        """Number of cells inside one cube of the given depth."""
        return 1 << (self.dim * (self.level - depth))

    @cached_property
    def dyadic_order(self) -> np.ndarray:
        """``perm`` with ``values[perm]`` = values listed in dyadic order."""
        n, L = self.dim, self.level
        coords = np.indices((self.per_axis,) * n).reshape(n, -1)
        code = np.zeros(self.cell_count, dtype=np.int64)
        for bit in range(L - 1, -1, -1):
            for axis in range(n):
                code = (code << 1) | ((coords[axis] >> bit) & 1)
        perm = np.empty(self.cell_count, dtype=np.int64)
        perm[code] = np.arange(self.cell_count)
        perm.flags.writeable = False
        return perm

    @cached_property
    def canonical_to_dyadic(self) -> np.ndarray:
        inv = np.empty(self.cell_count, dtype=np.int64)
        inv[self.dyadic_order] = np.arange(self.cell_count)
        inv.flags.writeable = False
        return inv

    def to_dict(self) -> dict:
        return {"dim": self.dim, "level": self.level, "side": self.side}


@dataclass(frozen=True)
class ProductGrid:
    """Cartesian product of two grids; cells may have unequal factor measures.

    Cell ``(a, b)`` sits at canonical index ``a * right.cell_count + b``.
    Only the measure-theoretic attributes are provided: product grids carry
    tensor products for distribution computations, not dyadic cubes.
    """

    left: Grid
    right: Grid

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    @property
    def cell_count(self) -> int:
        return self.left.cell_count * self.right.cell_count

    @property
    def cell_measure(self) -> float:
        return self.left.cell_measure * self.right.cell_measure

    @property
    def measure(self) -> float:
        return self.left.measure * self.right.measure


@dataclass(frozen=True, order=True)
class DyadicCube:
    depth: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if any(c < 0 or c >= (1 << self.depth) for c in self.coords):
            raise ValueError(f"coords {self.coords} out of range for depth {self.depth}")

    @classmethod
    def root(cls, dim: int) -> "DyadicCube":
        return cls(0, (0,) * dim)

    @classmethod
    def from_index(cls, dim: int, depth: int, index: int) -> "DyadicCube":
        """Inverse of :attr:`index` (dyadic order among cubes of this depth)."""
        coords = [0] * dim
        for bit in range(depth - 1, -1, -1):
            digit = (index >> (dim * bit)) & ((1 << dim) - 1)
            for axis in range(dim):
                coords[axis] = (coords[axis] << 1) | ((digit >> (dim - 1 - axis)) & 1)
        return cls(depth, tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @cached_property
    def index(self) -> int:
        """Position of this cube among all cubes of its depth, in dyadic order."""
        code = 0
        for bit in range(self.depth - 1, -1, -1):
            for c in self.coords:
                code = (code << 1) | ((c >> bit) & 1)
        return code

    def children(self) -> list["DyadicCube"]:
        base = self.index << self.dim
        return [DyadicCube.from_index(self.dim, self.depth + 1, base + k) for k in range(1 << self.dim)]

    def parent(self) -> "DyadicCube":
        if self.depth == 0:
            raise ValueError("the root cube has no parent")
        return DyadicCube(self.depth - 1, tuple(c >> 1 for c in self.coords))

    def contains(self, other: "DyadicCube") -> bool:
        """Inclusion of closed-open cubes (a cube contains itself)."""
        if other.depth < self.depth:
            return False
        shift = other.depth - self.depth
        return all((o >> shift) == c for o, c in zip(other.coords, self.coords))

    def measure(self, grid: Grid) -> float:
        return grid.cube_measure(self.depth)

    def dyadic_slice(self, grid: Grid) -> slice:
        """Contiguous block of this cube's cells in dyadic order."""
        self._check(grid)
        b = grid.block(self.depth)
        start = self.index * b
        return slice(start, start + b)

    def cells(self, grid: Grid) -> np.ndarray:
        """Canonical indices of the cells of this cube (sorted)."""
        return np.sort(grid.dyadic_order[self.dyadic_slice(grid)])

    def bounds(self, grid: Grid) -> list[tuple[float, float]]:
        h = grid.side / (1 << self.depth)
        return [(o + c * h, o + (c + 1) * h) for o, c in zip(grid.origin, self.coords)]

    def to_dict(self) -> dict:
        return {"depth": self.depth, "coords": list(self.coords)}

    def _check(self, grid: Grid):
        if self.dim != grid.dim:
            raise ValueError(f"cube has dim {self.dim}, grid has dim {grid.dim}")
        if self.depth > grid.level:
            raise ValueError(f"cube depth {self.depth} exceeds grid level {grid.level}")


def _check_values(grid, values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.size != grid.cell_count:
        raise ValueError(f"expected {grid.cell_count} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Function constant on each cell of ``grid``; ``values`` in canonical order."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    @cached_property
    def dyadic_values(self) -> np.ndarray:
        out = self.values[self.grid.dyadic_order]
        out.flags.writeable = False
        return out

    @property
    def cell_measure(self) -> float:
        return self.grid.cell_measure

    def l1_norm(self) -> float:
        return self.cell_measure * math.fsum(np.abs(self.values).tolist())

    def integral(self) -> float:
        return self.cell_measure * math.fsum(self.values.tolist())

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.grid, self.values * c)

    def refined(self) -> "StepFunction":
        """Same function on the grid one level finer (each cell split in 2**n)."""
        g = self.grid
        if not isinstance(g, Grid):
            raise TypeError("refinement needs a dyadic Grid")
        arr = self.values.reshape((g.per_axis,) * g.dim)
        for axis in range(g.dim):
            arr = np.repeat(arr, 2, axis=axis)
        return StepFunction(Grid(g.dim, g.level + 1, g.side, g.origin), arr.reshape(-1))

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None


def make_step_function(grid: Grid, values) -> StepFunction:
    return StepFunction(grid, values)


@dataclass(frozen=True, eq=False)
class CellSet:
    grid: Grid
    membership: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.membership, dtype=bool).reshape(-1)
        if arr.size != self.grid.cell_count:
            raise ValueError(f"expected {self.grid.cell_count} membership flags, got {arr.size}")
        arr.flags.writeable = False
        object.__setattr__(self, "membership", arr)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.membership))

    @property
    def measure(self) -> float:
        return self.count * self.grid.cell_measure

    @classmethod
    def from_indices(cls, grid: Grid, indices) -> "CellSet":
        m = np.zeros(grid.cell_count, dtype=bool)
        m[np.asarray(list(indices), dtype=np.int64)] = True
        return cls(grid, m)


def make_cell_set(grid: Grid, membership) -> CellSet:
    return CellSet(grid, membership)


@dataclass(frozen=True)
class Packing:
    """Antichain of dyadic subcubes of Q0 (pairwise disjoint interiors).

    Cubes are stored sorted by ``(depth, dyadic index)``.
    """

    grid: Grid
    cubes: tuple = ()

    def __post_init__(self):
        cubes = tuple(self.cubes)
        for q in cubes:
            q._check(self.grid)
        cubes = tuple(sorted(cubes, key=lambda q: (q.depth, q.index)))
        if len(set(cubes)) != len(cubes):
            raise InvalidPackingError("duplicate cube in packing")
        _check_antichain(self.grid, cubes)
        object.__setattr__(self, "cubes", cubes)

    @property
    def total_measure(self) -> float:
        return math.fsum(q.measure(self.grid) for q in self.cubes)

    @property
    def total_cells(self) -> int:
        return sum(self.grid.block(q.depth) for q in self.cubes)

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def to_list(self) -> list[dict]:
        return [q.to_dict() for q in self.cubes]


def _check_antichain(grid: Grid, cubes: Sequence[DyadicCube]):
    seen = set()
    for q in cubes:  # sorted by depth, so ancestors come first
        for d in range(q.depth):
            anc = (d, q.index >> (grid.dim * (q.depth - d)))
            if anc in seen:
                raise InvalidPackingError(f"{q} lies inside another cube of the packing")
        seen.add((q.depth, q.index))


def cube_mean(f: StepFunction, cube: DyadicCube) -> float:
    """Average of ``f`` over ``cube`` (cells have equal measure)."""
    block = f.dyadic_values[cube.dyadic_slice(f.grid)]
    return math.fsum(block.tolist()) / block.size


def enumerate_cubes(grid: Grid) -> Iterator[DyadicCube]:
    """All dyadic cubes of depth 0..L, by depth then dyadic index."""
    for depth in range(grid.level + 1):
        for idx in range(grid.cubes_at(depth)):
            yield DyadicCube.from_index(grid.dim, depth, idx)


# -- JSON file format ---------------------------------------------------------

def _reject_constant(name):
    raise ValueError(f"non-finite number {name} in input")


def step_function_from_dict(data: dict) -> StepFunction:
    try:
        grid = Grid(int(data["dim"]), int(data["level"]), float(data.get("side", 1.0)))
        values = data["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed step-function record: {exc}") from exc
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise ValueError("values must be a list of numbers")
    return StepFunction(grid, values)


def step_function_to_dict(f: StepFunction) -> dict:
    return {**f.grid.to_dict(), "values": f.values.tolist()}


def load_step_function(path) -> StepFunction:
    with open(path) as fh:
        data = json.load(fh, parse_constant=_reject_constant)
    return step_function_from_dict(data)


def dump_step_function(f: StepFunction, path):
    with open(path, "w") as fh:
        json.dump(step_function_to_dict(f), fh)
