import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dyadicri.grid import (
    CellSet,
    DyadicCube,
    Grid,
    InvalidPackingError,
    Packing,
    ProductGrid,
    StepFunction,
    cube_mean,
    dump_step_function,
    enumerate_cubes,
    load_step_function,
    make_step_function,
    step_function_from_dict,
)
from oracles import canonical_cubes


def test_grid_measures():
    g = Grid(2, 3, side=2.0)
    assert g.cell_count == 64
    assert g.cell_side == 0.25
    assert g.cell_measure == 1 / 16
    assert g.measure == 4.0
    assert g.cube_measure(1) == 1.0


@pytest.mark.parametrize("args", [(0, 1), (1, -1), (1, 2, 0.0), (1, 2, -1.0), (1, 2, math.inf)])
def test_grid_rejects_bad_parameters(args):
    with pytest.raises(ValueError):
        Grid(*args)


@pytest.mark.parametrize("dim,level,count", [(1, 2, 7), (2, 1, 5), (1, 0, 1), (3, 2, 73)])
def test_enumerate_cubes_count(dim, level, count):
    cubes = list(enumerate_cubes(Grid(dim, level)))
    assert len(cubes) == count
    assert len(set(cubes)) == count


@pytest.mark.parametrize("dim,level", [(1, 4), (2, 3), (3, 2)])
def test_index_roundtrip_and_children(dim, level):
    for q in enumerate_cubes(Grid(dim, level)):
        assert DyadicCube.from_index(dim, q.depth, q.index) == q
        if q.depth < level:
            kids = q.children()
            assert len(kids) == 2 ** dim
            assert [k.index for k in kids] == [(q.index << dim) + c for c in range(2 ** dim)]
            assert all(k.parent() == q and q.contains(k) for k in kids)


@pytest.mark.parametrize("dim,level", [(1, 3), (2, 2), (2, 3), (3, 1)])
def test_cells_match_coordinate_boxes(dim, level):
    """Dyadic blocks give the same cells as slicing the row-major array."""
    g = Grid(dim, level)
    for d, coords, cells in canonical_cubes(dim, level):
        q = DyadicCube(d, coords)
        assert np.array_equal(q.cells(g), cells)


def test_tree_property():
    g = Grid(2, 2)
    cubes = list(enumerate_cubes(g))
    for a in cubes:
        for b in cubes:
            ca, cb = set(a.cells(g).tolist()), set(b.cells(g).tolist())
            assert (not ca & cb) or ca <= cb or cb <= ca
            assert (ca <= cb) == b.contains(a)


def test_one_dimensional_dyadic_order_is_canonical():
    g = Grid(1, 5)
    assert np.array_equal(g.dyadic_order, np.arange(32))


def test_step_function_examples():
    f = make_step_function(Grid(1, 2), [3, 1, 2, 2])
    assert f.integral() == 2.0
    assert cube_mean(f, DyadicCube.root(1)) == 2.0
    assert cube_mean(f, DyadicCube(1, (0,))) == 2.0
    c = make_step_function(Grid(2, 0), [5.0])
    assert c.sup_norm() == 5.0 and c.l1_norm() == 5.0


@pytest.mark.parametrize("vals", [[1.0], [1.0, math.nan], [1.0, math.inf], [1, 2, 3]])
def test_step_function_rejects_bad_values(vals):
    with pytest.raises(ValueError):
        StepFunction(Grid(1, 1), vals)


def test_step_function_is_immutable():
    f = StepFunction(Grid(1, 1), [1.0, 2.0])
    with pytest.raises(ValueError):
        f.values[0] = 3.0


def test_cube_mean_rejects_deep_cube():
    f = StepFunction(Grid(1, 1), [1.0, 2.0])
    with pytest.raises(ValueError):
        cube_mean(f, DyadicCube(2, (0,)))


@given(st.integers(1, 2), st.integers(0, 3), st.data())
def test_integral_over_cube_is_cell_sum(dim, level, data):
    g = Grid(dim, level)
    vals = data.draw(st.lists(st.integers(-9, 9), min_size=g.cell_count, max_size=g.cell_count))
    f = StepFunction(g, vals)
    for q in enumerate_cubes(g):
        cells = q.cells(g)
        assert cube_mean(f, q) * q.measure(g) == pytest.approx(sum(vals[i] for i in cells) * g.cell_measure)


def test_refined_preserves_integral_and_cube_means():
    f = StepFunction(Grid(2, 2), np.arange(16.0))
    r = f.refined()
    assert r.grid.level == 3
    assert r.integral() == pytest.approx(f.integral())
    for q in enumerate_cubes(f.grid):
        assert cube_mean(r, q) == pytest.approx(cube_mean(f, q))


def test_packing_validation():
    g = Grid(1, 2)
    root, left, ll = DyadicCube(0, (0,)), DyadicCube(1, (0,)), DyadicCube(2, (0,))
    assert Packing(g, [DyadicCube(1, (1,)), ll]).total_measure == 0.75
    with pytest.raises(InvalidPackingError):
        Packing(g, [root, left])
    with pytest.raises(InvalidPackingError):
        Packing(g, [left, ll])
    with pytest.raises(InvalidPackingError):
        Packing(g, [left, left])
    with pytest.raises(ValueError):
        Packing(g, [DyadicCube(3, (0,))])
    assert Packing(g, []).total_measure == 0.0


def test_cell_set():
    g = Grid(1, 3)
    s = CellSet.from_indices(g, [0, 1])
    assert s.count == 2 and s.measure == 0.25
    with pytest.raises(ValueError):
        CellSet(g, [True, False])


def test_product_grid_measures():
    pg = ProductGrid(Grid(1, 2), Grid(2, 1, side=2.0))
    assert pg.dim == 3
    assert pg.cell_count == 16
    assert pg.cell_measure == 0.25 * 1.0
    assert pg.measure == 4.0


def test_json_roundtrip(tmp_path):
    f = StepFunction(Grid(2, 1, side=3.0), [1.5, -2.0, 0.0, 7.25])
    path = tmp_path / "f.json"
    dump_step_function(f, path)
    assert load_step_function(path) == f


@pytest.mark.parametrize(
    "text",
    [
        '{"dim": 1, "level": 1, "values": [1, NaN]}',
        '{"dim": 1, "level": 1, "values": [1, Infinity]}',
        '{"dim": 1, "level": 1, "values": [1, "2"]}',
        '{"dim": 1, "values": [1, 2]}',
        '{"dim": 1, "level": 1, "values": [1, 2, 3]}',
    ],
)
def test_json_rejects_malformed(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_step_function(path)


def test_from_dict_accepts_side():
    f = step_function_from_dict(json.loads('{"dim": 1, "level": 0, "side": 2, "values": [1]}'))
    assert f.l1_norm() == 2.0
