import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from dyadicri.curves import distribution
from dyadicri.functionals import double_sharp_sup
from dyadicri.generators import LAWS, gen_random
from dyadicri.grid import Grid, StepFunction
from dyadicri.tensor import (
    TENSOR_GUARD,
    tensor_brute,
    tensor_distribution,
    tensor_infinity_check,
    tonelli_transport,
    value_mass_list,
)
from strategies import step_functions


def test_indicator_pair():
    f = StepFunction(Grid(1, 1), [1, 0])
    g = StepFunction(Grid(1, 1), [2, 0])
    lam = tensor_distribution(f, g)
    assert lam.breakpoints.tolist() == [2.0]
    assert lam.values.tolist() == [0.25, 0.0]
    assert lam == distribution(tensor_brute(f, g))


def test_constant_factor_scales():
    f = StepFunction(Grid(1, 2), [3, 1, 2, 2])
    g = StepFunction(Grid(2, 0), [2.0])
    lam = tensor_distribution(f, g)
    assert lam.breakpoints.tolist() == [2.0, 4.0, 6.0]
    assert lam.values.tolist() == [1.0, 0.75, 0.25, 0.0]


def test_underflowing_products_are_zeros():
    f = StepFunction(Grid(1, 0), [1e-200])
    g = StepFunction(Grid(1, 1), [1e-200, 1.0])
    lam = tensor_distribution(f, g)
    assert lam == distribution(tensor_brute(f, g))
    assert lam.values.tolist() == [0.5, 0.0]


def test_zero_factor():
    f = StepFunction(Grid(1, 1), [1, 2])
    z = StepFunction(Grid(1, 1), [0, 0])
    assert tensor_distribution(f, z).size == 0
    assert tensor_distribution(z, f).size == 0
    assert tensor_infinity_check(f, z)["pass"]


def test_value_mass_list():
    vm = value_mass_list(StepFunction(Grid(1, 2), [-2, 0, 2, 1]))
    assert vm.values.tolist() == [2.0, 1.0]
    assert vm.counts.tolist() == [2, 1]
    assert vm.masses.tolist() == [0.5, 0.25]


@given(step_functions(max_cells=16), step_functions(max_cells=16))
def test_formula_matches_product_grid(f, g):
    assert tensor_distribution(f, g) == distribution(tensor_brute(f, g))


@pytest.mark.parametrize("seed", range(12))
def test_random_laws_match_product_grid(seed):
    gf, gg = Grid(1 + seed % 2, 2 + seed % 3), Grid(1, 3 + seed % 2)
    f = gen_random(seed, gf, LAWS[seed % 3])
    g = gen_random(seed + 50, gg, LAWS[(seed + 1) % 3])
    assert tensor_distribution(f, g) == distribution(tensor_brute(f, g))


@given(step_functions(max_cells=16, tiny=False), step_functions(max_cells=16, tiny=False))
def test_tonelli_transport(f, g):
    prod = tensor_brute(f, g)
    lam = tensor_distribution(f, g)
    total = lam.integral_from(0.0)
    for t in [0.0] + sorted(set(np.abs(prod.values).tolist()))[:6]:
        ref = oracles.tail(prod.values, prod.cell_measure, t)
        assert tonelli_transport(f, g, t) == pytest.approx(ref, rel=0, abs=1e-12 * max(total, 1e-300))


@given(step_functions(max_cells=16, tiny=False), step_functions(max_cells=16, tiny=False))
def test_tensor_inequality_holds(f, g):
    rec = tensor_infinity_check(f, g)
    assert rec["pass"]
    assert rec["relation"] == "le" and rec["constant"] == g.sup_norm()
    brute = oracles.double_sharp(tensor_brute(f, g).values, f.cell_measure * g.cell_measure, math.inf)
    assert rec["lhs"] == pytest.approx(brute, rel=1e-12, abs=1e-300)


def test_inequality_example_indicators():
    f = StepFunction(Grid(1, 2), [1, 0, 0, 0])
    g = StepFunction(Grid(1, 1), [1, 1])
    rec = tensor_infinity_check(f, g)
    assert rec["lhs"] == pytest.approx(double_sharp_sup(distribution(f), math.inf).value)
    assert rec["pass"]


def test_brute_guard():
    big = StepFunction(Grid(2, 6), np.ones(4096))
    with pytest.raises(ValueError):
        tensor_brute(big, StepFunction(Grid(1, 9), np.ones(512)))
    assert TENSOR_GUARD == 1 << 20
