import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dyadicri import _kernels
from dyadicri._kernels import python_backend as py

compiled = _kernels.compiled_backend
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

floats = st.floats(-1e6, 1e6, allow_nan=False, width=64)


def test_maxplus_small():
    out, arg = py.maxplus_conv(np.array([[0.0, 1.0]]), np.array([[0.0, 2.0, 0.0]]))
    assert out.tolist() == [[0.0, 2.0, 3.0, 1.0]]
    assert arg.tolist() == [[0, 0, 1, 1]]


def test_maxplus_ties_take_smallest_index():
    out, arg = py.maxplus_conv(np.zeros((1, 3)), np.zeros((1, 3)))
    assert out.tolist() == [[0.0] * 5]
    assert arg.tolist() == [[0, 0, 0, 1, 2]]


def test_compensated_cumsum_beats_naive():
    x = np.array([1e16, 1.0, -1e16, 1.0])
    assert py.compensated_cumsum(x).tolist() == [1e16, 1e16 + 1, 1.0, 2.0]


def test_sorted_pair_sums():
    rows = np.sort(np.random.default_rng(0).random((5, 7)), axis=1)
    ref = [sum(abs(a - b) for a in r for b in r) / 2 for r in rows]
    assert np.allclose(py.sorted_pair_sums(rows), ref, rtol=1e-13)


@needs_compiled
@given(st.integers(1, 4), st.integers(1, 9), st.integers(1, 9), st.data())
def test_maxplus_backends_bitwise(m, p, q, data):
    a = data.draw(arrays(np.float64, (m, p), elements=floats))
    b = data.draw(arrays(np.float64, (m, q), elements=floats))
    o1, a1 = py.maxplus_conv(a, b)
    o2, a2 = compiled.maxplus_conv(a, b)
    assert np.array_equal(o1, o2) and np.array_equal(a1, a2)


@needs_compiled
@given(arrays(np.float64, st.integers(0, 50), elements=floats))
def test_cumsum_backends_bitwise(x):
    assert np.array_equal(py.compensated_cumsum(x), compiled.compensated_cumsum(x))


@needs_compiled
@given(st.integers(1, 4), st.integers(1, 20), st.data())
def test_pair_sums_backends_bitwise(m, k, data):
    rows = np.sort(data.draw(arrays(np.float64, (m, k), elements=floats)), axis=1)
    assert np.array_equal(py.sorted_pair_sums(rows), compiled.sorted_pair_sums(rows))


def test_backend_selection():
    expected = "compiled" if compiled is not None else "python"
    assert _kernels.BACKEND == expected
    assert _kernels.maxplus_conv is _kernels.backend.maxplus_conv


def test_pure_python_switch():
    env = dict(os.environ, DYADICRI_PURE_PYTHON="1")
    code = "from dyadicri import _kernels; print(_kernels.BACKEND)"
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "python"
