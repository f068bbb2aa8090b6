"""NumPy implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and bit-identical output (same operation order, no fused multiply-add).
"""
import numpy as np


def maxplus_conv(a, b):
    """Row-wise max-plus convolution with argmax tracking.

    Parameters
    ----------
    a : ndarray, shape (m, p)
    b : ndarray, shape (m, q)

    Returns
    -------
    out : ndarray, shape (m, p + q - 1)
        ``out[r, s] = max_{i + j = s} a[r, i] + b[r, j]``.
    arg : ndarray of int64, same shape
        Smallest ``i`` attaining the maximum.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    m, p = a.shape
    q = b.shape[1]
    out = np.full((m, p + q - 1), -np.inf)
    arg = np.zeros((m, p + q - 1), dtype=np.int64)
    for i in range(p):
        cand = a[:, i:i + 1] + b
        seg = out[:, i:i + q]
        better = cand > seg
        seg[better] = cand[better]
        arg[:, i:i + q][better] = i
    return out, arg


def compensated_cumsum(x):
    """Prefix sums accumulated with Neumaier compensation."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(x)
    s = 0.0
    c = 0.0
    for k, v in enumerate(x.tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[k] = s + c
    return out


def sorted_pair_sums(rows):
    """``sum_{i<j} (s_j - s_i)`` for each ascending-sorted row ``s``.

    Uses the gap form ``sum_g (s_g - s_{g-1}) * g * (k - g)`` so every term
    is nonnegative.
    """
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    m, k = rows.shape
    out = np.zeros(m)
    for g in range(1, k):
        out += (rows[:, g] - rows[:, g - 1]) * float(g * (k - g))
    return out
