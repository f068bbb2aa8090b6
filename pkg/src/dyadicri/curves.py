"""Distribution function, decreasing rearrangement, maximal function.

All objects are exact piecewise curves on ``(0, inf)``:

* :class:`StepCurve` -- nonincreasing right-continuous step function
  (``lambda_f`` and ``f*``).
* :class:`HyperbolaCurve` -- pieces ``A_i / t + v_i`` (``f**`` and
  ``f** - f*``).

Conventions: ``lambda_f(t) = |{|f| > t}|`` (strict), ``f*(t) = inf{s >= 0 :
lambda_f(s) <= t}``.  Curves live on all of ``(0, inf)``: ``f*`` vanishes
past the support and ``f**`` decays like ``||f||_1 / t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .grid import StepFunction

__all__ = [
    "StepCurve",
    "HyperbolaCurve",
    "distribution",
    "rearrange",
    "curve_distribution",
    "rearrangement_of",
    "maximal",
    "oscillation_curve",
    "tail_integral",
    "oscillation_at",
]


def _frozen(arr, dtype=np.float64):
    out = np.array(arr, dtype=dtype).reshape(-1)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class StepCurve:
    """``curve(t) = values[j]`` for ``t in [x_j, x_{j+1})``, ``x_0 = 0``.

    ``breakpoints`` holds ``x_1 < ... < x_k`` (positive), ``values`` holds
    ``c_0 > c_1 > ... > c_k = 0``.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = _frozen(self.breakpoints)
        c = _frozen(self.values)
        if c.size != x.size + 1:
            raise ValueError("need exactly one more plateau value than breakpoints")
        if c[-1] != 0.0:
            raise ValueError("last plateau value must be 0")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(c))):
            raise ValueError("curve data must be finite")
        if x.size and (x[0] <= 0 or np.any(np.diff(x) <= 0)):
            raise ValueError("breakpoints must be positive and strictly increasing")
        if np.any(np.diff(c) >= 0):
            raise ValueError("plateau values must be strictly decreasing")
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", c)

    @property
    def size(self) -> int:
        """Number of breakpoints ``k``."""
        return self.breakpoints.size

    def piece(self, t):
        """Index ``j`` of the plateau containing ``t``."""
        return np.searchsorted(self.breakpoints, t, side="right")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = self.values[self.piece(t)]
        return float(out) if out.ndim == 0 else out

    @cached_property
    def left_endpoints(self) -> np.ndarray:
        out = np.concatenate(([0.0], self.breakpoints))
        out.flags.writeable = False
        return out

    @cached_property
    def tails(self) -> np.ndarray:
        """``tails[j] = integral of the curve over [x_j, inf)``, j = 0..k.

        Accumulated from the last piece backwards with compensation;
        ``tails[0]`` is the total integral.
        """
        x, c = self.left_endpoints, self.values
        k = self.size
        pieces = c[:k] * (x[1:] - x[:k])
        out = np.zeros(k + 1)
        if k:
            out[:k] = _kernels.compensated_cumsum(pieces[::-1])[::-1]
        out.flags.writeable = False
        return out

    def integral_from(self, t: float) -> float:
        """``integral_t^inf curve(s) ds`` for ``t >= 0``, exact per piece."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        j = int(self.piece(t))
        if j >= self.size:
            return 0.0
        if t == self.left_endpoints[j]:
            return float(self.tails[j])
        return float(self.values[j] * (self.breakpoints[j] - t) + self.tails[j + 1])

    def to_dict(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}

    def __eq__(self, other):
        if not isinstance(other, StepCurve):
            return NotImplemented
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.values, other.values
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class HyperbolaCurve:
    """``curve(t) = coef[j] / t + offset[j]`` for ``t in [x_j, x_{j+1})``."""

    breakpoints: np.ndarray
    coef: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        x, a, v = _frozen(self.breakpoints), _frozen(self.coef), _frozen(self.offset)
        if not (a.size == v.size == x.size + 1):
            raise ValueError("need one (coef, offset) pair per piece")
        if np.any(a < 0):
            raise ValueError("coefficients must be nonnegative")
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "coef", a)
        object.__setattr__(self, "offset", v)

    @property
    def size(self) -> int:
        return self.breakpoints.size

    def piece(self, t):
        return np.searchsorted(self.breakpoints, t, side="right")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t <= 0):
            raise ValueError("curve is defined for t > 0")
        j = self.piece(t)
        out = self.coef[j] / t + self.offset[j]
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "coef": self.coef.tolist(),
            "offset": self.offset.tolist(),
        }


def distribution(f: StepFunction) -> StepCurve:
    """Exact ``lambda_f``: breakpoints are the distinct nonzero ``|f|`` values."""
    a = np.abs(f.values)
    uniq, counts = np.unique(a, return_counts=True)
    cum = np.cumsum(counts)
    nonzero = uniq > 0
    zeros = a.size - int(counts[nonzero].sum())
    # plateau j counts the cells with |f| > u_j, where u_0 = 0
    above = np.concatenate(([a.size - zeros], a.size - cum[nonzero])).astype(np.int64)
    return StepCurve(uniq[nonzero], above * f.cell_measure)


def rearrange(f: StepFunction) -> StepCurve:
    """Exact ``f*``: sorted ``|f|`` carried on intervals of one cell measure."""
    a = np.abs(f.values)
    uniq, counts = np.unique(a, return_counts=True)
    nonzero = uniq > 0
    cum = np.cumsum(counts[nonzero][::-1]).astype(np.int64)
    return StepCurve(cum * f.cell_measure, np.concatenate((uniq[nonzero][::-1], [0.0])))


def curve_distribution(curve: StepCurve) -> StepCurve:
    """Distribution function of a step curve w.r.t. Lebesgue measure on (0, inf).

    Applied to ``f*`` this returns ``lambda_f``; applied to ``lambda_f`` it
    returns ``f*``.  Both are the same swap of axes.
    """
    c, x = curve.values, curve.breakpoints
    return StepCurve(c[:-1][::-1], np.concatenate((x[::-1], [0.0])))


rearrangement_of = curve_distribution


def _corner_masses(fstar: StepCurve) -> np.ndarray:
    """``A_j = sum_{i<=j} x_i (c_{i-1} - c_i)``, j = 0..k (``A_0 = 0``).

    This is ``integral_0^{x_j} f* - c_j x_j`` written with nonnegative terms
    only; it equals ``integral_{c_j}^inf lambda_f`` term by term.
    """
    x, c = fstar.breakpoints, fstar.values
    terms = x * (c[:-1] - c[1:])
    return np.concatenate(([0.0], _kernels.compensated_cumsum(terms)))


def _check_nonincreasing(fstar: StepCurve):
    if not isinstance(fstar, StepCurve) or np.any(np.diff(fstar.values) > 0):
        raise ValueError("maximal() expects a nonincreasing step curve")


def maximal(fstar: StepCurve) -> HyperbolaCurve:
    """``f**(t) = (1/t) integral_0^t f*``, exactly, for all ``t > 0``."""
    _check_nonincreasing(fstar)
    return HyperbolaCurve(fstar.breakpoints, _corner_masses(fstar), fstar.values)


def oscillation_curve(fstar: StepCurve) -> HyperbolaCurve:
    """``f** - f*``; on each piece it is ``A_j / t`` (offsets cancel)."""
    _check_nonincreasing(fstar)
    return HyperbolaCurve(fstar.breakpoints, _corner_masses(fstar), np.zeros(fstar.size + 1))


def tail_integral(lam: StepCurve, t: float) -> float:
    """``T(t) = integral_t^inf lambda(s) ds``."""
    if not t >= 0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    return lam.integral_from(float(t))


def oscillation_at(f: StepFunction, t: float) -> float:
    """``f**(t) - f*(t)``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    return oscillation_curve(rearrange(f))(t)
