"""Scalar rearrangement-invariant functionals, computed exactly.

Every supremum over ``t > 0`` is split over the pieces of the underlying
step / hyperbola curves and each piece is maximised in closed form by
:func:`maximize_power_pair`.  No grid scans.

Naming::

    weak_star_norm   sup f*(t) t^{1/p}
    weak_norm        sup f**(t) t^{1/p}
    sharp_norm       sup (f**(t) - f*(t)) t^{1/p}      (p = inf: L(inf, inf))
    double_sharp     sup T(t) / lambda(t)^{1 - 1/p}     T(t) = int_t^inf lambda
    oneil_functional sup (T(t) t^{p-1})^{1/p}
    l1_tail_sup      sup T(t) = ||f||_1
    bmo_dyadic       max over dyadic cubes of the mean oscillation
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import StepCurve, curve_distribution, distribution, maximal, oscillation_curve, rearrange
from .grid import StepFunction

__all__ = [
    "INF",
    "FunctionalParams",
    "SupWitness",
    "UnboundedSupremumError",
    "InconsistencyError",
    "parse_p",
    "maximize_power_pair",
    "maximize_pieces",
    "evaluate_power_pair",
    "weak_star_norm",
    "weak_norm",
    "sharp_norm",
    "double_sharp",
    "oneil_functional",
    "l1_tail_sup",
    "bmo_dyadic",
    "weak_star_sup",
    "weak_sup",
    "sharp_sup",
    "double_sharp_sup",
    "oneil_sup",
    "all_functionals",
]

INF = math.inf


class UnboundedSupremumError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def parse_p(p, *, allow_inf=True, allow_one=False) -> float:
    """Validate an exponent; accepts numbers and the string ``"inf"``."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "∞"):
            p = INF
        else:
            try:
                p = float(p)
            except ValueError:
                raise ValueError(f"invalid exponent {p!r}") from None
    p = float(p)
    if math.isnan(p):
        raise ValueError("exponent is NaN")
    if p == INF:
        if not allow_inf:
            raise ValueError("p = inf is not allowed here")
        return p
    if p < 1 or (p == 1 and not allow_one):
        lo = "[1, inf)" if allow_one else "(1, inf)"
        raise ValueError(f"p must lie in {lo}{' or be inf' if allow_inf else ''}, got {p}")
    return p


@dataclass(frozen=True)
class FunctionalParams:
    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))

    @property
    def conjugate(self) -> float:
        """``p' = p / (p - 1)``; 1 when ``p = inf``."""
        return 1.0 if self.p == INF else self.p / (self.p - 1.0)

    @property
    def inv(self) -> float:
        return 0.0 if self.p == INF else 1.0 / self.p


@dataclass(frozen=True)
class SupWitness:
    """Where a supremum is reached.

    ``location`` is ``"attained"`` (value taken at ``argmax_t``),
    ``"left_limit"`` (approached as ``t`` increases to ``argmax_t``, which
    may be ``inf``) or ``"right_limit"`` (as ``t`` decreases to it, e.g.
    ``0``).  ``piece`` indexes the curve piece the expression belongs to.
    """

    value: float
    argmax_t: float
    location: str = "attained"
    piece: int | None = None


# -- shared kernel ------------------------------------------------------------

def _term_limit(coef, exp, at_zero):
    if coef == 0:
        return 0.0
    if exp == 0:
        return float(coef)
    if (exp > 0) == at_zero:
        return 0.0
    return math.copysign(INF, coef)


def _limit(a, beta, b, delta, at_zero):
    la, lb = _term_limit(a, beta, at_zero), _term_limit(b, delta, at_zero)
    if math.isinf(la) and math.isinf(lb) and la != lb:
        # the steeper power dominates
        if at_zero:
            return la if beta < delta else lb
        return la if beta > delta else lb
    return la + lb


def evaluate_power_pair(a, beta, b, delta, t) -> float:
    """``a t^beta + b t^delta``, with limits at ``t = 0`` and ``t = inf``."""
    if t == 0:
        return _limit(a, beta, b, delta, True)
    if t == INF:
        return _limit(a, beta, b, delta, False)
    val = 0.0
    if a != 0:
        val += a * t ** beta
    if b != 0:
        val += b * t ** delta
    return val


def maximize_power_pair(a, beta, b, delta, lo, hi) -> SupWitness:
    """Supremum of ``a t^beta + b t^delta`` over ``[lo, hi)``.

    Candidates are ``lo`` (a right limit when ``lo = 0``), the left limit
    at ``hi`` and the interior critical point
    ``t* = (-b delta / (a beta))^{1 / (beta - delta)}`` when it exists.
    Ties keep the earliest candidate in that order.
    """
    lo, hi = float(lo), float(hi)
    if not (0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got [{lo}, {hi})")
    cands = [
        (evaluate_power_pair(a, beta, b, delta, lo), lo, "right_limit" if lo == 0 else "attained"),
    ]
    if a != 0 and b != 0 and beta != delta and beta != 0 and delta != 0:
        r = -b * delta / (a * beta)
        if r > 0:
            ts = r ** (1.0 / (beta - delta))
            if lo < ts < hi:
                cands.append((evaluate_power_pair(a, beta, b, delta, ts), ts, "attained"))
    cands.append((evaluate_power_pair(a, beta, b, delta, hi), hi, "left_limit"))
    best = cands[0]
    for c in cands[1:]:
        if c[0] > best[0]:
            best = c
    if best[0] == INF:
        raise UnboundedSupremumError(
            f"{a} t^{beta} + {b} t^{delta} is unbounded on [{lo}, {hi})"
        )
    return SupWitness(best[0], best[1], best[2])


_LOCATIONS = ("attained", "attained", "left_limit")


def _terms(a, beta, b, delta, t):
    """Vectorised ``a t^beta + b t^delta`` for finite positive ``t``.

    Zero coefficients drop their term, as in :func:`evaluate_power_pair`.
    """
    out = np.where(a != 0, a * t ** beta, 0.0)
    return out + np.where(b != 0, b * t ** delta, 0.0)


def maximize_pieces(a, beta, b, delta, lo, hi, first_piece=0) -> SupWitness:
    """Best of :func:`maximize_power_pair` over pieces ``[lo[j], hi[j])``.

    Same candidates and tie rules as the scalar routine, evaluated for all
    pieces at once; between pieces the earliest maximum wins, and a
    supremum that is not positive is reported as 0 with no piece.
    """
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    a, b = np.broadcast_to(a, np.shape(lo)), np.broadcast_to(b, np.shape(lo))
    lo, hi = np.asarray(lo, dtype=np.float64), np.asarray(hi, dtype=np.float64)
    n = lo.size
    if n == 0:
        return SupWitness(0.0, INF, "left_limit", None)
    if np.any(~(lo < hi)) or np.any(lo < 0):
        raise ValueError("pieces need 0 <= lo < hi")
    vals = np.full((3, n), -INF)
    ts = np.empty((3, n))
    ts[0], ts[2] = lo, hi
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        safe_lo = np.where(lo > 0, lo, 1.0)
        safe_hi = np.where(np.isfinite(hi), hi, 1.0)
        vals[0] = _terms(a, beta, b, delta, safe_lo)
        vals[2] = _terms(a, beta, b, delta, safe_hi)
        if beta != delta and beta != 0 and delta != 0:
            r = np.where((a != 0) & (b != 0), -b * delta / np.where(a != 0, a * beta, 1.0), -1.0)
            t_in = np.where(r > 0, np.where(r > 0, r, 1.0) ** (1.0 / (beta - delta)), np.nan)
            ok = (r > 0) & (lo < t_in) & (t_in < hi)
            if ok.any():
                vals[1, ok] = _terms(a[ok], beta, b[ok], delta, t_in[ok])
                ts[1, ok] = t_in[ok]
    for j in np.flatnonzero(lo == 0):
        vals[0, j] = evaluate_power_pair(a[j], beta, b[j], delta, 0.0)
    for j in np.flatnonzero(hi == INF):
        vals[2, j] = evaluate_power_pair(a[j], beta, b[j], delta, INF)
    which = np.argmax(vals, axis=0)
    best = vals[which, np.arange(n)]
    if np.any(best == INF):
        j = int(np.flatnonzero(best == INF)[0])
        raise UnboundedSupremumError(
            f"{a[j]} t^{beta} + {b[j]} t^{delta} is unbounded on [{lo[j]}, {hi[j]})"
        )
    j = int(np.argmax(best))
    if not best[j] > 0:
        return SupWitness(0.0, INF, "left_limit", None)
    k = int(which[j])
    loc = "right_limit" if k == 0 and lo[j] == 0 else _LOCATIONS[k]
    return SupWitness(float(best[j]), float(ts[k, j]), loc, j + first_piece)


def _best_of(values, ts, locations, first_piece=0) -> SupWitness:
    """Earliest maximum of per-piece values; 0 with no piece unless positive."""
    if len(values) == 0:
        return SupWitness(0.0, INF, "left_limit", None)
    j = int(np.argmax(values))
    if not values[j] > 0:
        return SupWitness(0.0, INF, "left_limit", None)
    return SupWitness(float(values[j]), float(ts[j]), locations[j], j + first_piece)


def _as_curves(f):
    """Accept a StepFunction or a distribution curve; return (lambda, f*)."""
    if isinstance(f, StepFunction):
        return distribution(f), rearrange(f)
    if isinstance(f, StepCurve):
        return f, curve_distribution(f)
    raise TypeError(f"expected StepFunction or distribution StepCurve, got {type(f).__name__}")


# -- suprema on curves ----------------------------------------------------------

def weak_star_sup(fstar: StepCurve, p) -> SupWitness:
    r = 1.0 / parse_p(p, allow_inf=False)
    x, c = fstar.left_endpoints, fstar.values
    k = fstar.size
    return maximize_pieces(c[:k], r, 0.0, 0.0, x[:k], x[1:])


def weak_sup(fstar: StepCurve, p) -> SupWitness:
    r = 1.0 / parse_p(p, allow_inf=False)
    h = maximal(fstar)
    x = np.concatenate((fstar.left_endpoints, [INF]))
    return maximize_pieces(h.coef, r - 1.0, h.offset, r, x[:-1], x[1:])


def sharp_sup(fstar: StepCurve, p) -> SupWitness:
    p = parse_p(p)
    h = oscillation_curve(fstar)
    x = np.concatenate((fstar.left_endpoints, [INF]))
    # piece 0 has A_0 = 0
    if p == INF:
        # A_j / t is decreasing: its sup is at the left endpoint
        xs = x[1:-1]
        return _best_of(h.coef[1:] / xs, xs, ["attained"] * xs.size, 1)
    return maximize_pieces(h.coef[1:], 1.0 / p - 1.0, 0.0, 0.0, x[1:-1], x[2:], 1)


def double_sharp_sup(lam: StepCurve, p) -> SupWitness:
    p = parse_p(p)
    expo = 1.0 if p == INF else 1.0 - 1.0 / p
    u, tails, lv = lam.left_endpoints, lam.tails, lam.values
    k = lam.size
    # on a plateau the denominator is constant and T decreases: left endpoints
    den = lv[:k] if expo == 1.0 else lv[:k] ** expo
    locs = ["right_limit"] + ["attained"] * (k - 1)
    return _best_of(tails[:k] / den, u[:k], locs)


def oneil_sup(lam: StepCurve, p) -> SupWitness:
    """Supremum of ``T(t) t^{p-1}`` (the functional is its ``1/p`` power)."""
    p = parse_p(p, allow_inf=False)
    u = np.concatenate((lam.left_endpoints, [INF]))
    tails, lv = lam.tails, lam.values
    k = lam.size
    # T(t) = B - lambda_j t on [u_j, u_{j+1})
    B = tails[1 : k + 1] + lv[:k] * u[1 : k + 1]
    return maximize_pieces(B, p - 1.0, -lv[:k], p, u[:k], u[1 : k + 1])


# -- public functionals -----------------------------------------------------------

def weak_star_norm(f, p) -> float:
    """``||f||*_{L(p,inf)} = sup_t f*(t) t^{1/p}``."""
    return weak_star_sup(_as_curves(f)[1], p).value


def weak_norm(f, p) -> float:
    """``||f||_{L(p,inf)} = sup_t f**(t) t^{1/p}``."""
    return weak_sup(_as_curves(f)[1], p).value


def sharp_norm(f, p) -> float:
    """``sup_t (f** - f*)(t) t^{1/p}``; ``p = inf`` gives ``||f||_{L(inf,inf)}``."""
    return sharp_sup(_as_curves(f)[1], p).value


def double_sharp(f, p) -> float:
    """``sup_t T(t) / lambda(t)^{1-1/p}`` with the ratio set to 0 where lambda = 0."""
    return double_sharp_sup(_as_curves(f)[0], p).value


def oneil_functional(f, p) -> float:
    p = parse_p(p, allow_inf=False)
    return oneil_sup(_as_curves(f)[0], p).value ** (1.0 / p)


def l1_tail_sup(f: StepFunction, rtol: float = 1e-12) -> float:
    """``sup_t T(t) = T(0)``, cross-checked against the direct L1 norm."""
    lam = distribution(f)
    value = float(lam.tails[0]) if lam.size else 0.0
    direct = f.l1_norm()
    if not math.isclose(value, direct, rel_tol=rtol, abs_tol=0.0):
        raise InconsistencyError(f"tail integral {value!r} != ||f||_1 {direct!r}")
    return value


def bmo_dyadic(f: StepFunction) -> float:
    """Dyadic BMO norm: max over dyadic cubes of ``(1/|Q|) int_Q |f - f_Q|``."""
    from .packing import oscillation_tables

    return max(float(np.max(m)) for m in oscillation_tables(f).mean_osc)


def all_functionals(f: StepFunction, p) -> dict:
    """Every scalar functional of ``f`` at exponent ``p`` (JSON-ready)."""
    p = parse_p(p)
    lam, fstar = distribution(f), rearrange(f)
    out = {
        "p": "inf" if p == INF else p,
        "sharp_norm": sharp_sup(fstar, p).value,
        "double_sharp": double_sharp_sup(lam, p).value,
        "l1_tail_sup": l1_tail_sup(f),
        "l1_norm": f.l1_norm(),
        "bmo_dyadic": bmo_dyadic(f),
    }
    if p != INF:
        out["weak_star_norm"] = weak_star_sup(fstar, p).value
        out["weak_norm"] = weak_sup(fstar, p).value
        out["oneil_functional"] = oneil_sup(lam, p).value ** (1.0 / p)
    return out
