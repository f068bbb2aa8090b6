"""Deterministic verification suite.

Every check compares a left-hand side against ``constant * rhs + offset``
under a relation:

* ``le``    ``lhs <= (constant * rhs + offset) * (1 + tolerance)``
* ``eq``    ``|lhs - target| <= tolerance * max(|lhs|, |target|)``
* ``close`` same test as ``eq``, used for convergence targets

Instances are grouped (check, grid, p); each group emits one record holding
its worst instance, so ``pass`` is recomputable from the stored numbers,
together with the instance and violation counts.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .covering import dyadic_cover, verify_cover
from .curves import distribution, rearrange
from .functionals import (
    INF,
    double_sharp_sup,
    oneil_sup,
    sharp_sup,
    weak_star_sup,
    weak_sup,
)
from .generators import LAWS, gen_log, gen_power, gen_random, gen_random_cellset, gen_spikes
from .grid import CellSet, Grid, StepFunction
from .packing import (
    MAX_ENUMERATED_PACKINGS,
    brute_force_optimum,
    count_packings,
    garo_norm_dyadic,
    garo_objective,
    jn_norm_dyadic,
    jn_objective,
    oscillation_tables,
    recursive_optimum,
)
from .tensor import tensor_brute, tensor_distribution, tonelli_transport, value_mass_list

__all__ = ["SuiteConfig", "Report", "SuiteInconsistencyError", "run_suite", "record_passes"]

# slack for inequalities that can hold with equality (round-off only)
LE_TOLERANCE = 1e-12
EXACT_TOLERANCE = 1e-12
CONVERGENCE_TOLERANCE = 0.05
CONVERGENCE_LEVEL = 12
PACKING_CELL_LIMIT = 64
EXHAUSTIVE_COVER_CELLS = 16
TENSOR_MAX_LEVEL = 4

ANCHORS = {
    "osc_inf": "at p = inf the oscillation norm equals the sup of the lambda tail integral over lambda",
    "weak_p": "for finite p the # and ## functionals coincide and bound the weak-L^p norm within a factor p",
    "tail_bound": "weak-L^p is characterised by a tail integral bound C t^{1-p} (two-sided, proof constants)",
    "garo_jn": "GaRo_p is at most twice JN_p (per packing by Hoelder)",
    "garo_weak": "GaRo_p is dominated by weak-L^p and controls the oscillation operator up to an L^1 term",
    "jn_bmo": "JN_p is dominated by the BMO norm times |Q0|^{1/p}",
    "oracle": "dynamic-programming packing optima equal exhaustive or independent exact optima",
    "cover": "Whitney-type dyadic cover: density, covering and measure properties",
    "tensor": "the distribution of a tensor product and the L(inf,inf) tensor inequality",
    "limit": "closed-form continuum limits of the extremal profiles",
    "l1_tail": "L^1 is characterised by a bounded tail integral: sup T(t) = ||f||_1",
}


FAMILIES = tuple(ANCHORS)


class SuiteInconsistencyError(RuntimeError):
    """A witness failed to reproduce the value it certifies."""


def _p_token(p):
    return "inf" if p == INF else p


def _p_parse(p):
    if isinstance(p, str):
        return INF if p.strip().lower() == "inf" else float(p)
    return float(p)


@dataclass
class SuiteConfig:
    seed: int = 0
    cases: int = 1000
    dims: list = field(default_factory=lambda: [1, 2])
    levels: list = field(default_factory=lambda: [1, 2, 3, 4, 5, 6])
    p_values: list = field(default_factory=lambda: [1.5, 2.0, 3.0, 10.0, "inf"])
    tolerance_eq: float = 1e-9
    output: str | None = None
    perturb: bool = False

    def __post_init__(self):
        if not self.tolerance_eq >= 0:
            raise ValueError("tolerance_eq must be nonnegative")
        if int(self.cases) < 1:
            raise ValueError("cases must be >= 1")
        self.seed = int(self.seed) & (2**64 - 1)
        self.cases = int(self.cases)
        self.dims = sorted({int(n) for n in self.dims})
        self.levels = sorted({int(L) for L in self.levels})
        if not self.dims or min(self.dims) < 1 or not self.levels or min(self.levels) < 0:
            raise ValueError("dims must be >= 1 and levels >= 0, both nonempty")
        ps = sorted({_p_parse(p) for p in self.p_values})
        if not ps or any(not (p > 1) for p in ps):
            raise ValueError("every p must exceed 1 (or be 'inf')")
        self.p_values = [_p_token(p) for p in ps]

    @property
    def exponents(self) -> list[float]:
        return [_p_parse(p) for p in self.p_values]

    @property
    def finite_exponents(self) -> list[float]:
        return [p for p in self.exponents if p != INF]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d


@dataclass
class Report:
    records: list
    config: dict
    version: str = __version__

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.records if r["pass"])
        return {"total": len(self.records), "passed": passed, "failed": len(self.records) - passed}

    def failures(self) -> list:
        return [r for r in self.records if not r["pass"]]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "summary": self.summary,
            "records": self.records,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, allow_nan=False)


# -- record bookkeeping -----------------------------------------------------------

def _target(constant, rhs, offset):
    return constant * rhs + offset


def record_passes(rec: dict) -> bool:
    """Recompute ``pass`` from the stored numbers of a record."""
    lhs, tol = rec["lhs"], rec["tolerance"]
    target = _target(rec["constant"], rec["rhs"], rec["offset"])
    if rec["relation"] == "le":
        return lhs <= target * (1.0 + tol) if target >= 0 else lhs <= target * (1.0 - tol)
    scale = max(abs(lhs), abs(target))
    return abs(lhs - target) <= tol * scale


def _score(relation, lhs, target) -> float:
    """How badly an instance fares; larger is worse, > 1 roughly means failure."""
    if relation == "le":
        if target > 0:
            return lhs / target
        return 0.0 if lhs <= target else math.inf
    scale = max(abs(lhs), abs(target))
    return 0.0 if scale == 0 else abs(lhs - target) / scale


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


class _Group:
    def __init__(self, check_id, group, relation, tolerance):
        self.check_id, self.group = check_id, group
        self.relation, self.tolerance = relation, tolerance
        self.instances = self.violations = 0
        self.worst = None

    def add(self, case, lhs, rhs, constant=1.0, offset=0.0, witness=None):
        rec = {
            "lhs": float(lhs), "rhs": float(rhs), "constant": float(constant),
            "offset": float(offset), "relation": self.relation, "tolerance": self.tolerance,
        }
        ok = record_passes(rec)
        self.instances += 1
        self.violations += not ok
        s = _score(self.relation, rec["lhs"], _target(rec["constant"], rec["rhs"], rec["offset"]))
        if self.worst is None or s > self.worst[0] or (not ok and self.worst[1]["pass"]):
            rec.update({"pass": ok, "case": case, "witness": witness or {}})
            self.worst = (s, rec)

    def add_bulk(self, instances, violations):
        """Count instances judged elsewhere (their worst one went through ``add``)."""
        self.instances += instances
        self.violations += violations

    def record(self) -> dict:
        rec = dict(self.worst[1])
        rec.update(
            check_id=self.check_id,
            anchor=ANCHORS[self.check_id.split(".")[0]],
            group=self.group,
            instances=self.instances,
            violations=self.violations,
        )
        return _clean(rec)


class _Recorder:
    def __init__(self):
        self.groups = {}

    def group(self, check_id, group, relation, tolerance) -> _Group:
        key = (check_id, group)
        if key not in self.groups:
            self.groups[key] = _Group(check_id, group, relation, tolerance)
        return self.groups[key]

    def records(self) -> list:
        def key(k):
            cid, grp = k
            head, _, tail = cid.partition(".")
            return (FAMILIES.index(head), tail, grp)

        return [self.groups[k].record() for k in sorted(self.groups, key=key)]


# -- corpus ----------------------------------------------------------------------

@dataclass
class _Case:
    index: int
    f: StepFunction
    label: dict

    @property
    def grid_tag(self):
        g = self.f.grid
        return f"n{g.dim}L{g.level}"


def _case_seeds(seed: int, count: int, stream: int) -> np.ndarray:
    rng = np.random.default_rng([seed, stream])
    return rng.integers(0, 2**63 - 1, size=count, dtype=np.int64)


def _random_corpus(cfg: SuiteConfig, grids, count, stream) -> list[_Case]:
    seeds = _case_seeds(cfg.seed, count, stream)
    out = []
    for i in range(count):
        grid = grids[i % len(grids)]
        law = LAWS[(i // len(grids)) % len(LAWS)]
        s = int(seeds[i])
        out.append(_Case(i, gen_random(s, grid, law), {"seed": s, "law": law, **grid.to_dict()}))
    return out


def _profile_corpus(cfg: SuiteConfig, start: int) -> list[_Case]:
    out = []
    i = start
    L = max(cfg.levels) if 1 in cfg.dims else None
    if L is not None and L >= 1:
        g1 = Grid(1, L)
        for p in cfg.finite_exponents:
            out.append(_Case(i, gen_power(p, g1), {"profile": "power", "p": p, **g1.to_dict()}))
            out.append(_Case(i + 1, gen_power(p, g1, shift=1.0),
                             {"profile": "power-shifted", "p": p, "shift": 1.0, **g1.to_dict()}))
            i += 2
        out.append(_Case(i, gen_log(g1), {"profile": "log", **g1.to_dict()}))
        i += 1
    for n in cfg.dims:
        # spikes on the largest grid with at most 64 cells
        lv = [lv for lv in cfg.levels if n * lv <= 6]
        if lv and max(lv) >= 1:
            g = Grid(n, max(lv))
            out.append(_Case(i, gen_spikes(g), {"profile": "spikes", **g.to_dict()}))
            i += 1
    return out


# -- checks ------------------------------------------------------------------------

def _witness_t(w):
    return {"t": w.argmax_t, "location": w.location}


def _check_rearrangement_functionals(rec, cfg, cases):
    """Identities and bounds that only need lambda and f*."""
    tol = cfg.tolerance_eq
    for c in cases:
        lam, fstar = distribution(c.f), rearrange(c.f)
        tag = c.grid_tag
        rec.group("l1_tail", tag, "eq", EXACT_TOLERANCE).add(
            c.index, float(lam.tails[0]) if lam.size else 0.0, c.f.l1_norm(), witness=c.label
        )
        for p in cfg.exponents:
            sh = sharp_sup(fstar, p)
            ds = double_sharp_sup(lam, p)
            grp = f"{tag} p={_p_token(p)}"
            wit = {**c.label, "sharp": _witness_t(sh), "double_sharp": _witness_t(ds)}
            if p == INF:
                rec.group("osc_inf", tag, "eq", tol).add(c.index, ds.value, sh.value, witness=wit)
                continue
            rec.group("weak_p.identity", grp, "eq", tol).add(c.index, ds.value, sh.value, witness=wit)
            wk = weak_sup(fstar, p)
            upper = p - 0.4 if cfg.perturb else p
            rec.group("weak_p.lower", grp, "le", LE_TOLERANCE).add(
                c.index, sh.value, wk.value, witness={**c.label, "weak": _witness_t(wk)}
            )
            rec.group("weak_p.upper", grp, "le", LE_TOLERANCE).add(
                c.index, wk.value, sh.value, upper, witness={**c.label, "weak": _witness_t(wk)}
            )
            ws = weak_star_sup(fstar, p).value
            on = oneil_sup(lam, p).value ** (1.0 / p)
            rec.group("tail_bound.upper", grp, "le", LE_TOLERANCE).add(
                c.index, on, ds.value ** (1.0 / p) * ws ** (1.0 - 1.0 / p), 1.0, witness=c.label
            )
            rec.group("tail_bound.lower", grp, "le", LE_TOLERANCE).add(
                c.index, ws, on, 2.0 * 2.0 ** ((p - 1.0) / p), witness=c.label
            )


def _verified(f, p, opt, objective, what):
    if len(opt.packing) == 0:
        if opt.value != 0:
            raise SuiteInconsistencyError(f"{what}: empty witness for value {opt.value!r}")
        return
    again = objective(f, opt.packing, p)
    if not math.isclose(again, opt.value, rel_tol=1e-12, abs_tol=1e-300):
        raise SuiteInconsistencyError(
            f"{what}: witness gives {again!r}, optimum reported {opt.value!r}"
        )


def _check_packings(rec, cfg, cases):
    """GaRo/JN/BMO/weak-type bounds on every case and finite p."""
    c4 = 1.9 if cfg.perturb else 2.0
    for c in cases:
        f, g, tag = c.f, c.f.grid, c.grid_tag
        if g.level == 0:
            continue
        tables = oscillation_tables(f)
        bmo = max(float(np.max(m)) for m in tables.mean_osc)
        fstar = rearrange(f)
        l1 = f.l1_norm()
        for p in cfg.finite_exponents:
            grp = f"{tag} p={p}"
            pc = p / (p - 1.0)
            jn = jn_norm_dyadic(f, p, tables)
            ga = garo_norm_dyadic(f, p, tables)
            _verified(f, p, jn, jn_objective, "jn")
            _verified(f, p, ga, garo_objective, "garo")
            wit = {**c.label, "jn_packing": jn.packing.to_list(), "garo_packing": ga.packing.to_list()}
            rec.group("garo_jn.norms", grp, "le", LE_TOLERANCE).add(c.index, ga.value, jn.value, c4, witness=wit)
            ws = weak_star_sup(fstar, p)
            rec.group("garo_weak.weak", grp, "le", LE_TOLERANCE).add(
                c.index, ga.value, ws.value, 2.0 * pc, witness={**wit, "weak_star": _witness_t(ws)}
            )
            sh = sharp_sup(fstar, p)
            rec.group("garo_weak.oscillation", grp, "le", LE_TOLERANCE).add(
                c.index, sh.value, ga.value, 2.0 ** (g.dim / pc + 1.0),
                (4.0 / g.measure) ** (1.0 / pc) * l1,
                witness={**wit, "sharp": _witness_t(sh)},
            )
            rec.group("jn_bmo", grp, "le", LE_TOLERANCE).add(
                c.index, jn.value, bmo, g.measure ** (1.0 / p), witness=wit
            )


def _random_antichains(g: Grid, rng, count) -> list[list[tuple[int, int]]]:
    """Random nonempty antichains as (depth, dyadic index) lists."""
    out = []
    while len(out) < count:
        cubes, stack = [], [(0, 0)]
        while stack:
            d, j = stack.pop()
            u = rng.random()
            if d == g.level or u < 0.3:
                if u < 0.85 or d == g.level:
                    cubes.append((d, j))
            else:
                stack.extend((d + 1, (j << g.dim) + c) for c in range(1 << g.dim))
        if cubes:
            out.append(cubes)
    return out


def _holder_per_packing(rec, f, p, case, grp, c4, witnesses, rng):
    """GaRo ratio <= c4 * JN objective for individual packings.

    Trees with at most 16 cells are enumerated in full; larger ones (up to
    64 cells) use every singleton, the optimal witnesses and random
    antichains.  Cube weights are the direct double sums.
    """
    from .packing import _direct_weights, _raw_packings, packing_sums

    g = f.grid
    if g.cell_count > PACKING_CELL_LIMIT:
        return
    offsets = np.cumsum([0] + [g.cubes_at(d) for d in range(g.level + 1)])
    w_jn, w_garo = _direct_weights(f, p)
    meas = np.concatenate([np.full(g.cubes_at(d), g.cube_measure(d)) for d in range(g.level + 1)])
    if g.cell_count <= 16 and count_packings(g) <= MAX_ENUMERATED_PACKINGS:
        jn = packing_sums(g, w_jn) ** (1.0 / p)
        ga = packing_sums(g, w_garo) / packing_sums(g, meas) ** (1.0 - 1.0 / p)
        rows = None
    else:
        rows = [[(d, j)] for d in range(g.level + 1) for j in range(g.cubes_at(d))]
        rows += [[(q.depth, q.index) for q in w] for w in witnesses if len(w)]
        rows += _random_antichains(g, rng, 64)
        mat = np.zeros((len(rows), offsets[-1]))
        for r, cubes in enumerate(rows):
            for d, j in cubes:
                mat[r, offsets[d] + j] = 1.0
        jn = (mat @ w_jn) ** (1.0 / p)
        ga = (mat @ w_garo) / (mat @ meas) ** (1.0 - 1.0 / p)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(jn > 0, ga / (c4 * jn), np.where(ga > 0, np.inf, 0.0))
    r = int(np.argmax(ratio))
    bad = ga > c4 * jn * (1 + LE_TOLERANCE)
    if rows is None:
        pk = _raw_packings(g.dim, g.level)[r]
    else:
        pk = rows[r]
    witness = {**case.label, "packings_checked": int(jn.size),
               "packing": [{"depth": int(d), "index": int(j)} for d, j in pk]}
    grp_rec = rec.group("garo_jn.packing", grp, "le", LE_TOLERANCE)
    grp_rec.add(case.index, float(ga[r]), float(jn[r]), c4, witness=witness)
    grp_rec.add_bulk(jn.size - 1, int(np.count_nonzero(bad)) - int(bad[r]))


def _check_oracles(rec, cfg, cases, rng):
    """DP optima against oracles, and per-packing GaRo <= 2 JN, on grids up to 64 cells.

    The DP optimum must equal the exhaustive optimum (<= 16 cells) or the
    independent recursive optimum.
    """
    c4 = 1.9 if cfg.perturb else 2.0
    for c in cases:
        f, g = c.f, c.f.grid
        exhaustive = g.cell_count <= 16
        tables = oscillation_tables(f)
        for p in cfg.finite_exponents:
            grp = f"{c.grid_tag} p={p}"
            found = []
            for name, solver, objective in (
                ("jn", jn_norm_dyadic, jn_objective),
                ("garo", garo_norm_dyadic, garo_objective),
            ):
                opt = solver(f, p, tables)
                _verified(f, p, opt, objective, name)
                found.append(opt.packing)
                if exhaustive:
                    ref, ref_pk = brute_force_optimum(f, p, name)
                else:
                    ref, ref_pk = recursive_optimum(f, p, name)
                rec.group(f"oracle.{name}", grp, "eq", EXACT_TOLERANCE).add(
                    c.index, opt.value, ref,
                    witness={**c.label, "oracle": "enumeration" if exhaustive else "recursion",
                             "packing": opt.packing.to_list(), "oracle_packing": ref_pk.to_list()},
                )
            _holder_per_packing(rec, f, p, c, grp, c4, found, rng)


def _cover_instance(rec, grp, index, omega, label):
    report = dyadic_cover(omega)
    i, ii, iii = verify_cover(omega, report)
    g = omega.grid
    wit = {**label, "cover": report.cover.to_list()}
    worst_density = max(report.densities) if report.densities else 0.0
    rec.group("cover.i", grp, "le", 0.0).add(index, worst_density if i else 1.0, 0.5, witness=wit)
    rec.group("cover.ii", grp, "eq", 0.0).add(index, 0.0 if ii else 1.0, 0.0, witness=wit)
    total, lo, hi = report.total_measure, omega.measure, 2.0 ** (g.dim + 1) * omega.measure
    if iii != (lo <= total <= hi):
        raise SuiteInconsistencyError(f"cover measure verdicts disagree for {label}")
    rec.group("cover.iii", grp, "le", 0.0).add(index, total, omega.measure, 2.0 ** (g.dim + 1), witness=wit)
    rec.group("cover.iii_lower", grp, "le", 0.0).add(index, omega.measure, report.total_measure, witness=wit)


def _check_covers(rec, cfg):
    """Cover properties: all small Omega exhaustively, random Omega at L = 6.

    The exhaustive pass covers the configured grids with at most 16 cells.
    """
    idx = 0
    for n in cfg.dims:
        for L in cfg.levels:
            g = Grid(n, L)
            if g.cell_count > EXHAUSTIVE_COVER_CELLS:
                break
            k = g.cell_count
            for size in range(1, k // 2 + 1):
                for combo in itertools.combinations(range(k), size):
                    _cover_instance(rec, f"exhaustive n{n}L{L}", idx, CellSet.from_indices(g, combo),
                                    {"cells": list(combo)})
                    idx += 1
    for n in cfg.dims:
        g = Grid(n, 6)
        if g.cell_count > 1 << 12:
            continue
        rng = np.random.default_rng([cfg.seed, 8, n])
        for i in range(cfg.cases):
            omega = gen_random_cellset(rng, g)
            _cover_instance(rec, f"random n{n}L6", idx, omega, {"random_index": i})
            idx += 1


def _check_tensor(rec, cfg, grids):
    """Tensor distribution against the product grid, the tensor bound and Tonelli."""
    small = [g for g in grids if g.level <= TENSOR_MAX_LEVEL]
    if not small:
        return
    count = max(1, cfg.cases // 5)
    seeds = _case_seeds(cfg.seed, 2 * count, 9)
    for i in range(count):
        gf = small[i % len(small)]
        gg = small[(i // len(small)) % len(small)]
        law_f = LAWS[i % len(LAWS)]
        law_g = LAWS[(i + 1) % len(LAWS)]
        f = gen_random(int(seeds[2 * i]), gf, law_f)
        g = gen_random(int(seeds[2 * i + 1]), gg, law_g)
        label = {"f": {"seed": int(seeds[2 * i]), "law": law_f, **gf.to_dict()},
                 "g": {"seed": int(seeds[2 * i + 1]), "law": law_g, **gg.to_dict()}}
        grp = f"f n{gf.dim}L{gf.level} g n{gg.dim}L{gg.level}"
        formula = tensor_distribution(f, g)
        brute = distribution(tensor_brute(f, g))
        same = formula == brute
        if same:
            mismatch = 0.0
        elif formula.size == brute.size:
            mismatch = float(max(np.max(np.abs(formula.breakpoints - brute.breakpoints), initial=0.0),
                                 np.max(np.abs(formula.values - brute.values))))
        else:
            mismatch = math.inf
        rec.group("tensor.exact", grp, "eq", 0.0).add(
            i, mismatch, 0.0, witness={**label, "pieces": [formula.size, brute.size]}
        )
        lhs = double_sharp_sup(formula, INF)
        rhs = double_sharp_sup(distribution(f), INF)
        rec.group("tensor.inequality", grp, "le", LE_TOLERANCE).add(
            i, lhs.value, rhs.value, g.sup_norm(), witness={**label, "t": lhs.argmax_t}
        )
        vm = value_mass_list(g)
        probes = sorted({0.0, *(formula.breakpoints[:: max(1, formula.size // 8)].tolist())})
        if vm.values.size:
            probes.append(float(vm.values[0] * f.sup_norm()) * 0.5)
        total = formula.integral_from(0.0)
        for t in probes:
            # absolute error, scaled by the L1 norm of the product
            err = abs(formula.integral_from(t) - tonelli_transport(f, g, t))
            rec.group("tensor.tonelli", grp, "le", 0.0).add(
                i, err, total, EXACT_TOLERANCE, witness={**label, "t": t}
            )


def _check_convergence(rec, cfg):
    """Closed-form continuum limits, on the profiles at level 12."""
    g = Grid(1, CONVERGENCE_LEVEL)
    f = gen_power(2.0, g)
    lam, fstar = distribution(f), rearrange(f)
    label = {"profile": "power", "p": 2.0, **g.to_dict()}
    ws = weak_star_sup(fstar, 2.0)
    sh = sharp_sup(fstar, 2.0)
    on = oneil_sup(lam, 2.0)
    for cid, w, value, target in (
        ("limit.weak_star", ws, ws.value, 1.0),
        ("limit.sharp", sh, sh.value, 2.0),
        ("limit.oneil", on, math.sqrt(on.value), 1.0),
    ):
        rec.group(cid, "n1L12 p=2", "close", CONVERGENCE_TOLERANCE).add(
            0, value, target, witness={**label, **_witness_t(w)}
        )
    lg = gen_log(g)
    sl = sharp_sup(rearrange(lg), INF)
    rec.group("limit.log", "n1L12 p=inf", "close", CONVERGENCE_TOLERANCE).add(
        0, sl.value, 1.0, witness={"profile": "log", **g.to_dict(), **_witness_t(sl)}
    )


# -- driver --------------------------------------------------------------------------

def run_suite(config: SuiteConfig | None = None) -> Report:
    """Run every check; deterministic in ``config``.  Writes JSON when ``output`` is set."""
    cfg = config or SuiteConfig()
    grids = [Grid(n, L) for n in cfg.dims for L in cfg.levels if n * L <= 12]
    if not grids:
        raise ValueError("no grid with at most 4096 cells in dims x levels")
    rec = _Recorder()
    cases = _random_corpus(cfg, grids, cfg.cases, 1)
    cases += _profile_corpus(cfg, len(cases))
    _check_rearrangement_functionals(rec, cfg, cases)
    _check_packings(rec, cfg, cases)
    small = [g for g in grids if 1 <= g.level and g.cell_count <= PACKING_CELL_LIMIT]
    if small:
        oracle_cases = _random_corpus(cfg, small, max(1, cfg.cases // 5), 7)
        oracle_cases += [c for c in _profile_corpus(cfg, len(oracle_cases))
                         if c.f.grid.cell_count <= PACKING_CELL_LIMIT]
        _check_oracles(rec, cfg, oracle_cases, np.random.default_rng([cfg.seed, 4]))
    _check_covers(rec, cfg)
    _check_tensor(rec, cfg, grids)
    _check_convergence(rec, cfg)
    report = Report(rec.records(), cfg.to_dict())
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    return report
