"""Acceptance checks on the default verification suite.

Each test prints one ``PASS``/``FAIL`` line.  The default and the perturbed
suites are run once per module.
"""
import math

import numpy as np
import pytest

import oracles
from dyadicri.functionals import INF
from dyadicri.generators import LAWS, gen_random
from dyadicri.grid import Grid
from dyadicri.suite import SuiteConfig, record_passes, run_suite

FINITE_P = (1.5, 2.0, 3.0, 10.0)


@pytest.fixture(scope="module")
def report():
    return run_suite(SuiteConfig())


@pytest.fixture(scope="module")
def perturbed():
    return run_suite(SuiteConfig(perturb=True))


def records(rep, check_id):
    return [r for r in rep.records if r["check_id"] == check_id]


def tally(rep, check_id):
    recs = records(rep, check_id)
    assert recs, f"no records for {check_id}"
    for r in recs:
        assert r["pass"] == record_passes(r)
    return sum(r["instances"] for r in recs), sum(r["violations"] for r in recs)


def report_line(capsys, label, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


def test_oscillation_identity_at_infinity(report, capsys):
    n, bad = tally(report, "osc_inf")
    tol = {r["tolerance"] for r in records(report, "osc_inf")}
    ok = bad == 0 and n >= 1000 and tol == {1e-9}
    report_line(capsys, "## = # at p=inf (rel 1e-9)", ok, f"{n} functions, {bad} violations")
    assert ok


def test_weak_p_identity_and_bounds(report, capsys):
    ok, parts = True, []
    for cid in ("weak_p.identity", "weak_p.lower", "weak_p.upper"):
        n, bad = tally(report, cid)
        ps = {r["group"].split("p=")[1] for r in records(report, cid)}
        ok &= bad == 0 and ps == {"1.5", "2.0", "3.0", "10.0"} and n >= 4000
        parts.append(f"{cid} {n}/{bad}")
    ok &= {r["tolerance"] for r in records(report, "weak_p.identity")} == {1e-9}
    report_line(capsys, "## = # and # <= weak <= p # for finite p", ok, ", ".join(parts))
    assert ok


def test_tail_bound_constants(report, capsys):
    # constants checked against brute-force oracles before the suite uses them
    pre_bad = 0
    for i in range(100):
        g = Grid(1 + i % 2, 1 + i % 3)
        f = gen_random(10_000 + i, g, LAWS[i % 3])
        v, mu = f.values, f.cell_measure
        for p in FINITE_P:
            ws = oracles.weak_star(v, mu, p)
            ds = oracles.double_sharp(v, mu, p)
            on = oracles.oneil_exact(v, mu, p)
            pre_bad += on > ds ** (1 / p) * ws ** (1 - 1 / p) * (1 + 1e-12)
            pre_bad += ws > 2 * 2 ** ((p - 1) / p) * on * (1 + 1e-12)
    ok = pre_bad == 0
    parts = [f"oracle pre-check 400 pairs, {pre_bad} violations"]
    for cid in ("tail_bound.upper", "tail_bound.lower"):
        n, bad = tally(report, cid)
        ok &= bad == 0 and n >= 4000
        parts.append(f"{cid} {n}/{bad}")
    report_line(capsys, "tail-integral bounds with C1 = 1, C2 = 2*2^(1/p')", ok, ", ".join(parts))
    assert ok


def test_garo_at_most_twice_jn(report, capsys):
    n1, b1 = tally(report, "garo_jn.norms")
    n2, b2 = tally(report, "garo_jn.packing")
    grids = {r["group"].split()[0] for r in records(report, "garo_jn.packing")}
    ok = b1 == b2 == 0 and {"n1L6", "n2L3"} <= grids
    report_line(capsys, "GaRo <= 2 JN (norms and per packing, grids <= 64 cells)", ok,
                f"norms {n1}/{b1}, packings {n2}/{b2}")
    assert ok


def test_garo_against_weak_type(report, capsys):
    n1, b1 = tally(report, "garo_weak.weak")
    n2, b2 = tally(report, "garo_weak.oscillation")
    ok = b1 == b2 == 0
    report_line(capsys, "GaRo <= 2p' weak*, osc sup <= 2^(n/p'+1) GaRo + L1 term", ok,
                f"{n1}/{b1}, {n2}/{b2}")
    assert ok


def test_jn_below_bmo(report, capsys):
    n, bad = tally(report, "jn_bmo")
    ok = bad == 0
    report_line(capsys, "JN_p <= BMO |Q0|^(1/p)", ok, f"{n} instances, {bad} violations")
    assert ok


def test_packing_oracles(report, capsys):
    ok, parts = True, []
    for cid in ("oracle.jn", "oracle.garo"):
        recs = records(report, cid)
        n, bad = tally(report, cid)
        cells = {r["group"].split()[0] for r in recs}
        ok &= bad == 0 and {r["tolerance"] for r in recs} == {1e-12}
        ok &= {"n1L4", "n1L5", "n1L6", "n2L2", "n2L3"} <= cells
        # 200 random functions, each for 4 exponents, plus profiles
        ok &= n >= 200 * len(FINITE_P)
        parts.append(f"{cid} {n}/{bad}")
    report_line(capsys, "DP optima = exact optima on grids <= 64 cells (1e-12)", ok, ", ".join(parts))
    assert ok


def test_covers(report, capsys):
    ok, parts = True, []
    for cid in ("cover.i", "cover.ii", "cover.iii", "cover.iii_lower"):
        recs = records(report, cid)
        n, bad = tally(report, cid)
        by = {r["group"]: r["instances"] for r in recs}
        ok &= bad == 0
        ok &= by.get("random n1L6") == 1000 and by.get("random n2L6") == 1000
        # nonempty Omega with at most half the cells
        ok &= by.get("exhaustive n1L4") == sum(math.comb(16, k) for k in range(1, 9))
        ok &= by.get("exhaustive n2L2") == sum(math.comb(16, k) for k in range(1, 9))
        parts.append(f"{cid} {n}/{bad}")
    report_line(capsys, "dyadic cover (i)-(iii), 2^(n+1) bound", ok, ", ".join(parts))
    assert ok


def test_tensor(report, capsys):
    n1, b1 = tally(report, "tensor.exact")
    n2, b2 = tally(report, "tensor.inequality")
    n3, b3 = tally(report, "tensor.tonelli")
    ok = b1 == b2 == b3 == 0 and n1 == n2 == 200
    report_line(capsys, "tensor distribution exact, tensor bound, Tonelli (1e-12)", ok,
                f"{n1}/{b1}, {n2}/{b2}, {n3}/{b3}")
    assert ok


def test_convergence_targets(report, capsys):
    parts, ok = [], True
    for cid in ("limit.weak_star", "limit.sharp", "limit.oneil", "limit.log"):
        (r,) = records(report, cid)
        assert r["tolerance"] == 0.05 and r["pass"] == record_passes(r)
        ok &= r["pass"]
        parts.append(f"{cid} {r['lhs']:.6g} vs {r['rhs']:g} {'ok' if r['pass'] else 'MISS'}")
    report_line(capsys, "continuum limits at L=12 (5%)", ok, ", ".join(parts))
    assert ok


def test_negative_controls(perturbed, capsys):
    failed = {r["check_id"] for r in perturbed.failures()}
    ok = {"weak_p.upper", "garo_jn.packing"} <= failed
    report_line(capsys, "perturbed constants are caught", ok,
                f"{perturbed.summary['failed']} failing records in {sorted(failed)}")
    assert ok


def test_l1_tail(report, capsys):
    n, bad = tally(report, "l1_tail")
    ok = bad == 0 and n >= 1000 and {r["tolerance"] for r in records(report, "l1_tail")} == {1e-12}
    report_line(capsys, "sup T = ||f||_1 (1e-12)", ok, f"{n} functions, {bad} violations")
    assert ok
