"""Command-line interface: ``dyadicri {norms,pack,cover,tensor,verify}``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
input-format error, 3 precondition rejected, 4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .covering import CoverPreconditionError, dyadic_cover, verify_cover
from .functionals import InconsistencyError, all_functionals, parse_p
from .grid import CellSet, Grid, StepFunction, load_step_function, step_function_from_dict
from .packing import garo_norm_dyadic, jn_norm_dyadic
from .suite import SuiteConfig, SuiteInconsistencyError, run_suite
from .tensor import tensor_distribution, tensor_infinity_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _emit(obj):
    json.dump(_jsonable(obj), sys.stdout, indent=1, sort_keys=True, allow_nan=False)
    sys.stdout.write("\n")


def _load_function(path) -> StepFunction:
    try:
        return load_step_function(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:  # includes JSONDecodeError
        raise UsageError(f"{path}: {exc}") from exc


def _load_cell_set(path) -> CellSet:
    """A cell set file holds ``dim``, ``level`` and one of ``cells`` (indices),
    ``membership`` (flags) or ``values`` (Omega = cells with nonzero value)."""
    try:
        with open(path) as fh:
            data = json.load(fh, parse_constant=lambda c: (_ for _ in ()).throw(ValueError(c)))
        if not isinstance(data, dict):
            raise ValueError("expected a JSON object")
        if "values" in data:
            f = step_function_from_dict(data)
            return CellSet(f.grid, f.values != 0)
        grid = Grid(int(data["dim"]), int(data["level"]), float(data.get("side", 1.0)))
        if "cells" in data:
            cells = [int(c) for c in data["cells"]]
            if any(c < 0 or c >= grid.cell_count for c in cells):
                raise ValueError("cell index out of range")
            return CellSet.from_indices(grid, cells)
        if "membership" in data:
            return CellSet(grid, [bool(b) for b in data["membership"]])
        raise ValueError("need one of 'cells', 'membership' or 'values'")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _exponent(text, **kw):
    try:
        return parse_p(text, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_norms(args) -> int:
    f = _load_function(args.input)
    p = _exponent(args.p)
    _emit({"input": args.input, **all_functionals(f, p)})
    return EXIT_OK


def cmd_pack(args) -> int:
    f = _load_function(args.input)
    if args.functional == "jn":
        p = _exponent(args.p, allow_inf=False, allow_one=True)
        opt = jn_norm_dyadic(f, p)
    else:
        p = _exponent(args.p, allow_inf=False)
        if f.grid.cell_count > args.max_cells:
            raise UsageError(f"{f.grid.cell_count} cells exceeds --max-cells {args.max_cells}")
        opt = garo_norm_dyadic(f, p)
    _emit({"functional": args.functional, "p": p, **opt.to_dict()})
    return EXIT_OK


def cmd_cover(args) -> int:
    omega = _load_cell_set(args.input)
    try:
        report = dyadic_cover(omega)
    except CoverPreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    checks = verify_cover(omega, report)
    _emit({**report.to_dict(), "checks": dict(zip(("i", "ii", "iii"), checks))})
    return EXIT_OK if all(checks) else EXIT_FAIL


def cmd_tensor(args) -> int:
    f, g = _load_function(args.f), _load_function(args.g)
    curve = tensor_distribution(f, g)
    check = tensor_infinity_check(f, g)
    _emit({"distribution": curve.to_dict(), "check": check})
    return EXIT_OK if check["pass"] else EXIT_FAIL


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_verify(args) -> int:
    ps = [x.strip() for x in args.p_list.split(",") if x.strip()]
    try:
        cfg = SuiteConfig(
            seed=args.seed,
            cases=args.cases,
            dims=_int_list(args.dim),
            levels=_int_list(args.level),
            p_values=ps,
            tolerance_eq=args.tolerance_eq,
            output=args.out,
            perturb=args.perturb,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        report = run_suite(cfg)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit({"summary": report.summary, "failed": [
        {k: r[k] for k in ("check_id", "group", "lhs", "rhs", "constant", "offset", "relation")}
        for r in report.failures()
    ]})
    return EXIT_OK if report.summary["failed"] == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyadicri", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norms", help="all scalar functionals of a step function")
    s.add_argument("--input", required=True)
    s.add_argument("--p", required=True, help="exponent, or 'inf'")
    s.set_defaults(run=cmd_norms)

    s = sub.add_parser("pack", help="optimal dyadic packing for JN_p or GaRo_p")
    s.add_argument("--input", required=True)
    s.add_argument("--p", required=True)
    s.add_argument("--functional", choices=("jn", "garo"), required=True)
    s.add_argument("--max-cells", type=int, default=1 << 14, help="guard for the O(cells^2) GaRo solver")
    s.set_defaults(run=cmd_pack)

    s = sub.add_parser("cover", help="Whitney-type dyadic cover of a cell set")
    s.add_argument("--input", required=True)
    s.set_defaults(run=cmd_cover)

    s = sub.add_parser("tensor", help="distribution of f (x) g and the L(inf,inf) tensor bound")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.set_defaults(run=cmd_tensor)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=1000)
    s.add_argument("--dim", default="1,2", help="comma-separated dimensions")
    s.add_argument("--level", default="1,2,3,4,5,6", help="comma-separated levels")
    s.add_argument("--p-list", default="1.5,2,3,10,inf")
    s.add_argument("--tolerance-eq", type=float, default=1e-9)
    s.add_argument("--out", default=None, help="report JSON path")
    s.add_argument("--perturb", action="store_true",
                   help="negative control: shrink the constants of the GaRo/JN and weak/sharp bounds")
    s.set_defaults(run=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SuiteInconsistencyError, InconsistencyError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
