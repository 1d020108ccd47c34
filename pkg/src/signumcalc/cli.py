"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 parse error,
3 domain error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Sequence

from . import distributions as dc
from .coeff import SYM, Dimension
from .distributions import CATALOG_ORDER, World, as_expr
from .errors import Inconsistent, ParseError, SignumCalcError
from .operators import cross_partner, normalize, normalize_by_rewriting, signum_partner
from .parser import parse_distribution, parse_operator
from .serialize import canonical_json, report, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3
NUMERIC_MAX_M = 4


class CommandResult:
    def __init__(self, results, checks: list[dict], text: list[str]):
        self.results = results
        self.checks = checks
        self.text = text

    @property
    def exit_status(self) -> int:
        return EXIT_OK if all(c.get("pass", True) for c in self.checks) else EXIT_FAIL


def _check(id_: str, ok: bool, **extra) -> dict:
    return {"id": id_, "pass": bool(ok), **extra}


def _dimension(text: str) -> Dimension:
    if text == "sym":
        return SYM
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--m expects 'sym' or an integer >= 2, got {text!r}") from None
    if m < 2:
        raise argparse.ArgumentTypeError(f"--m must be at least 2, got {m}")
    return Dimension(m)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SIGNUMCALC_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"SIGNUMCALC_SEED must be an integer, got {env!r}", 1, env) from None
    return 0


def _world(args) -> World:
    return World(args.world)


def _dist(args) -> dc.DistExpr:
    t = parse_distribution(args.dist, _world(args), args.m)
    if any(n > CATALOG_ORDER for (_e, n) in t.origin):
        raise dc.DivisionRuleMissing(f"origin terms above order {CATALOG_ORDER} are outside the input catalog")
    dc.check_regular(t)
    return t


def _roundtrip_dist(t, world: World, dim: Dimension) -> dict:
    text = str(as_expr(t))
    again = parse_distribution(text, world, dim)
    return _check("print(parse(print(result))) = print(result)", str(again) == text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_normalize(args) -> CommandResult:
    e = parse_operator(args.expr, args.m)
    nf = normalize(e)
    again = normalize(parse_operator(str(nf), args.m))
    rw = normalize_by_rewriting(e, random.Random(_seed(args)))
    checks = [
        _check("print(parse(print(nf))) = nf", again == nf),
        _check("rewriting route agrees", rw == nf),
    ]
    return CommandResult({"normal_form": nf}, checks, [str(nf)])


def cmd_partner(args) -> CommandResult:
    e = parse_operator(args.expr, args.m)
    fn, name = (cross_partner, "cross") if args.cross else (signum_partner, "signum")
    p = fn(e)
    checks = [
        _check("partner is an involution", fn(p) == normalize(e)),
        _check("print(parse(print(partner))) = partner", normalize(parse_operator(str(p), args.m)) == p),
    ]
    return CommandResult({"kind": name, "operator": normalize(e), "partner": p}, checks, [str(p)])


def cmd_apply(args) -> CommandResult:
    t = _dist(args)
    if args.laplace_parts:
        if t.world is not World.DIST:
            raise dc.WorldError("--laplace-parts expects a distribution")
        dec = dc.laplace_parts(t)
        rep = dc.entanglement_check(dec.parts, dec.total, dec.system, dec.weights)
        lines = [f"{lab}: [{as_expr(p)}]" for lab, p in zip(dec.labels, dec.parts)]
        lines.append(f"total: {dec.total}")
        lines += [f"constraint: {eq}" for eq in dec.system.equation_strings()] or ["constraint: none"]
        checks = [_check("constraints are the solvability condition", rep["matches"])]
        return CommandResult({"decomposition": dec}, checks, lines)
    if args.op is None:
        raise ParseError("apply needs --op or --laplace-parts", 1)
    p = parse_operator(args.op, args.m)
    res = dc.apply_operator(p, t)
    out = as_expr(res)
    dc.check_regular(out)
    checks = [_roundtrip_dist(out, out.world, args.m)]
    text = f"[{out}]" if isinstance(res, dc.EquivClass) else str(out)
    return CommandResult({"operator": normalize(p), "input": t, "result": res}, checks, [text])


def cmd_entangle(args) -> CommandResult:
    t = _dist(args)
    if t.world is not World.DIST:
        raise dc.WorldError("entangle expects a distribution")
    dec = dc.laplace_parts(t) if args.laplace else dc.dirac_parts(t)
    rep = dc.entanglement_check(dec.parts, dec.total, dec.system, dec.weights)
    lines = [f"{lab}: [{as_expr(p)}]" for lab, p in zip(dec.labels, dec.parts)]
    lines.append(f"total: {dec.total}")
    lines += [f"constraint: {eq}" for eq in rep["equations"]] or ["constraint: none"]
    checks = [_check("constraints are the solvability condition", rep["matches"])]
    return CommandResult({"decomposition": dec, "entanglement": rep}, checks, lines)


def cmd_tables(args) -> CommandResult:
    from .tables import verify_pair_tables

    rep = verify_pair_tables(args.m, _seed(args))
    lines = []
    for row in rep.signum + rep.cross:
        lines.append(f"{'PASS' if row.passed else 'FAIL'}  {row.table:6}  {row.operator}  ->  {row.claimed}")
    lines.append(f"{len(rep.signum)} signum-pair rows, {len(rep.cross)} cross-pair rows")
    checks = [_check(f"{r.table}:{r.label}", r.passed) for r in rep.signum + rep.cross]
    return CommandResult(rep, checks, lines)


def cmd_verify(args) -> CommandResult:
    from .coherence import coherence_suite
    from .identities import composite_suite, delta_rules, structural_suite, worked_examples
    from .suite import IDENTITY_TOL, identity_suite, quadrature_suite
    from .tables import verify_pair_tables

    dim = args.m
    seed = _seed(args)
    tol = args.tol if args.tol is not None else IDENTITY_TOL
    sections: dict[str, list[dict]] = {}
    tables = verify_pair_tables(dim, seed)
    sections["tables"] = [_check(f"{r.table}:{r.label}", r.passed) for r in tables.signum + tables.cross]
    sections["structural"] = structural_suite(dim)
    sections["worked_examples"] = worked_examples(dim)
    sections["delta"] = delta_rules(dim)
    sections["composite"] = [r.to_json() for r in composite_suite(dim)]
    if dim.value is None:
        sections["coherence"] = [r.to_json() for r in coherence_suite()]
    numeric_m = dim.value if dim.value is not None else 3
    if numeric_m <= NUMERIC_MAX_M:
        sections["numeric_identities"] = identity_suite(numeric_m, seed, tol=tol)
        sections["quadrature"] = quadrature_suite(numeric_m, seed)
        skipped = []
    else:
        skipped = [f"numeric suites run for m <= {NUMERIC_MAX_M}; skipped at m = {numeric_m}"]
    checks = []
    lines = []
    for name, rows in sections.items():
        for row in rows:
            checks.append({"section": name, **row})
        bad = [r for r in rows if not r["pass"]]
        lines.append(f"{'PASS' if not bad else 'FAIL'}  {name}: {len(rows) - len(bad)}/{len(rows)}")
        lines += [f"      failed: {r['id']}" for r in bad]
    lines += [f"note: {s}" for s in skipped]
    results = {"numeric_m": numeric_m, "skipped": skipped, "summary": {k: sum(r["pass"] for r in v) for k, v in sections.items()}}
    return CommandResult(results, checks, lines)


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_dimension, default=SYM, help="dimension: 'sym' (default) or an integer >= 2")
    common.add_argument("--json", action="store_true", help="emit the canonical JSON report")
    common.add_argument("--tol", type=float, default=None, help="tolerance for numeric identity checks")
    common.add_argument("--seed", type=int, default=None, help="random seed (overrides SIGNUMCALC_SEED)")

    parser = argparse.ArgumentParser(prog="signumcalc", description="Radial and angular derivatives of distributions and signumdistributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="normal form of an operator")
    p.add_argument("expr")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("partner", parents=[common], help="signum partner (or cross partner) of an operator")
    p.add_argument("expr")
    p.add_argument("--cross", action="store_true", help="cross partner w Q w instead of w P (-w)")
    p.set_defaults(func=cmd_partner)

    p = sub.add_parser("apply", parents=[common], help="act with an operator on a catalog (signum)distribution")
    p.add_argument("--op")
    p.add_argument("--dist", required=True)
    p.add_argument("--world", choices=("dist", "signum"), default="dist")
    p.add_argument("--laplace-parts", action="store_true", help="split the Laplacian into its three parts")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("tables", parents=[common], help="recompute the signum-pair and cross-pair tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("entangle", parents=[common], help="spherical split of the Dirac (or Laplace) operator with constraints")
    p.add_argument("--dist", required=True)
    p.add_argument("--world", choices=("dist",), default="dist")
    p.add_argument("--laplace", action="store_true")
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("verify", parents=[common], help="run the symbolic and numeric verification suites")
    p.set_defaults(func=cmd_verify)
    return parser


def _inputs(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "json"):
            continue
        out[key] = str(value) if isinstance(value, Dimension) else value
    if "seed" in out and out["seed"] is None:
        try:
            out["seed"] = _seed(args)
        except ParseError:
            pass
    return out


def _error_status(exc: Exception) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, Inconsistent):
        return EXIT_FAIL
    return EXIT_DOMAIN


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PARSE
    try:
        res: CommandResult = args.func(args)
    except SignumCalcError as exc:
        status = _error_status(exc)
        error = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            error["column"] = exc.column
        if args.json:
            out.write(canonical_json(report(args.command, _inputs(args), {"error": error}, [], status)))
        else:
            err.write(f"error: {exc}\n")
        return status
    status = res.exit_status
    if args.json:
        out.write(canonical_json(report(args.command, _inputs(args), to_jsonable(res.results), res.checks, status)))
    else:
        for line in res.text:
            out.write(line + "\n")
        failed = [c for c in res.checks if not c.get("pass", True)]
        for c in failed:
            out.write(f"check failed: {c['id']}\n")
    return status


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
