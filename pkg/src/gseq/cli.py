"""Command-line interface: ``python -m gseq <command> ...``.

Exit codes: 0 success, 1 verification suite failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from math import isqrt
from typing import Optional

from . import methods as M
from . import topology as T
from . import verifier as V
from .sequences import GroupModel, ModelMismatch, parse_rational, parse_sequence

COMMANDS = ("eval", "closure", "iterate", "check-closed", "check-open", "interior", "boundary",
            "dense", "regular", "stat-density", "lacunary-density", "continuity", "verify",
            "demo")


class UsageError(ValueError):
    pass


def _split(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("["):
        return [str(v) for v in json.loads(text)]
    return [t for t in (p.strip() for p in text.split(",")) if t]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gseq", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", help="kernel:1/2,1/2 | lim | cesaro | sum(a;b) | JSON")
    common.add_argument("--universe", help="q, z2, z3, ... (default q)")
    common.add_argument("--set", dest="set_", metavar="SET", help="comma list or JSON array")
    common.add_argument("--input", help="JSON file supplying any of the inputs")
    common.add_argument("--output", choices=("human", "json"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("eval", parents=[common]).add_argument("--seq", help="pre:[..];cyc:[..]")
    p = sub.add_parser("closure", parents=[common])
    p.add_argument("--cesaro-bound", type=int, default=T.DEFAULT_CESARO_BOUND)
    sub.add_parser("iterate", parents=[common]).add_argument("--k", type=int, default=2)
    sub.add_parser("check-closed", parents=[common])
    sub.add_parser("check-open", parents=[common])
    sub.add_parser("interior", parents=[common]).add_argument(
        "--cap", type=int, default=T.DEFAULT_INTERIOR_CAP)
    sub.add_parser("boundary", parents=[common])
    sub.add_parser("dense", parents=[common])
    sub.add_parser("regular", parents=[common])

    for name in ("stat-density", "lacunary-density"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--prefix", help="comma list of terms x_1, x_2, ...")
        p.add_argument("--squares", type=int, metavar="N",
                       help="use the indicator of perfect squares over 0..N-1 as the prefix")
        p.add_argument("--ell", default="0")
        p.add_argument("--radius", help="ball radius (rational line only)")
        if name == "lacunary-density":
            p.add_argument("--breakpoints", help="comma list k_1 < k_2 < ...")
            p.add_argument("--geometric", metavar="RATIO:COUNT")
            p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("continuity", parents=[common])
    p.add_argument("--function", help="value table f(0),f(1),... over Z_n")
    p.add_argument("--at", help="check continuity at this point only")
    p.add_argument("--within", help="restrict sequences to this subset")
    p.add_argument("--period-bound", type=int,
                   help="decide by enumerating periodic sequences up to this period instead")

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--check", action="append", help="run only this check (repeatable)")
    p.add_argument("--cap", type=int, default=T.DEFAULT_INTERIOR_CAP)

    sub.add_parser("demo", parents=[common])
    return parser


def _apply_input(args: argparse.Namespace) -> None:
    if not args.input:
        return
    with open(args.input) as fh:
        doc = json.load(fh)
    mapping = {"method": "method", "universe": "universe", "set": "set_", "sequence": "seq",
               "function": "function", "prefix": "prefix"}
    for key, attr in mapping.items():
        if key in doc and getattr(args, attr, None) is None:
            value = doc[key]
            if key == "method" and isinstance(value, dict):
                value = json.dumps(value)
            elif isinstance(value, list):
                value = json.dumps([str(v) for v in value])
            setattr(args, attr, str(value))


def _model(args) -> GroupModel:
    return GroupModel.from_name(args.universe or "q")


def _method(args) -> M.Method:
    if not args.method:
        raise UsageError("--method is required")
    return M.parse_method(args.method)


def _set(args, model: GroupModel) -> T.PointSet:
    if args.set_ is None:
        raise UsageError("--set is required")
    return T.PointSet.of(model, [model.parse(v) for v in _split(args.set_)])


def _fmt_set(A: T.PointSet) -> list[str]:
    return A.format()


def _prefix(args, model: GroupModel) -> list:
    if args.squares is not None:
        return [1 if isqrt(i) ** 2 == i else 0 for i in range(args.squares)]
    if args.prefix is None:
        raise UsageError("--prefix or --squares is required")
    return [model.parse(v) for v in _split(args.prefix)]


def _radius(args, model: GroupModel) -> Optional[Fraction]:
    if model.is_finite:
        if args.radius is not None:
            raise UsageError("Z_n is discrete; omit --radius")
        return None
    if args.radius is None:
        raise UsageError("--radius is required on the rational line")
    return parse_rational(args.radius)


def _human_set(A) -> str:
    return "{" + ", ".join(A) + "}"


def cmd_eval(args):
    model, G = _model(args), _method(args)
    if not args.seq:
        raise UsageError("--seq is required")
    x = parse_sequence(args.seq, model)
    value = M.evaluate(G, x)
    doc = {"defined": value is not None, "value": None if value is None else model.format(value)}
    text = f"G(x) = {doc['value']}" if value is not None else "x is not G-convergent (undefined)"
    return doc, text


def cmd_closure(args):
    model, G = _model(args), _method(args)
    A = _set(args, model)
    cl = T.closure(G, A, cesaro_bound=args.cesaro_bound)
    complete = T.closure_is_complete(G)
    doc = {"closure": _fmt_set(cl), "complete": complete}
    note = "" if complete else "  (lower approximation)"
    return doc, f"closure = {_human_set(doc['closure'])}{note}"


def cmd_iterate(args):
    model, G = _model(args), _method(args)
    iterates = T.closure_iterate(G, _set(args, model), args.k)
    doc = {"iterates": [_fmt_set(A) for A in iterates], "complete": T.closure_is_complete(G)}
    lines = [f"closure^{i + 1} = {_human_set(A)}" for i, A in enumerate(doc["iterates"])]
    return doc, "\n".join(lines)


def cmd_check_closed(args):
    model, G = _model(args), _method(args)
    A = _set(args, model)
    cl = T.closure(G, A)
    doc = {"closed": cl <= A, "closure": _fmt_set(cl)}
    return doc, f"closed: {str(doc['closed']).lower()} (closure = {_human_set(doc['closure'])})"


def cmd_check_open(args):
    model, G = _model(args), _method(args)
    doc = {"open": T.is_open(G, _set(args, model))}
    return doc, f"open: {str(doc['open']).lower()}"


def cmd_interior(args):
    model, G = _model(args), _method(args)
    doc = {"interior": _fmt_set(T.interior(G, _set(args, model), args.cap))}
    return doc, f"interior = {_human_set(doc['interior'])}"


def cmd_boundary(args):
    model, G = _model(args), _method(args)
    doc = {"boundary": _fmt_set(T.boundary(G, _set(args, model)))}
    return doc, f"boundary = {_human_set(doc['boundary'])}"


def cmd_dense(args):
    model, G = _model(args), _method(args)
    A = _set(args, model)
    doc = {"dense": T.is_dense(G, A), "closure": _fmt_set(T.closure(G, A))}
    return doc, f"dense: {str(doc['dense']).lower()}"


def cmd_regular(args):
    G = _method(args)
    model = GroupModel.from_name(args.universe) if args.universe else None
    doc = {"regular": M.is_regular(G, model)}
    return doc, f"regular: {str(doc['regular']).lower()}"


def cmd_stat_density(args):
    model = _model(args)
    d = M.statistical_density(_prefix(args, model), model.parse(args.ell), _radius(args, model),
                              model)
    doc = {"density": M.format_rational(d)}
    return doc, f"density = {doc['density']}"


def cmd_lacunary_density(args):
    model = _model(args)
    if args.geometric:
        ratio, _, count = args.geometric.partition(":")
        theta = M.LacunaryScheme.geometric(int(ratio), int(count))
    elif args.breakpoints:
        theta = M.LacunaryScheme(tuple(int(k) for k in _split(args.breakpoints)))
    else:
        raise UsageError("--breakpoints or --geometric is required")
    d = M.lacunary_density(_prefix(args, model), theta, args.r, model.parse(args.ell),
                           _radius(args, model), model)
    lo, hi = theta.interval(args.r)
    doc = {"density": M.format_rational(d), "interval": [lo, hi]}
    return doc, f"density on ({lo},{hi}] = {doc['density']}"


def cmd_continuity(args):
    model, G = _model(args), _method(args)
    if args.function is None:
        raise UsageError("--function is required")
    f = V.TabulatedFunction(model, tuple(model.parse(v) for v in _split(args.function)))
    at = model.parse(args.at) if args.at is not None else None
    within = T.PointSet.of(model, [model.parse(v) for v in _split(args.within)]) \
        if args.within is not None else None
    if args.period_bound is not None:
        verdict = V.is_continuous_bounded(G, f, args.period_bound, at=at, within=within)
    else:
        verdict = V.is_continuous(G, f, at=at, within=within)
    doc = {"continuous": verdict.holds, "verified_up_to_period": verdict.verified_up_to_period}
    if not verdict.holds:
        doc["point"] = model.format(verdict.point)
        doc["witness"] = str(verdict.witness)
        text = f"not continuous at {doc['point']}; witness x = {doc['witness']}"
    else:
        text = f"continuous (all periods up to {verdict.verified_up_to_period} covered)"
    return doc, text


def cmd_verify(args):
    universes = [GroupModel.from_name(u) for u in _split(args.universe or "z2,z3,z4")]
    methods = [M.parse_method(args.method)] if args.method else None
    for model in universes:
        for G in methods or ():
            M.check_compatible(G, model)
    if args.check:
        unknown = [c for c in args.check if c not in V.CHECKS_BY_NAME]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    reports = []
    for model in universes:
        reports += V.run_suite(model, methods, trials=args.trials, seed=args.seed, cap=args.cap,
                               checks=args.check)
    summary = V.summarize(reports)
    return reports, summary


def demo_rows() -> list[dict]:
    A = T.PointSet.of(GroupModel.from_name("q"), [0, 1])
    G = M.AVERAGING
    first, second = T.closure_iterate(G, A, 2)
    zero, one = T.PointSet.of(A.model, [0]), T.PointSet.of(A.model, [1])
    rows = [
        ("closure of {0,1}", ["0", "1/2", "1"], first.format()),
        ("second iterate", ["0", "1/4", "1/2", "3/4", "1"], second.format()),
        ("{0} closed", True, T.is_closed(G, zero)),
        ("{1} closed", True, T.is_closed(G, one)),
        ("{0} u {1} closed", False, T.is_closed(G, zero | one)),
    ]
    return [{"name": n, "expected": e, "computed": c, "match": e == c} for n, e, c in rows]


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_input(args)
        if args.command == "verify":
            start = time.perf_counter()
            reports, summary = cmd_verify(args)
            elapsed = time.perf_counter() - start
            if args.output == "json":
                sys.stdout.write("".join(r.to_line() + "\n" for r in reports))
                _emit({"summary": summary.to_json()})
            else:
                print(f"{len(reports)} checks run in {elapsed:.1f}s: "
                      + ", ".join(f"{k} {v}" for k, v in sorted(summary.counts.items())))
                for r in summary.failures:
                    print(f"FAILED {r.check} [{r.universe}, {r.method}] witness={r.witness}")
                for name in summary.unfalsified:
                    print(f"NO WITNESS for falsifiable check {name}")
                for name in summary.findings:
                    print(f"finding: the as-stated claim '{name}' has counterexamples")
                print("suite passed" if summary.passed else "suite FAILED")
            return 0 if summary.passed else 1
        if args.command == "demo":
            rows = demo_rows()
            ok = all(r["match"] for r in rows)
            if args.output == "json":
                _emit({"rows": rows, "passed": ok})
            else:
                for r in rows:
                    print(f"{r['name']:<20} expected {r['expected']!s:<28} "
                          f"computed {r['computed']!s:<28} {'ok' if r['match'] else 'MISMATCH'}")
            return 0 if ok else 1
        handler = globals()["cmd_" + args.command.replace("-", "_")]
        doc, text = handler(args)
    except (UsageError, ValueError, IndexError, ModelMismatch, M.UnsupportedMethod,
            json.JSONDecodeError, OSError) as exc:
        print(f"gseq {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output == "json":
        _emit(doc)
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
