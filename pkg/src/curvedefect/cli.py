"""Command line: ``curvedefect analyze | verify-paper | bounds``.

Exit codes: 0 success, 1 usage error, 2 invalid curve (non-reduced),
3 acceptance failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import families as fam
from . import singularities as sing
from . import verification
from .forms import FormError, parse_form
from .jacobian import CurveError, NonReducedError
from .report import analyze, dumps, encode, verdict_dict

EXIT_OK, EXIT_USAGE, EXIT_CURVE, EXIT_ACCEPTANCE = 0, 1, 2, 3
DEFAULT_MAX_DEGREE = 14


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="curvedefect", description="Defect, mdr and Tjurina number of plane curves.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the pipeline on one curve")
    a.add_argument("polynomial", nargs="?", help="homogeneous polynomial in x, y, z")
    a.add_argument("--family", choices=sorted(fam.FAMILIES))
    for name in ("m", "k", "n", "d", "seed"):
        a.add_argument(f"--{name}", type=int)
    a.add_argument("--census", help='singularities for the bound checks, e.g. "A3:12" or "node:3"')
    a.add_argument("--irreducible", action="store_true", help="declare the curve irreducible")
    a.add_argument("--field", choices=("modular", "rational"), default="modular")
    a.add_argument("--json", action="store_true")
    a.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    a.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
    a.add_argument("--quiet", action="store_true", help="print nothing, only set the exit code")

    v = sub.add_parser("verify-paper", help="reproduce every desk-scale number")
    v.add_argument("--only", action="append", metavar="ITEM", help="item key or tag (repeatable)")
    v.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    v.add_argument("--json", action="store_true")
    v.add_argument("--jobs", type=int, default=1)

    b = sub.add_parser("bounds", help="evaluate a bound without a curve")
    b.add_argument("kind", choices=("A", "B", "C", "D", "dpw", "lct", "genus"))
    for name in ("d", "k", "m", "r"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--type", dest="sing_type", help="singularity type for lct, e.g. cusp, A3, E6")
    b.add_argument("--census", help='census for D and genus, e.g. "node:66"')
    b.add_argument("--json", action="store_true")
    return parser


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"bounds {args.kind} needs --{name}")


def cmd_analyze(args) -> int:
    out = sys.stdout
    if (args.polynomial is None) == (args.family is None):
        raise UsageError("analyze needs exactly one of a polynomial or --family")
    census = sing.Census.parse(args.census) if args.census else None
    echo = {"polynomial": args.polynomial} if args.polynomial else {}
    try:
        if args.family:
            params = {k: getattr(args, k) for k in ("m", "k", "n", "d", "seed")}
            try:
                instance = fam.build(args.family, **params)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            form = instance.form
            echo["params"] = {**instance.params, **({"seed": args.seed} if args.seed is not None else {})}
        else:
            instance = None
            form = parse_form(args.polynomial)
        if form.degree > args.max_degree:
            raise UsageError(f"degree {form.degree} exceeds --max-degree {args.max_degree}")
        report = analyze(form=form, instance=instance, census=census,
                         irreducible=True if args.irreducible else None, input_echo=echo,
                         field=args.field, timing=not args.no_timing)
    except NonReducedError as exc:
        if not args.quiet:
            print(f"error: {exc} (input: {args.polynomial or args.family})", file=sys.stderr)
        return EXIT_CURVE
    except (FormError, CurveError) as exc:
        if not args.quiet:
            print(f"error: {exc} (input: {args.polynomial or args.family})", file=sys.stderr)
        return EXIT_CURVE if isinstance(exc, CurveError) else EXIT_USAGE
    if not args.quiet:
        print(report.to_json() if args.json else report.to_text(), file=out)
    return EXIT_OK


def cmd_verify(args) -> int:
    keys = {it.key.lower() for it in verification.ITEMS} | {
        t.lower() for it in verification.ITEMS for t in it.tags}
    for sel in args.only or []:
        if sel.lower() not in keys:
            raise UsageError(f"unknown item {sel!r}")
    results = verification.run(args.only, args.max_degree, args.jobs)
    if args.json:
        print(dumps({"items": [encode({
            "item": r.item, "title": r.title, "status": r.status, "expected": r.expected,
            "measured": r.measured, "failures": r.failures}) for r in results]}))
    else:
        width = max(len(r.item) for r in results) if results else 4
        for i, r in enumerate(results, 1):
            print(f"{i:>2}. {r.item:<{width}}  {r.status:<7}  {r.title}  ({r.seconds:.1f}s)")
            if r.status != verification.SKIPPED:
                print(f"      expected: {r.expected}")
                print(f"      measured: {r.measured}")
            else:
                print(f"      {r.measured}")
            for f in r.failures[:10]:
                print(f"      ! {f}")
        passed = sum(r.status == verification.PASS for r in results)
        skipped = sum(r.status == verification.SKIPPED for r in results)
        print(f"{passed} passed, {len(results) - passed - skipped} failed, {skipped} skipped")
    return EXIT_ACCEPTANCE if any(r.status == verification.FAIL for r in results) else EXIT_OK


def cmd_bounds(args) -> int:
    kind = args.kind
    if kind == "A":
        _need(args, "d")
        v = sing.theorem_a(args.d)
        text = f"nu >= {_fmt(v.bound)} => nu >= {v.integer_bound}" if v.applicable else None
    elif kind == "B":
        _need(args, "k")
        v = sing.theorem_b(args.k)
        text = (f"nu >= {_fmt(v.bound)} => nu >= {v.integer_bound}; "
                f"nodes = {_fmt(v.details['nodes'])}, mdr >= {v.details['mdr_lower_bound']}") if v.applicable else None
    elif kind == "C":
        _need(args, "k")
        v = sing.theorem_c(args.k)
        text = f"nu = {_fmt(v.bound)}, genus = {v.details['genus']}" if v.applicable else None
    elif kind == "D":
        _need(args, "d", "census")
        v = sing.theorem_d(args.d, sing.Census.parse(args.census))
        text = (f"alpha = {_fmt(v.details['alpha'])} >= {_fmt(v.details['threshold'])}: "
                f"mdr >= {v.details['mdr_lower_bound']}, tau <= {v.details['tau_max']}, nu >= 1") if v.applicable else None
    elif kind == "dpw":
        _need(args, "d", "r")
        try:
            value = sing.dpw_tau_max(args.d, args.r)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return _emit_bounds(args, {"kind": "dpw", "d": args.d, "r": args.r, "tau_max": value}, str(value))
    elif kind == "lct":
        if not args.sing_type:
            raise UsageError("bounds lct needs --type")
        s = sing.parse_singularity(args.sing_type)
        value = sing.lct(s)
        return _emit_bounds(args, {"kind": "lct", "type": str(s), "lct": value}, _fmt(value))
    else:
        _need(args, "d", "census")
        try:
            g = sing.genus(args.d, sing.Census.parse(args.census))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return _emit_bounds(args, {"kind": "genus", "d": args.d, "genus": g}, str(g))
    data = {"kind": kind, **verdict_dict(v)}
    return _emit_bounds(args, data, text if v.applicable else f"theorem {kind} not applicable: {v.reason}")


def _emit_bounds(args, data: dict, text: str) -> int:
    print(dumps(encode(data)) if args.json else text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        handler = {"analyze": cmd_analyze, "verify-paper": cmd_verify, "bounds": cmd_bounds}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
