"""Command-line front end: beta tables, Volkenborn profiles, the A(m,n)
grid and the full verification suite.

Exit codes: 0 success, 1 asserted identity failed, 2 invalid
configuration, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import mpmath

from .arith import PadicContext, PadicNumber, padic_log_of_rational, valuation
from .bernoulli import BetaTable
from .convolution import InsufficientPrecision, amn_value
from .qcalc import QParam, monomial_characters
from .reporting import render_value
from .verify import ALL_SUITES, ConfigError, RunConfig, run_verify
from .volkenborn import CostCapExceeded, convergence_profile

_FUNC_RE = re.compile(r"^(?:bracket\^(\d+)|character\((\d+)\))$")


def _parse_q(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad q {text!r}: {exc}") from exc
    return q


def _common_padic(args) -> tuple[int, Fraction, PadicContext]:
    p = args.p
    q = _parse_q(args.q)
    try:
        ctx = PadicContext(p, args.precision)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return p, q, ctx


def cmd_beta(args) -> int:
    q = _parse_q(args.q) if args.q is not None else None
    kind = args.kind.replace("-", "_")
    try:
        table = BetaTable(kind, q)
        values = table.values(args.max_n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lnum = None
    lreal = None
    if q is not None and args.p is not None:
        ctx = PadicContext(args.p, args.precision)
        try:
            QParam(q, "padic", ctx)
            lnum = padic_log_of_rational(q, ctx)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif q is not None and 0 < q < 1:
        with mpmath.workdps(50):
            lreal = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
    rows = []
    for n, v in enumerate(values):
        row = {"n": n, "kind": kind, "value": render_value(v)}
        if hasattr(v, "evaluate_padic") and lnum is not None:
            row["evaluated"] = v.evaluate_padic(lnum).render()
        elif hasattr(v, "evaluate_real") and lreal is not None:
            row["evaluated"] = render_value(v.evaluate_real(lreal))
        elif isinstance(v, Fraction) and lnum is not None:
            row["evaluated"] = PadicNumber.from_rational(v, lnum.ctx).render()
        rows.append(row)
    _emit_rows(rows, args)
    return 0


def cmd_volkenborn(args) -> int:
    p, q, ctx = _common_padic(args)
    try:
        qp = QParam(q, "padic", ctx)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    match = _FUNC_RE.match(args.function)
    if not match:
        raise ConfigError(
            f"bad function spec {args.function!r}: use bracket^n or character(l)")
    if match.group(1) is not None:
        f = monomial_characters(int(match.group(1)), qp)
    else:
        f = monomial_characters(0, qp).shift_exponents(int(match.group(2)))
    prof = convergence_profile(f, p, range(1, args.level + 1), ctx=ctx)
    rows = []
    for i, lev in enumerate(prof.levels):
        rows.append({
            "f": args.function,
            "p": p,
            "N": lev,
            "value": render_value(prof.sums[i]),
            "delta_valuation": (None if i >= len(prof.deltas)
                                else render_value_or_inf(prof.deltas[i])),
        })
    rows.append({
        "f": args.function,
        "p": p,
        "stabilized": prof.stabilized_value.render(),
        "stabilized_digits": render_value_or_inf(prof.stabilized_digits),
        "monotone_violations": prof.monotone_violations,
    })
    _emit_rows(rows, args)
    return 0


def render_value_or_inf(v) -> str:
    import math
    return "inf" if v == math.inf else str(v)


def cmd_amn(args) -> int:
    p, q, ctx = _common_padic(args)
    try:
        qp = QParam(q, "padic", ctx)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = []
    for m in range(args.max_m + 1):
        for n in range(1, args.max_n + 1):
            av = amn_value(m, n, qp, args.level)
            rows.append({
                "m": m,
                "n": n,
                "direct": av.direct.render(),
                "resolved_direct": av.resolved_direct.render(),
                "closed": str(av.closed),
                "closed_evaluated": av.closed_evaluated.render(),
                "agreement": render_value_or_inf(av.agreement),
                "stabilized_digits": render_value_or_inf(av.stabilized_digits),
                "valuation_bound_ok": av.valuation_ok,
            })
    _emit_rows(rows, args)
    return 0


def cmd_verify(args) -> int:
    suites = tuple(args.suite.split(",")) if args.suite else ALL_SUITES
    cfg = RunConfig(
        p=args.p,
        q=_parse_q(args.q),
        precision=args.precision,
        level=args.level,
        max_m=args.max_m,
        max_n=args.max_n,
        terms=args.terms,
        tolerance=Fraction(args.tol) if args.tol else Fraction(1, 10**12),
        real_q=_parse_q(args.real_q),
        suites=suites,
        output_format=args.format,
        out=args.out,
    )
    result = run_verify(cfg)
    payload = result.to_json() if cfg.output_format == "json" else result.to_csv()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload)
    sys.stdout.write(payload)
    counts = result.counts
    sys.stderr.write(
        f"verify: {counts['pass']} pass, {counts['fail']} fail, "
        f"{counts['informative']} informative\n")
    return 0 if result.ok() else 1


def _emit_rows(rows: list[dict], args) -> None:
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        payload = json.dumps(rows, indent=2) + "\n"
    elif fmt == "csv":
        import csv as _csv
        import io
        keys = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = _csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        payload = buf.getvalue()
    else:
        lines = []
        for r in rows:
            lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
        payload = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(payload)
    sys.stdout.write(payload)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qbernoulli",
        description="q-Bernoulli numbers, Volkenborn integrals and the "
                    "convolution identity suite")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, with_grid=False):
        sp.add_argument("--p", type=int, default=5)
        sp.add_argument("--q", type=str, default="6")
        sp.add_argument("--precision", type=int, default=8)
        sp.add_argument("--level", type=int, default=4)
        if with_grid:
            sp.add_argument("--max-m", type=int, default=3)
            sp.add_argument("--max-n", type=int, default=3)
        sp.add_argument("--format", choices=("text", "json", "csv"),
                        default="text")
        sp.add_argument("--out", type=str, default=None)

    b = sub.add_parser("beta", help="Bernoulli-family tables")
    b.add_argument("--kind", required=True,
                   choices=("classical", "carlitz", "modified",
                            "modified-inverse-q"))
    b.add_argument("--max-n", type=int, default=8)
    b.add_argument("--q", type=str, default=None)
    b.add_argument("--p", type=int, default=None)
    b.add_argument("--precision", type=int, default=8)
    b.add_argument("--format", choices=("text", "json", "csv"), default="text")
    b.add_argument("--out", type=str, default=None)
    b.set_defaults(func=cmd_beta)

    v = sub.add_parser("volkenborn", help="integral convergence profiles")
    v.add_argument("--function", required=True,
                   help="bracket^n or character(l)")
    add_common(v)
    v.set_defaults(func=cmd_volkenborn)

    a = sub.add_parser("amn", help="convolution integral grid")
    add_common(a, with_grid=True)
    a.set_defaults(func=cmd_amn)

    w = sub.add_parser("verify", help="run the identity suite")
    w.add_argument("--p", type=int, default=5)
    w.add_argument("--q", type=str, default="6")
    w.add_argument("--precision", type=int, default=8)
    w.add_argument("--level", type=int, default=4)
    w.add_argument("--max-m", type=int, default=3)
    w.add_argument("--max-n", type=int, default=3)
    w.add_argument("--terms", type=int, default=200)
    w.add_argument("--tol", type=str, default=None)
    w.add_argument("--real-q", dest="real_q", type=str, default="1/2")
    w.add_argument("--suite", type=str, default=None,
                   help="comma-separated subset of "
                        + ",".join(ALL_SUITES))
    w.add_argument("--format", choices=("json", "csv"), default="json")
    w.add_argument("--out", type=str, default=None)
    w.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (CostCapExceeded, InsufficientPrecision) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
