"""Command-line front end.

    sumcert verify eq9 --digits 50 --width 1e-8 --format json
    sumcert bound eq9-hybrid --m 7
    sumcert bound eq6-majorant
    sumcert zeta --s 3 --q 3/2
    sumcert control

Exit codes: 0 success, 1 bad arguments or domain error, 2 precision failure,
3 control check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

from sumcert.numeric_core import DomainError, Enclosure, PrecisionContext, PrecisionError
from sumcert.sum_rules import (
    RULES,
    evaluate_sum_rule,
    hybrid_bound_eq9,
    majorant_binomial_route_eq6,
    majorant_closed_form_eq6,
    oscillator_model,
    verify_general_sum_rule,
)
from sumcert.zeta import hurwitz_zeta

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_CHECK_FAILED = 0, 1, 2, 3

DEFAULT_DIGITS = 50
DEFAULT_WIDTH = "1e-8"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class ReportRecord:
    rule_id: str
    discrete_sum: dict
    bound_name: str
    bound_value: dict | None
    claimed_exact: str
    strict_less: bool
    deficit: dict
    cutoff_M: int
    digits: int
    wall_time_ms: int


def _interval(enc: Enclosure, digits: int) -> dict:
    lo, hi = enc.format(digits)
    return {"lo": lo, "hi": hi}


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _flatten(record: dict) -> dict:
    flat = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                flat[f"{key}_{sub}"] = v
        elif value is None:
            flat[key] = ""
        else:
            flat[key] = value
    return flat


def _render(record: dict, fmt: str, text_lines: Sequence[str]) -> str:
    if fmt == "json":
        return json.dumps(record)
    if fmt == "csv":
        flat = _flatten(record)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
        return buf.getvalue().rstrip("\n")
    return "\n".join(text_lines)


def _table(record: dict) -> list[str]:
    flat = _flatten(record)
    width = max(len(k) for k in flat)
    return [f"{k:<{width}}  {v}" for k, v in flat.items()]


def _context(digits: int) -> PrecisionContext:
    try:
        return PrecisionContext(digits)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> tuple[dict, list[str], int]:
    if args.rule not in RULES:
        raise UsageError(f"unknown rule {args.rule!r}; choose from {', '.join(RULES)}")
    ctx = _context(args.digits)
    stmt = RULES[args.rule]
    start = time.perf_counter()
    verdict = evaluate_sum_rule(stmt, args.width, ctx)
    elapsed = round((time.perf_counter() - start) * 1000)
    d = args.digits
    record = ReportRecord(
        rule_id=args.rule,
        discrete_sum=_interval(verdict.discrete_sum, d),
        bound_name=stmt.bound_name,
        bound_value=_interval(verdict.paper_upper_bound, d) if verdict.paper_upper_bound else None,
        claimed_exact=_fraction_str(verdict.claimed_exact),
        strict_less=verdict.strict_less,
        deficit=_interval(verdict.deficit, d),
        cutoff_M=verdict.cutoff,
        digits=d,
        wall_time_ms=elapsed,
    )
    lines = _table(asdict(record))
    bound = verdict.paper_upper_bound
    claimed = _fraction_str(verdict.claimed_exact)
    if bound is not None and verdict.discrete_sum.certainly_lt(bound) and bound.certainly_lt(verdict.claimed_exact):
        chain = (
            f"certified: discrete sum <= {record.discrete_sum['hi']} < {stmt.bound_name} "
            f"<= {record.bound_value['hi']} < {claimed}"
        )
    elif verdict.strict_less:
        chain = f"certified: discrete sum <= {record.discrete_sum['hi']} < {claimed}"
    else:
        chain = f"NOT certified: discrete sum upper endpoint {record.discrete_sum['hi']} >= {claimed}"
    lines.append(chain)
    return asdict(record), lines, EXIT_OK


def cmd_bound(args) -> tuple[dict, list[str], int]:
    ctx = _context(args.digits)
    start = time.perf_counter()
    if args.kind == "eq9-hybrid":
        if args.m is None:
            raise UsageError("bound eq9-hybrid requires --m")
        try:
            enc = hybrid_bound_eq9(args.m, ctx)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        record: dict[str, Any] = {"kind": args.kind, "m": args.m}
        extra = {}
    else:
        enc = majorant_closed_form_eq6(ctx)
        route = majorant_binomial_route_eq6(ctx)
        record = {"kind": args.kind, "m": None}
        extra = {"binomial_route": _interval(route, args.digits), "routes_agree": enc.overlaps(route)}
    elapsed = round((time.perf_counter() - start) * 1000)
    record.update(
        enclosure=_interval(enc, args.digits),
        width=f"{float(enc.width):.3e}",
        **extra,
        digits=args.digits,
        wall_time_ms=elapsed,
    )
    return record, _table(record), EXIT_OK


def cmd_zeta(args) -> tuple[dict, list[str], int]:
    ctx = _context(args.digits)
    try:
        q = Fraction(args.q)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"q must be a rational number, got {args.q!r}") from None
    start = time.perf_counter()
    try:
        enc = hurwitz_zeta(args.s, q, ctx)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    elapsed = round((time.perf_counter() - start) * 1000)
    record = {
        "s": args.s,
        "q": _fraction_str(q),
        "enclosure": _interval(enc, args.digits),
        "digits": args.digits,
        "wall_time_ms": elapsed,
    }
    return record, _table(record), EXIT_OK


def cmd_control(args) -> tuple[dict, list[str], int]:
    ctx = _context(args.digits)
    start = time.perf_counter()
    try:
        lhs, rhs = verify_general_sum_rule(oscillator_model(args.power, ctx), ctx)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    elapsed = round((time.perf_counter() - start) * 1000)
    ok = lhs.overlaps(rhs)
    record = {
        "power": args.power,
        "lhs": _interval(lhs, args.digits),
        "rhs": _interval(rhs, args.digits),
        "status": "PASS" if ok else "FAIL",
        "digits": args.digits,
        "wall_time_ms": elapsed,
    }
    return record, _table(record), EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sumcert", description="Certified bounds for hydrogen sum rules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="working precision (>= 30)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("verify", help="certify that a discrete sum lies below its claimed value")
    p.add_argument("rule", help="eq6 or eq9")
    p.add_argument("--width", default=DEFAULT_WIDTH, help="target enclosure width")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="evaluate a closed-form upper bound")
    p.add_argument("kind", choices=("eq6-majorant", "eq9-hybrid"))
    p.add_argument("--m", type=int, default=None, help="last exact index for eq9-hybrid")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("zeta", help="enclose the Hurwitz zeta function")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q", default="1", help="rational shift, e.g. 3/2")
    common(p)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("control", help="oscillator completeness check of the general sum rule")
    p.add_argument("--power", type=int, default=1, help="perturbation x**power")
    common(p)
    p.set_defaults(func=cmd_control)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            try:
                Fraction(args.width)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"width must be a decimal number, got {args.width!r}") from None
            if Fraction(args.width) <= 0:
                raise UsageError("width must be positive")
        record, lines, code = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"sumcert: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    print(_render(record, args.format, lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
