"""Batch command-line surface with machine-readable JSON reports.

Exit codes: 0 success, 1 failed verification check, 2 parse error,
3 invariant violation, 4 no decomposition, 5 insufficient series order.
The environment variable QMFORMS_SERIES_ORDER overrides the default
numeric series order (400).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from .errors import InsufficientOrder, NoSolution
from .forms import G1, G2, G3, FormSpaceKey, QMForm, decompose
from .qseries import QSeries
from .verify import run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_NO_SOLUTION = 4
EXIT_INSUFFICIENT_ORDER = 5

_GENERATORS = {"g1": G1, "g2": G2, "g3": G3}

_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|g1|g2|g3|\^|\*|\+|-|\(|\))")


class FormSpecError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormSpecError("cannot tokenize %r at position %d" % (text, pos))
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    """Recursive-descent parser for the term language: rational literals,
    g1/g2/g3, ^ for powers, * for products, +/- for sums, parentheses."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> QMForm:
        form = self.expr()
        if self.peek() is not None:
            raise FormSpecError("unexpected token %r" % self.peek())
        return form

    def expr(self) -> QMForm:
        total = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            total = total + rhs if op == "+" else total - rhs
        return total

    def term(self) -> QMForm:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        total = self.factor()
        while self.peek() == "*":
            self.take()
            total = total * self.factor()
        return sign * total

    def factor(self) -> QMForm:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise FormSpecError("expected integer exponent after ^")
            return base ** int(tok)
        return base

    def atom(self) -> QMForm:
        tok = self.take()
        if tok is None:
            raise FormSpecError("unexpected end of input")
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise FormSpecError("missing closing parenthesis")
            return inner
        if tok in _GENERATORS:
            return _GENERATORS[tok]
        if re.fullmatch(r"\d+/\d+|\d+", tok):
            return Fraction(tok) * QMForm(0, {(0, 0, 0): 1})
        raise FormSpecError("unexpected token %r" % tok)


def parse_form_spec(text: str) -> QMForm:
    """Parse expressions like '3/4*g1^2*g2 - g3' into a form."""
    return _Parser(_tokenize(text)).parse()


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, default=str))


def _report(command: str, inputs: dict, outputs, checks, started: float, seed=None) -> dict:
    rep = {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "checks": checks,
        "elapsed_ms": round(1000 * (time.perf_counter() - started), 3),
    }
    if seed is not None:
        rep["seed"] = seed
    return rep


def cmd_expand(args) -> int:
    started = time.perf_counter()
    inputs = {"weight": args.weight, "terms": args.terms, "order": args.order}
    if args.weight % 2 or args.weight < 0:
        _emit(_report("expand", inputs, {"error": "weight must be even and nonnegative"}, [], started))
        return EXIT_INVARIANT
    try:
        form = parse_form_spec(args.terms)
    except FormSpecError as exc:
        _emit(_report("expand", inputs, {"error": str(exc)}, [], started))
        return EXIT_PARSE
    except ValueError as exc:  # inhomogeneous combination
        _emit(_report("expand", inputs, {"error": str(exc)}, [], started))
        return EXIT_INVARIANT
    if not form.is_zero() and form.weight != args.weight:
        _emit(
            _report(
                "expand",
                inputs,
                {"error": "form has weight %d, not %d" % (form.weight, args.weight)},
                [],
                started,
            )
        )
        return EXIT_INVARIANT
    series = form.expand(args.order)
    outputs = {"series": json.loads(series.to_json())}
    _emit(_report("expand", inputs, outputs, [], started))
    return EXIT_OK


def cmd_decompose(args) -> int:
    started = time.perf_counter()
    inputs = {"weight": args.weight, "depth": args.depth, "series": args.series}
    try:
        with open(args.series, "r", encoding="utf-8") as fh:
            series = QSeries.from_json(fh.read())
        key = FormSpaceKey(args.weight, args.depth).validate()
    except (OSError, ValueError) as exc:
        _emit(_report("decompose", inputs, {"error": str(exc)}, [], started))
        return EXIT_PARSE if not isinstance(exc, OSError) else EXIT_PARSE
    try:
        form = decompose(key, series)
    except NoSolution as exc:
        _emit(_report("decompose", inputs, {"error": str(exc), "kind": "NoSolution"}, [], started))
        return EXIT_NO_SOLUTION
    except InsufficientOrder as exc:
        _emit(
            _report(
                "decompose", inputs, {"error": str(exc), "kind": "InsufficientOrder"}, [], started
            )
        )
        return EXIT_INSUFFICIENT_ORDER
    _emit(_report("decompose", inputs, {"form": json.loads(form.to_json())}, [], started))
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    inputs = {"suite": args.suite, "samples": args.samples, "tol": args.tol, "seed": args.seed}
    result = run_suite(
        args.suite, samples=args.samples, tol=args.tol, seed=args.seed, pairs=args.pairs
    )
    checks = [{"name": c.name, "pass": c.passed, "residual": c.residual} for c in result.checks]
    rep = _report("verify", inputs, result.outputs, checks, started, seed=args.seed)
    _emit(rep)
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmforms",
        description="Exact quasimodular-form arithmetic and period-map verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="q-expansion of a polynomial in g1, g2, g3")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--terms", type=str, required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("decompose", help="write a q-series as a polynomial in g1, g2, g3")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--series", type=str, required=True, help="path to a JSON array of 'num/den'")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "suite",
        choices=["ramanujan", "flatness", "detB", "hecke", "action", "periods", "theorem2", "all"],
    )
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
