"""Command-line interface: ``mzv <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import falgebra as F
from .bases import Basis, load_basis
from .coaction import infinitesimal, project
from .decomposer import Poly, build
from .errors import (
    AmbiguousReconstruction,
    CapExceeded,
    DimensionMismatch,
    InvalidBasis,
    MZVError,
    NotABasis,
    NotConvergent,
    ParseError,
)
from .lincomb import format_fraction
from .numeric import PrecisionPolicy, eval_generator_combination
from .parsing import parse_expression
from .words import ISymbol, format_index, make_symbol, zeta_symbol

HARD_WEIGHT_CAP = 16

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BASIS = 2
EXIT_RECONSTRUCTION = 3
EXIT_PARSE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _env(name, default):
    return os.environ.get(f"MZV_{name}", default)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--basis", default=_env("BASIS", "default10"),
                   help="default10, hoffman or a JSON basis file")
    p.add_argument("--digits", type=int, default=int(_env("DIGITS", 64)))
    p.add_argument("--max-den", type=int, default=_env("MAX_DEN", None),
                   help="denominator bound for reconstruction (default 10^(digits/4))")
    p.add_argument("--weight-cap", type=int, default=_env("WEIGHT_CAP", None))
    p.add_argument("--json", action="store_true", default=_env("JSON", "") not in ("", "0"))
    p.add_argument("--oracle", action="store_true", default=_env("ORACLE", "") not in ("", "0"),
                   help="use the slow direct-summation evaluator")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mzv", description="Decompose multiple zeta values into a basis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in [
        ("decompose", "write an expression in the basis"),
        ("eval", "evaluate an expression numerically"),
        ("coaction", "print the D_r tables of a zeta value or symbol"),
        ("phi", "print the f-alphabet image"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("expression")
        _common(p)
    p = sub.add_parser("verify", help="decide whether two expressions are equal")
    p.add_argument("lhs")
    p.add_argument("rhs")
    _common(p)
    p = sub.add_parser("dims", help="print d_1..d_N")
    p.add_argument("--max", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("selftest", help="run the worked-example fixtures")
    _common(p)
    return parser


def _policy(args) -> PrecisionPolicy:
    max_den = int(args.max_den) if args.max_den not in (None, "") else None
    return PrecisionPolicy(
        digits=args.digits,
        max_den=max_den,
        max_digits=max(1024, args.digits),
        method="direct" if args.oracle else "holder",
    )


def _cap(args, basis: Basis) -> int:
    cap = int(args.weight_cap) if args.weight_cap not in (None, "") else basis.max_weight
    if cap > HARD_WEIGHT_CAP:
        raise CapExceeded(f"weight cap {cap} above the hard maximum {HARD_WEIGHT_CAP}")
    return cap


def _table(args):
    basis = load_basis(args.basis)
    return build(basis, _cap(args, basis), _policy(args)), basis


def _emit(args, text: str, doc) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _cmd_decompose(args) -> int:
    xi = parse_expression(args.expression)
    table, basis = _table(args)
    result = table.decompose(xi)
    doc = {"input": args.expression, **result.to_json(), "elements": basis.restricted(table.max_weight).to_json()}
    _emit(args, str(result), doc)
    return EXIT_OK


def _cmd_eval(args) -> int:
    xi = parse_expression(args.expression)
    policy = _policy(args)
    value = eval_generator_combination(xi, policy)
    with mpmath.mp.workdps(policy.digits + policy.guard):
        text = mpmath.nstr(value.value, policy.digits)
        err = mpmath.nstr(value.error, 3)
    _emit(args, text, {"input": args.expression, "value": text, "error_bound": err, "digits": policy.digits})
    return EXIT_OK


def _symbol_of(text: str) -> tuple[ISymbol, int]:
    """A symbol and the sign relating it to the expression."""
    t = text.replace(" ", "")
    if t.startswith("I(") and t.endswith(")"):
        a0, word, a1 = t[2:-1].split(";")
        return make_symbol(int(a0), [int(c) for c in word], int(a1)), 1
    poly = parse_expression(text)
    if len(poly) != 1:
        raise ParseError("coaction expects a single zeta(...) or I(...)")
    (mono, c), = poly.items()
    if len(mono) != 1 or c != 1:
        raise ParseError("coaction expects a single zeta(...) or I(...)")
    index = mono[0]
    return zeta_symbol(index), (-1) ** len(index)


def _cmd_coaction(args) -> int:
    sym, sign = _symbol_of(args.expression)
    n = sym.weight
    table = None
    try:
        table, _ = _table(args)
    except MZVError:
        table = None
    doc = {"input": args.expression, "weight": n, "parts": []}
    lines = []
    for r in range(3, n, 2):
        tensor = infinitesimal(r, sym)
        tensor = -tensor if sign < 0 else tensor
        entry = {
            "r": r,
            "D": [{"left": list(l), "right": list(rr), "coef": format_fraction(c)} for (l, rr), c in tensor.items()],
        }
        lines.append(f"D{r}: {tensor}")
        if table is not None and n - r >= 0 and r <= table.max_weight:
            src = getattr(table, "source", table)
            partial = project(tensor, lambda g, r=r: src.coefficient(r, g))
            entry["partial"] = [{"index": list(k), "coef": format_fraction(c)} for k, c in partial.items()]
            lines.append(f"  d{r}: {partial}")
        doc["parts"].append(entry)
    _emit(args, "\n".join(lines) if lines else "(no odd cuts)", doc)
    return EXIT_OK


def _cmd_phi(args) -> int:
    xi = parse_expression(args.expression)
    table, _ = _table(args)
    img = table.phi(xi)
    _emit(args, F.render(img), {"input": args.expression, "phi": F.to_json(img)})
    return EXIT_OK


def _cmd_verify(args) -> int:
    lhs = parse_expression(args.lhs)
    rhs = parse_expression(args.rhs)
    table, _ = _table(args)
    rep = table.verify_identity(lhs, rhs)
    doc = {
        "lhs": args.lhs,
        "rhs": args.rhs,
        "equal": rep.equal,
        "phi_difference": F.to_json(rep.phi_difference),
        "certificates": [c.to_json() for c in rep.certificates],
    }
    _emit(args, str(rep), doc)
    return EXIT_OK


def _cmd_dims(args) -> int:
    d = F.dims(args.max)[1:]
    _emit(args, " ".join(map(str, d)), {"dims": d})
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from .fixtures import run_fixtures

    results = run_fixtures(_policy(args))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}" + (f"  [{r.detail}]" if not r.passed else ""))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} fixtures passed")
    return EXIT_OK if not failed else EXIT_ERROR


COMMANDS = {
    "decompose": _cmd_decompose,
    "eval": _cmd_eval,
    "coaction": _cmd_coaction,
    "phi": _cmd_phi,
    "verify": _cmd_verify,
    "dims": _cmd_dims,
    "selftest": _cmd_selftest,
}


def run(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, NotConvergent) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotABasis, DimensionMismatch, InvalidBasis) as exc:
        print(f"basis error: {exc}", file=sys.stderr)
        return EXIT_BASIS
    except AmbiguousReconstruction as exc:
        print(f"reconstruction failed: {exc}", file=sys.stderr)
        return EXIT_RECONSTRUCTION
    except (MZVError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
