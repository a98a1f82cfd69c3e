"""Parser for expressions such as ``2/5*zeta(3)*zeta(2)^2 - I(0;1000100;1)``.

Grammar (whitespace-insensitive)::

    expr   := ['-'|'+'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*      division only by constants
    factor := atom ['^' INT]
    atom   := INT | 'zeta(' INT (',' INT)* ')' | 'I(' BIT ';' BITS ';' BIT ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coaction import poly_mul
from .decomposer import Poly
from .errors import NotConvergent, ParseError
from .words import check_index, make_symbol, normalize

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta|I)\s*\(([^)]*)\)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, fn, args, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif fn is not None:
            out.append((fn, args))
        elif op.strip():
            if op.isalpha():
                raise ParseError(f"unknown name or unbalanced call at {pos}: {text[pos:]!r}")
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}")
            out.append(("op", op))
        pos = m.end()
    return out


def _zeta_atom(args: str) -> dict:
    try:
        parts = [int(x) for x in args.replace(" ", "").split(",")]
        index = check_index(parts)
    except (ValueError, NotConvergent) as exc:
        raise ParseError(f"bad zeta arguments {args!r}: {exc}") from None
    return {(index,): Fraction(1)}


def _integral_atom(args: str) -> dict:
    fields = args.replace(" ", "").split(";")
    if len(fields) != 3 or not all(re.fullmatch(r"[01]*", f) for f in fields):
        raise ParseError(f"bad integral symbol I({args})")
    a0, word, a1 = fields
    if len(a0) != 1 or len(a1) != 1:
        raise ParseError(f"integral endpoints must be single bits: I({args})")
    sym = make_symbol(int(a0), [int(b) for b in word], int(a1))
    return {((k,) if k else ()): c for k, c in normalize(sym).raw_items()}


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok}")

    def expr(self) -> dict:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = _scale(self.term(), sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
            acc = _add(acc, _scale(self.term(), sign))
        return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                acc = poly_mul(acc, rhs)
            else:
                if set(rhs) - {()} or not rhs:
                    raise ParseError("can only divide by a nonzero rational constant")
                acc = _scale(acc, 1 / rhs[()])
        return acc

    def factor(self) -> dict:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, n = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            out = {(): Fraction(1)}
            for _ in range(n):
                out = poly_mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        kind, value = self.take()
        if kind == "num":
            return {(): Fraction(value)}
        if kind == "zeta":
            return _zeta_atom(value)
        if kind == "I":
            return _integral_atom(value)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {value!r}")


def _scale(p: dict, c) -> dict:
    return {k: v * c for k, v in p.items() if v * c}


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def parse_expression(text: str) -> Poly:
    """Parse an expression into a polynomial in zeta generators."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens)
    result = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input: {parser.tokens[parser.i:]}")
    return Poly(result)


def parse_index(text: str) -> tuple:
    """A single ``zeta(...)`` or a bare comma list like ``4,3,3``."""
    text = text.strip()
    m = re.fullmatch(r"zeta\s*\(([^)]*)\)", text)
    body = m.group(1) if m else text
    return next(iter(_zeta_atom(body)))[0]
