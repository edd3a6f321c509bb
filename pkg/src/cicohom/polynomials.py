"""Commutative polynomials in x1..xe as ``{exponent tuple: coefficient}``.

Only what the quotient rings need: parsing of relation strings, the
degree-reverse-lexicographic order, and division by a Gröbner basis.
"""
from __future__ import annotations

import re
from itertools import combinations_with_replacement

from .exactlin import FieldSpec, axpy


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial text; ``column`` is 1-based within the string."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[-+*^]))")


def _tokens(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            return
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise PolynomialSyntaxError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind) + 1
        pos = m.end()


def parse_polynomial(text: str, nvars: int, field: FieldSpec) -> dict:
    """Parse ``"x1^2 - 3*x2 x3 + 2"``; products may omit ``*``."""
    toks = list(_tokens(text))
    if not toks:
        raise PolynomialSyntaxError("empty polynomial", 1)
    poly: dict = {}
    i = 0

    def expect_int(pos_desc):
        nonlocal i
        if i >= len(toks) or toks[i][0] != "num":
            col = toks[i][2] if i < len(toks) else len(text) + 1
            raise PolynomialSyntaxError(f"expected integer {pos_desc}", col)
        v = int(toks[i][1])
        i += 1
        return v

    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif poly or i > 0:
            raise PolynomialSyntaxError("expected '+' or '-'", toks[i][2])
        coef = 1
        exps = [0] * nvars
        got = False
        if i < len(toks) and toks[i][0] == "num":
            coef = int(toks[i][1])
            i += 1
            got = True
        while i < len(toks):
            kind, val, col = toks[i]
            if kind == "op" and val == "*":
                i += 1
                if i >= len(toks) or toks[i][0] not in ("var", "num"):
                    raise PolynomialSyntaxError("expected factor after '*'", col + 1)
                continue
            if kind == "num":
                coef *= int(val)
                i += 1
                got = True
                continue
            if kind != "var":
                break
            idx = int(val[1:])
            if not 1 <= idx <= nvars:
                raise PolynomialSyntaxError(f"variable {val} outside x1..x{nvars}", col)
            i += 1
            power = 1
            if i < len(toks) and toks[i][1] == "^":
                i += 1
                power = expect_int("after '^'")
            exps[idx - 1] += power
            got = True
        if not got:
            col = toks[i][2] if i < len(toks) else len(text) + 1
            raise PolynomialSyntaxError("expected a term", col)
        axpy(field, poly, field(sign * coef), {tuple(exps): field.one})
    return poly


def degree(m: tuple) -> int:
    return sum(m)


def degrevlex_key(m: tuple):
    """Sort key: larger key means larger monomial in degrevlex (x1 > x2 > ...)."""
    return (sum(m), tuple(-a for a in reversed(m)))


def leading_monomial(poly: dict) -> tuple:
    return max(poly, key=degrevlex_key)


def is_homogeneous(poly: dict) -> bool:
    return len({sum(m) for m in poly}) <= 1


def monomials_of_degree(nvars: int, d: int) -> list[tuple]:
    """All exponent vectors of total degree ``d``, in decreasing degrevlex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=degrevlex_key, reverse=True)
    return out


def divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def poly_mul(field: FieldSpec, f: dict, g: dict) -> dict:
    out: dict = {}
    for m, a in f.items():
        axpy(field, out, a, {mono_mul(m, n): b for n, b in g.items()})
    return out


def reduce_by(field: FieldSpec, f: dict, basis: list[tuple[tuple, dict]]) -> dict:
    """Remainder of ``f`` on division by monic polynomials ``(lm, poly)``."""
    f = dict(f)
    rem: dict = {}
    while f:
        m = leading_monomial(f)
        c = f[m]
        for lm, g in basis:
            if divides(lm, m):
                q = mono_div(m, lm)
                axpy(field, f, field.neg(c), {mono_mul(q, n): b for n, b in g.items()})
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def format_polynomial(field: FieldSpec, f: dict) -> str:
    if not f:
        return "0"
    parts = []
    for m in sorted(f, key=degrevlex_key, reverse=True):
        c = field.signed(f[m])
        mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
        neg = c < 0
        a = -c if neg else c
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{a}*{mono}"
        else:
            body = str(a)
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]
