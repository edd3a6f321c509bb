"""Invariants read off dimension sequences.

Rational series reconstruction (numerator times a product of ``1 - t^e``
factors), complexity as a pole order at t = 1, Loewy lengths, the level
bracket, and a complete-intersection test through Koszul homology.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import ExteriorAlgebra, QuotientRing
from .dgmodules import DGModule, koszul, residue_field
from .exactlin import EchelonSpan
from .resolve import (DEFAULT_BUDGET, DEFAULT_CUTOFF, BettiSequence, ext_dims,
                      minimal_resolution)

DEFAULT_WINDOW = 6

__all__ = [
    "RationalSeries",
    "Complexity",
    "LevelBracket",
    "CIVerdict",
    "InvariantReport",
    "SeriesWindowError",
    "reconstruct_series",
    "complexity",
    "sequence_complexity",
    "pair_complexity",
    "cx",
    "injcx",
    "loewy_length",
    "level_bracket",
    "ci_check",
    "default_exponents",
    "invariant_report",
    "DEFAULT_WINDOW",
]


class SeriesWindowError(ValueError):
    pass


# -- integer polynomials as coefficient lists ----------------------------------

def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _denominator(exponents: Sequence[int]) -> list[int]:
    den = [1]
    for e in exponents:
        f = [0] * (e + 1)
        f[0], f[e] = 1, -1
        den = _poly_mul(den, f)
    return den


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _divide_one_minus_t(p: list[int]) -> list[int] | None:
    """Exact quotient of p by (1 - t), or None when t = 1 is not a root."""
    if sum(p) != 0:
        return None
    q = []
    acc = 0
    for c in p[:-1]:
        acc += c
        q.append(acc)
    return _trim(q)


def root_one_multiplicity(p: Sequence[int]) -> int:
    p = _trim(list(p))
    if not p:
        raise ValueError("zero polynomial")
    m = 0
    while True:
        q = _divide_one_minus_t(p)
        if q is None:
            return m
        p = q
        m += 1


def _format_poly(p: Sequence[int], offset: int = 0, var: str = "t") -> str:
    terms = []
    for i, c in enumerate(p):
        if not c:
            continue
        e = i + offset
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        a = abs(c)
        body = mono if (mono and a == 1) else (f"{a}*{mono}" if mono else str(a))
        terms.append(("- " if c < 0 else "+ ") + body)
    if not terms:
        return "0"
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass(frozen=True)
class RationalSeries:
    """``t^offset * numerator(t) / prod(1 - t^e)``.

    ``status`` is ``"exact"`` when the numerator stabilised inside the
    verification window, ``"unstabilized"`` otherwise.
    """

    numerator: tuple
    denominator_exponents: tuple
    status: str
    offset: int = 0
    cutoff: int = 0
    window: int = DEFAULT_WINDOW

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def expand(self, upto: int) -> list[int]:
        """Coefficients for degrees ``offset .. upto``."""
        n = upto - self.offset + 1
        if n <= 0:
            return []
        coeffs = list(self.numerator[:n]) + [0] * max(0, n - len(self.numerator))
        for e in self.denominator_exponents:
            for k in range(e, n):
                coeffs[k] += coeffs[k - e]
        return coeffs

    def pole_order(self) -> int | None:
        if not self.exact:
            return None
        if not any(self.numerator):
            return 0
        return len(self.denominator_exponents) - root_one_multiplicity(self.numerator)

    def numerator_text(self) -> str:
        return _format_poly(self.numerator, self.offset)

    def denominator_text(self) -> str:
        if not self.denominator_exponents:
            return "1"
        parts = {}
        for e in self.denominator_exponents:
            parts[e] = parts.get(e, 0) + 1
        out = []
        for e, k in sorted(parts.items()):
            f = "(1 - t)" if e == 1 else f"(1 - t^{e})"
            out.append(f if k == 1 else f"{f}^{k}")
        return "*".join(out)

    def __str__(self):
        return f"({self.numerator_text()}) / ({self.denominator_text()})"


def reconstruct_series(b: BettiSequence, exponents: Sequence[int], window: int = DEFAULT_WINDOW) -> RationalSeries:
    """Multiply the truncated series by ``prod(1 - t^e)`` and test that the tail vanishes."""
    exponents = tuple(sorted(int(e) for e in exponents))
    if window < 1:
        raise SeriesWindowError("window must be at least 1")
    if any(e < 1 for e in exponents):
        raise SeriesWindowError("denominator exponents must be positive")
    need = (max(exponents) if exponents else 0) + window
    span = b.cutoff - b.start
    if span < need:
        raise SeriesWindowError(
            f"cutoff {b.cutoff} too small: window {window} with exponents {list(exponents)} "
            f"needs at least {need + b.start}")
    num = _poly_mul(list(b.values), _denominator(exponents))[: len(b.values)]
    tail = num[len(num) - window:]
    status = "exact" if not any(tail) else "unstabilized"
    if status == "exact":
        num = _trim(num)
    return RationalSeries(tuple(num), exponents, status, b.start, b.cutoff, window)


# -- complexity ------------------------------------------------------------------

@dataclass(frozen=True)
class Complexity:
    """Exact pole order, or ``None`` with an advisory growth estimate."""

    value: int | None
    series: RationalSeries | None = None
    advisory: float | None = None

    @property
    def exact(self) -> bool:
        return self.value is not None

    def __str__(self):
        if self.value is not None:
            return str(self.value)
        if self.advisory is None:
            return "unknown"
        return f"unknown (advisory estimate {self.advisory:.2f}, not exact)"


def growth_estimate(b: BettiSequence) -> float | None:
    """Least-squares fit of ``log b_n ~ (cx - 1) log n`` on the upper half of the support.

    Floating point and heuristic; only ever reported as advisory.
    """
    pts = [(n, v) for n, v in b.as_dict().items() if v > 0 and n > 0]
    if not pts:
        return 0.0
    last = max(n for n, _ in pts)
    if last < b.cutoff - max(2, (b.cutoff - b.start) // 4):
        # support ended well before the cutoff: bounded sequence
        return 0.0
    tail = [(n, v) for n, v in pts if n >= last / 2]
    if len(tail) < 2:
        return 1.0
    x = np.log([n for n, _ in tail])
    y = np.log([v for _, v in tail])
    slope = float(np.polyfit(x, y, 1)[0])
    return slope + 1.0


def sequence_complexity(b: BettiSequence, exponents: Sequence[int], window: int = DEFAULT_WINDOW) -> Complexity:
    s = reconstruct_series(b, exponents, window)
    if s.exact:
        return Complexity(s.pole_order(), s, growth_estimate(b))
    return Complexity(None, s, growth_estimate(b))


def default_exponents(A) -> tuple:
    """``d_i + 1`` over an exterior algebra, ``2`` (codim copies) over a quotient ring."""
    if isinstance(A, ExteriorAlgebra):
        return tuple(A.dual_weights())
    return (2,) * A.codim


def complexity(u: DGModule, cutoff: int = DEFAULT_CUTOFF, exponents=None, window: int = DEFAULT_WINDOW,
               budget: int = DEFAULT_BUDGET) -> Complexity:
    """cx of a module: pole order of its Betti series."""
    exps = default_exponents(u.over) if exponents is None else exponents
    b = minimal_resolution(u, cutoff, budget).betti(cutoff)
    return sequence_complexity(b, exps, window)


cx = complexity


def pair_complexity(u: DGModule, v: DGModule, cutoff: int = DEFAULT_CUTOFF, exponents=None,
                    window: int = DEFAULT_WINDOW, budget: int = DEFAULT_BUDGET) -> Complexity:
    """cx of the sequence ``dim Ext^n(u, v)``."""
    exps = default_exponents(u.over) if exponents is None else exponents
    return sequence_complexity(ext_dims(u, v, cutoff, budget=budget), exps, window)


def injcx(u: DGModule, cutoff: int = DEFAULT_CUTOFF, exponents=None, window: int = DEFAULT_WINDOW,
          budget: int = DEFAULT_BUDGET) -> Complexity:
    """Injective complexity: cx of ``dim Ext^n(k, u)``."""
    return pair_complexity(residue_field(u.over), u, cutoff, exponents, window, budget)


# -- Loewy length and levels ----------------------------------------------------------

def loewy_length(h) -> int:
    """Least l with ``m^l h = 0``.

    ``h`` is a module over a quotient ring (iterated multiplication by the
    variables) or a plain dimension, i.e. a vector space over k.
    """
    if isinstance(h, int):
        return 1 if h else 0
    if h.dim == 0:
        return 0
    F = h.field
    current = [{i: F.one} for i in range(h.dim)]
    length = 0
    while current:
        length += 1
        span = EchelonSpan(F)
        nxt = []
        for cols in h.action_cols:
            for v in current:
                w: dict = {}
                for k, c in v.items():
                    for j, a in cols[k].items():
                        w[j] = F.add(w.get(j, F.zero), F.mul(c, a))
                w = {j: a for j, a in w.items() if a}
                if w and span.add(w):
                    nxt.append(w)
        current = nxt
    return length


@dataclass(frozen=True)
class LevelBracket:
    lower: int | None
    upper: int
    warning: str = ""

    @property
    def tight(self) -> bool:
        return self.lower is not None and self.lower == self.upper


@dataclass(frozen=True)
class CIVerdict:
    is_ci: bool
    edim: int
    relations: int

    def __str__(self):
        kind = "ci" if self.is_ci else "not ci"
        return f"{kind} (edim {self.edim}, relations {self.relations})"


def ci_check(r: QuotientRing) -> CIVerdict:
    """Complete intersection iff ``dim H_1(Koszul) = edim`` (Artinian, so codim = edim)."""
    h1 = koszul(r).homology().dims.get(1, 0)
    return CIVerdict(h1 == r.edim, r.edim, h1)


def level_bracket(m: DGModule, cutoff: int = DEFAULT_CUTOFF, window: int = DEFAULT_WINDOW,
                  budget: int = DEFAULT_BUDGET, cx_value: Complexity | None = None) -> LevelBracket:
    """Lower and upper bounds for the level of m with respect to k."""
    A = m.over
    H = m.homology()
    if not H.total:
        raise ValueError("level bounds need nonzero homology")
    c = cx_value if cx_value is not None else complexity(m, cutoff, window=window, budget=budget)
    if isinstance(A, ExteriorAlgebra):
        upper = min(H.total, len(H.support))
        lower = None if c.value is None else A.ngens - c.value + 1
        return LevelBracket(lower, upper, "" if lower is not None else "complexity unknown")
    upper = loewy_length(m)
    verdict = ci_check(A)
    if not verdict.is_ci:
        return LevelBracket(1, upper, f"ring is not a complete intersection ({verdict}); "
                                      "codim - cx + 1 lower bound not asserted")
    if c.value is None:
        return LevelBracket(None, upper, "complexity unknown")
    return LevelBracket(A.codim - c.value + 1, upper)


@dataclass
class InvariantReport:
    cx: Complexity
    injcx: Complexity
    loewy: dict = field(default_factory=dict)
    level_lower: int | None = None
    level_upper: int | None = None
    ci_verdict: CIVerdict | None = None
    warnings: list = field(default_factory=list)


def invariant_report(m: DGModule, cutoff: int = DEFAULT_CUTOFF, window: int = DEFAULT_WINDOW,
                     budget: int = DEFAULT_BUDGET) -> InvariantReport:
    A = m.over
    c = complexity(m, cutoff, window=window, budget=budget)
    ic = injcx(m, cutoff, window=window, budget=budget)
    H = m.homology()
    if isinstance(A, ExteriorAlgebra):
        loewy = {n: 1 for n in H.support}
        verdict = None
    else:
        loewy = {0: loewy_length(m)}
        verdict = ci_check(A)
    br = level_bracket(m, cutoff, window, budget, cx_value=c)
    rep = InvariantReport(c, ic, loewy, br.lower, br.upper, verdict)
    if br.warning:
        rep.warnings.append(br.warning)
    return rep
