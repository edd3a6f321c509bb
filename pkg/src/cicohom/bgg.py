"""The BGG transform from DG modules over an exterior algebra to free complexes over S.

For U over Lambda(d_1..d_c) the complex H(U) = S (x) U has basis
``chi^a (x) u`` and differential

    delta(chi^a (x) u) = sum_i chi^(a + e_i) (x) xi_i u  +  chi^a (x) d u.

``chi_i`` has weight ``w_i = d_i + 1`` and lowers the homological degree by
``w_i``, so ``chi^a (x) u`` sits in homological degree ``|u| - w.a``.
Degrees are reported cohomologically, ``n = -(homological degree)``, which
is the indexing under which ``H^n(H(U))`` matches ``Ext^n(k, U)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import ExteriorAlgebra, PolynomialCoordinateRing
from .dgmodules import DGModule
from .exactlin import axpy, echelon_of_rows
from .invariants import DEFAULT_WINDOW, Complexity, sequence_complexity
from .resolve import BettiSequence

# sign in front of the 1 (x) d_U term; any choice squares to zero, this one is frozen
DIFFERENTIAL_SIGN = 1


class BGGSignError(ArithmeticError):
    pass


def _poly_add(F, acc: dict, c, mono: tuple):
    v = F.add(acc.get(mono, F.zero), c)
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


class BGGComplex:
    """``S (x) U`` with the BGG differential; one S-summand per basis element of U."""

    def __init__(self, u: DGModule, sign: int = DIFFERENTIAL_SIGN, check: bool = True):
        if not isinstance(u.over, ExteriorAlgebra):
            raise TypeError("the BGG transform needs a module over an exterior algebra")
        self.source = u
        self.over = PolynomialCoordinateRing.dual_to(u.over)
        self.field = u.field
        self.sign = self.field(sign)
        # entries[(row, col)] = polynomial {exponent: coeff}, linear in chi plus constants
        F = self.field
        c = self.over.c
        unit = [tuple(1 if j == i else 0 for j in range(c)) for i in range(c)]
        zero = (0,) * c
        entries: dict = {}
        for i, cols in enumerate(u.action_cols):
            for col, img in enumerate(cols):
                for row, a in img.items():
                    _poly_add(F, entries.setdefault((row, col), {}), a, unit[i])
        for col, img in enumerate(u.diff_cols):
            for row, a in img.items():
                _poly_add(F, entries.setdefault((row, col), {}), F.mul(self.sign, a), zero)
        self.entries = {k: v for k, v in entries.items() if v}
        if check and not self.square_is_zero():
            raise BGGSignError("BGG differential does not square to zero")

    @property
    def rank(self) -> int:
        return self.source.dim

    def generator_degrees(self) -> tuple:
        """Homological degrees of the free generators ``1 (x) u``."""
        return self.source.degrees

    def square_is_zero(self) -> bool:
        """delta^2 = 0, multiplying the polynomial matrix by itself."""
        F = self.field
        by_col: dict = {}
        for (r, c), p in self.entries.items():
            by_col.setdefault(c, []).append((r, p))
        for c, first in by_col.items():
            acc: dict = {}
            for mid, p in first:
                for r, q in by_col.get(mid, ()):
                    tgt = acc.setdefault(r, {})
                    for m1, a in p.items():
                        for m2, b in q.items():
                            _poly_add(F, tgt, F.mul(a, b), tuple(x + y for x, y in zip(m1, m2)))
            if any(v for v in acc.values()):
                return False
        return True

    # -- graded pieces -------------------------------------------------------
    def basis(self, t: int) -> list[tuple]:
        """Basis ``(a, u)`` of homological degree t."""
        u = self.source
        S = self.over
        out = []
        for v, deg in enumerate(u.degrees):
            for a in S.monomials(deg - t):
                out.append((a, v))
        return out

    def differential_rank(self, t: int) -> int:
        """Rank of delta from homological degree t to t - 1."""
        src = self.basis(t)
        if not src:
            return 0
        tgt = {key: k for k, key in enumerate(self.basis(t - 1))}
        F = self.field
        rows: dict = {}
        for k, (a, v) in enumerate(src):
            col: dict = {}
            for (r, c), p in self.entries.items():
                if c != v:
                    continue
                for m, coef in p.items():
                    key = (tuple(x + y for x, y in zip(a, m)), r)
                    axpy(F, col, coef, {tgt[key]: F.one})
            for j, coef in col.items():
                rows.setdefault(j, {})[k] = coef
        return echelon_of_rows(F, list(rows.values())).rank

    def homology_dim(self, t: int, ranks: Mapping[int, int] | None = None) -> int:
        r_out = ranks[t] if ranks is not None and t in ranks else self.differential_rank(t)
        r_in = ranks[t + 1] if ranks is not None and t + 1 in ranks else self.differential_rank(t + 1)
        return len(self.basis(t)) - r_out - r_in

    def describe(self) -> list[tuple]:
        """``(row, col, entry)`` with entries printed as polynomials in chi."""
        F = self.field
        out = []
        for (r, c) in sorted(self.entries):
            p = self.entries[(r, c)]
            terms = []
            for m in sorted(p, reverse=True):
                coef = F.to_int_str(p[m])
                mono = "*".join(f"chi{i + 1}" for i, e in enumerate(m) if e)
                terms.append(f"{coef}*{mono}" if mono else coef)
            out.append((r, c, " + ".join(terms)))
        return out


def bgg_transform(u: DGModule) -> BGGComplex:
    return BGGComplex(u)


@dataclass(frozen=True)
class BGGHomology:
    """``dims[n]`` = dim of homology in cohomological degree n (homological -n)."""

    dims: BettiSequence

    def rows(self) -> list[tuple[int, int, int]]:
        """``(homological degree, cohomological degree, dimension)``."""
        return [(-n, n, d) for n, d in self.dims.as_dict().items()]


def bgg_homology_hilbert(b: BGGComplex, cutoff: int) -> BGGHomology:
    """Homology dimensions of ``H(U)`` for cohomological degrees up to ``cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    degs = b.generator_degrees()
    lo = -max(degs) if degs else 0
    ranks = {}
    for n in range(lo - 1, cutoff + 2):
        ranks[-n] = b.differential_rank(-n)
    vals = tuple(b.homology_dim(-n, ranks) for n in range(lo, cutoff + 1))
    return BGGHomology(BettiSequence(lo, vals))


def bgg_krull_dim(u: DGModule, cutoff: int = 20, window: int = DEFAULT_WINDOW) -> Complexity:
    """Pole order at t = 1 of the homology Hilbert series of ``H(U)``."""
    b = bgg_transform(u)
    h = bgg_homology_hilbert(b, cutoff)
    if not any(h.dims.values):
        raise ValueError("homology of the transform vanishes through the cutoff")
    return sequence_complexity(h.dims, b.over.weights, window)
