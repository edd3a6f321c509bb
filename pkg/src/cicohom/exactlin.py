"""Exact field arithmetic and sparse linear algebra.

Vectors are plain ``dict`` objects mapping an index to a nonzero scalar.
Scalars are canonical: ints in ``range(p)`` over a prime field and
``fractions.Fraction`` over the rationals.  Everything downstream
(resolutions, homology, Hilbert series) is built on :class:`EchelonSpan`.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import isprime

__all__ = [
    "FieldSpec",
    "FieldMismatchError",
    "Matrix",
    "EchelonSpan",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "NO_SOLUTION",
    "PIVOT_RULE",
]

# Identifier printed in report footers; bump when the elimination order changes.
PIVOT_RULE = "rows-by-nnz/min-col/v1"


class FieldMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """A prime field ``F_p`` or the rationals."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
                raise ValueError(f"field characteristic must be a prime, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field takes no parameter")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip()
        if text in ("rational", "QQ", "Q"):
            return cls.rational()
        if text.startswith("prime:"):
            return cls.prime(int(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse field {text!r}; use prime:P or rational")

    def __str__(self):
        return f"prime:{self.p}" if self.kind == "prime" else "rational"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    # -- scalar arithmetic -------------------------------------------------
    def __call__(self, x) -> int | Fraction:
        """Canonical representative of an integer or fraction."""
        if self.kind == "prime":
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def signed(self, a) -> int | Fraction:
        """Representative nearest zero, for printing."""
        if self.p and a > self.p // 2:
            return a - self.p
        return a

    def to_int_str(self, a) -> str:
        a = self.signed(a)
        if isinstance(a, Fraction) and a.denominator == 1:
            return str(a.numerator)
        return str(a)


# -- sparse vector helpers ----------------------------------------------------

def axpy(F: FieldSpec, y: dict, c, x: Mapping) -> None:
    """In place ``y += c * x``; drops entries that cancel."""
    p = F.p
    if p:
        for k, v in x.items():
            w = (y.get(k, 0) + c * v) % p
            if w:
                y[k] = w
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            w = y.get(k, 0) + c * v
            if w:
                y[k] = w
            else:
                y.pop(k, None)


def scale(F: FieldSpec, c, x: Mapping) -> dict:
    if not c:
        return {}
    p = F.p
    if p:
        return {k: v * c % p for k, v in x.items()}
    return {k: v * c for k, v in x.items()}


def vec_add(F: FieldSpec, *vs: Mapping) -> dict:
    out: dict = {}
    for v in vs:
        axpy(F, out, F.one, v)
    return out


# -- matrices -----------------------------------------------------------------

class Matrix:
    """Immutable sparse matrix stored as row dictionaries."""

    __slots__ = ("field", "nrows", "ncols", "_rows", "_hash")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, rows: Sequence[Mapping] | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        clean = []
        for r in rows:
            d = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column index {c} out of range for {ncols} columns")
                v = field(v)
                if v:
                    d[c] = v
            clean.append(d)
        self._rows = tuple(clean)
        self._hash = None

    @classmethod
    def _trusted(cls, field, nrows, ncols, rows):
        m = cls.__new__(cls)
        m.field, m.nrows, m.ncols = field, nrows, ncols
        m._rows = tuple(rows)
        m._hash = None
        return m

    @classmethod
    def from_dense(cls, field: FieldSpec, data: Sequence[Sequence]) -> "Matrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: x for j, x in enumerate(r) if x})
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, field: FieldSpec, nrows: int, columns: Sequence[Mapping]) -> "Matrix":
        rows = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows[i][j] = v
        return cls(field, nrows, len(columns), rows)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls._trusted(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        return cls._trusted(field, nrows, ncols, [{} for _ in range(nrows)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> dict:
        return dict(self._rows[i])

    def rows(self) -> list[dict]:
        return [dict(r) for r in self._rows]

    def columns(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def column(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self._rows) if j in r}

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i].get(j, self.field.zero)

    def entries(self) -> dict:
        return {(i, j): v for i, r in enumerate(self._rows) for j, v in r.items()}

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self) -> list[list]:
        z = self.field.zero
        return [[r.get(j, z) for j in range(self.ncols)] for r in self._rows]

    def transpose(self) -> "Matrix":
        return Matrix._trusted(self.field, self.ncols, self.nrows, self.columns())

    def is_zero(self) -> bool:
        return not any(self._rows)

    def _check_field(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def matvec(self, v: Mapping) -> dict:
        F = self.field
        out = {}
        for i, r in enumerate(self._rows):
            s = 0
            if len(r) < len(v):
                for j, a in r.items():
                    b = v.get(j)
                    if b:
                        s += a * b
            else:
                for j, b in v.items():
                    a = r.get(j)
                    if a:
                        s += a * b
            s = F(s) if F.p else s
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        rows = []
        orows = other._rows
        for r in self._rows:
            acc: dict = {}
            for k, a in r.items():
                axpy(F, acc, a, orows[k])
            rows.append(acc)
        return Matrix._trusted(F, self.nrows, other.ncols, rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._trusted(self.field, self.nrows, self.ncols,
                               [vec_add(self.field, a, b) for a, b in zip(self._rows, other._rows)])

    def __mul__(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._trusted(self.field, self.nrows, self.ncols, [scale(self.field, c, r) for r in self._rows])

    __rmul__ = __mul__

    def __neg__(self) -> "Matrix":
        return self * -1

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field, self.nrows, self.ncols, self._rows) == (other.field, other.nrows, other.ncols, other._rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nrows, self.ncols,
                               tuple(tuple(sorted(r.items())) for r in self._rows)))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        off = self.ncols
        rows = []
        for a, b in zip(self._rows, other._rows):
            r = dict(a)
            r.update({j + off: v for j, v in b.items()})
            rows.append(r)
        return Matrix._trusted(self.field, self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix._trusted(self.field, self.nrows + other.nrows, self.ncols, self._rows + other._rows)


# -- incremental echelon form -------------------------------------------------

class EchelonSpan:
    """Incrementally maintained row echelon basis of a subspace.

    Every stored row is normalised so its leading (minimal) index holds 1
    and all its other indices are larger.  ``reduce`` eliminates every pivot
    index from a vector, which makes membership tests exact.  With
    ``track=True`` each stored row remembers which inserted vectors it is a
    combination of, so ``express`` can write a vector in terms of the
    inserted ones.
    """

    def __init__(self, field: FieldSpec, track: bool = False):
        self.field = field
        self.track = track
        self.pivots: dict = {}      # pivot index -> row
        self.combos: dict = {}      # pivot index -> combination of inserted tags
        self.count = 0              # number of inserted vectors (tags)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return len(self.pivots)

    def _reduce(self, v: Mapping, combo: dict | None):
        F = self.field
        p = F.p
        w = dict(v)
        piv = self.pivots
        heap = [k for k in w if k in piv]
        if not heap:
            return w
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            c = w.get(k)
            if not c:
                continue
            row = piv[k]
            c = -c % p if p else -c
            for j, a in row.items():
                x = (w.get(j, 0) + c * a) % p if p else w.get(j, 0) + c * a
                if x:
                    if j not in w and j in piv and j not in seen:
                        heapq.heappush(heap, j)
                    w[j] = x
                else:
                    w.pop(j, None)
            if combo is not None:
                axpy(F, combo, c, self.combos[k])
        return w

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` after eliminating all pivot indices."""
        return self._reduce(v, None)

    def contains(self, v: Mapping) -> bool:
        return not self._reduce(v, None)

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; returns True when it enlarged the span."""
        F = self.field
        tag = self.count
        self.count += 1
        combo = {tag: F.one} if self.track else None
        w = self._reduce(v, combo)
        if not w:
            return False
        lead = min(w)
        inv = F.inv(w[lead])
        if inv != 1:
            w = scale(F, inv, w)
            if combo is not None:
                combo = scale(F, inv, combo)
        self.pivots[lead] = w
        if combo is not None:
            self.combos[lead] = combo
        return True

    def express(self, v: Mapping) -> dict | None:
        """Coefficients over inserted tags summing to ``v``, or None if outside the span."""
        if not self.track:
            raise RuntimeError("span was built without tracking")
        combo: dict = {}
        w = self._reduce(v, combo)
        if w:
            return None
        return scale(self.field, -1, combo) if combo else {}

    def reduced_rows(self) -> dict:
        """Fully reduced rows (RREF), keyed by pivot index."""
        F = self.field
        out: dict = {}
        for k in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[k])
            for j in [j for j in row if j != k and j in out]:
                c = row.get(j)
                if c:
                    axpy(F, row, F.neg(c), out[j])
            out[k] = row
        return dict(sorted(out.items()))


# -- matrix level operations --------------------------------------------------

def _row_order(rows: Sequence[Mapping]) -> list[int]:
    # sparsest rows first, ties by index: deterministic and limits fill-in
    return sorted(range(len(rows)), key=lambda i: (len(rows[i]), i))


def echelon_of_rows(field: FieldSpec, rows: Sequence[Mapping]) -> EchelonSpan:
    span = EchelonSpan(field)
    for i in _row_order(rows):
        if rows[i]:
            span.add(rows[i])
    return span


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    span = echelon_of_rows(m.field, m._rows)
    red = span.reduced_rows()
    pivots = list(red)
    rows = [red[k] for k in pivots] + [{} for _ in range(m.nrows - len(pivots))]
    return Matrix._trusted(m.field, m.nrows, m.ncols, rows), pivots, len(pivots)


def rank(m: Matrix) -> int:
    if m.nrows > m.ncols:
        m = m.transpose()
    return echelon_of_rows(m.field, m._rows).rank


def kernel_vectors(field: FieldSpec, ncols: int, rows: Sequence[Mapping],
                   echelon: EchelonSpan | None = None) -> list[dict]:
    """Canonical kernel basis read off the RREF: one vector per free column.

    ``echelon`` may be a span already built from ``rows``.
    """
    if echelon is None:
        echelon = echelon_of_rows(field, rows)
    red = echelon.reduced_rows()
    colidx: dict = {}
    for k, r in red.items():
        for j, v in r.items():
            if j != k:
                colidx.setdefault(j, []).append((k, v))
    out = []
    for f in range(ncols):
        if f in red:
            continue
        v = {f: field.one}
        for k, a in colidx.get(f, ()):
            v[k] = field.neg(a)
        out.append(v)
    return out


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns form the canonical basis of ``ker m``."""
    vecs = kernel_vectors(m.field, m.ncols, m._rows)
    return Matrix.from_columns(m.field, m.ncols, vecs)


class _NoSolution:
    def __repr__(self):
        return "NO_SOLUTION"

    def __bool__(self):
        return False


NO_SOLUTION = _NoSolution()


def solve(m: Matrix, b: Mapping | Sequence) -> dict | _NoSolution:
    """Some ``x`` with ``m x = b`` (as a sparse dict), or ``NO_SOLUTION``."""
    F = m.field
    if not isinstance(b, Mapping):
        if len(b) != m.nrows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
        b = {i: F(x) for i, x in enumerate(b) if F(x)}
    elif any(not 0 <= i < m.nrows for i in b):
        raise ValueError("right-hand side index out of range")
    span = EchelonSpan(F, track=True)
    for col in m.columns():
        span.add(col)
    x = span.express({i: F(v) for i, v in b.items() if F(v)})
    return NO_SOLUTION if x is None else x


class ColumnSolver:
    """Repeated solves against a fixed list of column vectors."""

    def __init__(self, field: FieldSpec, columns: Iterable[Mapping]):
        self.span = EchelonSpan(field, track=True)
        for c in columns:
            self.span.add(c)

    def solve(self, b: Mapping) -> dict | None:
        return self.span.express(b)
