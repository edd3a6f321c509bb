"""Finite-dimensional graded algebras with monomial bases.

Three kinds are provided:

* :class:`ExteriorAlgebra` on generators of odd degree,
* :class:`QuotientRing`, a graded Artinian quotient ``k[x1..xe]/I``,
* :class:`PolynomialCoordinateRing`, the dual polynomial ring (weights only;
  it is infinite-dimensional and used for Hilbert bookkeeping).

The first two share a small interface used by modules and resolutions:
``field``, ``dim``, ``degrees``, ``labels``, ``ngens``, ``gen_basis``,
``mul(i, j)`` on basis indices, and ``word(i)`` expressing a basis monomial
as an ordered product of generators.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
import sympy

from .exactlin import EchelonSpan, FieldSpec, Matrix, axpy
from . import polynomials as P

__all__ = [
    "ExteriorAlgebra",
    "QuotientRing",
    "PolynomialCoordinateRing",
    "InfiniteQuotientError",
    "RelationError",
    "build_exterior",
    "build_quotient",
    "normal_form",
    "mult_operator",
]


class InfiniteQuotientError(ValueError):
    pass


class RelationError(ValueError):
    pass


class _FiniteAlgebra:
    kind: str
    field: FieldSpec
    degrees: tuple
    labels: tuple
    gen_basis: tuple

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def ngens(self) -> int:
        return len(self.gen_basis)

    @property
    def gen_degrees(self) -> tuple:
        return tuple(self.degrees[i] for i in self.gen_basis)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def basis_in_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    @cached_property
    def _table(self) -> dict:
        return {}

    def mul(self, i: int, j: int) -> dict:
        key = (i, j)
        t = self._table
        if key not in t:
            t[key] = self._mul(i, j)
        return t[key]

    def multiply(self, a: dict, b: dict) -> dict:
        """Product of two elements given as ``{basis index: coefficient}``."""
        F = self.field
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                axpy(F, out, F.mul(x, y), self.mul(i, j))
        return out

    def element_degree(self, a: dict) -> int:
        ds = {self.degrees[i] for i in a}
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop() if ds else 0

    def format_element(self, a: dict) -> str:
        if not a:
            return "0"
        F = self.field
        terms = []
        for i in sorted(a):
            c = F.to_int_str(a[i])
            terms.append(self.labels[i] if c == "1" else f"{c}*{self.labels[i]}")
        return " + ".join(terms)


def mult_operator(a: dict, A: _FiniteAlgebra) -> Matrix:
    """Matrix of left multiplication by the homogeneous element ``a``."""
    A.element_degree(a)
    cols = [A.multiply(a, {j: A.field.one}) for j in range(A.dim)]
    return Matrix.from_columns(A.field, A.dim, cols)


# -- exterior algebras --------------------------------------------------------

class ExteriorAlgebra(_FiniteAlgebra):
    """Exterior algebra on generators xi_1..xi_c of positive odd degrees."""

    kind = "exterior"

    def __init__(self, degrees, field: FieldSpec | None = None):
        degrees = tuple(int(d) for d in degrees)
        for d in degrees:
            if d < 1:
                raise ValueError(f"exterior generator degree must be positive, got {d}")
            if d % 2 == 0:
                raise ValueError(f"exterior generator degree must be odd, got {d}")
        self.field = field or FieldSpec.prime(101)
        self.gen_degree_list = degrees
        c = len(degrees)
        self.c = c
        subsets = [s for k in range(c + 1) for s in combinations(range(c), k)]
        self.subsets = tuple(subsets)
        self.index = {s: i for i, s in enumerate(subsets)}
        self.masks = tuple(sum(1 << j for j in s) for s in subsets)
        self._mask_index = {m: i for i, m in enumerate(self.masks)}
        self.degrees = tuple(sum(degrees[j] for j in s) for s in subsets)
        self.labels = tuple("*".join(f"xi{j + 1}" for j in s) or "1" for s in subsets)
        self.gen_basis = tuple(self.index[(j,)] for j in range(c))

    def __repr__(self):
        return f"ExteriorAlgebra({list(self.gen_degree_list)}, {self.field})"

    def __eq__(self, other):
        return isinstance(other, ExteriorAlgebra) and (self.gen_degree_list, self.field) == (other.gen_degree_list, other.field)

    def __hash__(self):
        return hash(("exterior", self.gen_degree_list, self.field))

    def _mul(self, i: int, j: int) -> dict:
        a, b = self.masks[i], self.masks[j]
        if a & b:
            return {}
        # sign: one transposition for every pair (s in a, t in b) with s > t
        inv = 0
        for t in self.subsets[j]:
            inv += bin(a >> (t + 1)).count("1")
        sign = -1 if inv % 2 else 1
        return {self._mask_index[a | b]: self.field(sign)}

    def word(self, i: int) -> tuple:
        return self.subsets[i]

    @property
    def top_index(self) -> int:
        return self.dim - 1

    @property
    def total_degree(self) -> int:
        return sum(self.gen_degree_list)

    def hilbert_function(self) -> dict:
        out: dict = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def dual_weights(self) -> tuple:
        return tuple(d + 1 for d in self.gen_degree_list)


def build_exterior(degrees, field: FieldSpec | None = None) -> ExteriorAlgebra:
    return ExteriorAlgebra(degrees, field)


# -- commutative quotient rings ----------------------------------------------

class QuotientRing(_FiniteAlgebra):
    """Graded Artinian ring ``k[x1..xe]/I`` with ``I`` generated in degree >= 2."""

    kind = "quotient"

    def __init__(self, e: int, relations, field: FieldSpec | None = None):
        self.field = F = field or FieldSpec.prime(101)
        self.e = e
        rels = []
        self.relation_text = tuple(r for r in relations if isinstance(r, str))
        for idx, r in enumerate(relations):
            try:
                f = P.parse_polynomial(r, e, F) if isinstance(r, str) else {tuple(m): F(c) for m, c in r.items() if F(c)}
            except P.PolynomialSyntaxError as err:
                err.relation_index = idx
                raise
            if not f:
                continue
            degs = {P.degree(m) for m in f}
            if 1 in degs:
                raise RelationError(f"relation {P.format_polynomial(F, f)} has a linear part; "
                                    "eliminate that variable and drop it from the presentation")
            if 0 in degs:
                raise RelationError(f"relation {P.format_polynomial(F, f)} has a constant term; "
                                    "the local ring would be zero")
            if len(degs) > 1:
                raise RelationError(f"relation {P.format_polynomial(F, f)} is not homogeneous")
            rels.append(f)
        self.relations = tuple(rels)
        self.groebner = self._groebner_basis()
        self.standard_monomials = self._standard_monomials()
        mons = self.standard_monomials
        self.monomial_index = {m: i for i, m in enumerate(mons)}
        self.degrees = tuple(sum(m) for m in mons)
        self.labels = tuple(P.format_polynomial(F, {m: F.one}) for m in mons)
        unit = [0] * e
        gens = []
        for v in range(e):
            m = list(unit)
            m[v] = 1
            gens.append(self.monomial_index[tuple(m)])
        self.gen_basis = tuple(gens)

    def __repr__(self):
        return f"QuotientRing(e={self.e}, dim={self.dim}, {self.field})"

    def _groebner_basis(self) -> tuple:
        F = self.field
        e = self.e
        if e == 0:
            return ()
        xs = sympy.symbols(f"x1:{e + 1}")
        if not self.relations:
            raise InfiniteQuotientError("infinite-dimensional quotient: no relations")
        exprs = []
        for f in self.relations:
            terms = []
            for m, c in f.items():
                c = F.signed(c)
                mono = sympy.Mul(*[x ** a for x, a in zip(xs, m)])
                terms.append(sympy.Rational(c.numerator, c.denominator) * mono)
            exprs.append(sympy.Add(*terms))
        opts = {"order": "grevlex"}
        if F.kind == "prime":
            opts["modulus"] = F.p
        else:
            opts["domain"] = "QQ"
        G = sympy.groebner(exprs, *xs, **opts)
        if not G.is_zero_dimensional:
            raise InfiniteQuotientError("infinite-dimensional quotient: the ideal is not zero-dimensional")
        basis = []
        for poly in G.polys:
            g = {}
            for m, c in poly.terms():
                if F.kind == "prime":
                    v = F(int(c))
                else:
                    r = sympy.Rational(c)
                    v = F(Fraction(int(r.p), int(r.q)))
                if v:
                    g[tuple(m)] = v
            lm = P.leading_monomial(g)
            inv = F.inv(g[lm])
            g = {m: F.mul(c, inv) for m, c in g.items()}
            basis.append((lm, g))
        basis.sort(key=lambda t: P.degrevlex_key(t[0]))
        return tuple(basis)

    def _standard_monomials(self) -> tuple:
        lms = [lm for lm, _ in self.groebner]
        out = []
        d = 0
        while True:
            layer = [m for m in P.monomials_of_degree(self.e, d) if not any(P.divides(l, m) for l in lms)]
            if not layer:
                break
            out.extend(layer)
            d += 1
        return tuple(out)

    def normal_form(self, f) -> dict:
        """Remainder of ``f`` (string or polynomial dict) modulo the Gröbner basis."""
        if isinstance(f, str):
            f = P.parse_polynomial(f, self.e, self.field)
        for m in f:
            if len(m) != self.e:
                raise ValueError(f"monomial {m} does not use exactly x1..x{self.e}")
        return P.reduce_by(self.field, f, list(self.groebner))

    def to_element(self, f) -> dict:
        """Polynomial -> element as ``{basis index: coefficient}``."""
        nf = self.normal_form(f)
        return {self.monomial_index[m]: c for m, c in nf.items()}

    def to_polynomial(self, a: dict) -> dict:
        return {self.standard_monomials[i]: c for i, c in a.items()}

    def _mul(self, i: int, j: int) -> dict:
        m = P.mono_mul(self.standard_monomials[i], self.standard_monomials[j])
        return self.to_element({m: self.field.one})

    def word(self, i: int) -> tuple:
        m = self.standard_monomials[i]
        return tuple(v for v, a in enumerate(m) for _ in range(a))

    @property
    def edim(self) -> int:
        return self.e

    @property
    def codim(self) -> int:
        # Artinian: codimension equals embedding dimension
        return self.e

    def hilbert_function(self) -> dict:
        out: dict = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def gens_actions(self) -> list[Matrix]:
        return [mult_operator({g: self.field.one}, self) for g in self.gen_basis]

    def loewy_length(self) -> int:
        # graded with m generated in degree 1: m^l = R_{>=l}
        return self.top_degree + 1

    def socle(self) -> list[dict]:
        acts = self.gens_actions()
        rows = []
        for A in acts:
            rows.extend(A.rows())
        from .exactlin import kernel_vectors
        return kernel_vectors(self.field, self.dim, rows)

    def minimal_relation_count(self) -> int:
        """``dim_k I/mI``, computed from spans of monomial multiples of the relations."""
        F = self.field
        if not self.relations:
            return 0
        top = max(P.degree(next(iter(f))) for f in self.relations)
        count = 0
        for d in range(2, top + 1):
            mons = {m: i for i, m in enumerate(P.monomials_of_degree(self.e, d))}
            full = EchelonSpan(F)
            lower = EchelonSpan(F)
            for f in self.relations:
                fd = P.degree(next(iter(f)))
                if fd > d:
                    continue
                for q in P.monomials_of_degree(self.e, d - fd):
                    v = {mons[P.mono_mul(q, m)]: c for m, c in f.items()}
                    full.add(v)
                    if fd < d:
                        lower.add(v)
            count += full.rank - lower.rank
        return count


def build_quotient(e: int, relations, field: FieldSpec | None = None) -> QuotientRing:
    return QuotientRing(e, relations, field)


def normal_form(f, r: QuotientRing) -> dict:
    return r.normal_form(f)


# -- dual polynomial ring -----------------------------------------------------

class PolynomialCoordinateRing:
    """Polynomial ring k[chi_1..chi_c] with positive weights ``w_i = d_i + 1``.

    The weights are stored as positive numbers; the corresponding
    cohomological degrees of the variables are ``-w_i`` in homological terms.
    """

    def __init__(self, weights, field: FieldSpec | None = None):
        self.weights = tuple(int(w) for w in weights)
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive")
        self.field = field or FieldSpec.prime(101)

    @classmethod
    def dual_to(cls, lam: ExteriorAlgebra) -> "PolynomialCoordinateRing":
        return cls(lam.dual_weights(), lam.field)

    @property
    def c(self) -> int:
        return len(self.weights)

    def monomials(self, n: int) -> list[tuple]:
        """Exponent vectors of weighted degree ``n`` (lexicographic order)."""
        out = []

        def rec(i, left, acc):
            if i == self.c:
                if left == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for a in range(left // w, -1, -1):
                rec(i + 1, left - a * w, acc + [a])

        if n >= 0:
            rec(0, n, [])
        return out

    def dim_in_degree(self, n: int) -> int:
        # coefficient of t^n in 1/prod(1 - t^w)
        if n < 0:
            return 0
        coeffs = [1] + [0] * n
        for w in self.weights:
            for k in range(w, n + 1):
                coeffs[k] += coeffs[k - w]
        return coeffs[n]

    def hilbert_dims(self, upto: int) -> list[int]:
        coeffs = [1] + [0] * upto
        for w in self.weights:
            for k in range(w, upto + 1):
                coeffs[k] += coeffs[k - w]
        return coeffs

    def krull_dim(self) -> int:
        return self.c
