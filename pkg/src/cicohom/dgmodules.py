"""Finite graded / DG modules, complexes of k-spaces, free complexes and Koszul complexes.

Conventions: lower (homological) degrees, differentials of degree -1,
Koszul signs.  A module over an exterior algebra may carry a differential
satisfying ``d(xi u) = -xi d(u)``; modules over a quotient ring are graded
by internal degree and carry no differential.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .algebra import ExteriorAlgebra, QuotientRing, _FiniteAlgebra
from .exactlin import EchelonSpan, FieldSpec, Matrix, axpy, kernel_vectors, scale
from . import polynomials as P

__all__ = [
    "ModuleValidationError",
    "DGModule",
    "ChainComplex",
    "FreeComplex",
    "KoszulComplexData",
    "Homology",
    "homology",
    "koszul",
    "quotient_dg_module",
    "residue_field",
    "algebra_module",
    "quotient_by_generators",
    "cokernel_module",
    "explicit_module",
    "tensor_free",
    "shift",
    "direct_sum",
    "chain_maps",
    "mapping_cone",
]


class ModuleValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Homology:
    """Per-degree homology dimensions with cycle representatives."""

    dims: dict
    representatives: dict

    @property
    def support(self) -> list[int]:
        return [n for n, d in sorted(self.dims.items()) if d]

    @property
    def total(self) -> int:
        return sum(self.dims.values())


def _graded_homology(field: FieldSpec, degrees: Sequence[int], diff_cols: Sequence[Mapping]) -> Homology:
    """Homology of a finite complex given by basis degrees and columns of d."""
    by_deg: dict = {}
    for i, d in enumerate(degrees):
        by_deg.setdefault(d, []).append(i)
    dims, reps = {}, {}
    for n in sorted(by_deg):
        idx = by_deg[n]
        local = {g: k for k, g in enumerate(idx)}
        below = {g: k for k, g in enumerate(by_deg.get(n - 1, []))}
        rows: list[dict] = [{} for _ in below]
        for k, g in enumerate(idx):
            for t, v in diff_cols[g].items():
                rows[below[t]][k] = v
        cycles = kernel_vectors(field, len(idx), rows) if below else [{k: field.one} for k in range(len(idx))]
        span = EchelonSpan(field)
        for g in by_deg.get(n + 1, []):
            b = {local[t]: v for t, v in diff_cols[g].items()}
            if b:
                span.add(b)
        nb = span.rank
        chosen = []
        for z in cycles:
            if span.add(z):
                chosen.append({idx[k]: v for k, v in z.items()})
        dims[n] = len(cycles) - nb
        reps[n] = chosen
        assert len(chosen) == dims[n]
    return Homology(dims, reps)


class DGModule:
    """Finite module over a finite graded algebra, optionally with a differential.

    ``actions[i]`` is the matrix of the i-th algebra generator (column u is
    the image of basis vector u); ``differential`` has degree -1 and is only
    allowed over exterior algebras.
    """

    def __init__(self, over: _FiniteAlgebra, degrees: Sequence[int], actions: Sequence[Matrix],
                 differential: Matrix | None = None, labels: Sequence[str] | None = None,
                 name: str = "", validate: bool = True):
        self.over = over
        self.field = over.field
        self.degrees = tuple(int(d) for d in degrees)
        n = len(self.degrees)
        self.labels = tuple(labels) if labels is not None else tuple(f"u{i}" for i in range(n))
        self.actions = tuple(actions)
        if differential is None:
            differential = Matrix.zeros(self.field, n, n)
        self.differential = differential
        self.name = name
        if validate:
            self._validate()

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def __repr__(self):
        return f"DGModule({self.name or 'U'}, dim={self.dim}, over={self.over!r})"

    @cached_property
    def action_cols(self) -> tuple:
        return tuple(tuple(A.columns()) for A in self.actions)

    @cached_property
    def diff_cols(self) -> tuple:
        return tuple(self.differential.columns())

    @cached_property
    def monomial_cols(self) -> tuple:
        """``monomial_cols[i][u]``: image of basis u under algebra basis monomial i."""
        F = self.field
        out = []
        for i in range(self.over.dim):
            word = self.over.word(i)
            cols = []
            for u in range(self.dim):
                v = {u: F.one}
                for g in reversed(word):
                    nv: dict = {}
                    A = self.action_cols[g]
                    for k, c in v.items():
                        axpy(F, nv, c, A[k])
                    v = nv
                    if not v:
                        break
                cols.append(v)
            out.append(tuple(cols))
        return tuple(out)

    def act(self, alg_index: int, v: Mapping) -> dict:
        F = self.field
        cols = self.monomial_cols[alg_index]
        out: dict = {}
        for k, c in v.items():
            axpy(F, out, c, cols[k])
        return out

    def act_element(self, a: Mapping, v: Mapping) -> dict:
        F = self.field
        out: dict = {}
        for i, c in a.items():
            axpy(F, out, c, self.act(i, v))
        return out

    def d(self, v: Mapping) -> dict:
        F = self.field
        out: dict = {}
        for k, c in v.items():
            axpy(F, out, c, self.diff_cols[k])
        return out

    @property
    def has_differential(self) -> bool:
        return not self.differential.is_zero()

    def basis_in_degree(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == n]

    @property
    def degree_range(self) -> tuple[int, int]:
        if not self.degrees:
            return (0, -1)
        return (min(self.degrees), max(self.degrees))

    # -- validation ------------------------------------------------------------
    def _validate(self):
        F = self.field
        A = self.over
        n = self.dim
        if len(self.actions) != A.ngens:
            raise ModuleValidationError(f"expected {A.ngens} action matrices, got {len(self.actions)}")
        for g, M in enumerate(self.actions):
            if M.shape != (n, n):
                raise ModuleValidationError(f"action matrix {g + 1} has shape {M.shape}, expected {(n, n)}")
            if M.field != F:
                raise ModuleValidationError("action matrix over a different field")
            dg = A.gen_degrees[g]
            for (i, j) in M.entries():
                if self.degrees[i] != self.degrees[j] + dg:
                    raise ModuleValidationError(
                        f"action of generator {g + 1} does not raise degree by {dg} at entry ({i}, {j})")
        D = self.differential
        if D.shape != (n, n):
            raise ModuleValidationError("differential has the wrong shape")
        for (i, j) in D.entries():
            if self.degrees[i] != self.degrees[j] - 1:
                raise ModuleValidationError(f"differential does not have degree -1 at entry ({i}, {j})")
        if not (D @ D).is_zero():
            raise ModuleValidationError("differential does not square to zero")
        acts = self.actions
        if isinstance(A, ExteriorAlgebra):
            for i in range(A.ngens):
                if not (acts[i] @ acts[i]).is_zero():
                    raise ModuleValidationError(f"xi{i + 1} does not act with square zero")
                for j in range(i + 1, A.ngens):
                    if not (acts[i] @ acts[j] + acts[j] @ acts[i]).is_zero():
                        raise ModuleValidationError(f"xi{i + 1} and xi{j + 1} do not anticommute")
                # generators have odd degree: d(xi u) = -xi d(u)
                if not (D @ acts[i] + acts[i] @ D).is_zero():
                    raise ModuleValidationError(f"Leibniz rule fails for xi{i + 1}")
        else:
            if not D.is_zero():
                raise ModuleValidationError("modules over a quotient ring carry no differential")
            for i in range(A.ngens):
                for j in range(i + 1, A.ngens):
                    if not (acts[i] @ acts[j] - acts[j] @ acts[i]).is_zero():
                        raise ModuleValidationError(f"x{i + 1} and x{j + 1} do not commute")
            for lm, g in A.groebner:
                total = Matrix.zeros(F, n, n)
                for m, c in g.items():
                    op = Matrix.identity(F, n)
                    for v, a in enumerate(m):
                        for _ in range(a):
                            op = acts[v] @ op
                    total = total + op * c
                if not total.is_zero():
                    raise ModuleValidationError(
                        f"relation {P.format_polynomial(F, g)} does not act as zero")

    # -- derived data ----------------------------------------------------------
    def homology(self) -> Homology:
        return _graded_homology(self.field, self.degrees, self.diff_cols)

    def is_free_of_differential(self) -> bool:
        return self.differential.is_zero()


# -- constructors -------------------------------------------------------------

def residue_field(A: _FiniteAlgebra, degree: int = 0) -> DGModule:
    F = A.field
    return DGModule(A, [degree], [Matrix.zeros(F, 1, 1) for _ in range(A.ngens)], labels=["1"], name="k")


def algebra_module(A: _FiniteAlgebra) -> DGModule:
    from .algebra import mult_operator
    acts = [mult_operator({g: A.field.one}, A) for g in A.gen_basis]
    name = "Lambda" if isinstance(A, ExteriorAlgebra) else "R"
    return DGModule(A, A.degrees, acts, labels=A.labels, name=name)


def _free_module_data(A: _FiniteAlgebra, gen_degrees: Sequence[int]):
    """k-basis (g, mu) of a free module: index g*dim(A) + mu."""
    degs = [d + A.degrees[m] for d in gen_degrees for m in range(A.dim)]
    return degs


def quotient_module(M: DGModule, generators: Sequence[Mapping], name: str = "") -> DGModule:
    """``M / (A-submodule generated by the given homogeneous vectors)``.

    The submodule must be closed under the differential if M has one; this is
    checked by validating the result.
    """
    F = M.field
    A = M.over
    span = EchelonSpan(F)
    todo = list(generators)
    while todo:
        v = todo.pop()
        for i in range(A.dim):
            w = M.act(i, v)
            if w and span.add(w):
                todo.append(w)
    red = span.reduced_rows()
    keep = [j for j in range(M.dim) if j not in red]
    pos = {j: k for k, j in enumerate(keep)}

    def project(v):
        w = dict(v)
        for k in [k for k in w if k in red]:
            c = w.get(k)
            if c:
                axpy(F, w, F.neg(c), red[k])
        return {pos[j]: c for j, c in w.items()}

    acts = []
    for cols in M.action_cols:
        acts.append(Matrix.from_columns(F, len(keep), [project(cols[j]) for j in keep]))
    D = Matrix.from_columns(F, len(keep), [project(M.diff_cols[j]) for j in keep])
    return DGModule(A, [M.degrees[j] for j in keep], acts, D, labels=[M.labels[j] for j in keep], name=name)


def quotient_by_generators(A: _FiniteAlgebra, kill: Sequence[int]) -> DGModule:
    """``A / (generators listed in kill)``; indices are 1-based."""
    kill = sorted(set(kill))
    for i in kill:
        if not 1 <= i <= A.ngens:
            raise ModuleValidationError(f"generator index {i} outside 1..{A.ngens}")
    base = algebra_module(A)
    gens = [{A.gen_basis[i - 1]: A.field.one} for i in kill]
    sym = "Lambda" if isinstance(A, ExteriorAlgebra) else "R"
    return quotient_module(base, gens, name=f"{sym}^({','.join(map(str, kill))})" if kill else sym)


def quotient_dg_module(A: ExteriorAlgebra, kill: Sequence[int]) -> DGModule:
    """``Lambda / (xi_i : i in kill)`` with zero differential."""
    return quotient_by_generators(A, kill)


def cokernel_module(A: _FiniteAlgebra, gen_degrees: Sequence[int], columns: Sequence[Sequence]) -> DGModule:
    """Cokernel of a map of free modules presented by columns of algebra elements.

    Each column lists one entry per generator; entries are algebra elements
    as dicts, or polynomial strings over a quotient ring.
    """
    F = A.field
    r0 = len(gen_degrees)
    free_degs = _free_module_data(A, gen_degrees)
    n = len(free_degs)
    acts = []
    for g in A.gen_basis:
        cols = []
        for gi in range(r0):
            for m in range(A.dim):
                prod = A.mul(g, m)
                cols.append({gi * A.dim + k: c for k, c in prod.items()})
        acts.append(Matrix.from_columns(F, n, cols))
    free = DGModule(A, free_degs, acts,
                    labels=[f"{A.labels[m]}*g{gi + 1}" for gi in range(r0) for m in range(A.dim)],
                    validate=False)
    vecs = []
    for col in columns:
        if len(col) != r0:
            raise ModuleValidationError(f"presentation column has {len(col)} entries, expected {r0}")
        v: dict = {}
        for gi, entry in enumerate(col):
            if isinstance(entry, str):
                if not isinstance(A, QuotientRing):
                    raise ModuleValidationError("string entries are only supported over quotient rings")
                entry = A.to_element(entry)
            for m, c in entry.items():
                axpy(F, v, F(c), {gi * A.dim + m: F.one})
        degs = {free_degs[i] for i in v}
        if len(degs) > 1:
            raise ModuleValidationError("presentation column is not homogeneous")
        if v:
            vecs.append(v)
    return quotient_module(free, vecs, name="coker")


def explicit_module(A: _FiniteAlgebra, degrees, actions, differential=None, labels=None) -> DGModule:
    """Build from dense nested lists (one matrix per generator)."""
    F = A.field
    acts = [m if isinstance(m, Matrix) else Matrix.from_dense(F, m) for m in actions]
    if differential is not None and not isinstance(differential, Matrix):
        differential = Matrix.from_dense(F, differential)
    return DGModule(A, degrees, acts, differential, labels=labels, name="explicit")


# -- complexes of k-vector spaces ---------------------------------------------

class ChainComplex:
    """Finite complex of finite-dimensional k-spaces; ``diffs[n]: C_n -> C_{n-1}``."""

    def __init__(self, field: FieldSpec, dims: Mapping[int, int], diffs: Mapping[int, Matrix] | None = None):
        self.field = field
        self.dims = {int(n): int(d) for n, d in sorted(dims.items()) if d}
        self.diffs = {}
        for n, M in (diffs or {}).items():
            if M.shape != (self.dims.get(n - 1, 0), self.dims.get(n, 0)):
                raise ModuleValidationError(f"differential d_{n} has shape {M.shape}")
            if not M.is_zero():
                self.diffs[n] = M
        for n in self.diffs:
            if n - 1 in self.diffs and not (self.diffs[n - 1] @ self.diffs[n]).is_zero():
                raise ModuleValidationError(f"d_{n - 1} d_{n} != 0")

    @classmethod
    def point(cls, field: FieldSpec, degree: int = 0) -> "ChainComplex":
        return cls(field, {degree: 1})

    def flat(self):
        """Basis degrees and differential columns in a single numbering."""
        offs, degrees = {}, []
        for n, d in self.dims.items():
            offs[n] = len(degrees)
            degrees.extend([n] * d)
        cols: list[dict] = [{} for _ in degrees]
        for n, M in self.diffs.items():
            for j, col in enumerate(M.columns()):
                cols[offs[n] + j] = {offs[n - 1] + i: v for i, v in col.items()}
        return degrees, cols

    def homology(self) -> Homology:
        degrees, cols = self.flat()
        return _graded_homology(self.field, degrees, cols)


class FreeComplex:
    """Finite complex of free modules over a quotient ring.

    ``diffs[n]`` is a ``ranks[n-1] x ranks[n]`` array of ring elements
    (``{basis index: coefficient}``).
    """

    def __init__(self, over: QuotientRing, ranks: Mapping[int, int], diffs: Mapping[int, Sequence[Sequence[Mapping]]]):
        self.over = over
        self.field = over.field
        self.ranks = {int(n): int(r) for n, r in sorted(ranks.items()) if r}
        self.diffs = {n: [list(row) for row in M] for n, M in diffs.items()}
        cc = self.to_chain_complex()  # validates d^2 = 0
        self._cc = cc

    def to_chain_complex(self) -> ChainComplex:
        R = self.over
        F = self.field
        dims = {n: r * R.dim for n, r in self.ranks.items()}
        mats = {}
        for n, M in self.diffs.items():
            src, tgt = self.ranks.get(n, 0), self.ranks.get(n - 1, 0)
            cols = []
            for g in range(src):
                for mu in range(R.dim):
                    v: dict = {}
                    for h in range(tgt):
                        entry = M[h][g]
                        if entry:
                            prod = R.multiply({mu: F.one}, entry)
                            for k, c in prod.items():
                                axpy(F, v, c, {h * R.dim + k: F.one})
                    cols.append(v)
            mats[n] = Matrix.from_columns(F, tgt * R.dim, cols)
        return ChainComplex(F, dims, mats)

    def homology(self) -> Homology:
        return self._cc.homology()


@dataclass(frozen=True)
class KoszulComplexData:
    over: QuotientRing
    elements: tuple
    subsets: tuple
    complex: FreeComplex

    def homology(self) -> Homology:
        return self.complex.homology()


def koszul(r: QuotientRing, elements: Sequence[Mapping] | None = None) -> KoszulComplexData:
    """Koszul complex on ``elements`` (default: the variables x1..xe)."""
    F = r.field
    if elements is None:
        elements = [{g: F.one} for g in r.gen_basis]
    e = len(elements)
    subsets = tuple(tuple(s) for k in range(e + 1) for s in combinations(range(e), k))
    by_size: dict = {}
    for s in subsets:
        by_size.setdefault(len(s), []).append(s)
    index = {s: i for k, ss in by_size.items() for i, s in enumerate(ss)}
    ranks = {k: len(ss) for k, ss in by_size.items()}
    diffs = {}
    for k in range(1, e + 1):
        M = [[{} for _ in by_size[k]] for _ in by_size[k - 1]]
        for s in by_size[k]:
            for pos, j in enumerate(s):
                t = s[:pos] + s[pos + 1:]
                sign = F(-1 if pos % 2 else 1)
                M[index[t]][index[s]] = scale(F, sign, elements[j])
        diffs[k] = M
    return KoszulComplexData(r, tuple(elements), subsets, FreeComplex(r, ranks, diffs))


# -- tensor products and shifts -----------------------------------------------

def tensor_free(u: DGModule, f: ChainComplex) -> DGModule:
    """``u (x)_k f`` with ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``."""
    if not isinstance(f, ChainComplex):
        raise TypeError("tensor_free expects a finite ChainComplex of k-spaces")
    F = u.field
    fdeg, fcols = f.flat()
    nf = len(fdeg)
    n = u.dim * nf
    idx = lambda a, b: a * nf + b
    degrees = [u.degrees[a] + fdeg[b] for a in range(u.dim) for b in range(nf)]
    labels = [f"{u.labels[a]}@f{b}" for a in range(u.dim) for b in range(nf)]
    acts = []
    for cols in u.action_cols:
        new = []
        for a in range(u.dim):
            for b in range(nf):
                new.append({idx(k, b): c for k, c in cols[a].items()})
        acts.append(Matrix.from_columns(F, n, new))
    dcols = []
    for a in range(u.dim):
        sign = F(-1 if u.degrees[a] % 2 else 1)
        for b in range(nf):
            v = {idx(k, b): c for k, c in u.diff_cols[a].items()}
            axpy(F, v, sign, {idx(a, k): c for k, c in fcols[b].items()})
            dcols.append(v)
    D = Matrix.from_columns(F, n, dcols)
    return DGModule(u.over, degrees, acts, D, labels=labels, name=f"{u.name or 'U'}(x)F")


def shift(u: DGModule, s: int) -> DGModule:
    """A copy of ``u`` with every degree raised by ``s``."""
    out = tensor_free(u, ChainComplex.point(u.field, s))
    out.name = f"S^{s}{u.name or 'U'}"
    return out


def direct_sum(*mods: DGModule) -> DGModule:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    A = mods[0].over
    F = A.field
    n = sum(m.dim for m in mods)
    offs = []
    o = 0
    for m in mods:
        if m.over != A:
            raise ValueError("summands live over different algebras")
        offs.append(o)
        o += m.dim
    acts = []
    for g in range(A.ngens):
        cols = []
        for m, off in zip(mods, offs):
            cols.extend({i + off: c for i, c in col.items()} for col in m.action_cols[g])
        acts.append(Matrix.from_columns(F, n, cols))
    dcols = []
    for m, off in zip(mods, offs):
        dcols.extend({i + off: c for i, c in col.items()} for col in m.diff_cols)
    degrees = [d for m in mods for d in m.degrees]
    labels = [f"{m.name or 'U'}{k}.{lab}" for k, m in enumerate(mods) for lab in m.labels]
    return DGModule(A, degrees, acts, Matrix.from_columns(F, n, dcols), labels=labels, name="sum")


def chain_maps(M: DGModule, N: DGModule) -> list[Matrix]:
    """Basis of degree-0 A-linear chain maps ``M -> N`` (as N.dim x M.dim matrices)."""
    F = M.field
    # unknowns f[i, j] for deg N_i = deg M_j
    unknowns = [(i, j) for j in range(M.dim) for i in range(N.dim) if N.degrees[i] == M.degrees[j]]
    pos = {u: k for k, u in enumerate(unknowns)}
    rows: dict = {}

    def add(key, k, c):
        axpy(F, rows.setdefault(key, {}), c, {k: F.one})

    pairs = [(M.action_cols[g], N.action_cols[g], ("a", g)) for g in range(M.over.ngens)]
    pairs.append((M.diff_cols, N.diff_cols, ("d",)))
    for mcols, ncols, tag in pairs:
        # N-op . f - f . M-op = 0, column by column
        for (i, j), k in pos.items():
            for r, c in ncols[i].items():
                add((tag, r, j), k, c)
        for j in range(M.dim):
            for l, c in mcols[j].items():
                for i in range(N.dim):
                    if (i, l) in pos:
                        add((tag, i, j), pos[(i, l)], F.neg(c))
    vecs = kernel_vectors(F, len(unknowns), [r for r in rows.values() if r])
    out = []
    for v in vecs:
        data = [{} for _ in range(N.dim)]
        for k, c in v.items():
            i, j = unknowns[k]
            data[i][j] = c
        out.append(Matrix(F, N.dim, M.dim, data))
    return out


def mapping_cone(f: Matrix, M: DGModule, N: DGModule) -> DGModule:
    """``cone(f)_n = N_n + M_(n-1)`` with ``d(x, y) = (d x + f y, -d y)``.

    The shifted copy of M carries the action ``xi . y = -xi y`` for odd xi.
    """
    F = M.field
    A = M.over
    nN = N.dim
    n = nN + M.dim
    fcols = f.columns()
    acts = []
    for g in range(A.ngens):
        sign = F(-1 if A.gen_degrees[g] % 2 else 1)
        cols = [dict(col) for col in N.action_cols[g]]
        cols += [{i + nN: F.mul(sign, c) for i, c in col.items()} for col in M.action_cols[g]]
        acts.append(Matrix.from_columns(F, n, cols))
    dcols = [dict(col) for col in N.diff_cols]
    for j, col in enumerate(M.diff_cols):
        v = dict(fcols[j])
        axpy(F, v, F.neg(F.one), {i + nN: c for i, c in col.items()})
        dcols.append(v)
    degrees = list(N.degrees) + [d + 1 for d in M.degrees]
    labels = [f"N.{x}" for x in N.labels] + [f"sM.{x}" for x in M.labels]
    return DGModule(A, degrees, acts, Matrix.from_columns(F, n, dcols), labels=labels, name="cone")


def homology(x) -> Homology:
    return x.homology()
