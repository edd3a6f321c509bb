"""Minimal resolutions, Ext dimensions and Yoneda products.

Two resolvers share the same kill-the-homology strategy:

* :func:`resolve_dg` builds a minimal semifree resolution of a finite DG
  module over an exterior algebra, one total degree at a time, by adjoining
  generators that kill the homology of the mapping cone;
* :func:`resolve_module` builds the classical minimal graded free resolution
  of a finite graded module over an Artinian quotient ring, one homological
  degree at a time and, inside it, one internal degree at a time.

Free modules are handled in k-coordinates: basis element ``(g, mu)``
(generator g times algebra monomial mu) has index ``g * dim(A) + mu``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra import ExteriorAlgebra, QuotientRing
from .dgmodules import DGModule, residue_field
from .exactlin import ColumnSolver, EchelonSpan, FieldSpec, axpy, echelon_of_rows, kernel_vectors, scale

__all__ = [
    "ResourceLimitError",
    "BettiSequence",
    "SemifreeResolution",
    "FreeResolution",
    "minimal_resolution",
    "resolve_dg",
    "resolve_module",
    "prop51_resolution",
    "ext_dims",
    "ExtClass",
    "ext_basis",
    "ExtGroup",
    "graded_ext_dims",
    "lift_to_resolutions",
    "yoneda_compose",
    "DEFAULT_BUDGET",
    "DEFAULT_CUTOFF",
]

DEFAULT_BUDGET = 20_000
DEFAULT_CUTOFF = 20


class ResourceLimitError(RuntimeError):
    """Generator budget exhausted; ``degree`` is where it happened."""

    def __init__(self, degree: int, budget: int, partial=None):
        super().__init__(f"generator budget {budget} exceeded while resolving degree {degree}")
        self.degree = degree
        self.budget = budget
        self.partial = partial


@dataclass(frozen=True)
class BettiSequence:
    """Dimensions ``values[i]`` of a graded object in degree ``start + i``."""

    start: int
    values: tuple

    @property
    def cutoff(self) -> int:
        return self.start + len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        i = n - self.start
        if i < 0:
            return 0
        if i >= len(self.values):
            raise IndexError(f"degree {n} beyond cutoff {self.cutoff}")
        return self.values[i]

    def as_dict(self) -> dict:
        return {self.start + i: v for i, v in enumerate(self.values)}

    def truncate(self, cutoff: int) -> "BettiSequence":
        return BettiSequence(self.start, self.values[: max(0, cutoff - self.start + 1)])

    @classmethod
    def from_dict(cls, d: Mapping[int, int], start: int, cutoff: int) -> "BettiSequence":
        return cls(start, tuple(d.get(n, 0) for n in range(start, cutoff + 1)))


# ---------------------------------------------------------------------------
# exterior side: semifree resolutions of DG modules
# ---------------------------------------------------------------------------

class SemifreeResolution:
    """Semifree DG module ``F`` with a quasi-isomorphism ``eps: F -> U``.

    ``gen_degrees[g]``, ``dF[g]`` (vector in F) and ``eps[g]`` (vector in U)
    describe the generators; the resolution is complete through total degree
    ``cutoff``.
    """

    def __init__(self, module: DGModule, gen_degrees, dF, eps, cutoff: int):
        self.module = module
        self.over: ExteriorAlgebra = module.over
        self.field = module.field
        self.gen_degrees = list(gen_degrees)
        self.dF = list(dF)
        self.eps = list(eps)
        self.cutoff = cutoff
        A = self.over
        self._by_degree: dict = {}
        for i, d in enumerate(A.degrees):
            self._by_degree.setdefault(d, []).append(i)

    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    def index(self, g: int, s: int) -> int:
        return g * self.over.dim + s

    def split(self, i: int) -> tuple[int, int]:
        return divmod(i, self.over.dim)

    def element_degree(self, i: int) -> int:
        g, s = self.split(i)
        return self.gen_degrees[g] + self.over.degrees[s]

    def basis_in_degree(self, m: int) -> list[int]:
        out = []
        D = self.over.dim
        for g, d in enumerate(self.gen_degrees):
            for s in self._by_degree.get(m - d, ()):
                out.append(g * D + s)
        return out

    def act(self, s: int, v: Mapping) -> dict:
        """Left multiplication by the algebra monomial ``s``."""
        A = self.over
        F = self.field
        D = A.dim
        out: dict = {}
        for i, c in v.items():
            g, t = divmod(i, D)
            for k, a in A.mul(s, t).items():
                axpy(F, out, F.mul(c, a), {g * D + k: F.one})
        return out

    def d(self, v: Mapping) -> dict:
        F = self.field
        A = self.over
        D = A.dim
        out: dict = {}
        for i, c in v.items():
            g, s = divmod(i, D)
            if s == 0:
                axpy(F, out, c, self.dF[g])
            else:
                sign = -1 if A.degrees[s] % 2 else 1
                axpy(F, out, F.mul(c, F(sign)), self.act(s, self.dF[g]))
        return out

    def augment(self, v: Mapping) -> dict:
        F = self.field
        D = self.over.dim
        U = self.module
        out: dict = {}
        for i, c in v.items():
            g, s = divmod(i, D)
            axpy(F, out, c, U.act(s, self.eps[g]))
        return out

    def betti(self, cutoff: int | None = None, start: int | None = None) -> BettiSequence:
        cutoff = self.cutoff if cutoff is None else cutoff
        if cutoff > self.cutoff:
            raise ValueError(f"resolution only complete through degree {self.cutoff}")
        lo = self.module.degree_range[0] if start is None else start
        counts: dict = {}
        for d in self.gen_degrees:
            counts[d] = counts.get(d, 0) + 1
        return BettiSequence.from_dict(counts, lo, cutoff)

    def is_minimal(self) -> bool:
        """Every differential coefficient lies in the augmentation ideal."""
        D = self.over.dim
        return all(i % D != 0 for v in self.dF for i in v)

    def check_d_squared(self) -> bool:
        return all(not self.d(self.dF[g]) for g in range(self.ngens))

    def check_chain_map(self) -> bool:
        U = self.module
        for g in range(self.ngens):
            lhs = self.augment(self.dF[g])
            rhs = U.d(self.eps[g])
            if lhs != rhs:
                return False
        return True

    def cone_homology(self, m: int) -> int:
        """``dim H_m(cone(eps))``, recomputed from scratch."""
        if m > self.cutoff:
            raise ValueError("degree beyond cutoff")
        return _cone_step(self, m)[0]

    def certify(self) -> bool:
        """d^2 = 0, eps is a chain map, minimality, and an acyclic cone through cutoff - 1."""
        if not (self.check_d_squared() and self.check_chain_map() and self.is_minimal()):
            return False
        lo = self.module.degree_range[0]
        return all(self.cone_homology(m) == 0 for m in range(lo, self.cutoff))

    def describe(self) -> list[tuple]:
        """``(generator, degree, differential terms)`` rows for reports."""
        A = self.over
        rows = []
        for g, deg in enumerate(self.gen_degrees):
            terms = []
            for i in sorted(self.dF[g]):
                h, s = self.split(i)
                terms.append((h, A.labels[s], self.field.to_int_str(self.dF[g][i])))
            rows.append((g, deg, terms))
        return rows


def _cone_step(res: SemifreeResolution, m: int, want_reps: bool = False):
    """Homology of the cone of ``eps`` in degree m for the current generators.

    Cone degree m is ``F_{m-1} + U_m`` with ``d(f, u) = (-d f, eps f + d u)``.
    Returns the dimension and, optionally, representatives of a basis of
    homology as pairs ``(f, u)``.
    """
    U = res.module
    F = res.field
    Fm1 = res.basis_in_degree(m - 1)
    Um = U.basis_in_degree(m)
    Fm2 = res.basis_in_degree(m - 2)
    Um1 = U.basis_in_degree(m - 1)
    Fm0 = res.basis_in_degree(m)
    Up1 = U.basis_in_degree(m + 1)
    # local coordinates of C_m
    cpos = {("f", i): k for k, i in enumerate(Fm1)}
    cpos.update({("u", i): len(Fm1) + k for k, i in enumerate(Um)})
    tpos = {("f", i): k for k, i in enumerate(Fm2)}
    tpos.update({("u", i): len(Fm2) + k for k, i in enumerate(Um1)})
    ncols = len(cpos)
    rows: list[dict] = [{} for _ in tpos]

    def image(f_part: Mapping, u_part: Mapping):
        out: dict = {}
        df = res.d(f_part) if f_part else {}
        for i, c in df.items():
            axpy(F, out, F.neg(c), {("f", i): F.one})
        e = res.augment(f_part) if f_part else {}
        du = U.d(u_part) if u_part else {}
        for i, c in e.items():
            axpy(F, out, c, {("u", i): F.one})
        for i, c in du.items():
            axpy(F, out, c, {("u", i): F.one})
        return out

    for i in Fm1:
        for key, c in image({i: F.one}, {}).items():
            rows[tpos[key]][cpos[("f", i)]] = c
    for i in Um:
        for key, c in image({}, {i: F.one}).items():
            rows[tpos[key]][cpos[("u", i)]] = c
    cycles = kernel_vectors(F, ncols, rows) if tpos else [{k: F.one} for k in range(ncols)]
    if not cycles:
        return 0, []
    span = EchelonSpan(F)
    for i in Fm0:
        b = image({i: F.one}, {})
        span.add({cpos[k]: c for k, c in b.items()})
    for i in Up1:
        b = image({}, {i: F.one})
        span.add({cpos[k]: c for k, c in b.items()})
    nb = span.rank
    dim = len(cycles) - nb
    reps = []
    if want_reps and dim:
        inv = {k: key for key, k in cpos.items()}
        for z in cycles:
            if span.add(z):
                f_part, u_part = {}, {}
                for k, c in z.items():
                    kind, i = inv[k]
                    (f_part if kind == "f" else u_part)[i] = c
                reps.append((f_part, u_part))
            if len(reps) == dim:
                break
    return dim, reps


def resolve_dg(u: DGModule, cutoff: int = DEFAULT_CUTOFF, budget: int = DEFAULT_BUDGET) -> SemifreeResolution:
    """Minimal semifree resolution of a finite DG module over an exterior algebra.

    Generators are adjoined in increasing total degree; a generator of
    degree m kills one class of ``H_m(cone(eps))``.  Choosing the new classes
    as a basis modulo boundaries makes the result minimal.
    """
    if not isinstance(u.over, ExteriorAlgebra):
        raise TypeError("resolve_dg needs a module over an exterior algebra")
    F = u.field
    res = SemifreeResolution(u, [], [], [], cutoff)
    if u.dim == 0:
        return res
    lo = u.degree_range[0]
    for m in range(lo, cutoff + 1):
        dim, reps = _cone_step(res, m, want_reps=True)
        for f_part, u_part in reps:
            res.gen_degrees.append(m)
            res.dF.append(scale(F, F.neg(F.one), f_part))
            res.eps.append(u_part)
            if res.ngens > budget:
                raise ResourceLimitError(m, budget, res)
    return res


def prop51_resolution(d: int, cutoff: int, field: FieldSpec | None = None) -> SemifreeResolution:
    """Closed-form resolution of k over the exterior algebra on one generator of degree d.

    Basis ``e_0, e_1, ...`` with ``|e_n| = (d+1) n``, ``d(e_0) = 0`` and
    ``d(e_n) = xi e_{n-1}``.
    """
    lam = ExteriorAlgebra([d], field)
    k = residue_field(lam)
    F = lam.field
    n_max = cutoff // (d + 1) if cutoff >= 0 else -1
    degs = [(d + 1) * n for n in range(n_max + 1)]
    xi = lam.gen_basis[0]
    dF = [{}] + [{(n - 1) * lam.dim + xi: F.one} for n in range(1, n_max + 1)]
    eps = [{0: F.one}] + [{} for _ in range(n_max)]
    return SemifreeResolution(k, degs, dF, eps, cutoff)


# ---------------------------------------------------------------------------
# quotient ring side: classical minimal graded free resolutions
# ---------------------------------------------------------------------------

class FreeResolution:
    """Minimal graded free resolution ``... -> F_1 -> F_0 -> M``.

    ``gen_degrees[n]`` lists the internal degrees of the generators of
    ``F_n``; ``images[n][g]`` is ``d(g)`` in k-coordinates of ``F_{n-1}``
    (for n = 0, the image in M).
    """

    def __init__(self, module: DGModule, cutoff: int):
        self.module = module
        self.over: QuotientRing = module.over
        self.field = module.field
        self.cutoff = cutoff
        self.gen_degrees: list[list[int]] = []
        self.images: list[list[dict]] = []
        self.certificate: list[dict] = []

    def betti(self, cutoff: int | None = None) -> BettiSequence:
        cutoff = self.cutoff if cutoff is None else cutoff
        if cutoff > self.cutoff:
            raise ValueError(f"resolution only complete through degree {self.cutoff}")
        return BettiSequence(0, tuple(len(self.gen_degrees[n]) for n in range(cutoff + 1)))

    def graded_betti(self) -> dict:
        out: dict = {}
        for n, degs in enumerate(self.gen_degrees):
            for j in degs:
                out[(n, j)] = out.get((n, j), 0) + 1
        return out

    def is_minimal(self) -> bool:
        D = self.over.dim
        return all(i % D != 0 for n in range(1, len(self.images)) for v in self.images[n] for i in v)

    def apply(self, n: int, v: Mapping) -> dict:
        """``d_n`` applied to a k-vector of ``F_n`` (augmentation for n = 0)."""
        R = self.over
        F = self.field
        D = R.dim
        out: dict = {}
        for i, c in v.items():
            g, mu = divmod(i, D)
            img = self.images[n][g]
            if n == 0:
                axpy(F, out, c, self.module.act(mu, img))
            else:
                axpy(F, out, c, _free_mul(R, mu, img))
        return out

    def check_d_squared(self) -> bool:
        for n in range(1, len(self.images)):
            for img in self.images[n]:
                if self.apply(n - 1, img):
                    return False
        return True

    def certify(self) -> bool:
        """d^2 = 0, minimality, and every kernel reached by the next image."""
        return (self.check_d_squared() and self.is_minimal()
                and all(c["kernel"] == c["image"] for c in self.certificate))


def _free_mul(R, mu: int, v: Mapping) -> dict:
    F = R.field
    D = R.dim
    out: dict = {}
    for i, c in v.items():
        g, nu = divmod(i, D)
        for k, a in R.mul(mu, nu).items():
            key = g * D + k
            w = F.add(out.get(key, F.zero), F.mul(c, a))
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def resolve_module(M: DGModule, cutoff: int = DEFAULT_CUTOFF, budget: int = DEFAULT_BUDGET,
                   keep: int | None = None) -> FreeResolution:
    """Minimal graded free resolution of a finite graded module over a quotient ring.

    ``keep`` limits how many differentials are retained in memory (older
    ones are dropped); Betti numbers are unaffected.
    """
    R = M.over
    if not isinstance(R, QuotientRing):
        raise TypeError("resolve_module needs a module over a quotient ring")
    if M.has_differential:
        raise ValueError("complexes of modules are not supported; pass a module")
    F = M.field
    D = R.dim
    res = FreeResolution(M, cutoff)
    by_deg: dict = {}
    for i, d in enumerate(R.degrees):
        by_deg.setdefault(d, []).append(i)
    total = 0

    # F_0: minimal generators of M
    gens, imgs = [], []
    for j in sorted(set(M.degrees)):
        span = EchelonSpan(F)
        for g, dg in enumerate(gens):
            for mu in by_deg.get(j - dg, ()):
                span.add(M.act(mu, imgs[g]))
        for u in M.basis_in_degree(j):
            if span.add({u: F.one}):
                gens.append(j)
                imgs.append({u: F.one})
    res.gen_degrees.append(gens)
    res.images.append(imgs)
    total += len(gens)
    if total > budget:
        raise ResourceLimitError(0, budget, res)

    for n in range(1, cutoff + 1):
        prev_degs = res.gen_degrees[n - 1]
        if not prev_degs:
            res.gen_degrees.append([])
            res.images.append([])
            continue
        lo, hi = min(prev_degs), max(prev_degs) + R.top_degree
        new_degs: list[int] = []
        new_imgs: list[dict] = []
        cert: dict = {"kernel": 0, "image": 0}
        for j in range(lo, hi + 1):
            cols = [g * D + mu for g, dg in enumerate(prev_degs) for mu in by_deg.get(j - dg, ())]
            if not cols:
                continue
            pos = {c: k for k, c in enumerate(cols)}
            # rows of d_{n-1} restricted to degree j, in target coordinates
            rowmap: dict = {}
            for k, c in enumerate(cols):
                for t, v in res.apply(n - 1, {c: F.one}).items():
                    rowmap.setdefault(t, {})[k] = v
            rows = list(rowmap.values())
            span = EchelonSpan(F)
            for g, dg in enumerate(new_degs):
                for mu in by_deg.get(j - dg, ()):
                    span.add({pos[i]: c for i, c in _free_mul(R, mu, new_imgs[g]).items()})
            ech = echelon_of_rows(F, rows)
            dim_ker = len(cols) - ech.rank
            if span.rank < dim_ker:
                for z in kernel_vectors(F, len(cols), rows, ech):
                    if span.add(z):
                        new_degs.append(j)
                        new_imgs.append({cols[k]: c for k, c in z.items()})
                        total += 1
                        if total > budget:
                            raise ResourceLimitError(n, budget, res)
                    if span.rank == dim_ker:
                        break
            cert["kernel"] += dim_ker
            cert["image"] += span.rank
        res.gen_degrees.append(new_degs)
        res.images.append(new_imgs)
        res.certificate.append(cert)
        if keep is not None and n - keep >= 1:
            res.images[n - keep - 1] = None
    return res


def minimal_resolution(u: DGModule, cutoff: int = DEFAULT_CUTOFF, budget: int = DEFAULT_BUDGET):
    """Dispatch on the algebra: semifree over exterior algebras, graded free over quotient rings."""
    if isinstance(u.over, ExteriorAlgebra):
        return resolve_dg(u, cutoff, budget)
    return resolve_module(u, cutoff, budget)


# ---------------------------------------------------------------------------
# Ext
# ---------------------------------------------------------------------------

class _HomComplex:
    """``Hom_A(F, V)`` for a semifree resolution F, in generator coordinates.

    A map of degree p is fixed by its values on generators and extends by
    ``phi(xi_S g) = (-1)^(p |S|) xi_S phi(g)``.  The differential is
    ``d phi = d_V phi - (-1)^p phi d_F``.
    """

    def __init__(self, res: SemifreeResolution, V: DGModule):
        if res.over != V.over:
            raise ValueError("resolution and target live over different algebras")
        self.res = res
        self.V = V
        self.field = res.field
        D = res.over.dim
        self.users: list[list] = [[] for _ in range(res.ngens)]
        for g2, img in enumerate(res.dF):
            for i, c in img.items():
                g, s = divmod(i, D)
                self.users[g].append((g2, s, c))
        self._basis: dict = {}

    def basis(self, p: int) -> list[tuple[int, int]]:
        if p not in self._basis:
            V = self.V
            out = []
            for g, dg in enumerate(self.res.gen_degrees):
                out.extend((g, v) for v in V.basis_in_degree(dg + p))
            self._basis[p] = out
        return self._basis[p]

    def positions(self, p: int) -> dict:
        return {key: k for k, key in enumerate(self.basis(p))}

    def coboundary(self, p: int, values: Mapping[int, Mapping]) -> dict:
        """``d phi`` for phi of degree p given on generators; returns generator -> vector."""
        F = self.field
        V = self.V
        degs = self.res.over.degrees
        out: dict = {}
        for g, val in values.items():
            if not val:
                continue
            dv = V.d(val)
            if dv:
                axpy(F, out.setdefault(g, {}), F.one, dv)
            for g2, s, c in self.users[g]:
                sign = -1 if (p + p * degs[s]) % 2 == 0 else 1
                axpy(F, out.setdefault(g2, {}), F.mul(F(sign), c), V.act(s, val))
        return {g: v for g, v in out.items() if v}

    def flatten(self, p: int, values: Mapping[int, Mapping]) -> dict:
        pos = self.positions(p)
        return {pos[(g, v)]: c for g, val in values.items() for v, c in val.items()}

    def unflatten(self, p: int, vec: Mapping) -> dict:
        basis = self.basis(p)
        out: dict = {}
        for k, c in vec.items():
            g, v = basis[k]
            out.setdefault(g, {})[v] = c
        return out

    def columns(self, p: int) -> list[dict]:
        """Columns of ``d: Hom_p -> Hom_{p-1}`` in flattened coordinates."""
        F = self.field
        return [self.flatten(p - 1, self.coboundary(p, {g: {v: F.one}})) for g, v in self.basis(p)]

    def rank(self, p: int) -> int:
        cols = self.columns(p)
        return echelon_of_rows(self.field, [c for c in cols if c]).rank


def _check_ext_range(res: SemifreeResolution, V: DGModule, n: int):
    if V.dim and res.cutoff < V.degree_range[1] + n + 1:
        raise ValueError(f"Ext^{n} needs the resolution through degree {V.degree_range[1] + n + 1}, "
                         f"have {res.cutoff}")


@dataclass
class ExtClass:
    """Cocycle of ``Hom_A(F, V)`` representing a class in ``Ext^n(U, V)``.

    ``values`` maps generators of the resolution F of U to vectors of V.
    """

    res: SemifreeResolution
    target: DGModule
    n: int
    values: dict = field(default_factory=dict)

    @property
    def hom_degree(self) -> int:
        return -self.n

    def value(self, x: Mapping) -> dict:
        """Evaluate on an element of F given in k-coordinates."""
        return _eval_hom(self.res, self.target, self.hom_degree, self.values, x)

    def scaled(self, c) -> "ExtClass":
        F = self.res.field
        vals = {g: scale(F, F(c), v) for g, v in self.values.items()}
        return ExtClass(self.res, self.target, self.n, {g: v for g, v in vals.items() if v})

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if other.res is not self.res or other.n != self.n:
            raise ValueError("classes live in different Ext groups")
        F = self.res.field
        out = {g: dict(v) for g, v in self.values.items()}
        for g, v in other.values.items():
            axpy(F, out.setdefault(g, {}), F.one, v)
        return ExtClass(self.res, self.target, self.n, {g: v for g, v in out.items() if v})


def _eval_hom(res: SemifreeResolution, V: DGModule, p: int, values: Mapping, x: Mapping) -> dict:
    F = res.field
    A = res.over
    D = A.dim
    out: dict = {}
    for i, c in x.items():
        g, s = divmod(i, D)
        val = values.get(g)
        if not val:
            continue
        if (p * A.degrees[s]) % 2:
            c = F.neg(c)
        axpy(F, out, c, V.act(s, val) if s else val)
    return out


class ExtGroup:
    """Basis of ``Ext^n(U, V)`` over an exterior algebra, with coordinates."""

    def __init__(self, res: SemifreeResolution, V: DGModule, n: int):
        _check_ext_range(res, V, n)
        self.res = res
        self.target = V
        self.n = n
        F = res.field
        hom = _HomComplex(res, V)
        self._hom = hom
        p = -n
        size = len(hom.basis(p))
        rows: dict = {}
        for k, col in enumerate(hom.columns(p)):
            for t, c in col.items():
                rows.setdefault(t, {})[k] = c
        cycles = kernel_vectors(F, size, list(rows.values()))
        self._span = EchelonSpan(F, track=True)
        for col in hom.columns(p + 1):
            self._span.add(col)
        self._nb = self._span.count
        self._reps: list[dict] = []
        self._tags: dict = {}       # span tag -> index of the representative
        for z in cycles:
            tag = self._span.count
            if self._span.add(z):
                self._tags[tag] = len(self._reps)
                self._reps.append(z)
        self.basis = [ExtClass(res, V, n, hom.unflatten(p, z)) for z in self._reps]

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    def is_cocycle(self, cls: ExtClass) -> bool:
        return not self._hom.coboundary(-self.n, cls.values)

    def coordinates(self, cls: ExtClass) -> list:
        """Coefficients of the class of ``cls`` in :attr:`basis`."""
        if cls.res is not self.res or cls.n != self.n:
            raise ValueError("class lives in a different Ext group")
        if not self.is_cocycle(cls):
            raise ValueError("not a cocycle")
        combo = self._span.express(self._hom.flatten(-self.n, cls.values))
        F = self.res.field
        coords = [F.zero] * len(self._reps)
        for t, c in combo.items():
            r = self._tags.get(t)
            if r is not None:
                coords[r] = c
        return coords

    def is_zero(self, cls: ExtClass) -> bool:
        return not any(self.coordinates(cls))


def ext_basis(u: DGModule, v: DGModule, n: int, res: SemifreeResolution | None = None,
              budget: int = DEFAULT_BUDGET) -> ExtGroup:
    """Cocycle representatives of a basis of ``Ext^n_A(U, V)`` over an exterior algebra."""
    if not isinstance(u.over, ExteriorAlgebra):
        raise TypeError("explicit Ext classes are only available over exterior algebras")
    if res is None:
        res = resolve_dg(u, v.degree_range[1] + n + 1 if v.dim else u.degree_range[0], budget)
    return ExtGroup(res, v, n)


def lift_to_resolutions(alpha: ExtClass, res_v: SemifreeResolution, max_degree: int):
    """Lift a cocycle ``alpha: F_U -> V`` to a map of resolutions ``F_U -> F_V``.

    Returns ``(lift, homotopy)``, both as generator -> vector dictionaries,
    with ``d lift = (-1)^p lift d`` and ``alpha - eps lift = d h - (-1)^(p+1) h d``
    on generators of degree at most ``max_degree``.
    """
    res_u = alpha.res
    V = alpha.target
    if res_v.module is not V:
        raise ValueError("second resolution does not resolve the target of the class")
    F = res_u.field
    A = res_u.over
    D = A.dim
    p = alpha.hom_degree
    if max_degree + p > res_v.cutoff:
        raise ValueError(f"lift needs the target resolution through degree {max_degree + p}")
    lift: dict = {}
    hom: dict = {}
    solvers: dict = {}
    sp = F.one if p % 2 == 0 else F.neg(F.one)
    for g, m in enumerate(res_u.gen_degrees):
        if m > max_degree:
            continue
        t = m + p
        if t not in solvers:
            xs = res_v.basis_in_degree(t)
            ys = V.basis_in_degree(t + 1)
            cols = []
            for i in xs:
                col = {("f", j): c for j, c in res_v.d({i: F.one}).items()}
                col.update({("u", j): c for j, c in res_v.augment({i: F.one}).items()})
                cols.append(col)
            for y in ys:
                cols.append({("u", j): c for j, c in V.d({y: F.one}).items()})
            keys = sorted({k for col in cols for k in col})
            pos = {k: n for n, k in enumerate(keys)}
            solver = ColumnSolver(F, [{pos[k]: c for k, c in col.items()} for col in cols])
            solvers[t] = (xs, ys, pos, solver)
        xs, ys, pos, solver = solvers[t]
        # right-hand side: ((-1)^p lift(dg), alpha(g) + (-1)^(p+1) h(dg))
        lift_dg: dict = {}
        h_dg: dict = {}
        for i, c in res_u.dF[g].items():
            g2, s = divmod(i, D)
            ds = A.degrees[s]
            if lift.get(g2):
                c1 = F.neg(c) if (p * ds) % 2 else c
                axpy(F, lift_dg, c1, res_v.act(s, lift[g2]))
            if hom.get(g2):
                c2 = F.neg(c) if ((p + 1) * ds) % 2 else c
                axpy(F, h_dg, c2, V.act(s, hom[g2]))
        rhs: dict = {}
        axpy(F, rhs, sp, {("f", j): c for j, c in lift_dg.items()})
        axpy(F, rhs, F.one, {("u", j): c for j, c in alpha.values.get(g, {}).items()})
        axpy(F, rhs, F.neg(sp), {("u", j): c for j, c in h_dg.items()})
        if any(k not in pos for k in rhs):
            raise ArithmeticError(f"lifting failed at generator {g}: class is not a cocycle")
        sol = solver.solve({pos[k]: c for k, c in rhs.items()})
        if sol is None:
            raise ArithmeticError(f"lifting failed at generator {g}: class is not a cocycle")
        x, y = {}, {}
        for k, c in sol.items():
            if k < len(xs):
                x[xs[k]] = c
            else:
                y[ys[k - len(xs)]] = c
        lift[g] = x
        hom[g] = y
    return lift, hom


def yoneda_compose(beta: ExtClass, alpha: ExtClass) -> ExtClass:
    """Yoneda product ``beta . alpha`` in ``Ext^(m+n)(U, W)``.

    ``alpha`` is a class in ``Ext^n(U, V)`` on a resolution of U and ``beta``
    a class in ``Ext^m(V, W)`` on a resolution of V.  The product is
    ``beta o lift(alpha)``.
    """
    if not isinstance(alpha.res.over, ExteriorAlgebra):
        raise TypeError("Yoneda products are only implemented over exterior algebras")
    W = beta.target
    n = alpha.n + beta.n
    q = beta.hom_degree
    top = W.degree_range[1] + n if W.dim else -1
    lift, _ = lift_to_resolutions(alpha, beta.res, min(top, alpha.res.cutoff))
    values = {}
    for g, x in lift.items():
        w = _eval_hom(beta.res, W, q, beta.values, x)
        if w:
            values[g] = w
    return ExtClass(alpha.res, W, n, values)


def _ext_dims_dg(u: DGModule, v: DGModule, cutoff: int, start: int | None, budget: int,
                 res: SemifreeResolution | None = None) -> BettiSequence:
    if v.dim == 0 or u.dim == 0:
        return BettiSequence(0 if start is None else start, tuple([0] * (cutoff + 1 - (start or 0))))
    vhi = v.degree_range[1]
    lo = u.degree_range[0] - vhi if start is None else start
    need = vhi + cutoff + 1
    if res is None or res.cutoff < need:
        res = resolve_dg(u, need, budget)
    hom = _HomComplex(res, v)
    ranks = {p: hom.rank(p) for p in range(-cutoff, -lo + 2)}
    vals = []
    for n in range(lo, cutoff + 1):
        p = -n
        vals.append(len(hom.basis(p)) - ranks[p] - ranks[p + 1])
    return BettiSequence(lo, tuple(vals))


def _ext_dims_ring(M: DGModule, N: DGModule, cutoff: int, budget: int,
                   res: FreeResolution | None = None, graded: bool = False):
    R = M.over
    F = M.field
    D = R.dim
    if res is None or res.cutoff < cutoff + 1 or any(x is None for x in res.images):
        res = resolve_module(M, cutoff + 1, budget)
    ndeg = sorted(set(N.degrees))

    def rank_block(n: int, j: int) -> int:
        # delta^n: Hom(F_n, N)_j -> Hom(F_{n+1}, N)_j
        src = [(g, w) for g, dg in enumerate(res.gen_degrees[n]) for w in N.basis_in_degree(dg + j)]
        if not src:
            return 0
        spos = {key: k for k, key in enumerate(src)}
        by_gen: dict = {}
        for g, w in src:
            by_gen.setdefault(g, []).append(w)
        rows = []
        for img in res.images[n + 1]:
            # d(g') = sum c (h, mu); (delta phi)(g') = sum c mu phi(h)
            parts: dict = {}
            for i, c in img.items():
                h, mu = divmod(i, D)
                for w in by_gen.get(h, ()):
                    for t, a in N.act(mu, {w: F.one}).items():
                        axpy(F, parts.setdefault(t, {}), F.mul(c, a), {spos[(h, w)]: F.one})
            rows.extend(r for r in parts.values() if r)
        return echelon_of_rows(F, rows).rank

    def hom_dim(n: int, j: int) -> int:
        return sum(len(N.basis_in_degree(dg + j)) for dg in res.gen_degrees[n])

    out: dict = {}
    for n in range(cutoff + 1):
        degs = res.gen_degrees[n]
        if not degs:
            continue
        js = sorted({e - dg for dg in degs for e in ndeg})
        for j in js:
            h = hom_dim(n, j)
            if not h:
                continue
            r_out = rank_block(n, j)
            r_in = rank_block(n - 1, j) if n >= 1 else 0
            dim = h - r_out - r_in
            if dim:
                out[(n, j)] = dim
    if graded:
        return out
    totals: dict = {}
    for (n, j), d in out.items():
        totals[n] = totals.get(n, 0) + d
    return BettiSequence.from_dict(totals, 0, cutoff)


def ext_dims(u: DGModule, v: DGModule, cutoff: int = DEFAULT_CUTOFF, start: int | None = None,
             budget: int = DEFAULT_BUDGET, res=None) -> BettiSequence:
    """``dim Ext^n(U, V)`` for n from the lowest possible degree through ``cutoff``.

    Over an exterior algebra this is the homology of ``Hom(F, V)`` for a
    semifree resolution F of U; over a quotient ring, of ``Hom_R(F, V)``
    for the minimal free resolution.
    """
    if u.over != v.over:
        raise ValueError("modules live over different algebras")
    if isinstance(u.over, ExteriorAlgebra):
        return _ext_dims_dg(u, v, cutoff, start, budget, res)
    return _ext_dims_ring(u, v, cutoff, budget, res)


def graded_ext_dims(u: DGModule, v: DGModule, cutoff: int = DEFAULT_CUTOFF,
                    budget: int = DEFAULT_BUDGET) -> dict:
    """``{(n, internal degree): dim}`` for Ext over a quotient ring."""
    if isinstance(u.over, ExteriorAlgebra):
        raise TypeError("internal degrees are only separate over a quotient ring")
    return _ext_dims_ring(u, v, cutoff, budget, graded=True)
