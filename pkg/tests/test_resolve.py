import random
from math import comb

import pytest

from cicohom.algebra import QuotientRing
from cicohom.dgmodules import DGModule, algebra_module, residue_field
from cicohom.exactlin import Matrix
from cicohom.resolve import (ExtGroup, FreeResolution, ResourceLimitError, SemifreeResolution, ext_basis, ext_dims,
                             graded_ext_dims, lift_to_resolutions, minimal_resolution, prop51_resolution,
                             resolve_dg, yoneda_compose)

from conftest import lam, lam_i, random_dg_module, ring92, ring93


def permuted(U, perm):
    """Same module with basis vector i renamed perm[i]."""
    F = U.field
    n = U.dim
    inv = {p: i for i, p in enumerate(perm)}

    def conj(M):
        cols = [{perm[i]: c for i, c in M.column(inv[j]).items()} for j in range(n)]
        return Matrix.from_columns(F, n, cols)

    degrees = [U.degrees[inv[j]] for j in range(n)]
    return DGModule(U.over, degrees, [conj(a) for a in U.actions], conj(U.differential))


def test_k_over_dual_numbers():
    R = QuotientRing(1, ["x1^2"])
    res = minimal_resolution(residue_field(R), 10)
    assert isinstance(res, FreeResolution)
    assert res.betti().values == (1,) * 11
    assert res.is_minimal() and res.certify()


@pytest.mark.parametrize("d", [1, 3, 5])
def test_k_over_single_generator(d):
    A = lam(d)
    res = minimal_resolution(residue_field(A), 12)
    assert isinstance(res, SemifreeResolution)
    b = res.betti()
    assert b.as_dict() == {n: int(n % (d + 1) == 0) for n in range(13)}
    assert res.is_minimal() and res.certify()


def test_k_over_ci_ring():
    R = ring92(3)
    b = minimal_resolution(residue_field(R), 8).betti()
    assert list(b.values) == [comb(n + 2, 2) for n in range(9)]


@pytest.mark.parametrize("d, N, degrees", [(1, 8, [0, 2, 4, 6, 8]), (3, 8, [0, 4, 8]), (1, 0, [0])])
def test_closed_form(d, N, degrees):
    res = prop51_resolution(d, N)
    assert res.gen_degrees == degrees
    assert res.certify()
    assert res.betti(N) == resolve_dg(residue_field(lam(d)), N).betti(N)


def test_closed_form_rejects_even():
    with pytest.raises(ValueError):
        prop51_resolution(2, 4)


def test_kunneth_dimension_level():
    degs = (1, 3, 1)
    N = 12
    b = resolve_dg(residue_field(lam(*degs)), N).betti(N).values
    prod = [1] + [0] * N
    for d in degs:
        single = prop51_resolution(d, N).betti(N).values
        prod = [sum(prod[i] * single[n - i] for i in range(n + 1)) for n in range(N + 1)]
    assert list(b) == prod


def test_pivot_order_independence():
    rng = random.Random(3)
    A = lam(1, 1)
    for _ in range(8):
        U = random_dg_module(A, rng)
        perm = list(range(U.dim))
        rng.shuffle(perm)
        V = permuted(U, perm)
        assert resolve_dg(U, 6).betti(6) == resolve_dg(V, 6).betti(6)


def test_ring_pivot_order_independence():
    R = ring93()
    M = algebra_module(R)
    perm = [4, 2, 0, 3, 1]
    P = permuted(M, perm)
    assert minimal_resolution(M, 4).betti() == minimal_resolution(P, 4).betti()


def test_certificate_on_random_modules():
    rng = random.Random(8)
    A = lam(1, 3)
    for _ in range(6):
        res = resolve_dg(random_dg_module(A, rng), 8)
        assert res.check_d_squared() and res.check_chain_map() and res.certify() and res.is_minimal()


def test_budget():
    with pytest.raises(ResourceLimitError) as info:
        resolve_dg(residue_field(lam(1, 1, 1, 1, 1)), 20, budget=50)
    assert info.value.degree == 6
    assert info.value.partial is not None
    with pytest.raises(ResourceLimitError):
        minimal_resolution(residue_field(ring93()), 12, budget=100)


def test_ext_examples():
    A3 = lam(3)
    k3 = residue_field(A3)
    e = ext_dims(k3, k3, cutoff=12)
    assert e.as_dict() == {n: int(n % 4 == 0) for n in range(13)}
    A = lam(1, 1, 1)
    e = ext_dims(lam_i(A, 1), residue_field(A), cutoff=8)
    assert e.as_dict() == {n: int(n % 2 == 0) for n in range(9)}


def test_ext_into_lambda_is_socle_only():
    # Lambda is self-injective: Ext(k, Lambda) is k, sitting where Hom hits the socle
    B = lam(1, 1)
    e = ext_dims(residue_field(B), algebra_module(B), cutoff=6)
    assert e.start == -2
    assert e.as_dict() == {n: int(n == -2) for n in range(-2, 7)}


def test_ext_cutoff_guard():
    B = lam(1, 1)
    k = residue_field(B)
    res = resolve_dg(k, 2)
    with pytest.raises(ValueError, match="needs the resolution"):
        ExtGroup(res, k, 4)


def test_ext_to_k_equals_betti():
    rng = random.Random(21)
    A = lam(1, 1)
    for _ in range(10):
        U = random_dg_module(A, rng)
        res = resolve_dg(U, 8)
        e = ext_dims(U, residue_field(A), cutoff=7, start=res.betti().start, res=res)
        assert e.values == res.betti(7, start=e.start).values


def test_ring_ext_and_bass():
    R = ring92(2)
    k = residue_field(R)
    assert ext_dims(k, k, cutoff=5).values == (1, 2, 3, 4, 5, 6)
    # Gorenstein: Ext(k, R) is k in degree 0
    assert ext_dims(k, algebra_module(R), cutoff=4).values == (1, 0, 0, 0, 0)
    g = graded_ext_dims(k, k, cutoff=3)
    assert all(j == -n for (n, j), v in g.items() if v)


# -- Yoneda ------------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 3])
def test_chi_squared(d):
    A = lam(d)
    k = residue_field(A)
    w = d + 1
    res = resolve_dg(k, 3 * w + 1)
    g1 = ExtGroup(res, k, w)
    g2 = ExtGroup(res, k, 2 * w)
    assert len(g1) == len(g2) == 1
    prod = yoneda_compose(g1[0], g1[0])
    assert not g2.is_zero(prod)
    # chi^(1) chi^(1) = chi^(2) up to the normalisation of the basis
    assert g2.coordinates(prod)[0] != 0


def test_identity_class():
    A = lam(1, 1)
    k = residue_field(A)
    res = resolve_dg(k, 6)
    one = ExtGroup(res, k, 0)[0]
    g2 = ExtGroup(res, k, 2)
    for a in g2:
        assert g2.coordinates(yoneda_compose(one, a)) == g2.coordinates(a)
        assert g2.coordinates(yoneda_compose(a, one)) == g2.coordinates(a)


def test_degree_two_classes_commute():
    A = lam(1, 1)
    k = residue_field(A)
    res = resolve_dg(k, 6)
    g2 = ExtGroup(res, k, 2)
    g4 = ExtGroup(res, k, 4)
    a, b = g2[0], g2[1]
    assert g4.coordinates(yoneda_compose(a, b)) == g4.coordinates(yoneda_compose(b, a))
    # the three monomials of degree 4 are independent: Ext(k,k) is polynomial
    rows = [g4.coordinates(yoneda_compose(x, y)) for x, y in [(a, a), (a, b), (b, b)]]
    from cicohom.exactlin import rank
    assert rank(Matrix(A.field, 3, len(g4), [dict(enumerate(r)) for r in rows])) == 3


def test_associativity_and_bilinearity():
    A = lam(1, 3)
    k = residue_field(A)
    res = resolve_dg(k, 14)
    g2, g4 = ExtGroup(res, k, 2), ExtGroup(res, k, 4)
    g6, g8, g10 = ExtGroup(res, k, 6), ExtGroup(res, k, 8), ExtGroup(res, k, 10)
    a, b, c = g2[0], g4[0], g4[0]
    left = yoneda_compose(yoneda_compose(c, b), a)
    right = yoneda_compose(c, yoneda_compose(b, a))
    assert g10.coordinates(left) == g10.coordinates(right)
    s = yoneda_compose(b, a + a.scaled(3))
    assert g6.coordinates(s) == [x * 4 % 101 for x in g6.coordinates(yoneda_compose(b, a))]
    assert len(g4) == 2 and len(g8) == 3  # weights 2 and 4


def test_module_action_on_ext():
    # Ext(Lambda^(1), k) over Lambda(1,1) is a cyclic module over Ext(k,k)
    A = lam(1, 1)
    U = lam_i(A, 1)
    k = residue_field(A)
    res_u = resolve_dg(U, 6)
    res_k = resolve_dg(k, 3)
    alpha = ExtGroup(res_u, k, 0)[0]
    g2 = ExtGroup(res_u, k, 2)
    betas = ExtGroup(res_k, k, 2)
    images = [g2.coordinates(yoneda_compose(b, alpha)) for b in betas]
    assert len(g2) == 1
    assert any(c for r in images for c in r)


def test_lift_requires_matching_resolution():
    A = lam(1)
    k = residue_field(A)
    res = resolve_dg(k, 4)
    a = ExtGroup(res, k, 2)[0]
    other = resolve_dg(residue_field(A), 4)
    with pytest.raises(ValueError):
        lift_to_resolutions(a, other, 2)


def test_ext_basis_is_cocycles():
    A = lam(1, 1)
    U = lam_i(A, 1)
    grp = ext_basis(U, algebra_module(A), 0)
    for cls in grp:
        assert grp.is_cocycle(cls)
