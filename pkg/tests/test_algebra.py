import pytest
from hypothesis import given, settings, strategies as st

from cicohom.algebra import (ExteriorAlgebra, InfiniteQuotientError, PolynomialCoordinateRing, QuotientRing,
                             RelationError, build_exterior, build_quotient, mult_operator)
from cicohom.exactlin import FieldSpec, Matrix, rank
from cicohom.polynomials import PolynomialSyntaxError

from conftest import ring92, ring93


def elt(A, label):
    return {A.labels.index(label): A.field.one}


def test_exterior_dims():
    A = build_exterior([1, 1])
    assert A.dim == 4
    assert sorted(A.degrees) == [0, 1, 1, 2]
    B = build_exterior([3])
    assert B.dim == 2 and sorted(B.degrees) == [0, 3]


def test_exterior_sign_rule():
    A = build_exterior([1, 1, 1])
    F = A.field
    x1, x2, x3 = (elt(A, f"xi{i}") for i in (1, 2, 3))
    x12 = A.multiply(x1, x2)
    assert A.multiply(x12, x3) == elt(A, "xi1*xi2*xi3")
    assert A.multiply(x2, x1) == {A.labels.index("xi1*xi2"): F(-1)}
    assert A.multiply(x1, x1) == {}


@pytest.mark.parametrize("bad", [[2], [1, 0], [-1], [1, 4]])
def test_exterior_rejects_bad_degrees(bad):
    with pytest.raises(ValueError):
        build_exterior(bad)


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_exterior_hilbert_binomial(c):
    from math import comb
    A = ExteriorAlgebra([1] * c)
    assert A.dim == 2 ** c
    assert A.hilbert_function() == {j: comb(c, j) for j in range(c + 1)}


def test_quotient_examples():
    R = ring92(3)
    assert R.dim == 8
    assert R.loewy_length() == 4
    S = ring93()
    assert S.dim == 5
    assert S.hilbert_function() == {0: 1, 1: 3, 2: 1}
    T = build_quotient(1, ["x1^2"])
    assert T.dim == 2


def test_normal_forms_93():
    S = ring93()
    assert S.normal_form("x1*x2") == {}
    assert S.normal_form("x2^2") == S.normal_form("x1^2")
    assert S.normal_form("x2^2") == S.normal_form("x3^2")
    assert S.normal_form("1") == {(0, 0, 0): S.field.one}
    with pytest.raises(PolynomialSyntaxError):
        S.normal_form("x4")


def test_quotient_errors():
    with pytest.raises(InfiniteQuotientError):
        QuotientRing(2, ["x1^2"])
    with pytest.raises(RelationError, match="linear part"):
        QuotientRing(2, ["x1 + x2^2", "x2^2"])
    with pytest.raises(RelationError, match="homogeneous"):
        QuotientRing(1, ["x1^2 + x1^3"])


def test_relation_index_on_syntax_error():
    with pytest.raises(PolynomialSyntaxError) as info:
        QuotientRing(2, ["x1^2", "x2^^2"])
    assert info.value.relation_index == 1


def test_mult_operator_examples():
    A = build_exterior([1, 1])
    m = mult_operator(elt(A, "xi1"), A)
    assert (m @ m).is_zero()
    assert rank(m) == 2
    T = QuotientRing(1, ["x1^2"])
    x = mult_operator(elt(T, "x1"), T)
    assert rank(x) == 1 and (x @ x).is_zero()
    S = ring93()
    assert rank(mult_operator(elt(S, "x1"), S)) == 2
    with pytest.raises(ValueError, match="homogeneous"):
        mult_operator({0: A.field.one, 1: A.field.one}, A)


@pytest.mark.parametrize("A", [ExteriorAlgebra([1, 1, 3]), ring92(3), ring93()], ids=["ext", "ci", "93"])
def test_mult_operator_is_multiplicative(A):
    F = A.field
    for i in range(A.dim):
        for j in range(A.dim):
            a, b = {i: F.one}, {j: F.one}
            lhs = mult_operator(a, A) @ mult_operator(b, A)
            ab = A.multiply(a, b)
            rhs = mult_operator(ab, A) if ab else Matrix.zeros(F, A.dim, A.dim)
            assert lhs == rhs


@pytest.mark.parametrize("A", [ring92(3), ring93(), QuotientRing(2, ["x1^3", "x2^2"])])
def test_loewy_length_by_products(A):
    l = A.loewy_length()
    acts = A.gens_actions()

    def power_nonzero(k):
        words = [[]]
        for _ in range(k):
            words = [w + [g] for w in words for g in range(len(acts))]
        for w in words:
            M = Matrix.identity(A.field, A.dim)
            for g in w:
                M = acts[g] @ M
            if not M.is_zero():
                return True
        return False

    assert power_nonzero(l - 1)
    assert not power_nonzero(l)


monomial = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
poly = st.dictionaries(monomial, st.integers(-5, 5), max_size=6)


@settings(max_examples=60, deadline=None)
@given(poly)
def test_normal_form_idempotent(f):
    S = ring93()
    F = S.field
    f = {m: F(c) for m, c in f.items() if F(c)}
    nf = S.normal_form(f)
    assert S.normal_form(nf) == nf


@settings(max_examples=40, deadline=None)
@given(poly, poly)
def test_normal_form_multiplicative(f, g):
    from cicohom import polynomials as P
    S = ring93()
    F = S.field
    f = {m: F(c) for m, c in f.items() if F(c)}
    g = {m: F(c) for m, c in g.items() if F(c)}

    def prod(a, b):
        out = {}
        for m, x in a.items():
            for n, y in b.items():
                k = P.mono_mul(m, n)
                out[k] = F.add(out.get(k, F.zero), F.mul(x, y))
        return {k: v for k, v in out.items() if v}

    lhs = S.to_element(prod(f, g))
    rhs = S.multiply(S.to_element(f), S.to_element(g))
    assert lhs == rhs


def test_rational_field_quotient():
    R = QuotientRing(2, ["x1^2 - 2*x2^2", "x1*x2"], FieldSpec.rational())
    assert R.dim == 4
    assert R.normal_form("x1^2") == R.normal_form("2*x2^2")


def test_coordinate_ring():
    S = PolynomialCoordinateRing.dual_to(ExteriorAlgebra([1, 1]))
    assert S.weights == (2, 2)
    assert S.hilbert_dims(6) == [1, 0, 2, 0, 3, 0, 4]
    assert S.dim_in_degree(4) == len(S.monomials(4)) == 3
    T = PolynomialCoordinateRing([1, 2])
    assert [T.dim_in_degree(n) for n in range(6)] == [1, 1, 2, 2, 3, 3]
