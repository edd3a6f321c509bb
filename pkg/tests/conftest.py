import pytest

from cicohom.algebra import ExteriorAlgebra, QuotientRing
from cicohom.dgmodules import (algebra_module, chain_maps, direct_sum, mapping_cone, quotient_by_generators,
                               residue_field, shift)
from cicohom.exactlin import FieldSpec, Matrix


@pytest.fixture
def F101():
    return FieldSpec.prime(101)


def lam(*degrees):
    return ExteriorAlgebra(list(degrees))


def lam_i(A, i):
    """Lambda^(i) = Lambda / (xi_1..xi_i); i = 0 is Lambda itself."""
    return quotient_by_generators(A, list(range(1, i + 1))) if i else algebra_module(A)


def ring92(c=3):
    return QuotientRing(c, [f"x{j}^2" for j in range(1, c + 1)])


def ring93():
    return QuotientRing(3, ["x1^2 - x2^2", "x2^2 - x3^2", "x1*x2", "x1*x3", "x2*x3"])


def _cyclic_pieces(A):
    c = A.ngens
    pieces = [residue_field(A), algebra_module(A)]
    for i in range(1, c + 1):
        pieces.append(quotient_by_generators(A, [i]))
    return pieces


def random_summands(A, rng, max_dim):
    pieces = _cyclic_pieces(A)
    out = []
    dim = 0
    while True:
        p = rng.choice(pieces)
        if dim + p.dim > max_dim:
            break
        s = rng.randint(0, 2)
        out.append(shift(p, s) if s else p)
        dim += p.dim
        if rng.random() < 0.4:
            break
    return out


def random_dg_module(A, rng, max_dim=6):
    """Cone of a random chain map between random sums of shifted cyclic modules."""
    F = A.field
    while True:
        left = random_summands(A, rng, max_dim)
        if not left:
            continue
        M = direct_sum(*left)
        room = max_dim - M.dim
        right = random_summands(A, rng, room) if room > 0 else []
        if not right:
            return M
        N = direct_sum(*right)
        basis = chain_maps(N, M)
        f = Matrix.zeros(F, M.dim, N.dim)
        for b in basis:
            f = f + b * F(rng.randint(0, F.p - 1 if F.p else 5))
        return mapping_cone(f, N, M)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
