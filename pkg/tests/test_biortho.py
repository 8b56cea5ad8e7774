from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from biorth import (
    InvalidParams,
    PolySeq,
    SizeLimit,
    bimoment_block,
    biorthogonality_check,
    bordered_determinant_check,
    build_D,
    d_natural,
    g_coeff,
    monomial_expansion_check,
    pairing,
    polys_from_inverse,
    polys_from_recurrence,
)

from conftest import GRID, make_params


def test_polyseq_rejects_non_monic():
    with pytest.raises(InvalidParams):
        PolySeq(variable="d", coeffs=((F(2),),))
    with pytest.raises(InvalidParams):
        PolySeq(variable="d", coeffs=((F(1),), (F(0), F(1), F(0))))


def test_generation_routes_agree(grid):
    for p in grid:
        for variable in ("d", "e"):
            assert polys_from_inverse(p, 9, variable).coeffs == (
                polys_from_recurrence(p, 9, variable).coeffs
            )


def test_first_polys(canonical):
    p = canonical
    pseq = polys_from_inverse(p, 3, "d")
    assert pseq.poly(0) == (1,)
    # P_1(x) = x - dnat_0
    assert pseq.poly(1) == (-d_natural(p, 0), F(1))


@given(st.sampled_from(GRID), st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_pairing_is_diagonal(point, n, m):
    p = make_params(point)
    count = max(n, m) + 1
    pseq = polys_from_inverse(p, count, "d")
    qseq = polys_from_inverse(p, count, "e")
    value = pairing(p, pseq.poly(n), qseq.poly(m))
    if n != m:
        assert value == 0
    else:
        lam = F(1)
        for i in range(n):
            lam *= g_coeff(p, i)
        assert value == lam


def test_biorthogonality_report(grid):
    for p in grid:
        report = biorthogonality_check(p, 8)
        assert report.passed
        # normalizations are exactly the diagonal factors
        lam = build_D(p, 7)
        assert all(v != 0 for v in lam.values)


def test_monomial_expansion(grid):
    for p in grid:
        assert monomial_expansion_check(p, 8)


def test_bordered_determinants(grid):
    for p in grid:
        for n in range(5):
            assert bordered_determinant_check(p, n)


def test_bordered_determinant_guard(canonical):
    with pytest.raises(SizeLimit):
        bordered_determinant_check(canonical, 7)


def test_pairing_of_plain_monomials_recovers_moments(canonical):
    # pairing with unit coefficient vectors is just a bimoment lookup
    block = bimoment_block(canonical, 3)
    for i in range(4):
        for j in range(4):
            xs = (0,) * i + (1,)
            ys = (0,) * j + (1,)
            assert pairing(canonical, xs, ys) == block.entry(i, j)
