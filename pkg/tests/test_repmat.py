from fractions import Fraction as F

import mpmath
import pytest

from biorth import (
    AWParams,
    InvalidParams,
    NegativeRadicand,
    SizeLimit,
    ZeroParameter,
    aw_coeffs,
    aw_eval,
    d_natural,
    e_natural,
    g_coeff,
    jacobi_moments,
    rep_orthonormal,
    rep_rational,
    t_polys,
    verify_algebra,
    verify_aw_match,
    verify_boundary,
    verify_uchiyama_algebra,
)
from biorth.repmat import uchiyama_coeffs


def test_rational_rep_entries(canonical):
    p = canonical
    dop, eop = rep_rational(p, 5)
    for k in range(5):
        assert dop.entry(k, k) == d_natural(p, k)
        assert eop.entry(k, k) == e_natural(p, k)
    for k in range(4):
        assert dop.entry(k, k + 1) == 1
        assert eop.entry(k + 1, k) == g_coeff(p, k)
        assert dop.entry(k + 1, k) == -p.b * p.d * p.q**k * g_coeff(p, k)
        assert eop.entry(k, k + 1) == -p.a * p.c * p.q**k
    assert dop.entry(0, 3) == 0  # outside the band


def test_algebra_on_grid(grid):
    for p in grid:
        dop, eop = rep_rational(p, 12)
        assert verify_algebra(dop, eop, p.q).passed


def test_algebra_input_guards(canonical):
    dop, eop = rep_rational(canonical, 4)
    small = rep_rational(canonical, 2)
    with pytest.raises(InvalidParams):
        verify_algebra(*small, canonical.q)
    fop, gop = rep_orthonormal(canonical, 4, prec_bits=64)
    with pytest.raises(InvalidParams):
        verify_algebra(fop, gop, canonical.q)


def test_boundary_vectors(grid):
    for p in grid:
        report = verify_boundary(*rep_rational(p, 10), p)
        assert report.passed


def test_sharp_flat_products_pass(grid):
    for p in grid:
        assert verify_uchiyama_algebra(p, 10).passed


def test_sharp_flat_literal_radical_fails_on_diagonal(canonical):
    # The stored products are normalized with radical square g_n.  Feeding
    # them unrescaled into the i = 0 diagonal of d e - q e d gives 601/1587
    # instead of 1 - q = 1/2: the literal square is inconsistent with the
    # exchange relation, which is why the verifier rescales by
    # (1 - q^n ac)(1 - q^n bd).
    p = canonical
    c0 = uchiyama_coeffs(p, 0)
    literal = (
        p.qprime * c0.d_nat * c0.e_nat
        + c0.dsharp_eflat_product
        - p.q * c0.esharp_dflat_product
    )
    assert literal == F(601, 1587)
    assert literal != p.qprime
    # the corrected square is the off-diagonal product of the recurrence
    scale = (1 - p.a * p.c) * (1 - p.b * p.d)
    assert scale * c0.a_squared == aw_coeffs(p, 0).A * aw_coeffs(p, 1).C


def test_aw_coeffs_edges(canonical):
    p = canonical
    assert aw_coeffs(p, 0).A == 1 / (1 - p.abcd)
    assert aw_coeffs(p, 0).C == 0  # the (1 - q^0) factor
    with pytest.raises(ZeroParameter):
        aw_coeffs(AWParams(1, F(1, 2), 0, 0, F(1, 2)), 1)


def test_aw_match(nonzero_grid):
    for p in nonzero_grid:
        assert verify_aw_match(p, 6).passed


def test_jacobi_moments_chebyshev():
    # zero diagonal, unit couplings: moments are aerated Catalan numbers
    diag = [F(0)] * 5
    off = [F(1)] * 4
    assert jacobi_moments(diag, off, 8) == [1, 0, 1, 0, 2, 0, 5, 0, 14]
    # an odd top power never reaches level 5 either, but k = 10 would
    with pytest.raises(SizeLimit):
        jacobi_moments(diag, off, 10)


def test_aw_eval_low_levels(canonical):
    p = canonical
    assert aw_eval(p, 0, 2) == 1
    # at level 0 the recurrence has no down-term (C_0 = 0), so it pins W_1
    t = F(3, 2)
    x = (t + 1 / t) / 2
    c = aw_coeffs(p, 0)
    assert c.C == 0
    assert c.A * aw_eval(p, 1, t) + c.B == 2 * x
    assert c.s == p.a + p.b + p.c + p.d
    assert c.sprime == 1 / p.a + 1 / p.b + 1 / p.c + 1 / p.d


def test_aw_eval_recurrence(nonzero_grid):
    for p in nonzero_grid[:3]:
        for t in (F(2), F(3, 2), F(5)):
            values = [aw_eval(p, n, t) for n in range(8)]
            twox = t + 1 / t
            for n in range(1, 7):
                c = aw_coeffs(p, n)
                assert c.A * values[n + 1] + c.B * values[n] + c.C * values[n - 1] == (
                    twox * values[n]
                )


def test_aw_eval_guards(canonical):
    with pytest.raises(ZeroParameter):
        aw_eval(canonical, 1, 0)
    with pytest.raises(ZeroParameter):
        aw_eval(AWParams(0, F(1, 2), F(-1, 3), F(-1, 4), F(1, 2)), 1, 2)


def test_t_polys(canonical):
    seq = t_polys(canonical, 4)
    assert seq.poly(0) == (1,)
    assert seq.poly(1) == (F(-13, 23), F(1))
    # recurrence cross-check at level 2
    b1 = (d_natural(canonical, 1) + e_natural(canonical, 1)) / 2
    lam1 = (
        (1 - canonical.a * canonical.c)
        * (1 - canonical.b * canonical.d)
        * g_coeff(canonical, 0)
        / 4
    )
    t1 = seq.poly(1)
    expected = (-b1 * t1[0] - lam1, t1[0] - b1 * t1[1], t1[1])
    assert seq.poly(2) == expected


def _dense_mul(x, y):
    n = len(x)
    return [
        [sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)
    ]


def test_orthonormal_rep_algebra_numerically(canonical):
    size = 8
    dop, eop = rep_orthonormal(canonical, size, prec_bits=256)
    with mpmath.workprec(256):
        de = _dense_mul(dop.to_dense(), eop.to_dense())
        ed = _dense_mul(eop.to_dense(), dop.to_dense())
        worst = mpmath.mpf(0)
        for i in range(size - 2):
            for j in range(size - 2):
                target = mpmath.mpf(1) / 2 if i == j else mpmath.mpf(0)
                worst = max(worst, abs(de[i][j] - canonical.q * ed[i][j] - target))
        assert worst < mpmath.mpf(10) ** -60


def test_orthonormal_is_similar_to_rational(canonical):
    # conjugating the exact rep by diag(Lambda_n^(1/2)) must reproduce the
    # orthonormal entries: super-diagonals become sqrt(g_n)
    size = 6
    dop_r, eop_r = rep_rational(canonical, size)
    dop_o, eop_o = rep_orthonormal(canonical, size, prec_bits=128)
    with mpmath.workprec(128):
        roots = [mpmath.sqrt(mpmath.mpf(g_coeff(canonical, k).numerator)
                             / mpmath.mpf(g_coeff(canonical, k).denominator))
                 for k in range(size - 1)]
        tol = mpmath.mpf(10) ** -30
        for k in range(size - 1):
            # upper entries gain a factor sqrt(g_k), lower entries lose one
            assert abs(dop_o.entry(k, k + 1) - roots[k] * dop_r.entry(k, k + 1)) < tol
            assert abs(eop_o.entry(k, k + 1) - roots[k] * eop_r.entry(k, k + 1)) < tol
            assert abs(roots[k] * eop_o.entry(k + 1, k) - eop_r.entry(k + 1, k)) < tol
            assert abs(roots[k] * dop_o.entry(k + 1, k) - dop_r.entry(k + 1, k)) < tol


def test_negative_radicand_detected():
    p = AWParams(2, 3, F(-1, 5), F(-1, 7), F(1, 2))
    assert g_coeff(p, 0) < 0
    with pytest.raises(NegativeRadicand):
        rep_orthonormal(p, 4)
