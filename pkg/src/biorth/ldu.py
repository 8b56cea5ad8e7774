"""Triangular-diagonal factorization of the bimoment block.

The conjectured decomposition is B = L D U with L unit lower triangular,
U unit upper triangular, and D diagonal with D_0 = 1, D_k = D_{k-1} g_{k-1}.
All four triangles (L, U and their inverses) are generated directly by
first-order entry recurrences; nothing here inverts a matrix numerically,
which is what lets verify_ldu treat L L^{-1} = I and U^{-1} U = I as real
checks instead of tautologies.

Determinants of the bimoment block are computed by three independent
routes: the product of the diagonal factors, a closed-form q-Pochhammer
product, and fraction-free elimination of the block itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from .bimoment import bimoment_table
from .core import (
    AWParams,
    InvalidParams,
    SingularParams,
    d_natural,
    e_natural,
    format_rational,
    g_coeff,
    qpoch,
    qpoch_multi,
)
from .reporting import VerificationReport

_KINDS = ("lower", "upper", "lower-inverse", "upper-inverse")


@dataclass(frozen=True)
class TriangularFactor:
    """Unit triangular matrix stored dense; kind records its role."""

    kind: str
    order: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParams(f"kind must be one of {_KINDS}, got {self.kind!r}")

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.order,
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }


@dataclass(frozen=True)
class DiagonalFactor:
    """Diagonal of the factorization: D_0 = 1, D_k = D_{k-1} g_{k-1}."""

    order: int
    values: tuple[Fraction, ...]

    def entry(self, k: int) -> Fraction:
        return self.values[k]

    def to_json_dict(self) -> dict:
        return {"n": self.order, "values": [format_rational(v) for v in self.values]}


def _zeros(n):
    return [[Fraction(0)] * (n + 1) for _ in range(n + 1)]


def build_L(p: AWParams, n: int) -> TriangularFactor:
    """Unit lower factor from the row recurrence

    L[i][j] = L[i-1][j-1] + dnat_j L[i-1][j] - bd q^j g_j L[i-1][j+1].
    """
    if n < 0:
        raise InvalidParams(f"order must be >= 0, got {n}")
    bd = p.b * p.d
    q = p.q
    dnat = [d_natural(p, j) for j in range(n)]
    g = [g_coeff(p, j) for j in range(max(n - 1, 0))]
    m = _zeros(n)
    m[0][0] = Fraction(1)
    for i in range(1, n + 1):
        prev = m[i - 1]
        row = m[i]
        for j in range(i + 1):
            acc = prev[j - 1] if j >= 1 else Fraction(0)
            if j <= i - 1:
                acc += dnat[j] * prev[j]
            if j + 1 <= i - 1:
                acc -= bd * q**j * g[j] * prev[j + 1]
            row[j] = acc
    return TriangularFactor("lower", n, tuple(tuple(r) for r in m))


def build_U(p: AWParams, n: int) -> TriangularFactor:
    """Unit upper factor from the column recurrence

    U[i][j] = U[i-1][j-1] + enat_i U[i][j-1] - ac q^i g_i U[i+1][j-1].
    """
    if n < 0:
        raise InvalidParams(f"order must be >= 0, got {n}")
    ac = p.a * p.c
    q = p.q
    enat = [e_natural(p, i) for i in range(n)]
    g = [g_coeff(p, i) for i in range(max(n - 1, 0))]
    m = _zeros(n)
    m[0][0] = Fraction(1)
    for j in range(1, n + 1):
        for i in range(j + 1):
            acc = m[i - 1][j - 1] if i >= 1 else Fraction(0)
            if i <= j - 1:
                acc += enat[i] * m[i][j - 1]
            if i + 1 <= j - 1:
                acc -= ac * q**i * g[i] * m[i + 1][j - 1]
            m[i][j] = acc
    return TriangularFactor("upper", n, tuple(tuple(r) for r in m))


def build_L_inverse(p: AWParams, n: int) -> TriangularFactor:
    """Inverse lower factor, generated by its own recurrence

    Linv[i][j] = Linv[i-1][j-1] - dnat_{i-1} Linv[i-1][j]
                 + bd q^(i-2) g_{i-2} Linv[i-2][j]

    (the two-back term is absent for i < 2).
    """
    if n < 0:
        raise InvalidParams(f"order must be >= 0, got {n}")
    bd = p.b * p.d
    q = p.q
    dnat = [d_natural(p, j) for j in range(n)]
    g = [g_coeff(p, j) for j in range(max(n - 1, 0))]
    m = _zeros(n)
    m[0][0] = Fraction(1)
    for i in range(1, n + 1):
        for j in range(i + 1):
            acc = m[i - 1][j - 1] if j >= 1 else Fraction(0)
            acc -= dnat[i - 1] * m[i - 1][j]
            if i >= 2:
                acc += bd * q ** (i - 2) * g[i - 2] * m[i - 2][j]
            m[i][j] = acc
    return TriangularFactor("lower-inverse", n, tuple(tuple(r) for r in m))


def build_U_inverse(p: AWParams, n: int) -> TriangularFactor:
    """Inverse upper factor:

    Uinv[i][j] = Uinv[i-1][j-1] - enat_{j-1} Uinv[i][j-1]
                 + ac q^(j-2) g_{j-2} Uinv[i][j-2].
    """
    if n < 0:
        raise InvalidParams(f"order must be >= 0, got {n}")
    ac = p.a * p.c
    q = p.q
    enat = [e_natural(p, i) for i in range(n)]
    g = [g_coeff(p, i) for i in range(max(n - 1, 0))]
    m = _zeros(n)
    m[0][0] = Fraction(1)
    for j in range(1, n + 1):
        for i in range(j + 1):
            acc = m[i - 1][j - 1] if i >= 1 else Fraction(0)
            acc -= enat[j - 1] * m[i][j - 1]
            if j >= 2:
                acc += ac * q ** (j - 2) * g[j - 2] * m[i][j - 2]
            m[i][j] = acc
    return TriangularFactor("upper-inverse", n, tuple(tuple(r) for r in m))


def build_D(p: AWParams, n: int) -> DiagonalFactor:
    values = [Fraction(1)]
    for k in range(1, n + 1):
        values.append(values[-1] * g_coeff(p, k - 1))
    return DiagonalFactor(n, tuple(values))


def _first_mismatch(a, b):
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (va, vb) in enumerate(zip(ra, rb)):
            if va != vb:
                return {"i": i, "j": j, "left": va, "right": vb}
    return None


def verify_ldu(p: AWParams, n: int) -> VerificationReport:
    """Check B = L D U on the order-n block, plus both inverse identities."""
    report = VerificationReport(params=p.to_map(), n=n)

    with report.timed("build"):
        lower = build_L(p, n)
        upper = build_U(p, n)
        lower_inv = build_L_inverse(p, n)
        upper_inv = build_U_inverse(p, n)
        diag = build_D(p, n)
        block = bimoment_table(p).block(n)

    with report.timed("factorization-product"):
        scaled = [
            [value * diag.values[j] for j, value in enumerate(row)]
            for row in lower.rows()
        ]
        product = _linalg.mat_mul(scaled, upper.rows())
        mismatch = _first_mismatch(block, product)
    report.add("bimoment-equals-LDU", mismatch is None, mismatch)

    identity = _linalg.mat_identity(n + 1)
    with report.timed("lower-inverse-identity"):
        mismatch = _first_mismatch(_linalg.mat_mul(lower.rows(), lower_inv.rows()), identity)
    report.add("lower-times-inverse", mismatch is None, mismatch)

    with report.timed("upper-inverse-identity"):
        mismatch = _first_mismatch(_linalg.mat_mul(upper_inv.rows(), upper.rows()), identity)
    report.add("inverse-times-upper", mismatch is None, mismatch)
    return report


def det_closed_form(p: AWParams, n: int) -> Fraction:
    """Closed-form determinant of the order-n block:

    prod_{i=1}^{n} (abcd/q, q, ab, bc, ad, cd; q)_i
                   / ((abcd/q; q^2)_i (abcd; q^2)_i^2 (abcd q; q^2)_i)
    """
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = p.abcd
    q2 = q * q
    out = Fraction(1)
    for i in range(1, n + 1):
        num = qpoch_multi(
            [abcd / q, q, a * b, b * c, a * d, c * d], q, i
        )
        den = (
            qpoch(abcd / q, q2, i)
            * qpoch(abcd, q2, i) ** 2
            * qpoch(abcd * q, q2, i)
        )
        if den == 0:
            raise SingularParams(f"closed-form determinant denominator vanishes at i={i}")
        out *= num / den
    return out


def det_bimoment(p: AWParams, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Determinant of the order-n block via three independent routes.

    Returns (product of diagonal factors, closed form, fraction-free
    elimination).  Route agreement is the caller's check; this function
    reports all three rather than collapsing them.
    """
    diag = build_D(p, n)
    from_diagonal = Fraction(1)
    for value in diag.values:
        from_diagonal *= value
    from_closed_form = det_closed_form(p, n)
    from_elimination = _linalg.det(bimoment_table(p).block(n))
    return from_diagonal, from_closed_form, from_elimination
