"""Monic bi-orthogonal polynomial sequences attached to the bimoment array.

P_n lives in the first letter, Q_n in the second.  Two independent
constructions must agree:

* rows of the inverse lower factor give the coefficients of P_n, columns
  of the inverse upper factor give Q_n;
* three-term recurrences driven by the tridiagonal coefficients:
      P_{n+1} = (x - dnat_n) P_n + bd q^(n-1) g_{n-1} P_{n-1}
      Q_{n+1} = (x - enat_n) Q_n + ac q^(n-1) g_{n-1} Q_{n-1}.

Pairings against the functional must then be diagonal:
L(P_n Q_m) = Lambda_n delta_{n,m} with Lambda_n the diagonal factor, and
for small orders the same polynomials arise from bordered determinants of
the moment block.
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
    SizeLimit,
    d_natural,
    e_natural,
    format_rational,
    g_coeff,
)
from .ldu import build_D, build_L, build_L_inverse, build_U, build_U_inverse
from .reporting import VerificationReport
from .wordfun import WordPoly, functional

_VARIABLES = ("d", "e")


@dataclass(frozen=True)
class PolySeq:
    """Sequence of monic polynomials; coeffs[n][k] multiplies x^k."""

    variable: str
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for n, row in enumerate(self.coeffs):
            if len(row) != n + 1 or row[n] != 1:
                raise InvalidParams(f"polynomial {n} is not monic of degree {n}")

    @property
    def count(self) -> int:
        return len(self.coeffs)

    def poly(self, n: int) -> tuple[Fraction, ...]:
        return self.coeffs[n]

    def to_json_dict(self) -> dict:
        return {
            "variable": self.variable,
            "coeffs": [[format_rational(v) for v in row] for row in self.coeffs],
        }


def _require_variable(variable: str) -> None:
    if variable not in _VARIABLES:
        raise InvalidParams(f"variable must be one of {_VARIABLES}, got {variable!r}")


def polys_from_inverse(p: AWParams, count: int, variable: str = "d") -> PolySeq:
    """P_0..P_{count-1} (or Q) read off the inverse triangular factors."""
    _require_variable(variable)
    if count <= 0:
        raise InvalidParams(f"count must be positive, got {count}")
    n = count - 1
    if variable == "d":
        inv = build_L_inverse(p, n)
        rows = [tuple(inv.entries[k][: k + 1]) for k in range(count)]
    else:
        inv = build_U_inverse(p, n)
        rows = [tuple(inv.entries[i][k] for i in range(k + 1)) for k in range(count)]
    return PolySeq(variable=variable, coeffs=tuple(rows))


def polys_from_recurrence(p: AWParams, count: int, variable: str = "d") -> PolySeq:
    """Same sequences generated by their three-term recurrences."""
    _require_variable(variable)
    if count <= 0:
        raise InvalidParams(f"count must be positive, got {count}")
    prod = p.b * p.d if variable == "d" else p.a * p.c
    diag = d_natural if variable == "d" else e_natural
    q = p.q
    seq = [(Fraction(1),)]
    prev_prev: tuple[Fraction, ...] = ()
    for n in range(count - 1):
        cur = seq[-1]
        shifted = (Fraction(0),) + cur
        scaled = tuple(diag(p, n) * v for v in cur) + (Fraction(0),)
        nxt = [s - t for s, t in zip(shifted, scaled)]
        if n >= 1:
            lam = prod * q ** (n - 1) * g_coeff(p, n - 1)
            for k, v in enumerate(prev_prev):
                nxt[k] += lam * v
        seq.append(tuple(nxt))
        prev_prev = cur
    return PolySeq(variable=variable, coeffs=tuple(seq))


def monomial_expansion_check(p: AWParams, count: int) -> bool:
    """Verify x^n = sum_k L[n][k] P_k and y^n = sum_k Q_k U[k][n]."""
    n = count - 1
    lower = build_L(p, n)
    upper = build_U(p, n)
    pseq = polys_from_inverse(p, count, "d")
    qseq = polys_from_inverse(p, count, "e")
    for m in range(count):
        acc_p = [Fraction(0)] * (m + 1)
        acc_q = [Fraction(0)] * (m + 1)
        for k in range(m + 1):
            lval = lower.entries[m][k]
            uval = upper.entries[k][m]
            for idx, coeff in enumerate(pseq.poly(k)):
                acc_p[idx] += lval * coeff
            for idx, coeff in enumerate(qseq.poly(k)):
                acc_q[idx] += uval * coeff
        expected = [Fraction(0)] * m + [Fraction(1)]
        if acc_p != expected or acc_q != expected:
            return False
    return True


def pairing(p: AWParams, pcoeffs, qcoeffs) -> Fraction:
    """L(P(x) Q(y)) with P in the first letter and Q in the second."""
    terms = {}
    for i, ci in enumerate(pcoeffs):
        if not ci:
            continue
        for j, cj in enumerate(qcoeffs):
            if cj:
                terms["d" * i + "e" * j] = ci * cj
    return functional(WordPoly(terms), p)


def biorthogonality_check(p: AWParams, count: int) -> VerificationReport:
    """Check L(P_n Q_m) = Lambda_n delta_{n,m} for all n, m < count."""
    report = VerificationReport(params=p.to_map(), n=count - 1)
    pseq = polys_from_inverse(p, count, "d")
    qseq = polys_from_inverse(p, count, "e")
    lam = build_D(p, count - 1)
    failure = None
    with report.timed("pairing-grid"):
        for n in range(count):
            for m in range(count):
                value = pairing(p, pseq.poly(n), qseq.poly(m))
                expected = lam.values[n] if n == m else Fraction(0)
                if value != expected:
                    failure = {"n": n, "m": m, "value": value, "expected": expected}
                    break
            if failure:
                break
    report.add("diagonal-pairing", failure is None, failure)

    degenerate = next((k for k, v in enumerate(lam.values) if v == 0), None)
    report.add(
        "nondegenerate-normalization",
        degenerate is None,
        None if degenerate is None else {"k": degenerate},
    )
    return report


_BORDER_LIMIT = 6


def bordered_determinant_check(p: AWParams, n: int) -> bool:
    """Compare P_n and Q_n with their bordered-determinant forms.

    P_n(x) = det of the moment block bordered by a final column of powers
    of x, divided by the order-(n-1) block determinant; Q_n mirrors with a
    final row.  Cofactor expansion over exact minors; guarded to n <= 6
    because the minor count grows quickly.
    """
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    if n > _BORDER_LIMIT:
        raise SizeLimit(f"bordered determinants are guarded to n <= {_BORDER_LIMIT}")
    pseq = polys_from_inverse(p, n + 1, "d")
    qseq = polys_from_inverse(p, n + 1, "e")
    if n == 0:
        return pseq.poly(0) == (1,) and qseq.poly(0) == (1,)

    table = bimoment_table(p)
    table.ensure(n)
    scale = _linalg.det(table.block(n - 1))
    if scale == 0:
        raise SingularParams(f"order-{n - 1} block determinant vanishes")
    # P_n: rows 0..n of the first n columns, bordered by powers of x.
    p_coeffs = []
    for i in range(n + 1):
        minor = [
            [table.entry(r, j) for j in range(n)] for r in range(n + 1) if r != i
        ]
        sign = -1 if (i + n) % 2 else 1
        p_coeffs.append(sign * _linalg.det(minor) / scale)
    # Q_n: columns 0..n of the first n rows, bordered by powers of y.
    q_coeffs = []
    for j in range(n + 1):
        minor = [
            [table.entry(i, col) for col in range(n + 1) if col != j] for i in range(n)
        ]
        sign = -1 if (j + n) % 2 else 1
        q_coeffs.append(sign * _linalg.det(minor) / scale)
    return tuple(p_coeffs) == pseq.poly(n) and tuple(q_coeffs) == qseq.poly(n)
