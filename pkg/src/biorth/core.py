"""Exact scalars, parameter records, and q-series primitives.

Everything downstream works over arbitrary-precision rationals
(``fractions.Fraction``), so every identity check in the package is an exact
equality, never a tolerance comparison.  The only floating-point surface is
the optional high-precision view provided by :func:`to_aw` and the
orthonormal operator representations; those use mpmath at a precision
controlled by the ``BIORTH_PRECISION_BITS`` environment variable.

Two parameter records exist:

* :class:`HoppingRates` -- the physical description of the open asymmetric
  exclusion process: entry/exit rates ``alpha, beta, gamma, delta`` and the
  backward hopping ratio ``q``.
* :class:`AWParams` -- the algebraic parametrisation ``(a, b, c, d, q)`` in
  which the bimoment, factorization, and operator machinery is written.

:func:`to_rates` maps ``AWParams`` to ``HoppingRates`` exactly;
:func:`to_aw` inverts in floating point (the inverse involves square roots,
so it is rational only for perfect-square discriminants, see
:func:`to_aw_exact`).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, NamedTuple, Sequence

import mpmath


class BiorthError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(BiorthError):
    """A parameter record violates its admissibility constraints."""


class SingularParams(BiorthError):
    """A denominator in one of the closed-form coefficients vanishes."""


class DenominatorVanishes(SingularParams):
    """A q-Pochhammer factor in a basic hypergeometric denominator is zero."""


class UnsupportedQ(BiorthError):
    """An operation needs q invertible (q != 0) and was given q = 0."""


class ShapeError(BiorthError):
    """A word or matrix does not have the shape an operation requires."""


class SizeLimit(BiorthError):
    """A brute-force operation was asked to exceed its guarded size."""


class NotIrreducible(BiorthError):
    """A generator matrix does not have a one-dimensional stationary space."""


class NegativeRadicand(BiorthError):
    """An orthonormal representation needs sqrt of a negative value."""


class ZeroParameter(BiorthError):
    """A formula needs all of a, b, c, d nonzero (it divides by them)."""


# ---------------------------------------------------------------------------
# rational parsing / formatting

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational literal ``"p"`` or ``"p/q"``.

    Decimal notation is deliberately rejected: a string like ``"0.1"`` has no
    exact binary or decimal-free meaning in this context, and silently
    rounding it would poison every downstream exact-equality check.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise InvalidParams(
            f"not an exact rational literal (use 'p' or 'p/q'): {text!r}"
        )
    return Fraction(s)


def as_rational(value) -> Fraction:
    """Coerce int / Fraction / rational string to Fraction; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidParams(f"expected an exact rational, got {value!r}")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``"p"`` or ``"p/q"`` in lowest terms."""
    return str(Fraction(value))


def exact_sqrt(value: Fraction) -> Fraction | None:
    """Return the exact rational square root of ``value`` or None."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    sn, sd = isqrt(num), isqrt(den)
    if sn * sn == num and sd * sd == den:
        return Fraction(sn, sd)
    return None


def precision_bits() -> int:
    """Floating precision (bits) for the mpmath surfaces, default 256."""
    raw = os.environ.get("BIORTH_PRECISION_BITS", "")
    if not raw.strip():
        return 256
    try:
        bits = int(raw)
    except ValueError as exc:
        raise InvalidParams(f"BIORTH_PRECISION_BITS is not an integer: {raw!r}") from exc
    if bits < 8:
        raise InvalidParams(f"BIORTH_PRECISION_BITS too small: {bits}")
    return bits


def _to_mpf(value: Fraction):
    return mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class HoppingRates:
    """Boundary injection/extraction rates and hopping asymmetry.

    alpha, beta > 0 and gamma, delta >= 0 are per-site Poisson rates;
    q in [0, 1) is the ratio of backward to forward bulk hopping.
    """

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    q: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "q"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidParams("alpha and beta must be positive")
        if self.gamma < 0 or self.delta < 0:
            raise InvalidParams("gamma and delta must be nonnegative")
        if not 0 <= self.q < 1:
            raise InvalidParams(f"q must satisfy 0 <= q < 1, got {self.q}")

    def to_map(self) -> dict[str, str]:
        return {
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "gamma": format_rational(self.gamma),
            "delta": format_rational(self.delta),
            "q": format_rational(self.q),
        }

    @classmethod
    def from_map(cls, mapping) -> "HoppingRates":
        return cls(**{k: as_rational(mapping[k]) for k in ("alpha", "beta", "gamma", "delta", "q")})


@dataclass(frozen=True)
class AWParams:
    """Algebraic parameters (a, b, c, d, q), all exact rationals, q not in {0, 1}.

    The record itself only enforces q != 0, 1; whether a parameter set is
    usable to a given truncation depth is a separate question answered by
    :func:`validate`, because the singular locus depends on how far the
    coefficient recurrences must be unrolled.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    q: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "q"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.q == 0 or self.q == 1:
            raise InvalidParams("q must avoid 0 and 1")

    @property
    def qprime(self) -> Fraction:
        return 1 - self.q

    @property
    def abcd(self) -> Fraction:
        return self.a * self.b * self.c * self.d

    def swap_ab_cd(self) -> "AWParams":
        """Exchange a<->b and c<->d (transposes the bimoment array)."""
        return AWParams(self.b, self.a, self.d, self.c, self.q)

    def swap_ad_bc(self) -> "AWParams":
        """Exchange a<->d and b<->c (also transposes the bimoment array)."""
        return AWParams(self.d, self.c, self.b, self.a, self.q)

    def to_map(self) -> dict[str, str]:
        return {k: format_rational(getattr(self, k)) for k in ("a", "b", "c", "d", "q")}

    @classmethod
    def from_map(cls, mapping) -> "AWParams":
        return cls(**{k: as_rational(mapping[k]) for k in ("a", "b", "c", "d", "q")})


class ApproxAWParams(NamedTuple):
    """Floating-point (a, b, c, d, q) produced by :func:`to_aw`."""

    a: object
    b: object
    c: object
    d: object
    q: object


# ---------------------------------------------------------------------------
# q-series primitives


def qpoch(x: Fraction, q: Fraction, n: int) -> Fraction:
    """Finite q-Pochhammer (x; q)_n = prod_{k=0}^{n-1} (1 - x q^k)."""
    if n < 0:
        raise InvalidParams(f"qpoch needs n >= 0, got {n}")
    x = as_rational(x)
    q = as_rational(q)
    out = Fraction(1)
    xq = x
    for _ in range(n):
        out *= 1 - xq
        xq *= q
    return out


def qpoch_multi(xs: Iterable[Fraction], q: Fraction, n: int) -> Fraction:
    """Product of (x; q)_n over every x in xs."""
    out = Fraction(1)
    for x in xs:
        out *= qpoch(x, q, n)
    return out


def phi_terminating(
    num_params: Sequence[Fraction],
    den_params: Sequence[Fraction],
    q: Fraction,
    z: Fraction,
    n: int,
) -> Fraction:
    """Terminating basic hypergeometric sum r_phi_s, truncated at k = n.

    Computes sum_{k=0}^{n} of

        (a_1,...,a_r; q)_k / ((b_1,...,b_s; q)_k (q; q)_k)
            * ((-1)^k q^binom(k,2))^(1+s-r) * z^k,

    where (a_1,...,a_r; q)_k is the product of the individual Pochhammers.
    Termination is the caller's business: pass a numerator parameter q^(-n)
    to make the k > n tail vanish identically.

    Raises DenominatorVanishes if any denominator Pochhammer is zero for
    some k <= n.
    """
    if n < 0:
        raise InvalidParams(f"phi_terminating needs n >= 0, got {n}")
    nums = [as_rational(x) for x in num_params]
    dens = [as_rational(x) for x in den_params]
    q = as_rational(q)
    z = as_rational(z)
    exponent = 1 + len(dens) - len(nums)

    total = Fraction(0)
    num_prod = Fraction(1)
    den_prod = Fraction(1)
    qfac = Fraction(1)
    zpow = Fraction(1)
    for k in range(n + 1):
        if k > 0:
            qk1 = q ** (k - 1)
            for x in nums:
                num_prod *= 1 - x * qk1
            for x in dens:
                factor = 1 - x * qk1
                if factor == 0:
                    raise DenominatorVanishes(
                        f"(b; q)_k vanishes at b={x}, k={k}"
                    )
                den_prod *= factor
            qfactor = 1 - q**k
            if qfactor == 0:
                raise DenominatorVanishes(f"(q; q)_k vanishes at k={k}")
            qfac *= qfactor
            zpow *= z
        term = num_prod / (den_prod * qfac) * zpow
        if exponent != 0:
            base = Fraction(-1) ** k * q ** (k * (k - 1) // 2)
            term *= base**exponent
        total += term
    return total


# ---------------------------------------------------------------------------
# coefficient functions shared by the factorization and operator layers


def g_coeff(p: AWParams, j: int) -> Fraction:
    """Diagonal growth ratio g_j.

    g_j = (1 - abcd q^(j-1)) (1 - q^(j+1)) (1 - ab q^j) (1 - bc q^j)
          (1 - ad q^j) (1 - cd q^j)
        / ((1 - abcd q^(2j-1)) (1 - abcd q^(2j))^2 (1 - abcd q^(2j+1)))

    Raises SingularParams when the denominator vanishes.
    """
    if j < 0:
        raise InvalidParams(f"g_coeff needs j >= 0, got {j}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = p.abcd
    qj = q**j
    num = (
        (1 - abcd * q ** (j - 1))
        * (1 - q ** (j + 1))
        * (1 - a * b * qj)
        * (1 - b * c * qj)
        * (1 - a * d * qj)
        * (1 - c * d * qj)
    )
    den = (
        (1 - abcd * q ** (2 * j - 1))
        * (1 - abcd * q ** (2 * j)) ** 2
        * (1 - abcd * q ** (2 * j + 1))
    )
    if den == 0:
        raise SingularParams(f"g_{j} denominator vanishes for {p.to_map()}")
    return num / den


def d_natural(p: AWParams, n: int) -> Fraction:
    """Diagonal coefficient of the first tridiagonal operator at level n."""
    if n < 0:
        raise InvalidParams(f"d_natural needs n >= 0, got {n}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = p.abcd
    bd = b * d
    den = (1 - q ** (2 * n - 2) * abcd) * (1 - q ** (2 * n) * abcd)
    if den == 0:
        raise SingularParams(f"d_natural({n}) denominator vanishes for {p.to_map()}")
    bracket = (
        bd * (a + c)
        + (b + d) * q
        - abcd * (b + d) * q ** (n - 1)
        - (bd * (a + c) + abcd * (b + d)) * q**n
        - bd * (a + c) * q ** (n + 1)
        + abcd * bd * (a + c) * q ** (2 * n - 1)
        + abcd * (b + d) * q ** (2 * n)
    )
    return q ** (n - 1) / den * bracket


def e_natural(p: AWParams, n: int) -> Fraction:
    """Diagonal coefficient of the second tridiagonal operator at level n.

    Mirror image of :func:`d_natural` under a<->b, c<->d.
    """
    if n < 0:
        raise InvalidParams(f"e_natural needs n >= 0, got {n}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = p.abcd
    ac = a * c
    den = (1 - q ** (2 * n - 2) * abcd) * (1 - q ** (2 * n) * abcd)
    if den == 0:
        raise SingularParams(f"e_natural({n}) denominator vanishes for {p.to_map()}")
    bracket = (
        ac * (b + d)
        + (a + c) * q
        - abcd * (a + c) * q ** (n - 1)
        - (ac * (b + d) + abcd * (a + c)) * q**n
        - ac * (b + d) * q ** (n + 1)
        + abcd * ac * (b + d) * q ** (2 * n - 1)
        + abcd * (a + c) * q ** (2 * n)
    )
    return q ** (n - 1) / den * bracket


def validate(p: AWParams, n: int) -> None:
    """Check that p is usable up to truncation order n.

    Admissibility is defined operationally: every denominator appearing in
    any coefficient (g_j, the tridiagonal diagonals, the boundary moment
    recurrences, the determinant product) evaluated up to order n must be
    nonzero, and the diagonal ratios g_0 .. g_{n-1} must themselves be
    nonzero so the factorization diagonal stays invertible.  Raises
    SingularParams on the first violation.
    """
    if n < 0:
        raise InvalidParams(f"validate needs n >= 0, got {n}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = p.abcd
    if abcd == q:
        raise SingularParams("abcd = q is singular (first diagonal ratio degenerates)")
    for k in range(2 * n + 2):
        if abcd * q**k == 1:
            raise SingularParams(f"abcd q^{k} = 1 is singular")
    for k in range(n + 1):
        if a * c * q**k == 1:
            raise SingularParams(f"ac q^{k} = 1 is singular")
        if b * d * q**k == 1:
            raise SingularParams(f"bd q^{k} = 1 is singular")
    for k in range(n + 1):
        d_natural(p, k)
        e_natural(p, k)
    for k in range(n):
        if g_coeff(p, k) == 0:
            raise SingularParams(f"g_{k} = 0 degenerates the factorization diagonal")


def is_valid(p: AWParams, n: int) -> bool:
    """True iff :func:`validate` accepts p at order n."""
    try:
        validate(p, n)
    except SingularParams:
        return False
    return True


# ---------------------------------------------------------------------------
# parameter maps


def to_rates(p: AWParams) -> HoppingRates:
    """Exact map from (a, b, c, d, q) to hopping rates.

    alpha = (1-q) / ((1+a)(1+c))      gamma = -ac * alpha
    beta  = (1-q) / ((1+b)(1+d))      delta = -bd * beta

    Requires (1+a)(1+c) != 0, (1+b)(1+d) != 0, ac <= 0, bd <= 0 so the
    resulting rates are finite and have the right signs.
    """
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    left = (1 + a) * (1 + c)
    right = (1 + b) * (1 + d)
    if left == 0 or right == 0:
        raise InvalidParams("(1+a)(1+c) and (1+b)(1+d) must be nonzero")
    if a * c > 0 or b * d > 0:
        raise InvalidParams("ac <= 0 and bd <= 0 are required for nonnegative rates")
    alpha = (1 - q) / left
    beta = (1 - q) / right
    return HoppingRates(
        alpha=alpha,
        beta=beta,
        gamma=-a * c * alpha,
        delta=-b * d * beta,
        q=q,
    )


def _quadratic_roots_float(u, v, two_w):
    # roots of w x^2 - u x - v = 0 written as (u +- sqrt(u^2 + 4 w v)) / (2 w)
    disc = u * u + 2 * two_w * v
    root = mpmath.sqrt(disc)
    return (u + root) / two_w, (u - root) / two_w


def to_aw(rates: HoppingRates, prec_bits: int | None = None) -> ApproxAWParams:
    """Floating inverse of :func:`to_rates` at configurable precision.

    a and c are the two roots of  alpha x^2 - (1-q-alpha+gamma) x - gamma,
    b and d the two roots of  beta x^2 - (1-q-beta+delta) x - delta, with
    the + branch assigned to a (resp. b).  Returns mpmath floats computed
    at ``prec_bits`` bits (default: BIORTH_PRECISION_BITS or 256).
    """
    bits = precision_bits() if prec_bits is None else int(prec_bits)
    if bits < 8:
        raise InvalidParams(f"precision too small: {bits}")
    with mpmath.workprec(bits):
        alpha = _to_mpf(rates.alpha)
        beta = _to_mpf(rates.beta)
        gamma = _to_mpf(rates.gamma)
        delta = _to_mpf(rates.delta)
        q = _to_mpf(rates.q)
        a, c = _quadratic_roots_float(1 - q - alpha + gamma, gamma, 2 * alpha)
        b, d = _quadratic_roots_float(1 - q - beta + delta, delta, 2 * beta)
        return ApproxAWParams(a=a, b=b, c=c, d=d, q=q)


def to_aw_exact(rates: HoppingRates) -> AWParams:
    """Exact inverse of :func:`to_rates` when the discriminants are squares.

    The root formulas involve sqrt((1-q-alpha+gamma)^2 + 4 alpha gamma) and
    its beta/delta twin; when both are perfect squares of rationals the
    algebraic parameters are rational and are returned exactly, otherwise
    InvalidParams is raised (use :func:`to_aw` for the floating version).
    """
    out = []
    for rate_in, rate_out in ((rates.alpha, rates.gamma), (rates.beta, rates.delta)):
        u = 1 - rates.q - rate_in + rate_out
        root = exact_sqrt(u * u + 4 * rate_in * rate_out)
        if root is None:
            raise InvalidParams(
                "rates do not have rational algebraic parameters; "
                "pass a, b, c, d, q directly or use the floating map"
            )
        out.append(((u + root) / (2 * rate_in), (u - root) / (2 * rate_in)))
    (a, c), (b, d) = out
    return AWParams(a=a, b=b, c=c, d=d, q=rates.q)
