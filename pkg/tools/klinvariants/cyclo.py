"""
Exact arithmetic in the cyclotomic field Q(zeta_L) with L = 8r.

Every invariant value produced by the package lives in this one field:
it contains q = e^{2 pi i / r} (as zeta_L^8), i (as zeta_L^{2r}), sqrt(2)
and the square roots of r' and r'' that normalise the integral.

Representation
--------------
A :class:`CycloScalar` is a residue modulo the L-th cyclotomic polynomial
in the power basis ``1, z, ..., z^{d-1}`` (``d = phi(L)``), stored as a
tuple of integer numerators over one positive common denominator.  The
numerators and denominator are kept coprime, so two scalars are equal iff
their stored tuples are equal.  No floating point enters an equality test;
:func:`embed_numeric` exists for display and cross-checks only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Iterable

_logger = logging.getLogger(__name__)


class CycloError(ValueError):
    """Raised for arguments outside the field's supported range."""


class DegenerateNormalizationError(ZeroDivisionError):
    """Raised when a zero scalar is inverted."""


# ── Integer polynomials (low degree first) ───────────────────────────────


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials, requiring a monic divisor and zero remainder."""
    num = list(num)
    if den[-1] != 1:
        msg = "divisor must be monic"
        raise CycloError(msg)
    deg = len(den) - 1
    quot = [0] * (len(num) - deg)
    for k in range(len(num) - 1, deg - 1, -1):
        c = num[k]
        if c:
            quot[k - deg] = c
            for j, d in enumerate(den):
                num[k - deg + j] -= c * d
    if any(num[:deg]):
        msg = "cyclotomic division left a remainder"
        raise CycloError(msg)
    return quot


@cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Return Phi_n by dividing x^n - 1 by Phi_d over the proper divisors d of n."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


# ── Context ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CycloContext:
    """The field Q(zeta_L) attached to a root-of-unity order r.

    Attributes:
        r: Order of q, at least 3.
        L: Conductor, always ``8 * r``.
        phi_L: Coefficients of the L-th cyclotomic polynomial (low first).
        rprime: ``r / gcd(r, 2)``.
        rsecond: ``r / gcd(r, 4)``.
    """

    r: int
    L: int
    phi_L: tuple[int, ...]
    rprime: int
    rsecond: int
    _powers: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.phi_L) - 1

    def power_row(self, k: int) -> tuple[int, ...]:
        """Coefficients of ``z^k`` reduced modulo Phi_L."""
        return self._powers[k % self.L]


@cache
def make_context(r: int) -> CycloContext:
    """Build (and memoise) the field context for root-of-unity order *r*.

    Raises:
        CycloError: If ``r < 3``.
    """
    if r < 3:
        msg = f"root-of-unity order r must be at least 3, got {r}"
        raise CycloError(msg)
    L = 8 * r
    phi = cyclotomic_polynomial(L)
    d = len(phi) - 1

    # z^k mod Phi_L for 0 <= k < L, built by shifting with x^d = -sum phi_j x^j.
    rows: list[tuple[int, ...]] = []
    row = [1] + [0] * (d - 1)
    for _ in range(L):
        rows.append(tuple(row))
        top = row[-1]
        row = [0, *row[:-1]]
        if top:
            for j in range(d):
                row[j] -= top * phi[j]

    _logger.debug("built Q(zeta_%d) of degree %d for r=%d", L, d, r)
    return CycloContext(
        r=r,
        L=L,
        phi_L=phi,
        rprime=r // math.gcd(r, 2),
        rsecond=r // math.gcd(r, 4),
        _powers=tuple(rows),
    )


# ── Scalars ──────────────────────────────────────────────────────────────


class CycloScalar:
    """An exact element of Q(zeta_L).

    Supports ``+ - * /``, integer powers, comparison with ints and
    :class:`~fractions.Fraction`, and hashing.
    """

    __slots__ = ("_den", "_hash", "_num", "ctx")

    def __init__(
        self,
        ctx: CycloContext,
        num: Iterable[int],
        den: int = 1,
    ) -> None:
        num = list(num)
        d = ctx.degree
        if len(num) > d:
            num = _reduce(ctx, num)
        elif len(num) < d:
            num.extend([0] * (d - len(num)))
        if den == 0:
            msg = "zero denominator"
            raise DegenerateNormalizationError(msg)
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.ctx = ctx
        self._num = tuple(num)
        self._den = den
        self._hash: int | None = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: CycloContext) -> CycloScalar:
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: CycloContext) -> CycloScalar:
        return cls(ctx, (1,))

    @classmethod
    def from_rational(cls, ctx: CycloContext, value: int | Fraction) -> CycloScalar:
        value = Fraction(value)
        return cls(ctx, (value.numerator,), value.denominator)

    @classmethod
    def zeta_power(cls, ctx: CycloContext, k: int) -> CycloScalar:
        return _zeta_power(ctx, k % ctx.L)

    @classmethod
    def from_coeffs(
        cls, ctx: CycloContext, coeffs: Iterable[int | Fraction],
    ) -> CycloScalar:
        """Build a scalar from rational power-basis coefficients."""
        fracs = [Fraction(c) for c in coeffs]
        den = math.lcm(1, *(f.denominator for f in fracs))
        return cls(ctx, (f.numerator * (den // f.denominator) for f in fracs), den)

    # -- accessors -----------------------------------------------------------

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            msg = f"{self} is not rational"
            raise CycloError(msg)
        return Fraction(self._num[0], self._den)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other: object) -> CycloScalar | None:
        if isinstance(other, CycloScalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                msg = f"cannot mix scalars of r={self.ctx.r} and r={other.ctx.r}"
                raise CycloError(msg)
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.from_rational(self.ctx, other)
        return None

    def __add__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._den == self._den:
            return CycloScalar(
                self.ctx, (a + b for a, b in zip(self._num, o._num, strict=True)), self._den,
            )
        den = self._den * o._den
        return CycloScalar(
            self.ctx,
            (a * o._den + b * self._den for a, b in zip(self._num, o._num, strict=True)),
            den,
        )

    __radd__ = __add__

    def __neg__(self) -> CycloScalar:
        return CycloScalar(self.ctx, (-a for a in self._num), self._den)

    def __sub__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            c = o._num[0]
            return CycloScalar(self.ctx, (a * c for a in self._num), self._den * o._den)
        if self.is_rational():
            c = self._num[0]
            return CycloScalar(self.ctx, (a * c for a in o._num), self._den * o._den)
        prod = _poly_mul(list(self._num), list(o._num))
        return CycloScalar(self.ctx, _reduce(self.ctx, prod), self._den * o._den)

    __rmul__ = __mul__

    def inv(self) -> CycloScalar:
        """Multiplicative inverse by the extended Euclidean algorithm against Phi_L.

        Raises:
            DegenerateNormalizationError: If the scalar is zero.
        """
        if self.is_zero():
            msg = "cannot invert the zero scalar"
            raise DegenerateNormalizationError(msg)
        if self.is_rational():
            return CycloScalar.from_rational(self.ctx, 1 / self.to_fraction())
        inverse = _poly_inverse([Fraction(c) for c in self._num], self.ctx.phi_L)
        return CycloScalar.from_coeffs(self.ctx, inverse) * self._den

    def __truediv__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: object) -> CycloScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, exponent: int) -> CycloScalar:
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = CycloScalar.one(self.ctx)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> CycloScalar:
        """Complex conjugation, the automorphism z -> z^{-1}."""
        out = [0] * self.ctx.degree
        for k, c in enumerate(self._num):
            if c:
                for j, v in enumerate(self.ctx.power_row(-k)):
                    if v:
                        out[j] += c * v
        return CycloScalar(self.ctx, out, self._den)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other) if isinstance(other, (CycloScalar, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self) -> int:
        if self._hash is None:
            # rational values hash like the int or Fraction they equal
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((self.ctx.r, self._num, self._den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- display -------------------------------------------------------------

    def format(self) -> str:
        """Polynomial in ``z = zeta_L`` over a common denominator."""
        parts: list[str] = []
        for k, c in enumerate(self._num):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}")
        if not parts:
            return "0"
        text = " ".join(parts)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        if self._den == 1:
            return text
        if len(parts) > 1:
            text = f"({text})"
        return f"{text}/{self._den}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"CycloScalar(r={self.ctx.r}, {self.format()})"


def _reduce(ctx: CycloContext, poly: list[int]) -> list[int]:
    d = ctx.degree
    out = list(poly[:d]) + [0] * max(0, d - len(poly))
    for k in range(d, len(poly)):
        c = poly[k]
        if c:
            for j, v in enumerate(ctx.power_row(k)):
                if v:
                    out[j] += c * v
    return out


@cache
def _zeta_power(ctx: CycloContext, k: int) -> CycloScalar:
    return CycloScalar(ctx, ctx.power_row(k))


def _poly_inverse(a: list[Fraction], modulus: tuple[int, ...]) -> list[Fraction]:
    """Inverse of *a* modulo the monic irreducible *modulus* over Q."""

    def trim(p: list[Fraction]) -> list[Fraction]:
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_poly(
        n: list[Fraction], d: list[Fraction],
    ) -> tuple[list[Fraction], list[Fraction]]:
        n = list(n)
        q = [Fraction(0)] * max(1, len(n) - len(d) + 1)
        lead = d[-1]
        for k in range(len(n) - len(d), -1, -1):
            c = n[k + len(d) - 1] / lead
            q[k] = c
            if c:
                for j, v in enumerate(d):
                    n[k + j] -= c * v
        return trim(q), trim(n[: len(d) - 1])

    def sub_mul(x: list[Fraction], q: list[Fraction], y: list[Fraction]) -> list[Fraction]:
        prod = [Fraction(0)] * (len(q) + len(y) - 1) if q and y else []
        for i, qi in enumerate(q):
            if qi:
                for j, yj in enumerate(y):
                    prod[i + j] += qi * yj
        size = max(len(x), len(prod))
        out = [Fraction(0)] * size
        for i, v in enumerate(x):
            out[i] += v
        for i, v in enumerate(prod):
            out[i] -= v
        return trim(out)

    r0, r1 = [Fraction(c) for c in modulus], trim(list(a))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        quot, rem = divmod_poly(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub_mul(s0, quot, s1)
    if not r1:
        msg = "element is not invertible modulo the cyclotomic polynomial"
        raise DegenerateNormalizationError(msg)
    c = r1[0]
    return [v / c for v in s1]


# ── Roots of unity and q-numbers ─────────────────────────────────────────


def root_of_unity(ctx: CycloContext, num: int, den: int) -> CycloScalar:
    """Return ``e^{2 pi i num / den}``; *den* must divide L."""
    if den <= 0 or ctx.L % den:
        msg = f"root of unity of order {den} is not in Q(zeta_{ctx.L})"
        raise CycloError(msg)
    return CycloScalar.zeta_power(ctx, (ctx.L // den) * num)


def q_power(ctx: CycloContext, k: int) -> CycloScalar:
    """``q^k`` with ``q = e^{2 pi i / r}``."""
    return CycloScalar.zeta_power(ctx, 8 * k)


def imag_unit(ctx: CycloContext) -> CycloScalar:
    return root_of_unity(ctx, 1, 4)


def brace(ctx: CycloContext, k: int) -> CycloScalar:
    """``{k} = q^k - q^{-k}``."""
    return q_power(ctx, k) - q_power(ctx, -k)


@cache
def q_int(ctx: CycloContext, k: int) -> CycloScalar:
    """Quantum integer ``[k] = {k} / {1}``."""
    return brace(ctx, k) / brace(ctx, 1)


@cache
def q_fact(ctx: CycloContext, k: int) -> CycloScalar:
    """Quantum factorial ``[k][k-1]...[1]``; ``[0]! = 1``."""
    result = CycloScalar.one(ctx)
    for j in range(1, k + 1):
        result = result * q_int(ctx, j)
    return result


def q_binom(ctx: CycloContext, k: int, l: int) -> CycloScalar:  # noqa: E741
    """Quantum binomial ``[k]! / ([l]! [k-l]!)``.

    Raises:
        CycloError: If ``l`` is outside ``[0, k]``.
        DegenerateNormalizationError: If the denominator vanishes at this root.
    """
    if not 0 <= l <= k:
        msg = f"q_binom requires 0 <= l <= k, got k={k}, l={l}"
        raise CycloError(msg)
    den = q_fact(ctx, l) * q_fact(ctx, k - l)
    if den.is_zero():
        msg = f"q_binom({k}, {l}) has a vanishing denominator at r={ctx.r}"
        raise DegenerateNormalizationError(msg)
    return q_fact(ctx, k) / den


# ── Number theory ────────────────────────────────────────────────────────


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol ``(a/n)`` by the quadratic-reciprocity loop.

    Raises:
        CycloError: If *n* is not a positive odd integer.
    """
    if n <= 0 or n % 2 == 0:
        msg = f"n must be a positive odd integer, got {n}"
        raise CycloError(msg)

    a %= n
    result = 1

    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result

        a, n = n, a

        if a % 4 == 3 and n % 4 == 3:
            result = -result

        a %= n

    return result if n == 1 else 0


def gauss_sum(ctx: CycloContext, a: int, b: int, c: int) -> CycloScalar:
    """Generalised quadratic Gauss sum ``sum_{n<c} zeta_c^{a n^2 + b n}``."""
    if c <= 0 or ctx.L % c:
        msg = f"Gauss sum modulus {c} must divide L={ctx.L}"
        raise CycloError(msg)
    step = ctx.L // c
    out = [0] * ctx.degree
    for n in range(c):
        for j, v in enumerate(ctx.power_row(step * (a * n * n + b * n))):
            if v:
                out[j] += v
    return CycloScalar(ctx, out)


@cache
def sqrt_nat(ctx: CycloContext, m: int) -> CycloScalar:
    """The positive square root of the natural number *m* inside the field.

    Built from Gauss sums: ``G(1,0,m) = eps_m sqrt(m)`` with ``eps_m`` in
    ``{1, i, 1+i}`` by the residue of m mod 4, and ``sqrt(2)`` as
    ``zeta_8 + zeta_8^{-1}`` for the ``m = 2 mod 4`` case.

    Raises:
        CycloError: If ``4m`` does not divide L.
    """
    if m <= 0 or ctx.L % (4 * m):
        msg = f"sqrt({m}) needs 4*{m} to divide L={ctx.L}"
        raise CycloError(msg)
    root = math.isqrt(m)
    if root * root == m:
        return CycloScalar.from_rational(ctx, root)
    i = imag_unit(ctx)
    if m % 2 == 1:
        eps = CycloScalar.one(ctx) if m % 4 == 1 else i
        x = gauss_sum(ctx, 1, 0, m) / eps
    elif m % 4 == 0:
        x = gauss_sum(ctx, 1, 0, m) / (i + 1)
    else:
        sqrt2 = root_of_unity(ctx, 1, 8) + root_of_unity(ctx, -1, 8)
        x = sqrt2 * sqrt_nat(ctx, m // 2)
    if x * x != m:
        msg = f"square-root construction failed for m={m}"
        raise CycloError(msg)
    if embed_numeric(x)[0] < 0:
        x = -x
    return x


def embed_numeric(x: CycloScalar) -> tuple[float, float]:
    """Evaluate *x* at ``e^{2 pi i / L}`` in double precision."""
    powers = np.exp(2j * np.pi * np.arange(x.ctx.degree) / x.ctx.L)
    coeffs = np.array([float(Fraction(c, x.denominator)) for c in x.numerators])
    value = complex(np.dot(coeffs, powers))
    return (value.real, value.imag)
