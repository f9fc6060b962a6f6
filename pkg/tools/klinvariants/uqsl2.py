"""
The small quantum group u_q(sl2) at q = e^{2 pi i / r}.

Elements are sparse combinations of PBW monomials ``E^a F^b K^c`` with
``0 <= a, b, c < r'``.  Products are normal-ordered by rewriting with

    K E = q^2 E K,    K F = q^{-2} F K,    E F - F E = (K - K^{-1}) / (q - q^{-1}),

and ``E^{r'} = F^{r'} = 0``, ``K^{r'} = 1``.  The Hopf structure is

    Delta(E) = E (x) K + 1 (x) E      S(E) = -E K^{-1}
    Delta(F) = F (x) 1 + K^{-1} (x) F  S(F) = -K F
    Delta(K) = K (x) K                 S(K) = K^{-1}

extended multiplicatively (S anti-multiplicatively).  Everything derived
here (R, M, u, the ribbon elements, integral and cointegral) is built
from these rules and cached on the :class:`UqContext`.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import Any

from .cyclo import (
    CycloContext,
    CycloScalar,
    brace,
    imag_unit,
    jacobi,
    make_context,
    q_fact,
    q_power,
    sqrt_nat,
)
from .rank import exact_rank

_logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]
Scalarlike = CycloScalar | int | Fraction

ONE: Triple = (0, 0, 0)


# ── Context ──────────────────────────────────────────────────────────────


class UqContext:
    """Immutable parameters of u_q(sl2) plus per-context memo tables.

    Attributes:
        cyclo: The coefficient field.
        rprime: Exponent bound ``r'`` of the PBW basis.
        dim: ``r'^3``.
    """

    def __init__(self, r: int) -> None:
        self.cyclo: CycloContext = make_context(r)
        self.rprime: int = self.cyclo.rprime
        self.dim: int = self.rprime**3
        # Memo tables; filled lazily, never invalidated.
        self._nf: dict[tuple[int, int], dict[Triple, CycloScalar]] = {}
        self._products: dict[tuple[Triple, Triple], dict[Triple, CycloScalar]] = {}
        self._coproducts: dict[Triple, TensorElement] = {}
        self._antipodes: dict[Triple, AlgebraElement] = {}
        self._antipode_invs: dict[Triple, AlgebraElement] = {}
        self._derived: dict[str, Any] = {}

    @property
    def r(self) -> int:
        return self.cyclo.r

    def basis(self) -> list[Triple]:
        """PBW index set in lexicographic order."""
        n = self.rprime
        return [(a, b, c) for a in range(n) for b in range(n) for c in range(n)]

    def scalar(self, value: Scalarlike) -> CycloScalar:
        if isinstance(value, CycloScalar):
            return value
        return CycloScalar.from_rational(self.cyclo, value)

    def q(self, k: int = 1) -> CycloScalar:
        return q_power(self.cyclo, k)

    def cached(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self._derived:
            _logger.debug("building %s at r=%d", key, self.r)
            self._derived[key] = build()
        return self._derived[key]

    def __repr__(self) -> str:
        return f"UqContext(r={self.r}, rprime={self.rprime}, dim={self.dim})"


@cache
def make_uq(r: int) -> UqContext:
    """Return the (memoised) u_q(sl2) context for order *r*."""
    return UqContext(r)


def _accumulate(
    acc: dict[Any, CycloScalar], key: Any, value: CycloScalar,
) -> None:
    current = acc.get(key)
    total = value if current is None else current + value
    if total.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = total


def format_monomial(m: Triple) -> str:
    a, b, c = m
    parts = [f"{sym}^{e}" for sym, e in (("E", a), ("F", b), ("K", c)) if e]
    return " ".join(parts) if parts else "1"


# ── Elements ─────────────────────────────────────────────────────────────


class AlgebraElement:
    """A sparse linear combination of PBW monomials."""

    __slots__ = ("ctx", "terms")

    def __init__(
        self, ctx: UqContext, terms: Mapping[Triple, CycloScalar] | None = None,
    ) -> None:
        self.ctx = ctx
        self.terms: dict[Triple, CycloScalar] = {
            k: v for k, v in (terms or {}).items() if not v.is_zero()
        }

    @classmethod
    def zero(cls, ctx: UqContext) -> AlgebraElement:
        return cls(ctx)

    @classmethod
    def combine(
        cls, ctx: UqContext, parts: Iterable[tuple[AlgebraElement, Scalarlike]],
    ) -> AlgebraElement:
        """``sum c_k x_k`` accumulated in one pass."""
        acc: dict[Triple, CycloScalar] = {}
        for x, c in parts:
            c = ctx.scalar(c)
            for k, v in x.terms.items():
                _accumulate(acc, k, v * c)
        return cls(ctx, acc)

    @classmethod
    def one(cls, ctx: UqContext) -> AlgebraElement:
        return cls.monomial(ctx, ONE)

    @classmethod
    def monomial(
        cls, ctx: UqContext, m: Triple, coeff: Scalarlike = 1,
    ) -> AlgebraElement:
        n = ctx.rprime
        a, b, c = m
        if a >= n or b >= n:
            return cls(ctx)
        return cls(ctx, {(a, b, c % n): ctx.scalar(coeff)})

    def __iter__(self) -> Iterator[tuple[Triple, CycloScalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, m: Triple) -> CycloScalar:
        return self.terms.get(m, CycloScalar.zero(self.ctx.cyclo))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(acc, k, v)
        return AlgebraElement(self.ctx, acc)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, s: Scalarlike) -> AlgebraElement:
        s = self.ctx.scalar(s)
        if s.is_zero():
            return AlgebraElement(self.ctx)
        return AlgebraElement(self.ctx, {k: v * s for k, v in self.terms.items()})

    def __mul__(self, other: object) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (CycloScalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> AlgebraElement:
        if isinstance(other, (CycloScalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def format(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({v}) * {format_monomial(k)}" for k, v in sorted(self.terms.items())
        )

    def __repr__(self) -> str:
        return f"AlgebraElement({self.format()})"


class TensorElement:
    """A sparse rank-n tensor over u_q(sl2); rank 0 holds a single scalar."""

    __slots__ = ("ctx", "rank", "terms")

    def __init__(
        self,
        ctx: UqContext,
        rank: int,
        terms: Mapping[tuple[Triple, ...], CycloScalar] | None = None,
    ) -> None:
        self.ctx = ctx
        self.rank = rank
        self.terms: dict[tuple[Triple, ...], CycloScalar] = {}
        for k, v in (terms or {}).items():
            if len(k) != rank:
                msg = f"tensor key {k} does not have rank {rank}"
                raise ValueError(msg)
            if not v.is_zero():
                self.terms[k] = v

    @classmethod
    def zero(cls, ctx: UqContext, rank: int) -> TensorElement:
        return cls(ctx, rank)

    @classmethod
    def combine(
        cls,
        ctx: UqContext,
        rank: int,
        parts: Iterable[tuple[TensorElement, Scalarlike]],
    ) -> TensorElement:
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        for t, c in parts:
            c = ctx.scalar(c)
            for k, v in t.terms.items():
                _accumulate(acc, k, v * c)
        return cls(ctx, rank, acc)

    @classmethod
    def one(cls, ctx: UqContext, rank: int) -> TensorElement:
        return cls(ctx, rank, {(ONE,) * rank: CycloScalar.one(ctx.cyclo)})

    @classmethod
    def scalar(cls, ctx: UqContext, s: Scalarlike) -> TensorElement:
        return cls(ctx, 0, {(): ctx.scalar(s)})

    @classmethod
    def from_algebra(cls, x: AlgebraElement) -> TensorElement:
        return cls(x.ctx, 1, {(k,): v for k, v in x.terms.items()})

    @classmethod
    def pure(cls, factors: Iterable[AlgebraElement]) -> TensorElement:
        """``x_1 (x) x_2 (x) ... (x) x_n`` for algebra elements."""
        factors = list(factors)
        ctx = factors[0].ctx
        out = cls.one(ctx, 0)
        for f in factors:
            out = out.tensor(cls.from_algebra(f))
        return out

    def to_algebra(self) -> AlgebraElement:
        if self.rank != 1:
            msg = f"rank-{self.rank} tensor is not an algebra element"
            raise ValueError(msg)
        return AlgebraElement(self.ctx, {k[0]: v for k, v in self.terms.items()})

    def scalar_value(self) -> CycloScalar:
        if self.rank != 0:
            msg = f"rank-{self.rank} tensor is not a scalar"
            raise ValueError(msg)
        return self.terms.get((), CycloScalar.zero(self.ctx.cyclo))

    def __iter__(self) -> Iterator[tuple[tuple[Triple, ...], CycloScalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check_rank(self, other: TensorElement) -> None:
        if other.rank != self.rank:
            msg = f"rank mismatch: {self.rank} vs {other.rank}"
            raise ValueError(msg)

    def __add__(self, other: TensorElement) -> TensorElement:
        self._check_rank(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(acc, k, v)
        return TensorElement(self.ctx, self.rank, acc)

    def __neg__(self) -> TensorElement:
        return TensorElement(self.ctx, self.rank, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def scale(self, s: Scalarlike) -> TensorElement:
        s = self.ctx.scalar(s)
        return TensorElement(self.ctx, self.rank, {k: v * s for k, v in self.terms.items()})

    def __mul__(self, other: object) -> TensorElement:
        """Componentwise product in ``H^{(x) n}``."""
        if isinstance(other, (CycloScalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check_rank(other)
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                coeff = v1 * v2
                expansions: list[tuple[tuple[Triple, ...], CycloScalar]] = [((), coeff)]
                for m1, m2 in zip(k1, k2, strict=True):
                    prod = monomial_product(self.ctx, m1, m2)
                    expansions = [
                        ((*key, m), c * pc) for key, c in expansions for m, pc in prod.items()
                    ]
                    if not expansions:
                        break
                for key, c in expansions:
                    _accumulate(acc, key, c)
        return TensorElement(self.ctx, self.rank, acc)

    def tensor(self, other: TensorElement) -> TensorElement:
        """Outer product; ranks add."""
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                _accumulate(acc, k1 + k2, v1 * v2)
        return TensorElement(self.ctx, self.rank + other.rank, acc)

    def permute(self, order: Iterable[int]) -> TensorElement:
        """Reorder slots: slot ``j`` of the result is slot ``order[j]`` of self."""
        order = tuple(order)
        return TensorElement(
            self.ctx,
            self.rank,
            {tuple(k[i] for i in order): v for k, v in self.terms.items()},
        )

    def flip(self) -> TensorElement:
        return self.permute((1, 0))

    def apply_block(
        self,
        start: int,
        width: int,
        fn: Callable[[tuple[Triple, ...]], TensorElement],
        out_width: int,
    ) -> TensorElement:
        """Replace slots ``start .. start+width-1`` by ``fn(block)``, linearly.

        ``fn`` must return tensors of rank *out_width*.
        """
        stop = start + width
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        images: dict[tuple[Triple, ...], TensorElement] = {}
        for key, v in self.terms.items():
            block = key[start:stop]
            image = images.get(block)
            if image is None:
                image = images[block] = fn(block)
                if image.rank != out_width:
                    msg = f"block map returned rank {image.rank}, expected {out_width}"
                    raise ValueError(msg)
            head, tail = key[:start], key[stop:]
            for ikey, iv in image.terms.items():
                _accumulate(acc, head + ikey + tail, v * iv)
        return TensorElement(self.ctx, self.rank - width + out_width, acc)

    def apply(
        self, slot: int, fn: Callable[[Triple], TensorElement],
    ) -> TensorElement:
        """Replace slot *slot* by the tensor ``fn(monomial)``, linearly."""
        out_width = fn(ONE).rank
        return self.apply_block(slot, 1, lambda block: fn(block[0]), out_width)

    def apply_algebra(
        self, slot: int, fn: Callable[[Triple], AlgebraElement],
    ) -> TensorElement:
        return self.apply(slot, lambda m: TensorElement.from_algebra(fn(m)))

    def contract(
        self, slot: int, fn: Callable[[Triple], CycloScalar],
    ) -> TensorElement:
        return self.apply(slot, lambda m: TensorElement.scalar(self.ctx, fn(m)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def format(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({v}) * " + " (x) ".join(format_monomial(m) for m in k) if k else f"({v})"
            for k, v in sorted(self.terms.items())
        )

    def __repr__(self) -> str:
        return f"TensorElement(rank={self.rank}, {len(self.terms)} terms)"


# ── Normal ordering ──────────────────────────────────────────────────────


def _fe_normal_form(ctx: UqContext, b: int, a: int) -> dict[Triple, CycloScalar]:
    """Normal form of ``F^b E^a`` as ``{(x, y, t): coeff}`` meaning ``E^x F^y K^t``."""
    key = (b, a)
    cached = ctx._nf.get(key)
    if cached is not None:
        return cached

    n = ctx.rprime
    one = CycloScalar.one(ctx.cyclo)
    if b == 0 or a == 0:
        result = {(a, b, 0): one}
    elif b == 1:
        # F E^a = E (F E^{a-1}) - E^{a-1} (q^{2(a-1)} K - q^{-2(a-1)} K^{-1}) / (q - q^{-1})
        inv_brace = brace(ctx.cyclo, 1).inv()
        acc: dict[Triple, CycloScalar] = {}
        for (x, y, t), v in _fe_normal_form(ctx, 1, a - 1).items():
            if x + 1 < n:
                _accumulate(acc, (x + 1, y, t), v)
        _accumulate(acc, (a - 1, 0, 1 % n), -(ctx.q(2 * (a - 1)) * inv_brace))
        _accumulate(acc, (a - 1, 0, n - 1), ctx.q(-2 * (a - 1)) * inv_brace)
        result = acc
    else:
        # F^b E^a = F (F^{b-1} E^a); F E^x F^y K^t = (F E^x) F^y K^t.
        acc = {}
        for (x, y, t), v in _fe_normal_form(ctx, b - 1, a).items():
            for (x2, y2, t2), v2 in _fe_normal_form(ctx, 1, x).items():
                # K^{t2} F^y = q^{-2 t2 y} F^y K^{t2}
                if y2 + y >= n:
                    continue
                _accumulate(
                    acc,
                    (x2, y2 + y, (t2 + t) % n),
                    v * v2 * ctx.q(-2 * t2 * y),
                )
        result = acc
    ctx._nf[key] = result
    return result


def monomial_product(ctx: UqContext, m1: Triple, m2: Triple) -> dict[Triple, CycloScalar]:
    """Normal-ordered product of two PBW monomials (memoised per context)."""
    key = (m1, m2)
    cached = ctx._products.get(key)
    if cached is not None:
        return cached

    n = ctx.rprime
    a, b, c = m1
    a2, b2, c2 = m2
    acc: dict[Triple, CycloScalar] = {}
    # K^c E^{a2} F^{b2} = q^{2c(a2 - b2)} E^{a2} F^{b2} K^c
    lead = ctx.q(2 * c * (a2 - b2))
    for (x, y, t), v in _fe_normal_form(ctx, b, a2).items():
        if a + x >= n or y + b2 >= n:
            continue
        # K^t F^{b2} = q^{-2 t b2} F^{b2} K^t
        _accumulate(
            acc,
            (a + x, y + b2, (t + c + c2) % n),
            lead * v * ctx.q(-2 * t * b2),
        )
    ctx._products[key] = acc
    return acc


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product of two algebra elements in PBW normal order."""
    ctx = x.ctx
    acc: dict[Triple, CycloScalar] = {}
    for m1, v1 in x.terms.items():
        for m2, v2 in y.terms.items():
            coeff = v1 * v2
            for m, pv in monomial_product(ctx, m1, m2).items():
                _accumulate(acc, m, coeff * pv)
    return AlgebraElement(ctx, acc)


def product(factors: Iterable[AlgebraElement]) -> AlgebraElement:
    it = iter(factors)
    result = next(it)
    for f in it:
        result = multiply(result, f)
    return result


# ── Generators ───────────────────────────────────────────────────────────


def gen_E(ctx: UqContext) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, (1, 0, 0))


def gen_F(ctx: UqContext) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, (0, 1, 0))


def gen_K(ctx: UqContext, power: int = 1) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, (0, 0, power % ctx.rprime))


def generators(ctx: UqContext) -> list[AlgebraElement]:
    """``E, F, K, K^{-1}``."""
    return [gen_E(ctx), gen_F(ctx), gen_K(ctx), gen_K(ctx, -1)]


# ── Hopf structure ───────────────────────────────────────────────────────


def _coproduct_monomial(ctx: UqContext, m: Triple) -> TensorElement:
    cached = ctx._coproducts.get(m)
    if cached is not None:
        return cached
    a, b, c = m
    one, E, F, K = (
        AlgebraElement.one(ctx), gen_E(ctx), gen_F(ctx), gen_K(ctx),
    )
    Kinv = gen_K(ctx, -1)
    dE = TensorElement.pure([E, K]) + TensorElement.pure([one, E])
    dF = TensorElement.pure([F, one]) + TensorElement.pure([Kinv, F])
    dK = TensorElement.pure([K, K])
    result = TensorElement.one(ctx, 2)
    for _ in range(a):
        result = result * dE
    for _ in range(b):
        result = result * dF
    for _ in range(c):
        result = result * dK
    ctx._coproducts[m] = result
    return result


def coproduct(x: AlgebraElement) -> TensorElement:
    """Delta, extended as an algebra morphism."""
    return TensorElement.from_algebra(x).apply(0, lambda m: _coproduct_monomial(x.ctx, m))


def counit_monomial(ctx: UqContext, m: Triple) -> CycloScalar:
    if m[0] == 0 and m[1] == 0:
        return CycloScalar.one(ctx.cyclo)
    return CycloScalar.zero(ctx.cyclo)


def counit(x: AlgebraElement) -> CycloScalar:
    total = CycloScalar.zero(x.ctx.cyclo)
    for m, v in x.terms.items():
        if m[0] == 0 and m[1] == 0:
            total = total + v
    return total


def _anti_image(
    ctx: UqContext,
    m: Triple,
    table: dict[Triple, AlgebraElement],
    images: tuple[AlgebraElement, AlgebraElement, AlgebraElement],
) -> AlgebraElement:
    cached = table.get(m)
    if cached is not None:
        return cached
    a, b, c = m
    img_E, img_F, img_K = images
    # anti-morphism: (E^a F^b K^c) -> img(K)^c img(F)^b img(E)^a
    result = AlgebraElement.one(ctx)
    for _ in range(c):
        result = multiply(result, img_K)
    for _ in range(b):
        result = multiply(result, img_F)
    for _ in range(a):
        result = multiply(result, img_E)
    table[m] = result
    return result


def antipode_monomial(ctx: UqContext, m: Triple) -> AlgebraElement:
    E, F, K, Kinv = generators(ctx)
    images = (-multiply(E, Kinv), -multiply(K, F), Kinv)
    return _anti_image(ctx, m, ctx._antipodes, images)


def antipode_inv_monomial(ctx: UqContext, m: Triple) -> AlgebraElement:
    # S(-K^{-1} E) = E and S(-F K) = F
    E, F, K, Kinv = generators(ctx)
    images = (-multiply(Kinv, E), -multiply(F, K), Kinv)
    return _anti_image(ctx, m, ctx._antipode_invs, images)


def _linear(
    x: AlgebraElement, fn: Callable[[UqContext, Triple], AlgebraElement],
) -> AlgebraElement:
    return AlgebraElement.combine(x.ctx, ((fn(x.ctx, m), v) for m, v in x.terms.items()))


def antipode(x: AlgebraElement) -> AlgebraElement:
    return _linear(x, antipode_monomial)


def antipode_inv(x: AlgebraElement) -> AlgebraElement:
    return _linear(x, antipode_inv_monomial)


def iterated_coproduct(x: AlgebraElement, k: int) -> TensorElement:
    """``Delta^{(k-1)}(x)`` of rank k; ``k = 0`` gives the counit as a scalar."""
    if k < 0:
        msg = f"iterated coproduct needs k >= 0, got {k}"
        raise ValueError(msg)
    if k == 0:
        return TensorElement.scalar(x.ctx, counit(x))
    result = TensorElement.from_algebra(x)
    for _ in range(k - 1):
        result = result.apply(result.rank - 1, lambda m: _coproduct_monomial(x.ctx, m))
    return result


# ── R-matrix, M-matrix ───────────────────────────────────────────────────


def _alpha(ctx: UqContext, a: int, sign: int = 1) -> CycloScalar:
    """``{sign}^a / [a]!``."""
    return brace(ctx.cyclo, sign) ** a / q_fact(ctx.cyclo, a)


def r_matrix(ctx: UqContext) -> TensorElement:
    """``R = 1/r' sum_{a,b,c} {1}^a/[a]! q^{a(a-1)/2 - 2bc} K^b E^a (x) K^c F^a``."""

    def build() -> TensorElement:
        n = ctx.rprime
        inv_n = Fraction(1, n)
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        for a in range(n):
            alpha = _alpha(ctx, a) * inv_n
            for b in range(n):
                for c in range(n):
                    # K^b E^a = q^{2ab} E^a K^b, K^c F^a = q^{-2ac} F^a K^c
                    exp = a * (a - 1) // 2 - 2 * b * c + 2 * a * b - 2 * a * c
                    _accumulate(acc, ((a, 0, b), (0, a, c)), alpha * ctx.q(exp))
        return TensorElement(ctx, 2, acc)

    return ctx.cached("R", build)


def r_matrix_inv(ctx: UqContext) -> TensorElement:
    """``R^{-1} = 1/r' sum {-1}^a/[a]! q^{-a(a-1)/2 + 2bc} E^a K^b (x) F^a K^c``."""

    def build() -> TensorElement:
        n = ctx.rprime
        inv_n = Fraction(1, n)
        acc: dict[tuple[Triple, ...], CycloScalar] = {}
        for a in range(n):
            alpha = _alpha(ctx, a, -1) * inv_n
            for b in range(n):
                for c in range(n):
                    exp = -(a * (a - 1) // 2) + 2 * b * c
                    _accumulate(acc, ((a, 0, b), (0, a, c)), alpha * ctx.q(exp))
        return TensorElement(ctx, 2, acc)

    return ctx.cached("Rinv", build)


def m_matrix(ctx: UqContext) -> TensorElement:
    """``M = R''_j R'_i (x) R'_j R''_i = R_21 R``."""
    return ctx.cached("M", lambda: r_matrix(ctx).flip() * r_matrix(ctx))


def m_matrix_inv(ctx: UqContext) -> TensorElement:
    """``M^{-1} = R^{-1} (R^{-1})_21``."""
    return ctx.cached("Minv", lambda: r_matrix_inv(ctx) * r_matrix_inv(ctx).flip())


def _kfe(ctx: UqContext, g: int, b: int, a: int) -> dict[Triple, CycloScalar]:
    """Normal form of ``K^g F^b E^a``."""
    out: dict[Triple, CycloScalar] = {}
    for (x, y, t), v in _fe_normal_form(ctx, b, a).items():
        _accumulate(out, (x, y, (t + g) % ctx.rprime), v * ctx.q(2 * g * (x - y)))
    return out


def _kef(ctx: UqContext, h: int, b: int, a: int) -> dict[Triple, CycloScalar]:
    """Normal form of ``K^h E^b F^a``."""
    n = ctx.rprime
    if b >= n or a >= n:
        return {}
    return {(b, a, h % n): ctx.q(2 * h * (b - a))}


def m_matrix_closed_form(ctx: UqContext) -> TensorElement:
    """The monodromy matrix from its closed-form Gauss-sum evaluation.

    Three residue cases.  For odd r the sum runs over ``a, b, c, d < r`` with
    exponent ``... - 2b(b+d) - cd``.  For ``r = 2 mod 4`` the reindexing
    ``e = (r'+1)d/2`` produces ``... - 2b^2 - (r'+1)(2b+c)d`` with sums below
    r' (this also reduces to the odd case).  For ``r = 0 mod 4`` the K
    exponents move in steps of two and the prefactor is ``1/r''``.
    """

    def build() -> TensorElement:
        n = ctx.rprime
        r = ctx.r
        acc: dict[tuple[Triple, ...], CycloScalar] = {}

        def add(
            prefactor: Fraction, a: int, b: int, exp: int, g: int, h: int,
        ) -> None:
            coeff = _alpha(ctx, a) * _alpha(ctx, b) * ctx.q(exp) * prefactor
            left = _kfe(ctx, g, b, a)
            right = _kef(ctx, h, b, a)
            for k1, v1 in left.items():
                for k2, v2 in right.items():
                    _accumulate(acc, (k1, k2), coeff * v1 * v2)

        if r % 4 != 0:
            pre = Fraction(1, n)
            for a in range(n):
                for b in range(n):
                    base = (a * (a - 1) + b * (b - 1)) // 2 - 2 * b * b
                    for c in range(n):
                        for d in range(n):
                            exp = base - (n + 1) * (2 * b + c) * d
                            add(pre, a, b, exp, b + c, b + d)
        else:
            rs = ctx.cyclo.rsecond
            pre = Fraction(1, rs)
            for a in range(n):
                for b in range(n):
                    base = (a * (a - 1) + b * (b - 1)) // 2
                    for c in range(rs):
                        for d in range(rs):
                            exp = base - 2 * b * (b + 2 * d) - 4 * c * d
                            add(pre, a, b, exp, b + 2 * c, b + 2 * d)
        return TensorElement(ctx, 2, acc)

    return ctx.cached("M_closed", build)


# ── Drinfeld, ribbon, pivotal ────────────────────────────────────────────


def _contract_pairs(
    tensor: TensorElement,
    combine: Callable[[AlgebraElement, AlgebraElement], AlgebraElement],
) -> AlgebraElement:
    ctx = tensor.ctx
    return AlgebraElement.combine(
        ctx,
        (
            (combine(AlgebraElement.monomial(ctx, m1), AlgebraElement.monomial(ctx, m2)), v)
            for (m1, m2), v in tensor.terms.items()
        ),
    )


def drinfeld_u(ctx: UqContext) -> AlgebraElement:
    """``u = S(R''_i) R'_i``."""
    return ctx.cached(
        "u",
        lambda: _contract_pairs(r_matrix(ctx), lambda x, y: multiply(antipode(y), x)),
    )


def drinfeld_u_inv(ctx: UqContext) -> AlgebraElement:
    """``u^{-1} = R''_i S^2(R'_i)``, written through ``R^{-1} = (S (x) id) R``."""
    return ctx.cached(
        "uinv",
        lambda: _contract_pairs(r_matrix_inv(ctx), lambda x, y: multiply(y, antipode(x))),
    )


def pivotal(ctx: UqContext) -> AlgebraElement:
    """The pivotal element ``g = K``."""
    return gen_K(ctx)


def ribbon(ctx: UqContext) -> AlgebraElement:
    """``v_+ = u K^{-1}``."""
    return ctx.cached("v+", lambda: multiply(drinfeld_u(ctx), gen_K(ctx, -1)))


def ribbon_inv(ctx: UqContext) -> AlgebraElement:
    """``v_- = u^{-1} K``."""
    return ctx.cached("v-", lambda: multiply(drinfeld_u_inv(ctx), gen_K(ctx)))


def _ribbon_sum(
    ctx: UqContext,
    prefactor: CycloScalar,
    sign: int,
    a_range: int,
    terms: Iterable[tuple[int, int, int]],
) -> AlgebraElement:
    """``prefactor * sum {sign}^a/[a]! q^exp F^a E^a K^k`` over ``(a, exp, k)``."""
    acc: dict[Triple, CycloScalar] = {}
    for a, exp, k in terms:
        if a >= a_range:
            continue
        coeff = prefactor * _alpha(ctx, a, sign) * ctx.q(exp)
        for (x, y, t), v in _fe_normal_form(ctx, a, a).items():
            _accumulate(acc, (x, y, (t + k) % ctx.rprime), coeff * v)
    return AlgebraElement(ctx, acc)


def ribbon_closed_form(ctx: UqContext, inverse: bool = False) -> AlgebraElement:
    """Ribbon element (or its inverse) from the Gauss-sum closed forms.

    One formula per residue class of r mod 8: odd, ``2 mod 4``, ``4 mod 8``
    and ``0 mod 8`` (the last writes ``r = 2^k r_k`` with r_k odd).
    """
    key = "v-closed" if inverse else "v+closed"

    def build() -> AlgebraElement:
        cy = ctx.cyclo
        r, n, rs = ctx.r, ctx.rprime, cy.rsecond
        i = imag_unit(cy)
        s = -1 if inverse else 1
        sign = -s

        if r % 2 == 1:
            pre = i ** (s * (r - 1) // 2) / sqrt_nat(cy, r)
            h = (r + 1) // 2

            def gen_odd() -> Iterator[tuple[int, int, int]]:
                for a in range(n):
                    for b in range(n):
                        if inverse:
                            yield a, (a + 3) * a // 2 - h * (b - 1) ** 2, a + b
                        else:
                            yield a, -((a + 3) * a // 2) + h * (b + 1) ** 2, b - a

            return _ribbon_sum(ctx, pre, sign, n, gen_odd())

        if r % 4 == 2:
            pre = jacobi(2, n) * i ** (s * (n - 1) // 2) / sqrt_nat(cy, n)
            h = (n + 1) ** 2 // 2

            def gen_two() -> Iterator[tuple[int, int, int]]:
                for a in range(n):
                    for b in range(n):
                        if inverse:
                            yield a, (a + 3) * a // 2 - h * (b - 1) ** 2, a + b
                        else:
                            yield a, -((a + 3) * a // 2) + h * (b + 1) ** 2, b - a

            return _ribbon_sum(ctx, pre, sign, n, gen_two())

        if r % 8 == 4:
            pre = i ** (s * (rs - 1) // 2) / sqrt_nat(cy, rs)
            h = (rs + 1) ** 3 // 2

            def gen_four() -> Iterator[tuple[int, int, int]]:
                for a in range(n):
                    for b in range(rs):
                        if inverse:
                            yield a, (a + 3) * a // 2 - h * (2 * b - 1) ** 2, a + 2 * b
                        else:
                            yield a, -((a + 3) * a // 2) + h * (2 * b + 1) ** 2, 2 * b - a

            return _ribbon_sum(ctx, pre, sign, n, gen_four())

        k = (r & -r).bit_length() - 1
        rk = r >> k
        psi = pow(rk, -1, 2 ** (k - 1))
        h = 2 * (rk * psi + (rk + 1) ** (k + 1))
        unit = (i + 1) if inverse else (1 - i)
        pre = unit / (sqrt_nat(cy, 2) * sqrt_nat(cy, rs))

        def gen_eight() -> Iterator[tuple[int, int, int]]:
            for a in range(n):
                for b in range(rk):
                    for m in range(2 ** (k - 2)):
                        w = 2 ** (k - 2) * b + m
                        if inverse:
                            yield (
                                a,
                                (a + 3) * a // 2 - h * w * w,
                                a + 2 ** (k - 1) * b + 2 * m + 1,
                            )
                        else:
                            yield (
                                a,
                                -((a + 3) * a // 2) + h * w * w,
                                -a + 2 ** (k - 1) * b + 2 * m - 1,
                            )

        return _ribbon_sum(ctx, pre, sign, n, gen_eight())

    return ctx.cached(key, build)


# ── Integral, cointegral ─────────────────────────────────────────────────


def integral_normalization(ctx: UqContext) -> CycloScalar:
    """``xi = sqrt(r'') [r'-1]! / {1}^{r'-1}``."""
    cy = ctx.cyclo
    n = ctx.rprime
    return ctx.cached(
        "xi",
        lambda: sqrt_nat(cy, cy.rsecond) * q_fact(cy, n - 1) / brace(cy, 1) ** (n - 1),
    )


def integral_monomial(ctx: UqContext, m: Triple) -> CycloScalar:
    top = ctx.rprime - 1
    if m == (top, top, top):
        return integral_normalization(ctx)
    return CycloScalar.zero(ctx.cyclo)


def integral(x: AlgebraElement) -> CycloScalar:
    """The preferred left integral, supported on ``E^{r'-1} F^{r'-1} K^{r'-1}``."""
    top = x.ctx.rprime - 1
    return x.coefficient((top, top, top)) * integral_normalization(x.ctx)


def cointegral(ctx: UqContext) -> AlgebraElement:
    """``Lambda = xi^{-1} sum_c E^{r'-1} F^{r'-1} K^c``."""

    def build() -> AlgebraElement:
        top = ctx.rprime - 1
        inv = integral_normalization(ctx).inv()
        return AlgebraElement(ctx, {(top, top, c): inv for c in range(ctx.rprime)})

    return ctx.cached("Lambda", build)


# ── Drinfeld map, factorizability ────────────────────────────────────────


@dataclass
class SparseMatrix:
    """A square matrix over the cyclotomic field, stored by nonzero entry."""

    size: int
    entries: dict[tuple[int, int], CycloScalar] = field(default_factory=dict)

    def rank(self) -> int:
        return exact_rank(self.entries, self.size, self.size)


def drinfeld_map_matrix(ctx: UqContext) -> SparseMatrix:
    """Matrix of ``phi -> (phi (x) id)(M)`` in the PBW basis and its dual.

    Row ``i`` is the image of the dual basis functional of ``basis[i]``.
    """

    def build() -> SparseMatrix:
        index = {m: k for k, m in enumerate(ctx.basis())}
        entries: dict[tuple[int, int], CycloScalar] = {}
        for (m1, m2), v in m_matrix(ctx).terms.items():
            entries[(index[m1], index[m2])] = v
        return SparseMatrix(ctx.dim, entries)

    return ctx.cached("drinfeld_matrix", build)


def drinfeld_rank(ctx: UqContext) -> int:
    return ctx.cached("drinfeld_rank", lambda: drinfeld_map_matrix(ctx).rank())


def is_factorizable(ctx: UqContext) -> bool:
    return drinfeld_rank(ctx) == ctx.dim


def factorizable_expected(r: int) -> bool:
    """Classification: u_q(sl2) is factorizable exactly when ``r != 0 mod 4``."""
    return r % 4 != 0


def twist_nondegenerate_expected(r: int) -> bool:
    """``lambda(v_+) != 0`` exactly when ``r != 0 mod 8``."""
    return r % 8 != 0


# ── Stabilization and Hopf-link coefficients ─────────────────────────────


def stabilization_coefficient(ctx: UqContext) -> CycloScalar:
    """``lambda(v_+)`` from the definitional ribbon element."""
    return ctx.cached("lambda(v+)", lambda: integral(ribbon(ctx)))


def stabilization_closed_form(ctx: UqContext) -> CycloScalar:
    """``lambda(v_+)`` by residue of r mod 8, as a Gauss-sum evaluation."""
    cy = ctx.cyclo
    r, n, rs = ctx.r, ctx.rprime, cy.rsecond
    i = imag_unit(cy)
    if r % 2 == 1:
        return i ** ((r - 1) // 2) * q_power(cy, (r + 3) // 2)
    if r % 4 == 2:
        return jacobi(2, n) * i ** ((n - 1) // 2) * q_power(cy, (n + 3) // 2)
    if r % 8 == 4:
        return -q_power(cy, (rs + 3) // 2)
    return CycloScalar.zero(cy)


def hopf_coefficient(ctx: UqContext) -> CycloScalar:
    """``(lambda (x) lambda)(M)``; only the top-top coefficient of M contributes."""
    top = (ctx.rprime - 1,) * 3
    xi = integral_normalization(ctx)
    coeff = m_matrix(ctx).terms.get((top, top), CycloScalar.zero(ctx.cyclo))
    return coeff * xi * xi


def hopf_closed_form(ctx: UqContext) -> CycloScalar:
    """``(-1)^{r'-1}``."""
    return CycloScalar.from_rational(ctx.cyclo, (-1) ** (ctx.rprime - 1))


class TwistDegenerateError(ArithmeticError):
    """``lambda(v_+) = 0``, so the signed renormalization has no meaning."""


def signed_normalization(ctx: UqContext, n: int) -> CycloScalar:
    """``lambda(v_+)^{-n}``.

    Raises:
        TwistDegenerateError: If ``lambda(v_+) = 0`` (r = 0 mod 8).
    """
    stab = stabilization_coefficient(ctx)
    if stab.is_zero():
        msg = (
            "signed renormalization undefined: J3^sigma requires twist "
            f"non-degeneracy (lambda(v+) = 0 at r={ctx.r})"
        )
        raise TwistDegenerateError(msg)
    return stab ** (-n)


# ── Verification ─────────────────────────────────────────────────────────


@dataclass
class CheckResult:
    """One named check inside a verification suite."""

    name: str
    passed: bool
    counterexample: str | None = None
    note: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    """Outcome of a verification suite; failed checks carry a counterexample."""

    suite: str
    r: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        msg = f"no check named {name!r} in suite {self.suite!r}"
        raise KeyError(msg)

    def add(
        self,
        name: str,
        counterexample: str | None,
        note: str | None = None,
    ) -> None:
        """Record a check; ``counterexample is None`` means it passed."""
        self.checks.append(
            CheckResult(name, counterexample is None, counterexample, note),
        )
        if counterexample is not None:
            _logger.warning(
                "%s/%s failed at r=%d: %s", self.suite, name, self.r, counterexample,
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "r": self.r,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def first_failure(
    items: Iterable[Any], predicate: Callable[[Any], bool], label: Callable[[Any], str],
) -> str | None:
    """Return a label for the first item failing *predicate*, or None."""
    for item in items:
        if not predicate(item):
            return label(item)
    return None


def monomial_label(m: Triple) -> str:
    return format_monomial(m)


def tuple_label(ms: Iterable[Triple]) -> str:
    return " | ".join(format_monomial(m) for m in ms)


def sample_tuples(
    ctx: UqContext, arity: int, sample_size: int, seed: int,
) -> list[tuple[Triple, ...]]:
    """All generator tuples followed by *sample_size* random basis tuples."""
    n = ctx.rprime
    gens: list[Triple] = [(1, 0, 0), (0, 1, 0), (0, 0, 1 % n), (0, 0, n - 1)]
    out: list[tuple[Triple, ...]] = [()]
    for _ in range(arity):
        out = [(*t, g) for t in out for g in gens]
    rng = random.Random(seed)
    basis = ctx.basis()
    out.extend(tuple(rng.choice(basis) for _ in range(arity)) for _ in range(sample_size))
    return out


def basis_pairs(
    ctx: UqContext, pair_sample: int = 0, seed: int = 0,
) -> list[tuple[Triple, ...]]:
    """Every pair of basis monomials, or a sample of *pair_sample* pairs if positive."""
    if pair_sample > 0:
        return sample_tuples(ctx, 2, pair_sample, seed)
    return list(itertools.product(ctx.basis(), repeat=2))


def _mono(ctx: UqContext, m: Triple) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, m)


def verify_hopf_axioms(
    ctx: UqContext, sample_size: int = 500, seed: int = 0, pair_sample: int = 0,
) -> VerificationReport:
    """Hopf algebra axioms of u_q(sl2), exact.

    Two-input laws run over every basis pair unless *pair_sample* is
    positive; associativity runs on *sample_size* random triples.
    """
    report = VerificationReport("hopf", ctx.r)
    basis = ctx.basis()
    one = AlgebraElement.one(ctx)
    triples = sample_tuples(ctx, 3, sample_size, seed)
    pairs = basis_pairs(ctx, pair_sample, seed + 1)

    def associative(t: tuple[Triple, ...]) -> bool:
        x, y, z = (_mono(ctx, m) for m in t)
        return multiply(multiply(x, y), z) == multiply(x, multiply(y, z))

    report.add("associativity", first_failure(triples, associative, tuple_label))

    report.add(
        "unit",
        first_failure(
            basis,
            lambda m: multiply(one, _mono(ctx, m)) == _mono(ctx, m) == multiply(_mono(ctx, m), one),
            monomial_label,
        ),
    )

    def nilpotent_and_cyclic(_: object) -> bool:
        n = ctx.rprime
        E, F, K, _Kinv = generators(ctx)
        return (
            product([E] * n).is_zero()
            and product([F] * n).is_zero()
            and product([K] * n) == one
        )

    report.add(
        "truncation",
        first_failure([None], nilpotent_and_cyclic, lambda _: "E^r', F^r' or K^r'"),
    )

    def coassociative(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        left = d.apply(0, lambda x: _coproduct_monomial(ctx, x))
        right = d.apply(1, lambda x: _coproduct_monomial(ctx, x))
        return left == right

    report.add("coassociativity", first_failure(basis, coassociative, monomial_label))

    def counital(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        x = TensorElement.from_algebra(_mono(ctx, m))
        return (
            d.contract(0, lambda y: counit_monomial(ctx, y)) == x
            and d.contract(1, lambda y: counit_monomial(ctx, y)) == x
        )

    report.add("counit", first_failure(basis, counital, monomial_label))

    def coproduct_morphism(t: tuple[Triple, ...]) -> bool:
        x, y = (_mono(ctx, m) for m in t)
        return coproduct(multiply(x, y)) == coproduct(x) * coproduct(y)

    report.add(
        "coproduct-algebra-map", first_failure(pairs, coproduct_morphism, tuple_label),
    )

    def counit_morphism(t: tuple[Triple, ...]) -> bool:
        x, y = (_mono(ctx, m) for m in t)
        return counit(multiply(x, y)) == counit(x) * counit(y)

    report.add("counit-algebra-map", first_failure(pairs, counit_morphism, tuple_label))

    def antipode_law(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        expected = one.scale(counit_monomial(ctx, m))
        left = AlgebraElement.combine(
            ctx,
            (
                (multiply(antipode_monomial(ctx, m1), _mono(ctx, m2)), v)
                for (m1, m2), v in d.terms.items()
            ),
        )
        right = AlgebraElement.combine(
            ctx,
            (
                (multiply(_mono(ctx, m1), antipode_monomial(ctx, m2)), v)
                for (m1, m2), v in d.terms.items()
            ),
        )
        return left == expected == right

    report.add("antipode", first_failure(basis, antipode_law, monomial_label))

    def anti_multiplicative(t: tuple[Triple, ...]) -> bool:
        x, y = (_mono(ctx, m) for m in t)
        return antipode(multiply(x, y)) == multiply(antipode(y), antipode(x))

    report.add(
        "antipode-anti-morphism", first_failure(pairs, anti_multiplicative, tuple_label),
    )

    def anti_comultiplicative(m: Triple) -> bool:
        x = _mono(ctx, m)
        left = coproduct(antipode(x))
        right = coproduct(x).flip().apply_algebra(
            0, lambda y: antipode_monomial(ctx, y),
        ).apply_algebra(1, lambda y: antipode_monomial(ctx, y))
        return left == right

    report.add(
        "antipode-anti-comorphism", first_failure(basis, anti_comultiplicative, monomial_label),
    )

    def inverse_pair(m: Triple) -> bool:
        x = _mono(ctx, m)
        return antipode(antipode_inv(x)) == x == antipode_inv(antipode(x))

    report.add("antipode-inverse", first_failure(basis, inverse_pair, monomial_label))

    g, g_inv = pivotal(ctx), gen_K(ctx, -1)

    def pivotal_square(m: Triple) -> bool:
        x = _mono(ctx, m)
        return antipode(antipode(x)) == product([g, x, g_inv])

    report.add("pivotal-square", first_failure(basis, pivotal_square, monomial_label))
    return report


def _legs12(t: TensorElement) -> TensorElement:
    return t.tensor(TensorElement.one(t.ctx, 1))


def verify_quasitriangular(ctx: UqContext) -> VerificationReport:
    """R-matrix axioms, Yang-Baxter, and the ribbon structure."""
    report = VerificationReport("quasitriangular", ctx.r)
    basis = ctx.basis()
    R, Rinv = r_matrix(ctx), r_matrix_inv(ctx)
    one2 = TensorElement.one(ctx, 2)
    one1 = AlgebraElement.one(ctx)

    report.add(
        "R-inverse",
        None if R * Rinv == one2 == Rinv * R else "R R^-1 != 1 (x) 1",
    )
    report.add(
        "R-counit",
        None
        if R.contract(0, lambda m: counit_monomial(ctx, m)).to_algebra() == one1
        and R.contract(1, lambda m: counit_monomial(ctx, m)).to_algebra() == one1
        else "(eps (x) id) R != 1",
    )

    def intertwines(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        return d.flip() == R * d * Rinv

    report.add("R-intertwines-coproduct", first_failure(basis, intertwines, monomial_label))

    R12 = _legs12(R)
    R13 = R12.permute((0, 2, 1))
    R23 = R12.permute((2, 0, 1))
    left = R.apply(0, lambda m: _coproduct_monomial(ctx, m))
    report.add(
        "R-coproduct-left", None if left == R13 * R23 else "(Delta (x) id) R != R13 R23",
    )
    right = R.apply(1, lambda m: _coproduct_monomial(ctx, m))
    report.add(
        "R-coproduct-right", None if right == R13 * R12 else "(id (x) Delta) R != R13 R12",
    )
    report.add(
        "yang-baxter",
        None if R12 * R13 * R23 == R23 * R13 * R12 else "R12 R13 R23 != R23 R13 R12",
    )

    M, Minv = m_matrix(ctx), m_matrix_inv(ctx)
    report.add("M-inverse", None if M * Minv == one2 else "M M^-1 != 1 (x) 1")

    u, uinv = drinfeld_u(ctx), drinfeld_u_inv(ctx)
    report.add("u-inverse", None if multiply(u, uinv) == one1 == multiply(uinv, u) else "u u^-1 != 1")

    def drinfeld_square(m: Triple) -> bool:
        x = _mono(ctx, m)
        return antipode(antipode(x)) == product([u, x, uinv])

    report.add("u-implements-S2", first_failure(basis, drinfeld_square, monomial_label))

    vp, vm = ribbon(ctx), ribbon_inv(ctx)

    def central(m: Triple) -> bool:
        x = _mono(ctx, m)
        return multiply(vp, x) == multiply(x, vp)

    report.add("ribbon-central", first_failure(basis, central, monomial_label))
    report.add("ribbon-inverse", None if multiply(vp, vm) == one1 else "v+ v- != 1")
    report.add("ribbon-counit", None if counit(vp) == 1 else f"eps(v+) = {counit(vp)}")
    report.add("ribbon-antipode", None if antipode(vp) == vp else "S(v+) != v+")
    report.add(
        "ribbon-coproduct",
        None
        if coproduct(vp) * M == TensorElement.pure([vp, vp])
        else "Delta(v+) M != v+ (x) v+",
    )
    return report


def verify_integral_laws(ctx: UqContext) -> VerificationReport:
    """Integral/cointegral identities, exact on the full PBW basis.

    The unibalanced law is checked as ``lambda(x_(1)) x_(2) = lambda(x) g^{-2}``:
    with ``Delta(E) = E (x) K + 1 (x) E`` the preferred integral sits on
    ``K^{r'-1}``, which puts the pivotal correction at ``g^{-2}``.
    """
    report = VerificationReport("integral", ctx.r)
    basis = ctx.basis()
    lam = cointegral(ctx)
    one = AlgebraElement.one(ctx)
    g_inv2 = gen_K(ctx, -2)

    report.add(
        "normalized", None if integral(lam) == 1 else f"lambda(Lambda) = {integral(lam)}",
    )
    report.add("unimodular", None if antipode(lam) == lam else "S(Lambda) != Lambda")

    def left_integral(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        got = d.contract(1, lambda y: integral_monomial(ctx, y)).to_algebra()
        return got == one.scale(integral_monomial(ctx, m))

    report.add("left-integral", first_failure(basis, left_integral, monomial_label))

    def unibalanced(m: Triple) -> bool:
        d = _coproduct_monomial(ctx, m)
        got = d.contract(0, lambda y: integral_monomial(ctx, y)).to_algebra()
        return got == g_inv2.scale(integral_monomial(ctx, m))

    report.add("unibalanced", first_failure(basis, unibalanced, monomial_label))

    def left_cointegral(m: Triple) -> bool:
        x = _mono(ctx, m)
        eps = counit_monomial(ctx, m)
        return multiply(x, lam) == lam.scale(eps) == multiply(lam, x)

    report.add("two-sided-cointegral", first_failure(basis, left_cointegral, monomial_label))

    pivots = [_mono(ctx, m) for m in basis]
    squares = {m: antipode(antipode(_mono(ctx, m))) for m in basis}

    def trace_law(m: Triple) -> bool:
        x = _mono(ctx, m)
        sx = squares[m]
        return all(integral(multiply(x, y)) == integral(multiply(y, sx)) for y in pivots)

    report.add("trace", first_failure(basis, trace_law, monomial_label))
    return report


def verify_closed_forms(ctx: UqContext) -> VerificationReport:
    """Definitional ribbon elements and monodromy matrix against closed forms."""
    report = VerificationReport("closed-forms", ctx.r)
    report.add(
        "ribbon", None if ribbon(ctx) == ribbon_closed_form(ctx) else "v+ differs",
    )
    report.add(
        "ribbon-inverse",
        None if ribbon_inv(ctx) == ribbon_closed_form(ctx, inverse=True) else "v- differs",
    )
    report.add(
        "monodromy", None if m_matrix(ctx) == m_matrix_closed_form(ctx) else "M differs",
    )
    return report
