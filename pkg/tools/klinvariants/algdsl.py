"""
Morphism words of the free braided monoidal category on a pre-modular Hopf
algebra, and their evaluation on tensor powers of the adjoint module.

Grammar (whitespace-insensitive)::

    expr   := tensor (";" tensor)*      composition, diagrammatic order
    tensor := atom ("*" atom)*          monoidal product
    atom   := NAME | "id_" DIGITS | "(" expr ")"

``f ; g`` means *f first, then g*.  Names are ``mu eta delta eps S Sinv
vplus vminus wplus wminus lambda cLambda braid braidinv``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from . import transmute
from . import uqsl2 as uq
from .transmute import ArityError, GenMap
from .uqsl2 import TensorElement, UqContext

if TYPE_CHECKING:
    from .cyclo import CycloScalar

_logger = logging.getLogger(__name__)

# Token spelling -> structure-map name
TOKEN_NAMES: dict[str, str] = {
    "mu": "mu",
    "eta": "eta",
    "delta": "delta",
    "eps": "eps",
    "S": "S",
    "Sinv": "Sinv",
    "vplus": "vplus",
    "vminus": "vminus",
    "wplus": "wplus",
    "wminus": "wminus",
    "lambda": "lambda",
    "cLambda": "Lambda",
    "braid": "braid",
    "braidinv": "braid_inv",
}
_SPELLING = {v: k for k, v in TOKEN_NAMES.items()}


class DslSyntaxError(ValueError):
    """A lexical or grammatical error at a character position."""

    def __init__(self, desc: str, pos: int, text: str = "") -> None:
        self.desc = desc
        self.pos = pos
        self.text = text
        super().__init__(f"{desc} at position {pos}")


class LexError(DslSyntaxError):
    pass


class ParseError(DslSyntaxError):
    pass


# ── AST ──────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Gen:
    name: str

    @property
    def arity(self) -> tuple[int, int]:
        return transmute.GEN_ARITIES[self.name]


@dataclass(frozen=True)
class Id:
    n: int

    @property
    def arity(self) -> tuple[int, int]:
        return (self.n, self.n)


@dataclass(frozen=True)
class Compose:
    first: MorphismExpr
    second: MorphismExpr
    arity: tuple[int, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        (m, k), (k2, n) = self.first.arity, self.second.arity
        if k != k2:
            msg = (
                f"cannot compose {format_expr(self.first)} {self.first.arity} "
                f"with {format_expr(self.second)} {self.second.arity}"
            )
            raise ArityError(msg)
        object.__setattr__(self, "arity", (m, n))


@dataclass(frozen=True)
class Tensor:
    left: MorphismExpr
    right: MorphismExpr
    arity: tuple[int, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        (a, b), (c, d) = self.left.arity, self.right.arity
        object.__setattr__(self, "arity", (a + c, b + d))


MorphismExpr = Gen | Id | Compose | Tensor


@dataclass(frozen=True)
class SignedExpr:
    expr: MorphismExpr
    n: int = 0


def domain(e: MorphismExpr) -> int:
    return e.arity[0]


def codomain(e: MorphismExpr) -> int:
    return e.arity[1]


# ── Lexer / parser ───────────────────────────────────────────────────────

_TOKEN_RE = re.compile(r"\s*(?:(?P<id>id_(?P<n>\d+))|(?P<name>[A-Za-z]+)|(?P<op>[;*()]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split *text* into ``(kind, value, position)`` tokens.

    Raises:
        LexError: On an unrecognized character or unknown name.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            msg = f"unexpected character {text[pos]!r}"
            raise LexError(msg, pos, text)
        if m.group("id"):
            tokens.append(("id", m.group("n"), m.start("id")))
        elif m.group("name"):
            name = m.group("name")
            if name not in TOKEN_NAMES:
                msg = f"unknown generator {name!r}"
                raise LexError(msg, m.start("name"), text)
            tokens.append(("gen", name, m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            shown = value or "end of input"
            msg = f"expected {op!r}, found {shown!r}"
            raise ParseError(msg, pos, self.text)

    def expr(self) -> MorphismExpr:
        node = self.tensor()
        while self.peek()[:2] == ("op", ";"):
            _, _, pos = self.take()
            rhs = self.tensor()
            try:
                node = Compose(node, rhs)
            except ArityError as e:
                raise ArityError(f"{e} (at position {pos})") from None
        return node

    def tensor(self) -> MorphismExpr:
        node = self.atom()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = Tensor(node, self.atom())
        return node

    def atom(self) -> MorphismExpr:
        kind, value, pos = self.take()
        if kind == "gen":
            return Gen(TOKEN_NAMES[value])
        if kind == "id":
            return Id(int(value))
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect_op(")")
            return node
        shown = value or "end of input"
        msg = f"expected a generator, id_N or '(', found {shown!r}"
        raise ParseError(msg, pos, self.text)


def parse(text: str) -> MorphismExpr:
    """Parse a morphism word.

    Raises:
        LexError, ParseError: With the offending character position.
        ArityError: When a composite's arities do not match.
    """
    parser = _Parser(text)
    node = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "eof":
        msg = f"unexpected trailing {value!r}"
        raise ParseError(msg, pos, text)
    return node


def parse_signed(text: str, n: int = 0) -> SignedExpr:
    return SignedExpr(parse(text), n)


def strip_comments(text: str) -> str:
    return "\n".join(
        line for line in text.splitlines() if not line.lstrip().startswith("#")
    )


def load_expression(path: str | Path) -> MorphismExpr:
    """Read one expression from a UTF-8 file; ``#`` starts a comment line."""
    return parse(strip_comments(Path(path).read_text(encoding="utf-8")))


def format_expr(e: MorphismExpr) -> str:
    """Canonical text; ``parse(format_expr(e)) == e``."""
    if isinstance(e, Gen):
        return _SPELLING[e.name]
    if isinstance(e, Id):
        return f"id_{e.n}"
    if isinstance(e, Compose):
        right = format_expr(e.second)
        if isinstance(e.second, Compose):
            right = f"({right})"
        return f"{format_expr(e.first)} ; {right}"
    left = format_expr(e.left)
    if isinstance(e.left, Compose):
        left = f"({left})"
    right = format_expr(e.right)
    if isinstance(e.right, (Compose, Tensor)):
        right = f"({right})"
    return f"{left} * {right}"


# ── Evaluation ───────────────────────────────────────────────────────────


def _eval(e: MorphismExpr, v: TensorElement, start: int) -> TensorElement:
    if isinstance(e, Id):
        return v
    if isinstance(e, Gen):
        return transmute.gen_apply(GenMap.named(e.name), v, start)
    if isinstance(e, Compose):
        return _eval(e.second, _eval(e.first, v, start), start)
    w = _eval(e.left, v, start)
    return _eval(e.right, w, start + codomain(e.left))


def evaluate(e: MorphismExpr, v: TensorElement) -> TensorElement:
    """Apply the linear map of *e* to a vector of ``ad^{(x) m}``.

    Raises:
        ArityError: If ``rank(v)`` differs from the domain arity of *e*.
    """
    if v.rank != domain(e):
        msg = f"{format_expr(e)} expects rank {domain(e)}, got rank {v.rank}"
        raise ArityError(msg)
    return _eval(e, v, 0)


def evaluate_scalar(e: MorphismExpr, ctx: UqContext) -> CycloScalar:
    """The scalar of a closed word.

    Raises:
        ArityError: If *e* is not of arity ``(0, 0)``.
    """
    if e.arity != (0, 0):
        msg = f"{format_expr(e)} has arity {e.arity}; a closed word needs (0, 0)"
        raise ArityError(msg)
    return evaluate(e, TensorElement.one(ctx, 0)).scalar_value()


def evaluate_signed(s: SignedExpr, ctx: UqContext) -> CycloScalar:
    """``lambda(v_+)^{-n}`` times the scalar of the closed word.

    Raises:
        TwistDegenerateError: If ``lambda(v_+) = 0``.
    """
    factor = uq.signed_normalization(ctx, s.n)
    return factor * evaluate_scalar(s.expr, ctx)
