"""
Bead evaluation of closed Kirby tangles.

A closed slice diagram presents a 4-dimensional 2-handlebody: undotted
components are 2-handles, dotted clasps are 1-handles.  Its scalar is
computed by decorating the diagram with beads and collecting them per
component:

* ``xpos`` carries ``R = R' (x) R''``: R' on the strand entering bottom-left
  (SW), R'' on the strand entering bottom-right (SE).  ``xneg`` carries
  ``R^{-1}`` with the legs swapped.
* ``clasp(k)`` puts the legs of ``Delta^{(k-1)}(Lambda)`` on its k strands,
  left to right, read like any other bead.  ``clasp(0)`` contributes the
  factor ``eps(Lambda)``.  A clasp around a single 2-handle cancels it
  because ``lambda(S^{-1}(Lambda_(1)) x) Lambda_(2) = x``.
* A strand traversed downward reads its bead ``b`` as ``S(b)``.
* Each undotted component is traversed clockwise, starting up the left leg
  of its lowest, leftmost cup.  Passing a cap left to right inserts ``g``,
  passing a cup left to right inserts ``g^{-1}``.
* Beads multiply later-on-the-left; the component word ``w`` contributes
  ``lambda(w g^{-1})``.

The R and cointegral sums are never expanded diagram by diagram: each
crossing or clasp is a *source* whose term index is carried while its legs
are open and summed once every component touching it has been collected.

Rows run bottom to top.  See :mod:`.diagram_schema` for the file format.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from . import uqsl2 as uq
from .cyclo import CycloScalar
from .diagram_schema import (
    CROSSINGS,
    DiagramValidationError,
    Row,
    SliceDiagram,
    check_structure,
)
from .fixture_registry import registry
from .uqsl2 import AlgebraElement, Triple, UqContext

if TYPE_CHECKING:
    from collections.abc import Iterable

_logger = logging.getLogger(__name__)

PIVOTAL = -1

# (SW leg, SE leg) of the crossing tensor
_CROSSING_LEGS = {"xpos": (0, 1), "xneg": (1, 0)}

Assignment = tuple[tuple[int, int], ...]


# ── Types ────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SignedDiagram:
    diagram: SliceDiagram
    n: int = 0


@dataclass(frozen=True)
class Bead:
    """A bead on an undotted strand.

    ``source`` indexes :attr:`BeadedDiagram.sources`; for a pivotal bead it
    is :data:`PIVOTAL` and ``leg`` is the exponent of ``g``.
    """

    source: int
    leg: int
    downward: bool = False


@dataclass(frozen=True)
class Source:
    """A crossing or clasp tile, located by row and column."""

    kind: str
    row: int
    column: int
    legs: int


@dataclass(frozen=True)
class Census:
    undotted: int
    dotted: int
    crossings: int

    def to_dict(self) -> dict[str, int]:
        return {
            "undotted": self.undotted,
            "dotted": self.dotted,
            "crossings": self.crossings,
        }


@dataclass
class BeadedDiagram:
    """The singular diagram: one bead word per undotted component."""

    diagram: SliceDiagram
    sources: list[Source] = field(default_factory=list)
    components: list[list[Bead]] = field(default_factory=list)
    empty_clasps: int = 0

    @property
    def census(self) -> Census:
        dotted = sum(1 for s in self.sources if s.kind == "clasp") + self.empty_clasps
        return Census(len(self.components), dotted, self.diagram.crossing_count())


# ── Tracing ──────────────────────────────────────────────────────────────


@dataclass
class _RowLayout:
    # position -> (tile index, offset within the tile)
    below: list[tuple[int, int]]
    above: list[tuple[int, int]]
    # tile index -> (first input position, first output position)
    bases: list[tuple[int, int]]


def _layouts(d: SliceDiagram) -> list[_RowLayout]:
    out: list[_RowLayout] = []
    for row in d.rows:
        lay = _RowLayout([], [], [])
        for t, tile in enumerate(row):
            lay.bases.append((len(lay.below), len(lay.above)))
            lay.below.extend((t, j) for j in range(tile.inputs))
            lay.above.extend((t, j) for j in range(tile.outputs))
        out.append(lay)
    return out


def bead(d: SliceDiagram) -> BeadedDiagram:
    """Trace components and place beads.

    Raises:
        DiagramValidationError: If strand counts are inconsistent.
    """
    check_structure(d)
    layouts = _layouts(d)
    result = BeadedDiagram(d)

    source_at: dict[tuple[int, int], int] = {}
    for i, row in enumerate(d.rows):
        for j, tile in enumerate(row):
            if tile.kind in CROSSINGS or (tile.kind == "clasp" and tile.k > 0):
                source_at[i, j] = len(result.sources)
                legs = tile.k if tile.kind == "clasp" else 2
                result.sources.append(Source(tile.kind, i, j, legs))
            elif tile.kind == "clasp":
                result.empty_clasps += 1

    visited: set[tuple[int, int]] = set()
    total_points = sum(d.widths())
    for i, row in enumerate(d.rows):
        for j, tile in enumerate(row):
            if tile.kind != "cup":
                continue
            start = (i + 1, layouts[i].bases[j][1])
            if start in visited:
                continue
            beads = _trace(d, layouts, source_at, start, visited, total_points)
            result.components.append(beads)

    if len(visited) != total_points:
        msg = f"{total_points - len(visited)} strand segment(s) belong to no component"
        raise DiagramValidationError([msg])
    return result


def _trace(
    d: SliceDiagram,
    layouts: list[_RowLayout],
    source_at: dict[tuple[int, int], int],
    start: tuple[int, int],
    visited: set[tuple[int, int]],
    limit: int,
) -> list[Bead]:
    level, pos = start
    up = True
    beads: list[Bead] = []
    for _ in range(2 * limit + 2):
        visited.add((level, pos))
        if up:
            lay = layouts[level]
            t, off = lay.below[pos]
            base_in, base_out = lay.bases[t]
            kind = d.rows[level][t].kind
            if kind == "vert":
                level, pos = level + 1, base_out
            elif kind == "clasp":
                beads.append(Bead(source_at[level, t], off))
                level, pos = level + 1, base_out + off
            elif kind in CROSSINGS:
                sw, se = _CROSSING_LEGS[kind]
                src = source_at[level, t]
                if off == 0:
                    beads.append(Bead(src, sw))
                    level, pos = level + 1, base_out + 1
                else:
                    beads.append(Bead(src, se))
                    level, pos = level + 1, base_out
            else:  # cap
                if off == 0:
                    beads.append(Bead(PIVOTAL, 1))
                pos = base_in + 1 - off
                up = False
        else:
            row = level - 1
            lay = layouts[row]
            t, off = lay.above[pos]
            base_in, base_out = lay.bases[t]
            kind = d.rows[row][t].kind
            if kind == "vert":
                level, pos = row, base_in
            elif kind == "clasp":
                beads.append(Bead(source_at[row, t], off, downward=True))
                level, pos = row, base_in + off
            elif kind in CROSSINGS:
                sw, se = _CROSSING_LEGS[kind]
                src = source_at[row, t]
                if off == 1:
                    beads.append(Bead(src, sw, downward=True))
                    level, pos = row, base_in
                else:
                    beads.append(Bead(src, se, downward=True))
                    level, pos = row, base_in + 1
            else:  # cup
                if off == 0:
                    beads.append(Bead(PIVOTAL, -1))
                pos = base_out + 1 - off
                up = True
        if up and (level, pos) == start:
            return beads
    msg = f"component starting at level {start[0]}, position {start[1]} does not close"
    raise DiagramValidationError([msg])


def validate(d: SliceDiagram) -> Census:
    """Check strand consistency and count components.

    Raises:
        DiagramValidationError: On width mismatch or open endpoints.
    """
    return bead(d).census


# ── Evaluation ───────────────────────────────────────────────────────────


class _Evaluator:
    def __init__(self, ctx: UqContext, beaded: BeadedDiagram) -> None:
        self.ctx = ctx
        self.beaded = beaded
        self.terms: list[list[tuple[tuple[Triple, ...], CycloScalar]]] = []
        for s in beaded.sources:
            tile = beaded.diagram.rows[s.row][s.column]
            self.terms.append(list(self._source_tensor(tile.kind, tile.k).terms.items()))
        self.g = uq.pivotal(ctx)
        self.g_inv = uq.gen_K(ctx, -1)
        self._legs: dict[tuple[Triple, bool], AlgebraElement] = {}

    def _source_tensor(self, kind: str, k: int) -> uq.TensorElement:
        ctx = self.ctx
        if kind == "xpos":
            return uq.r_matrix(ctx)
        if kind == "xneg":
            return uq.r_matrix_inv(ctx)
        return ctx.cached(
            f"kirby:clasp{k}", lambda: uq.iterated_coproduct(uq.cointegral(ctx), k),
        )

    def leg(self, m: Triple, downward: bool) -> AlgebraElement:
        key = (m, downward)
        x = self._legs.get(key)
        if x is None:
            if downward:
                x = uq.antipode_monomial(self.ctx, m)
            else:
                x = AlgebraElement.monomial(self.ctx, m)
            self._legs[key] = x
        return x

    def component_table(
        self, beads: list[Bead], internal: set[int],
    ) -> dict[Assignment, CycloScalar]:
        """``lambda(w g^{-1})`` keyed by the term choices of external sources."""
        ctx = self.ctx
        last = {b.source: i for i, b in enumerate(beads)}
        states: dict[Assignment, AlgebraElement] = {(): AlgebraElement.one(ctx)}
        for i, b in enumerate(beads):
            if b.source == PIVOTAL:
                g = self.g if b.leg > 0 else self.g_inv
                states = {k: uq.multiply(g, x) for k, x in states.items()}
                continue
            s = b.source
            closing = s in internal and last[s] == i
            parts: dict[Assignment, list[tuple[AlgebraElement, CycloScalar | int]]] = (
                defaultdict(list)
            )
            for key, x in states.items():
                chosen = dict(key)
                if s in chosen:
                    choices = [(chosen[s], 1)]
                else:
                    choices = [
                        (t, coef if s in internal else 1)
                        for t, (_, coef) in enumerate(self.terms[s])
                    ]
                for t, c in choices:
                    y = uq.multiply(self.leg(self.terms[s][t][0][b.leg], b.downward), x)
                    if closing:
                        new_key = tuple(p for p in key if p[0] != s)
                    elif s in chosen:
                        new_key = key
                    else:
                        new_key = tuple(sorted((*key, (s, t))))
                    parts[new_key].append((y, c))
            states = {
                k: AlgebraElement.combine(ctx, v) for k, v in parts.items()
            }
            states = {k: x for k, x in states.items() if not x.is_zero()}

        table: dict[Assignment, CycloScalar] = {}
        for key, x in states.items():
            value = uq.integral(uq.multiply(x, self.g_inv))
            if not value.is_zero():
                table[key] = value
        return table

    def run(self) -> CycloScalar:
        ctx = self.ctx
        beaded = self.beaded
        result = CycloScalar.one(ctx.cyclo)
        if beaded.empty_clasps:
            eps_lambda = uq.counit(uq.cointegral(ctx))
            result = result * eps_lambda ** beaded.empty_clasps

        touching: dict[int, set[int]] = defaultdict(set)
        for c, beads in enumerate(beaded.components):
            for b in beads:
                if b.source != PIVOTAL:
                    touching[b.source].add(c)
        internal = {s for s, comps in touching.items() if len(comps) == 1}

        tables = [
            (self.component_table(beads, internal), {
                b.source for b in beads if b.source not in internal and b.source != PIVOTAL
            })
            for beads in beaded.components
        ]
        return result * self._join(tables, touching)

    def _join(
        self,
        tables: Iterable[tuple[dict[Assignment, CycloScalar], set[int]]],
        touching: dict[int, set[int]],
    ) -> CycloScalar:
        cy = self.ctx.cyclo
        remaining = {s: len(c) for s, c in touching.items()}
        acc: dict[Assignment, CycloScalar] = {(): CycloScalar.one(cy)}
        open_sources: set[int] = set()
        for table, srcs in tables:
            common = sorted(open_sources & srcs)
            index: dict[tuple[int, ...], list[Assignment]] = defaultdict(list)
            for key in table:
                chosen = dict(key)
                index[tuple(chosen[s] for s in common)].append(key)

            closing = set()
            for s in srcs:
                remaining[s] -= 1
                if remaining[s] == 0:
                    closing.add(s)

            joined: dict[Assignment, CycloScalar] = {}
            for ka, va in acc.items():
                da = dict(ka)
                for kc in index.get(tuple(da[s] for s in common), ()):
                    merged = {**da, **dict(kc)}
                    value = va * table[kc]
                    for s in closing:
                        value = value * self.terms[s][merged.pop(s)][1]
                    new_key = tuple(sorted(merged.items()))
                    prev = joined.get(new_key)
                    joined[new_key] = value if prev is None else prev + value
            acc = {k: v for k, v in joined.items() if not v.is_zero()}
            open_sources = (open_sources | srcs) - closing
        return acc.get((), CycloScalar.zero(cy))


def evaluate_closed(d: SliceDiagram, ctx: UqContext) -> CycloScalar:
    """The scalar J_4 of a closed diagram.

    Raises:
        DiagramValidationError: If *d* is not a valid closed diagram.
    """
    beaded = bead(d)
    _logger.debug(
        "Evaluating %d component(s), %d source(s) at r=%d",
        len(beaded.components), len(beaded.sources), ctx.r,
    )
    return _Evaluator(ctx, beaded).run()


def evaluate_signed_closed(s: SignedDiagram, ctx: UqContext) -> CycloScalar:
    """``lambda(v_+)^{-n}`` times the closed evaluation.

    Raises:
        TwistDegenerateError: If ``lambda(v_+) = 0`` (r = 0 mod 8).
    """
    factor = uq.signed_normalization(ctx, s.n)
    return factor * evaluate_closed(s.diagram, ctx)


def disjoint_union(*diagrams: SliceDiagram) -> SliceDiagram:
    """Stack closed diagrams vertically; evaluation is multiplicative."""
    rows: list[Row] = []
    for d in diagrams:
        rows.extend(d.rows)
    return SliceDiagram(tuple(rows))


def fixtures() -> dict[str, SliceDiagram]:
    """All built-in fixture diagrams by name."""
    return {name: registry.get_fixture(name) for name in registry.list_fixtures()}
