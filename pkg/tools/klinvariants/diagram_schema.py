"""
JSON slice-diagram schema validation.

A diagram file is a JSON object::

    {"name": "hopf",
     "description": "0-framed Hopf link",
     "n": 0,
     "rows": [[{"t": "cup"}, {"t": "cup"}],
              [{"t": "vert"}, {"t": "xpos"}, {"t": "vert"}],
              ...]}

Rows are listed bottom to top.  Only ``rows`` is required; ``n`` is the
signature defect used by signed evaluation.  Every problem is collected
with its ``row``/``column`` coordinates and raised once.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

_logger = logging.getLogger(__name__)

# Tile kind -> (inputs, outputs); clasp is (k, k).
TILE_ARITIES: dict[str, tuple[int, int]] = {
    "vert": (1, 1),
    "cup": (0, 2),
    "cap": (2, 0),
    "xpos": (2, 2),
    "xneg": (2, 2),
}
TILE_KINDS: frozenset[str] = frozenset({*TILE_ARITIES, "clasp"})
CROSSINGS: frozenset[str] = frozenset({"xpos", "xneg"})

_TOP_LEVEL_KEYS = frozenset({"name", "description", "n", "rows"})
_TILE_KEYS = frozenset({"t", "k"})


class DiagramValidationError(Exception):
    """Raised when a slice diagram is malformed.

    Attributes:
        errors: List of individual error descriptions.
        source: File path or label of the failing diagram.
    """

    def __init__(self, errors: list[str], source: Path | str = "<diagram>") -> None:
        self.errors = errors
        self.source = str(source)
        detail = "\n  ".join(errors)
        super().__init__(f"Invalid diagram '{source}':\n  {detail}")


@dataclass(frozen=True)
class Tile:
    kind: str
    k: int = 0

    @property
    def inputs(self) -> int:
        return self.k if self.kind == "clasp" else TILE_ARITIES[self.kind][0]

    @property
    def outputs(self) -> int:
        return self.k if self.kind == "clasp" else TILE_ARITIES[self.kind][1]

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "clasp":
            return {"t": "clasp", "k": self.k}
        return {"t": self.kind}

    def __str__(self) -> str:
        return f"clasp({self.k})" if self.kind == "clasp" else self.kind


Row = tuple[Tile, ...]


@dataclass(frozen=True)
class SliceDiagram:
    """A closed Kirby tangle as rows of tiles, bottom to top."""

    rows: tuple[Row, ...] = ()

    @classmethod
    def of(cls, *rows: str) -> SliceDiagram:
        """Build from compact rows, e.g. ``SliceDiagram.of("cup", "xpos", "cap")``.

        Tiles in a row are space separated; ``clasp2`` is ``clasp(2)``.
        """
        return cls(tuple(tuple(_compact_tile(t) for t in row.split()) for row in rows))

    def widths(self) -> list[int]:
        """Strand count below each row, plus the count above the top row."""
        out = [sum(t.inputs for t in row) for row in self.rows]
        out.append(sum(t.outputs for t in self.rows[-1]) if self.rows else 0)
        return out

    def crossing_count(self) -> int:
        return sum(1 for row in self.rows for t in row if t.kind in CROSSINGS)

    def to_dict(self) -> dict[str, Any]:
        return {"rows": [[t.to_dict() for t in row] for row in self.rows]}

    def __str__(self) -> str:
        return " / ".join(" ".join(str(t) for t in row) for row in self.rows)


def _compact_tile(token: str) -> Tile:
    if token.startswith("clasp"):
        return Tile("clasp", int(token[5:] or 0))
    if token not in TILE_ARITIES:
        msg = f"unknown tile {token!r}"
        raise ValueError(msg)
    return Tile(token)


# ── Structural checks ─────────────────────────────────────────────────────


def structural_errors(d: SliceDiagram) -> list[str]:
    """Strand-count consistency between adjacent rows; empty when valid."""
    errors: list[str] = []
    below = 0
    for i, row in enumerate(d.rows):
        needed = sum(t.inputs for t in row)
        if needed != below:
            errors.append(
                f"row {i}: tiles consume {needed} strand(s) but "
                f"{below} arrive from below"
            )
        below = sum(t.outputs for t in row)
    if below != 0:
        errors.append(
            f"row {len(d.rows) - 1}: {below} open endpoint(s) above the top row"
        )
    return errors


def check_structure(d: SliceDiagram, source: Path | str = "<diagram>") -> None:
    errors = structural_errors(d)
    if errors:
        raise DiagramValidationError(errors, source)


# ── JSON parsing ──────────────────────────────────────────────────────────


def diagram_from_dict(
    data: Any, source: Path | str = "<diagram>",
) -> tuple[SliceDiagram, dict[str, Any]]:
    """Validate a parsed JSON object and build the diagram.

    Returns:
        The diagram and a metadata dict with ``name``, ``description``, ``n``.

    Raises:
        DiagramValidationError: Listing every schema and structure problem.
    """
    errors: list[str] = []
    if not isinstance(data, dict):
        raise DiagramValidationError(
            [f"top level must be an object, got {type(data).__name__}"], source,
        )

    _check_unknown_keys(data, _TOP_LEVEL_KEYS, "", errors)

    meta: dict[str, Any] = {
        "name": data.get("name", Path(str(source)).stem),
        "description": data.get("description", ""),
        "n": data.get("n", 0),
    }
    if not isinstance(meta["name"], str):
        errors.append(f"name must be str, got {type(meta['name']).__name__}")
    if not isinstance(meta["description"], str):
        errors.append("description must be str")
    if not isinstance(meta["n"], int) or isinstance(meta["n"], bool):
        errors.append(f"n must be int, got {type(meta['n']).__name__}")

    rows_cfg = data.get("rows")
    rows: list[Row] = []
    if rows_cfg is None:
        errors.append("missing required key 'rows'")
    elif not isinstance(rows_cfg, list):
        errors.append(f"rows must be a list, got {type(rows_cfg).__name__}")
    else:
        for i, row_cfg in enumerate(rows_cfg):
            if not isinstance(row_cfg, list):
                errors.append(f"row {i}: must be a list of tiles")
                continue
            row: list[Tile] = []
            for j, tile_cfg in enumerate(row_cfg):
                tile = _parse_tile(tile_cfg, f"row {i}, column {j}", errors)
                if tile is not None:
                    row.append(tile)
            rows.append(tuple(row))

    if errors:
        raise DiagramValidationError(errors, source)

    diagram = SliceDiagram(tuple(rows))
    check_structure(diagram, source)
    return diagram, meta


def load_diagram(path: Path | str) -> tuple[SliceDiagram, dict[str, Any]]:
    """Read and validate a diagram JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DiagramValidationError(
            [f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"],
            path,
        ) from None
    _logger.debug("Loaded diagram %s", path)
    return diagram_from_dict(data, path)


def dump_diagram(d: SliceDiagram, path: Path | str, **meta: Any) -> None:
    payload = {**meta, **d.to_dict()}
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ── Helpers ───────────────────────────────────────────────────────────────


def _parse_tile(cfg: Any, where: str, errors: list[str]) -> Tile | None:
    if not isinstance(cfg, dict):
        errors.append(f"{where}: tile must be an object, got {type(cfg).__name__}")
        return None
    _check_unknown_keys(cfg, _TILE_KEYS, where, errors)
    kind = cfg.get("t")
    if kind is None:
        errors.append(f"{where}: missing required key 't'")
        return None
    if kind not in TILE_KINDS:
        errors.append(
            f"{where}: unknown tile type {kind!r}; "
            f"expected one of {sorted(TILE_KINDS)}"
        )
        return None
    if kind != "clasp":
        if "k" in cfg:
            errors.append(f"{where}: 'k' is only valid on clasp tiles")
        return Tile(kind)
    k = cfg.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        errors.append(f"{where}: clasp needs an integer 'k' >= 0, got {k!r}")
        return None
    return Tile("clasp", k)


def _check_unknown_keys(
    cfg: dict[str, Any],
    allowed: frozenset[str],
    section: str,
    errors: list[str],
) -> None:
    for key in sorted(set(cfg) - allowed):
        where = f"{section}: " if section else ""
        errors.append(f"{where}unknown key '{key}'")
