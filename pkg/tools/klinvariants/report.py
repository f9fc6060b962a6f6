"""
JSON payloads for scalars, verification reports and value tables.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, TextIO

from . import __version__, get_build_datetime
from .cyclo import CycloContext, CycloScalar, embed_numeric

if TYPE_CHECKING:
    from .uqsl2 import VerificationReport


def scalar_to_dict(x: CycloScalar) -> dict[str, Any]:
    """``{"exact": {"den", "coeffs"}, "approx": [re, im]}``.

    ``coeffs`` are the integer numerators of the power basis ``zeta_L^k``
    over the common denominator ``den``.
    """
    re, im = embed_numeric(x)
    return {
        "exact": {"den": x.denominator, "coeffs": list(x.numerators)},
        "approx": [re, im],
    }


def scalar_from_dict(ctx: CycloContext, data: dict[str, Any]) -> CycloScalar:
    """Inverse of :func:`scalar_to_dict`.

    Raises:
        ValueError: If the payload is malformed.
    """
    try:
        exact = data["exact"]
        return CycloScalar(ctx, [int(c) for c in exact["coeffs"]], int(exact["den"]))
    except (KeyError, TypeError) as exc:
        msg = f"malformed scalar payload: {exc}"
        raise ValueError(msg) from None


def format_scalar(x: CycloScalar) -> str:
    re, im = embed_numeric(x)
    return f"{x.format()}  ~  {re:+.12f} {im:+.12f}i"


def outcome(
    report: VerificationReport, expected: set[str],
) -> tuple[bool, dict[str, Any]]:
    """Compare a report against the checks predicted to fail.

    Returns:
        ``(matches, payload)``; *matches* is true when exactly the expected
        checks failed.
    """
    failed = {c.name for c in report.checks if not c.passed}
    unexpected_fail = sorted(failed - expected)
    unexpected_pass = sorted(expected - failed)
    payload = report.to_dict()
    payload["expected_failures"] = sorted(expected)
    payload["unexpected_failures"] = unexpected_fail
    payload["unexpected_passes"] = unexpected_pass
    matches = not unexpected_fail and not unexpected_pass
    payload["outcome"] = "as-expected" if matches else "mismatch"
    return matches, payload


def with_metadata(payload: dict[str, Any]) -> dict[str, Any]:
    out = dict(payload)
    out["generated"] = {
        "timestamp": get_build_datetime().isoformat(),
        "generator": "klinvariants",
        "version": __version__,
    }
    return out


def write_json(
    payload: dict[str, Any], output: Path | str | None = None, stream: TextIO | None = None,
) -> None:
    """Pretty JSON with stable key order, to *output* or the stream."""
    text = json.dumps(with_metadata(payload), indent=2, ensure_ascii=False, sort_keys=True)
    if output is None:
        (stream or sys.stdout).write(text + "\n")
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        f.write(text)
        f.write("\n")
