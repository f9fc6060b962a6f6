"""
Run configuration: packaged TOML defaults, an optional override file, then
command-line flags.
"""

from __future__ import annotations

import logging
import tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

_logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).resolve().parent / "defaults.toml"

COMMANDS = frozenset({"eval", "invariant", "verify", "table"})
FORMATS = frozenset({"text", "json"})

_SECTION_KEYS: dict[str, frozenset[str]] = {
    "verify": frozenset({"sample", "rank3_sample", "pair_sample", "seed"}),
    "table": frozenset({"r_min", "r_max"}),
    "numeric": frozenset({"tolerance"}),
    "parallel": frozenset({"jobs"}),
}


class ConfigError(ValueError):
    """Raised for an unreadable or malformed configuration file.

    Attributes:
        errors: List of individual error descriptions.
    """

    def __init__(self, errors: list[str], path: Path | str) -> None:
        self.errors = errors
        self.path = str(path)
        detail = "\n  ".join(errors)
        super().__init__(f"Invalid config '{path}':\n  {detail}")


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    command: str
    r: int = 3
    sample: int = 500
    rank3_sample: int = 300
    pair_sample: int = 0
    seed: int = 0
    jobs: int = 0
    output_format: str = "text"
    tolerance: float = 1e-9
    r_min: int = 3
    r_max: int = 16

    def validate(self) -> list[str]:
        errors: list[str] = []
        if self.command not in COMMANDS:
            errors.append(f"unknown command {self.command!r}")
        if self.r < 3:
            errors.append(f"--r must be at least 3, got {self.r}")
        if self.r_min < 3 or self.r_max < self.r_min:
            errors.append(f"invalid r range {self.r_min}..{self.r_max}")
        if self.sample < 1 or self.rank3_sample < 1:
            errors.append("sample sizes must be positive")
        if self.pair_sample < 0:
            errors.append(f"pair sample must be 0 or positive, got {self.pair_sample}")
        if self.jobs < 0:
            errors.append(f"--jobs must be 0 or positive, got {self.jobs}")
        if self.output_format not in FORMATS:
            errors.append(f"--format must be one of {sorted(FORMATS)}")
        return errors


def _read(path: Path) -> dict[str, Any]:
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([str(exc)], path) from None


def load_settings(override: Path | str | None = None) -> dict[str, Any]:
    """Flat settings dict: packaged defaults, then *override* on top.

    Raises:
        ConfigError: On unknown sections/keys or wrong value types.
        FileNotFoundError: If *override* does not exist.
    """
    merged: dict[str, Any] = {}
    sources = [DEFAULTS_PATH]
    if override is not None:
        sources.append(Path(override))
    for path in sources:
        data = _read(path)
        errors: list[str] = []
        for section, table in data.items():
            allowed = _SECTION_KEYS.get(section)
            if allowed is None:
                errors.append(f"unknown section [{section}]")
                continue
            if not isinstance(table, dict):
                errors.append(f"[{section}] must be a table")
                continue
            for key, value in table.items():
                if key not in allowed:
                    errors.append(f"[{section}]: unknown key '{key}'")
                elif isinstance(value, bool) or not isinstance(value, (int, float)):
                    errors.append(f"{section}.{key} must be a number")
                else:
                    merged[key] = value
        if errors:
            raise ConfigError(errors, path)
        _logger.debug("Loaded settings from %s", path)
    return merged


def parse_r_range(text: str) -> tuple[int, int]:
    """``"A..B"`` (or a single ``"A"``) to an inclusive pair.

    Raises:
        ValueError: On malformed input.
    """
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        msg = f"expected a range like 3..8, got {text!r}"
        raise ValueError(msg) from None
    if a < 3 or b < a:
        msg = f"r range {text!r} must satisfy 3 <= A <= B"
        raise ValueError(msg)
    return a, b
