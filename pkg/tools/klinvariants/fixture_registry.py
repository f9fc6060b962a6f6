"""
Fixture diagram registry with directory discovery.

Discovers built-in JSON diagrams from ``tools/klinvariants/fixtures/``,
user-supplied directories via ``--fixture-dir``, and diagrams registered
in code.

Discovery order (later wins on name collision, except two files in the
*same* directory claiming one name, which is an error):

1. Built-in JSON files in ``<package>/fixtures/*.json``.
2. Directories added via :meth:`add_fixture_dir`.
3. Diagrams registered via :meth:`register`.

Usage::

    from tools.klinvariants.fixture_registry import registry

    registry.list_fixtures()
    hopf = registry.get_fixture("hopf")
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from .diagram_schema import SliceDiagram, load_diagram

_logger = logging.getLogger(__name__)


class FixtureCollisionError(Exception):
    """Raised when two JSON files in the same directory claim the same name."""


class FixtureRegistry:
    """Named slice diagrams from files and code."""

    def __init__(self, *, discover_builtins: bool = True) -> None:
        # Maps fixture name -> JSON path or (diagram, n, description).
        self._entries: dict[str, Path | tuple[SliceDiagram, int, str]] = {}

        if discover_builtins:
            builtin_dir = Path(__file__).resolve().parent / "fixtures"
            if builtin_dir.is_dir():
                self._scan_directory(builtin_dir)

    # -- Public API ---------------------------------------------------------

    def add_fixture_dir(self, directory: Path | str) -> None:
        """Scan *directory* for ``*.json`` diagrams and add them."""
        directory = Path(directory)
        if not directory.is_dir():
            msg = f"Fixture directory does not exist: {directory}"
            raise FileNotFoundError(msg)
        self._scan_directory(directory)

    def register(
        self, name: str, diagram: SliceDiagram, *, n: int = 0, description: str = "",
    ) -> None:
        """Register a diagram built in code; overrides any file of that name."""
        existing = self._entries.get(name)
        if isinstance(existing, Path):
            _logger.info("Diagram '%s' overrides fixture file %s", name, existing)
        self._entries[name] = (diagram, n, description)

    def get_fixture(self, name: str) -> SliceDiagram:
        """Load the diagram called *name*.

        Raises:
            KeyError: If no fixture has that name.
            DiagramValidationError: If the file fails validation.
        """
        return self.get_signed(name)[0]

    def get_signed(self, name: str) -> tuple[SliceDiagram, int]:
        """The diagram and its signature defect ``n``."""
        entry = self._lookup(name)
        if isinstance(entry, Path):
            diagram, meta = load_diagram(entry)
            return diagram, meta["n"]
        return entry[0], entry[1]

    def list_fixtures(self) -> list[str]:
        """Return sorted list of registered fixture names."""
        return sorted(self._entries)

    def get_fixture_info(self, name: str) -> dict[str, Any]:
        entry = self._lookup(name)
        if isinstance(entry, Path):
            with entry.open(encoding="utf-8") as fh:
                data = json.load(fh)
            return {
                "name": name,
                "description": data.get("description", ""),
                "n": data.get("n", 0),
                "rows": len(data.get("rows", [])),
                "source": "json",
                "path": str(entry),
            }
        diagram, n, description = entry
        return {
            "name": name,
            "description": description,
            "n": n,
            "rows": len(diagram.rows),
            "source": "python",
        }

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    # -- Internals ----------------------------------------------------------

    def _lookup(self, name: str) -> Path | tuple[SliceDiagram, int, str]:
        if name not in self._entries:
            available = ", ".join(self.list_fixtures()) or "(none)"
            msg = f"Unknown fixture '{name}'. Available fixtures: {available}"
            raise KeyError(msg)
        return self._entries[name]

    def _scan_directory(self, directory: Path) -> None:
        new_entries: dict[str, Path] = {}
        for json_file in sorted(directory.glob("*.json")):
            try:
                with json_file.open(encoding="utf-8") as fh:
                    name = json.load(fh).get("name", json_file.stem)
            except (json.JSONDecodeError, AttributeError):
                # Full validation happens on load.
                name = json_file.stem
            if name in new_entries:
                msg = (
                    f"Fixture name '{name}' is claimed by multiple files "
                    f"in {directory}:\n"
                    f"  - {new_entries[name]}\n"
                    f"  - {json_file}"
                )
                raise FixtureCollisionError(msg)
            new_entries[name] = json_file.resolve()

        for name, path in new_entries.items():
            existing = self._entries.get(name)
            if isinstance(existing, Path) and existing != path:
                _logger.info("Fixture '%s' at %s overrides %s", name, path, existing)
            self._entries[name] = path
        _logger.debug("Discovered %d fixture(s) in %s", len(new_entries), directory)


# Module-level singleton
registry = FixtureRegistry()
