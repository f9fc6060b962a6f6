#!/usr/bin/env python3
"""
klinvariants CLI - exact Kerler-Lyubashenko invariants at u_q(sl2).

Usage:
    python -m tools.klinvariants.cli eval --r 3 "vplus ; lambda"
    python -m tools.klinvariants.cli eval --r 3 --file word.txt [--input "1,0,2"]
    python -m tools.klinvariants.cli invariant --r 4 hopf [--signed N | --use-stored-n]
    python -m tools.klinvariants.cli verify --r 8 modular [--format json]
    python -m tools.klinvariants.cli table --what hopf --r-range 3..8 [--jobs N]
    python -m tools.klinvariants.cli fixtures list
    python -m tools.klinvariants.cli fixtures check <name>

Exit status: 0 success (or the predicted outcome), 1 verification or table
mismatch, 2 any other error (bad input included).
"""

import argparse
import logging
import os
import sys
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, TypeVar

from . import __version__, algdsl, kirby, numeric, report, transmute
from . import uqsl2 as uq
from .config import ConfigError, RunConfig, load_settings, parse_r_range
from .diagram_schema import DiagramValidationError, load_diagram
from .fixture_registry import registry
from .transmute import ArityError
from .uqsl2 import TensorElement, TwistDegenerateError

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2

SUITES = (
    "hopf",
    "quasitriangular",
    "integral",
    "transmutation",
    "modular",
    "anomaly-free",
    "closed-forms",
)
TABLES = ("stabilization", "hopf", "factorizable")

_INPUT_ERRORS = (
    algdsl.DslSyntaxError,
    ArityError,
    DiagramValidationError,
    ConfigError,
    TwistDegenerateError,
    FileNotFoundError,
    KeyError,
    ValueError,
)


class _InputError(Exception):
    """Bad arguments detected after parsing."""


_T = TypeVar("_T")
_R = TypeVar("_R")


def parallel_map(fn: Callable[[_T], _R], items: Iterable[_T], jobs: int = 0) -> list[_R]:
    """Map *fn* over *items* in worker processes; results keep input order.

    *jobs* of 0 uses one worker per CPU.  With one job or one item the map
    runs in this process.
    """
    items = list(items)
    workers = min(len(items), jobs or os.cpu_count() or 1)
    if workers <= 1:
        return [fn(x) for x in items]
    _logger.debug("Mapping %d items over %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, default=3, help="Root-of-unity order (>= 3)")
    common.add_argument(
        "--format", dest="output_format", choices=("text", "json"), default="text",
    )
    common.add_argument("--output", type=Path, help="Write JSON output to a file")
    common.add_argument("--config", type=Path, help="TOML file overriding defaults")
    common.add_argument(
        "--verbose", "-v", action="store_true", help="Enable debug logging",
    )
    common.add_argument(
        "--jobs", "-j", type=int, help="Worker processes (0 = one per CPU, 1 = in-process)",
    )
    common.add_argument(
        "--reproducible",
        action="store_true",
        help="Produce reproducible output (fixed timestamps)",
    )

    parser = argparse.ArgumentParser(
        prog="klinvariants",
        description="Exact Kerler-Lyubashenko invariants at u_q(sl2)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m tools.klinvariants.cli eval --r 3 "vplus ; lambda"
  python -m tools.klinvariants.cli invariant --r 3 hopf
  python -m tools.klinvariants.cli invariant --r 3 unknot+1 --signed 1
  python -m tools.klinvariants.cli verify --r 4 closed-forms
  python -m tools.klinvariants.cli table --what factorizable --r-range 3..16
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    ev = sub.add_parser("eval", parents=[common], help="Evaluate a morphism word")
    ev.add_argument("expression", nargs="?", help="Word, e.g. 'wplus ; (lambda * lambda)'")
    ev.add_argument("--file", type=Path, help="Read the word from a file")
    ev.add_argument(
        "--input",
        help="Basis tensor for open words: 'a,b,c' per slot, slots separated by '|'",
    )
    ev.add_argument("--signed", type=int, help="Signature defect n for closed words")

    inv = sub.add_parser("invariant", parents=[common], help="Evaluate a closed diagram")
    inv.add_argument("diagram", help="Diagram JSON file or built-in fixture name")
    signed = inv.add_mutually_exclusive_group()
    signed.add_argument("--signed", type=int, help="Signature defect n (J3^sigma)")
    signed.add_argument(
        "--use-stored-n",
        action="store_true",
        help="Evaluate J3^sigma with the defect n stored in the diagram",
    )
    inv.add_argument("--fixture-dir", type=Path, help="Extra fixture directory")

    ver = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    ver.add_argument("suite", nargs="?", choices=SUITES)
    ver.add_argument("--suite", dest="suite_flag", choices=SUITES)
    ver.add_argument("--sample", type=int, help="Sampled tuples for arity-2 laws")
    ver.add_argument("--rank3-sample", type=int, help="Sampled tuples for arity-3 laws")
    ver.add_argument(
        "--pair-sample", type=int, help="Sampled pairs for arity-2 laws (0 = every pair)",
    )
    ver.add_argument("--seed", type=int, help="Sampling seed")

    tab = sub.add_parser("table", parents=[common], help="Print a value table")
    tab.add_argument("--what", choices=TABLES, required=True)
    tab.add_argument("--r-range", help="Inclusive range A..B (default from config)")

    fx = sub.add_parser("fixtures", help="List or inspect fixture diagrams")
    fx.add_argument("--fixture-dir", type=Path, help="Extra fixture directory")
    fx_sub = fx.add_subparsers(dest="action")
    fx_sub.required = True
    fx_sub.add_parser("list", help="List available fixtures")
    check_p = fx_sub.add_parser("check", help="Validate and summarise a fixture")
    check_p.add_argument("name")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """Merge packaged defaults, ``--config`` and flags into a :class:`RunConfig`."""
    settings = load_settings(getattr(args, "config", None))
    cfg = RunConfig(command=args.command, r=args.r, output_format=args.output_format)
    for key in (
        "sample", "rank3_sample", "pair_sample", "seed", "jobs", "tolerance", "r_min", "r_max",
    ):
        if key in settings:
            setattr(cfg, key, type(getattr(cfg, key))(settings[key]))
    for key in ("sample", "rank3_sample", "pair_sample", "seed", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "r_range", None):
        cfg.r_min, cfg.r_max = parse_r_range(args.r_range)
    errors = cfg.validate()
    if errors:
        raise _InputError("; ".join(errors))
    return cfg


# ── eval ──────────────────────────────────────────────────────────────────


def _parse_input(ctx: uq.UqContext, text: str) -> TensorElement:
    slots = []
    for chunk in text.split("|"):
        parts = [int(p) for p in chunk.split(",")]
        if len(parts) != 3:
            msg = f"basis slot {chunk.strip()!r} must be 'a,b,c'"
            raise _InputError(msg)
        slots.append(uq.AlgebraElement.monomial(ctx, (parts[0], parts[1], parts[2])))
    return TensorElement.pure(slots)


def cmd_eval(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.file is not None:
        expr = algdsl.load_expression(args.file)
    elif args.expression is not None:
        expr = algdsl.parse(args.expression)
    else:
        raise _InputError("eval needs an expression or --file")
    ctx = uq.make_uq(cfg.r)
    text = algdsl.format_expr(expr)

    if expr.arity != (0, 0):
        if args.input is None:
            msg = f"{text} has arity {expr.arity}; supply --input for open words"
            raise _InputError(msg)
        out = algdsl.evaluate(expr, _parse_input(ctx, args.input))
        if cfg.output_format == "json":
            terms = [
                {"slots": [list(m) for m in key], **report.scalar_to_dict(v)}
                for key, v in sorted(out.terms.items())
            ]
            report.write_json(
                {"r": cfg.r, "expression": text, "rank": out.rank, "terms": terms},
                args.output,
            )
        else:
            print(f"r = {cfg.r}: {text}")
            print(out.format())
        return EXIT_OK

    if args.signed is not None:
        value = algdsl.evaluate_signed(algdsl.SignedExpr(expr, args.signed), ctx)
    else:
        value = algdsl.evaluate_scalar(expr, ctx)
    _emit_scalar(cfg, args, {"expression": text, "signed": args.signed}, value)
    return EXIT_OK


def _emit_scalar(
    cfg: RunConfig, args: argparse.Namespace, extra: dict[str, Any], value: Any,
) -> None:
    if cfg.output_format == "json":
        report.write_json({"r": cfg.r, **extra, **report.scalar_to_dict(value)}, args.output)
        return
    label = ", ".join(f"{k}={v}" for k, v in extra.items() if v is not None)
    print(f"r = {cfg.r}: {label}")
    print(report.format_scalar(value))


# ── invariant ─────────────────────────────────────────────────────────────


def cmd_invariant(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.fixture_dir:
        registry.add_fixture_dir(args.fixture_dir)
    path = Path(args.diagram)
    if path.suffix == ".json" and path.exists():
        diagram, meta = load_diagram(path)
        name, stored_n = meta["name"], meta["n"]
    else:
        name = path.stem if path.suffix == ".json" else args.diagram
        diagram, stored_n = registry.get_signed(name)
    n = stored_n if args.use_stored_n else args.signed
    ctx = uq.make_uq(cfg.r)
    census = kirby.validate(diagram)
    if n is not None:
        value = kirby.evaluate_signed_closed(kirby.SignedDiagram(diagram, n), ctx)
    else:
        value = kirby.evaluate_closed(diagram, ctx)
    extra = {"diagram": name, "signed": n}
    if cfg.output_format == "json":
        extra["census"] = census.to_dict()
    _emit_scalar(cfg, args, extra, value)
    return EXIT_OK


# ── verify ────────────────────────────────────────────────────────────────


SUITE_REPORTS: dict[str, tuple[str, ...]] = {
    "hopf": ("hopf",),
    "quasitriangular": ("quasitriangular",),
    "integral": ("integral",),
    "closed-forms": ("closed-forms",),
    "transmutation": ("braided-hopf", "bp-ribbon", "bp-unimodular"),
    "modular": ("modular",),
    "anomaly-free": ("anomaly-free",),
}


def suite_report(name: str, cfg: RunConfig) -> uq.VerificationReport:
    """Run the single report *name* of a suite at ``cfg.r``."""
    ctx = uq.make_uq(cfg.r)
    if name == "hopf":
        return uq.verify_hopf_axioms(ctx, cfg.sample, cfg.seed, cfg.pair_sample)
    if name == "quasitriangular":
        return uq.verify_quasitriangular(ctx)
    if name == "integral":
        return uq.verify_integral_laws(ctx)
    if name == "closed-forms":
        return uq.verify_closed_forms(ctx)
    if name == "braided-hopf":
        return transmute.verify_braided_hopf(
            ctx, cfg.rank3_sample, cfg.seed, cfg.pair_sample,
        )
    if name == "bp-ribbon":
        return transmute.verify_bp_ribbon(ctx)
    if name == "bp-unimodular":
        return transmute.verify_bp_unimodular(ctx)
    if name == "modular":
        return transmute.verify_modular(ctx)
    return transmute.verify_anomaly_free(ctx)


def run_suite(suite: str, cfg: RunConfig) -> list[uq.VerificationReport]:
    """The reports of *suite*, one worker each, in a fixed order."""
    return parallel_map(partial(suite_report, cfg=cfg), SUITE_REPORTS[suite], cfg.jobs)


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    suite = args.suite_flag or args.suite
    if suite is None:
        raise _InputError(f"verify needs a suite: {', '.join(SUITES)}")
    all_match = True
    payloads = []
    for rep in run_suite(suite, cfg):
        matches, payload = report.outcome(rep, transmute.expected_failures(rep.suite, cfg.r))
        all_match = all_match and matches
        payloads.append(payload)
        if cfg.output_format == "text":
            print(f"[{rep.suite}] r = {cfg.r}: {payload['outcome']}")
            for c in rep.checks:
                mark = "ok  " if c.passed else "FAIL"
                line = f"  {mark} {c.name}"
                if c.note:
                    line += f" ({c.note})"
                if c.counterexample:
                    line += f" at {c.counterexample}"
                print(line)
    if cfg.output_format == "json":
        report.write_json(
            {"r": cfg.r, "suite": suite, "passed": all_match, "reports": payloads},
            args.output,
        )
    return EXIT_OK if all_match else EXIT_MISMATCH


# ── table ─────────────────────────────────────────────────────────────────


def table_row(what: str, r: int, tolerance: float = numeric.DEFAULT_TOLERANCE) -> dict[str, Any]:
    """One row: definitional value, closed-form value and their agreement."""
    ctx = uq.make_uq(r)
    if what == "factorizable":
        computed = uq.is_factorizable(ctx)
        expected = uq.factorizable_expected(r)
        return {
            "r": r,
            "computed": computed,
            "closed_form": expected,
            "drinfeld_rank": uq.drinfeld_rank(ctx),
            "dim": ctx.dim,
            "match": computed == expected,
        }
    if what == "stabilization":
        value = uq.stabilization_coefficient(ctx)
        closed = uq.stabilization_closed_form(ctx)
    else:
        value = uq.hopf_coefficient(ctx)
        closed = uq.hopf_closed_form(ctx)
    floating = numeric.float_value(what, r)
    return {
        "r": r,
        "computed": report.scalar_to_dict(value),
        "closed_form": report.scalar_to_dict(closed),
        "float": [floating.real, floating.imag],
        "match": value == closed and numeric.agrees(value, floating, tolerance),
        "text": value.format(),
    }


def cmd_table(args: argparse.Namespace, cfg: RunConfig) -> int:
    rows = parallel_map(
        partial(table_row, args.what, tolerance=cfg.tolerance),
        range(cfg.r_min, cfg.r_max + 1),
        cfg.jobs,
    )
    ok = all(row["match"] for row in rows)
    if cfg.output_format == "json":
        report.write_json({"what": args.what, "rows": rows, "all_match": ok}, args.output)
    else:
        print(f"{'r':>3}  {'match':<5}  value")
        for row in rows:
            shown = row["computed"] if args.what == "factorizable" else row["text"]
            print(f"{row['r']:>3}  {'yes' if row['match'] else 'NO':<5}  {shown}")
    return EXIT_OK if ok else EXIT_MISMATCH


# ── fixtures ──────────────────────────────────────────────────────────────


def cmd_fixtures(args: argparse.Namespace) -> int:
    if args.fixture_dir:
        registry.add_fixture_dir(args.fixture_dir)
    if args.action == "list":
        names = registry.list_fixtures()
        if not names:
            print("No fixtures found.")
            return EXIT_OK
        print("Available fixtures:")
        for name in names:
            info = registry.get_fixture_info(name)
            desc = info.get("description", "")
            print(f"  {name:<16} {desc}")
        return EXIT_OK

    if args.name not in registry:
        print(f"Error: Unknown fixture '{args.name}'.", file=sys.stderr)
        return EXIT_INPUT
    info = registry.get_fixture_info(args.name)
    print(f"Fixture:      {info['name']}")
    print(f"Source:       {info['source']}")
    if info.get("path"):
        print(f"Path:         {info['path']}")
    print(f"Rows:         {info['rows']}")
    print(f"Defect n:     {info['n']}")
    try:
        census = kirby.validate(registry.get_fixture(args.name))
    except DiagramValidationError as exc:
        print(f"\nValidation FAILED: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"Undotted:     {census.undotted}")
    print(f"Dotted:       {census.dotted}")
    print(f"Crossings:    {census.crossings}")
    print("\nValidation OK")
    return EXIT_OK


# ── entry point ───────────────────────────────────────────────────────────


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "reproducible", False):
        os.environ.setdefault("SOURCE_DATE_EPOCH", "0")

    try:
        if args.command == "fixtures":
            return cmd_fixtures(args)
        cfg = make_config(args)
        handlers = {
            "eval": cmd_eval,
            "invariant": cmd_invariant,
            "verify": cmd_verify,
            "table": cmd_table,
        }
        return handlers[args.command](args, cfg)
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_INPUT
    except (_InputError, *_INPUT_ERRORS) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if getattr(args, "verbose", False):
            import traceback

            traceback.print_exc()
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
