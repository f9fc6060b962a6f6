"""
Integration tests that drive the CLI end to end.

Each test runs ``python -m tools.klinvariants.cli`` in a subprocess and checks
the exit status and the text or JSON it prints.
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

from tools.klinvariants.report import scalar_from_dict
from tools.klinvariants.uqsl2 import hopf_closed_form, make_uq, stabilization_coefficient

_PROJECT_ROOT = Path(__file__).resolve().parent.parent


def _run(*args: str) -> subprocess.CompletedProcess:
    env = {**os.environ, "SOURCE_DATE_EPOCH": "0"}
    return subprocess.run(
        [sys.executable, "-m", "tools.klinvariants.cli", *args],
        check=False,
        capture_output=True,
        text=True,
        cwd=_PROJECT_ROOT,
        env=env,
    )


class TestIntegration(unittest.TestCase):
    """Integration tests for the klinvariants CLI."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test fixtures."""
        shutil.rmtree(self.temp_dir)

    def test_cli_help_works(self):
        """Test that CLI help command works."""
        result = _run("--help")
        self.assertEqual(result.returncode, 0)
        self.assertIn("Exact Kerler-Lyubashenko invariants", result.stdout)

    def test_eval_closed_word(self):
        """eps(1) = 1 in text mode."""
        result = _run("eval", "--r", "3", "eta ; eps")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("r = 3: expression=eta ; eps", result.stdout)

    def test_eval_json(self):
        """lambda(v+) = i at r = 3, with generator metadata."""
        result = _run("eval", "--r", "3", "--format", "json", "vplus ; lambda")
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertEqual(payload["expression"], "vplus ; lambda")
        re, im = payload["approx"]
        self.assertAlmostEqual(re, 0.0, places=9)
        self.assertAlmostEqual(im, 1.0, places=9)
        self.assertEqual(payload["generated"]["generator"], "klinvariants")
        self.assertEqual(payload["generated"]["timestamp"], "1970-01-01T00:00:00+00:00")

    def test_eval_json_exact_value_reloads(self):
        """The exact payload of lambda(v+) parses back to the same field element."""
        result = _run("eval", "--r", "3", "--format", "json", "vplus ; lambda")
        self.assertEqual(result.returncode, 0, result.stderr)
        ctx = make_uq(3)
        value = scalar_from_dict(ctx.cyclo, json.loads(result.stdout))
        self.assertEqual(value, stabilization_coefficient(ctx))

    def test_eval_word_from_file(self):
        """--file reads the word and skips comment lines."""
        path = Path(self.temp_dir, "hopf.txt")
        path.write_text("# Hopf link\nwplus ; (lambda * lambda)\n", encoding="utf-8")
        result = _run("eval", "--r", "4", "--format", "json", "--file", str(path))
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertAlmostEqual(json.loads(result.stdout)["approx"][0], -1.0, places=9)

    def test_eval_open_word(self):
        """Open words need --input and print the output tensor."""
        result = _run("eval", "--r", "3", "mu")
        self.assertEqual(result.returncode, 2)
        result = _run(
            "eval", "--r", "3", "--format", "json", "--input", "1,0,0|0,1,0", "mu",
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertEqual(payload["rank"], 1)
        self.assertEqual(payload["terms"][0]["slots"], [[1, 1, 0]])

    def test_eval_syntax_error(self):
        """A malformed word is an input error with its position."""
        result = _run("eval", "--r", "3", "mu ;")
        self.assertEqual(result.returncode, 2)
        self.assertIn("at position 4", result.stderr)
        self.assertTrue(result.stderr.startswith("Error:"))

    def test_invariant_fixture(self):
        """The Hopf link fixture gives 1 at r = 3 with its census."""
        result = _run("invariant", "--r", "3", "--format", "json", "hopf")
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertEqual(payload["diagram"], "hopf")
        self.assertEqual(payload["census"], {"undotted": 2, "dotted": 0, "crossings": 2})
        self.assertEqual(payload["exact"]["coeffs"][0], payload["exact"]["den"])
        self.assertEqual(set(payload["exact"]["coeffs"][1:]), {0})

    def test_invariant_missing_json_falls_back_to_fixture(self):
        """'hopf.json' resolves to the fixture when no such file exists."""
        result = _run("invariant", "--r", "4", "hopf.json")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("diagram=hopf", result.stdout)

    def test_invariant_diagram_file(self):
        """A JSON diagram file is loaded and validated."""
        path = Path(self.temp_dir, "kink.json")
        path.write_text(
            json.dumps({"name": "kink", "n": 1,
                        "rows": [[{"t": "cup"}], [{"t": "xpos"}], [{"t": "cap"}]]}),
            encoding="utf-8",
        )
        result = _run(
            "invariant", "--r", "3", "--format", "json", "--signed", "1", str(path),
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        re, im = json.loads(result.stdout)["approx"]
        self.assertAlmostEqual(re, 1.0, places=9)
        self.assertAlmostEqual(im, 0.0, places=9)

    def test_invariant_uses_stored_n(self):
        """--use-stored-n takes n from the fixture: (unknot+1, 1) gives 1."""
        result = _run("invariant", "--r", "3", "unknot+1", "--use-stored-n")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("signed=1", result.stdout)
        result = _run(
            "invariant", "--r", "3", "--format", "json", "unknot-1", "--use-stored-n",
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertEqual(payload["signed"], -1)
        self.assertEqual(scalar_from_dict(make_uq(3).cyclo, payload), 1)

    def test_invariant_signed_flags_exclusive(self):
        """--signed and --use-stored-n cannot be combined."""
        result = _run("invariant", "--r", "3", "unknot+1", "--signed", "1", "--use-stored-n")
        self.assertEqual(result.returncode, 2)

    def test_invariant_degenerate_twist(self):
        """Signed evaluation at r = 8 is refused with exit status 2."""
        result = _run("invariant", "--r", "8", "unknot+1", "--signed", "1")
        self.assertEqual(result.returncode, 2)
        self.assertIn("twist non-degeneracy", result.stderr)

    def test_invariant_unknown_fixture(self):
        """An unknown fixture name is an input error."""
        result = _run("invariant", "--r", "3", "trefoil")
        self.assertEqual(result.returncode, 2)
        self.assertIn("Unknown fixture", result.stderr)

    def test_invalid_r(self):
        """r below 3 is rejected."""
        result = _run("eval", "--r", "2", "eta ; eps")
        self.assertEqual(result.returncode, 2)

    def test_verify_predicted_failure(self):
        """At r = 4 the modular suite fails exactly as predicted."""
        out = Path(self.temp_dir, "modular.json")
        result = _run(
            "verify", "--r", "4", "modular", "--format", "json", "--output", str(out),
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(out.read_text(encoding="utf-8"))
        self.assertTrue(payload["passed"])
        (rep,) = payload["reports"]
        self.assertEqual(rep["outcome"], "as-expected")
        self.assertEqual(rep["expected_failures"], ["copairing-nondegenerate"])

    def test_verify_text(self):
        """Closed forms hold at r = 3."""
        result = _run("verify", "--r", "3", "--suite", "closed-forms")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("[closed-forms] r = 3: as-expected", result.stdout)

    def test_verify_needs_suite(self):
        """verify without a suite is an input error."""
        result = _run("verify", "--r", "3")
        self.assertEqual(result.returncode, 2)

    def test_table(self):
        """Stabilization table rows all match their closed forms."""
        result = _run(
            "table", "--what", "stabilization", "--r-range", "3..6", "--format", "json",
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertTrue(payload["all_match"])
        self.assertEqual([row["r"] for row in payload["rows"]], [3, 4, 5, 6])

    def test_table_parallel_keeps_order(self):
        """--jobs 2 gives the rows of the serial run, in r order."""
        result = _run(
            "table", "--what", "hopf", "--r-range", "3..6", "--format", "json", "--jobs", "2",
        )
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertTrue(payload["all_match"])
        self.assertEqual([row["r"] for row in payload["rows"]], [3, 4, 5, 6])
        for row in payload["rows"]:
            ctx = make_uq(row["r"])
            self.assertEqual(scalar_from_dict(ctx.cyclo, row["computed"]), hopf_closed_form(ctx))

    def test_factorizable_table_text(self):
        """Factorizability table in text mode."""
        result = _run("table", "--what", "factorizable", "--r-range", "3..4")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("  4  yes    False", result.stdout)

    def test_config_override(self):
        """A bad --config file is an input error."""
        path = Path(self.temp_dir, "bad.toml")
        path.write_text("[verify]\nsamples = 3\n", encoding="utf-8")
        result = _run("table", "--what", "hopf", "--r-range", "3", "--config", str(path))
        self.assertEqual(result.returncode, 2)
        self.assertIn("unknown key 'samples'", result.stderr)

    def test_fixtures_list_and_check(self):
        """fixtures list shows the built-ins; check validates one."""
        result = _run("fixtures", "list")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("hopf-slid", result.stdout)
        result = _run("fixtures", "check", "cancel-pair")
        self.assertEqual(result.returncode, 0, result.stderr)
        self.assertIn("Dotted:       1", result.stdout)
        self.assertIn("Validation OK", result.stdout)
        result = _run("fixtures", "check", "trefoil")
        self.assertEqual(result.returncode, 2)


if __name__ == "__main__":
    unittest.main()
