"""Tests for CLI helpers that run in-process."""

import io
import unittest
from contextlib import redirect_stderr
from unittest import mock

from tools.klinvariants import cli


class TestParallelMap(unittest.TestCase):
    """Order and fallback of the process pool map."""

    def test_results_keep_input_order(self):
        """Two workers return results in the order of the inputs."""
        items = [5, -3, 8, -1, 0, 7]
        self.assertEqual(cli.parallel_map(abs, items, jobs=2), [5, 3, 8, 1, 0, 7])

    def test_single_job_runs_in_process(self):
        """With one job no pool is started."""
        with mock.patch.object(cli, "ProcessPoolExecutor") as pool:
            self.assertEqual(cli.parallel_map(abs, [-1, -2], jobs=1), [1, 2])
        pool.assert_not_called()

    def test_empty_input(self):
        """No items, no work."""
        self.assertEqual(cli.parallel_map(abs, [], jobs=4), [])


class TestExitCodes(unittest.TestCase):
    """Unexpected failures map to exit status 2."""

    def test_unexpected_error_exits_two(self):
        """A RuntimeError from a handler is reported, not raised."""
        stderr = io.StringIO()
        with mock.patch.object(cli, "cmd_table", side_effect=RuntimeError("boom")), \
                redirect_stderr(stderr):
            code = cli.main(["table", "--what", "hopf", "--r-range", "3"])
        self.assertEqual(code, cli.EXIT_INPUT)
        self.assertEqual(code, 2)
        self.assertIn("Error: boom", stderr.getvalue())

    def test_interrupt_exits_two(self):
        """Ctrl-C during a command exits with status 2."""
        stderr = io.StringIO()
        with mock.patch.object(cli, "cmd_eval", side_effect=KeyboardInterrupt), \
                redirect_stderr(stderr):
            code = cli.main(["eval", "--r", "3", "eta ; eps"])
        self.assertEqual(code, 2)
        self.assertIn("Operation cancelled by user", stderr.getvalue())


if __name__ == "__main__":
    unittest.main()
