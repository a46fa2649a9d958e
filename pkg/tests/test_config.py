"""
Tests for settings resolution and the formatting helpers
"""

import shutil
import tempfile
import unittest
from pathlib import Path

from cliffordkt.config import Settings, load_settings, read_config_file, read_environment
from cliffordkt.utils import format_byte_size, format_value, grid_rows, parse_byte_size, render_table, write_csv


class TestSettings(unittest.TestCase):
    """Precedence of defaults, file, environment and flags."""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.missing = self.temp_dir / "missing.cfg"

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir)

    def test_defaults(self):
        """Without inputs the defaults apply."""
        settings = load_settings(self.missing, environ={})
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.memory_budget_bytes, 8 * 1024**3)
        self.assertEqual(settings.solver, "highs")

    def test_environment(self):
        """CKT_ variables override defaults and are coerced."""
        settings = load_settings(self.missing, environ={"CKT_WORKERS": "3", "CKT_MEMORY_BUDGET": "2G", "HOME": "/x"})
        self.assertEqual(settings.workers, 3)
        self.assertEqual(settings.memory_budget_bytes, 2 * 1024**3)

    def test_flags_beat_environment(self):
        """Non-None overrides win; None means not given."""
        settings = load_settings(self.missing, environ={"CKT_WORKERS": "3"}, workers=5, solver=None)
        self.assertEqual(settings.workers, 5)
        self.assertEqual(settings.solver, "highs")

    def test_config_file(self):
        """The [cliffordkt] section is read and overridden by the environment."""
        path = self.temp_dir / "ckt.cfg"
        path.write_text("[cliffordkt]\nsolver = simplex\nworkers = 2\nprogress = yes\nunrelated = 1\n")
        self.assertEqual(read_config_file(path)["solver"], "simplex")
        settings = load_settings(path, environ={"CKT_WORKERS": "4"})
        self.assertEqual(settings.solver, "simplex")
        self.assertEqual(settings.workers, 4)
        self.assertTrue(settings.progress)

    def test_file_without_section(self):
        """Other sections are ignored."""
        path = self.temp_dir / "other.cfg"
        path.write_text("[other]\nworkers = 9\n")
        self.assertEqual(read_config_file(path), {})

    def test_read_environment_filters(self):
        """Only known fields are collected."""
        values = read_environment({"CKT_SOLVER": "simplex", "CKT_NOPE": "1", "WORKERS": "2"})
        self.assertEqual(values, {"solver": "simplex"})

    def test_invalid_size(self):
        """Malformed budgets raise ValueError."""
        with self.assertRaises(ValueError):
            load_settings(self.missing, environ={"CKT_MEMORY_BUDGET": "lots"})


class TestUtils(unittest.TestCase):
    """Sizes, tables and CSV output."""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir)

    def test_parse_byte_size(self):
        """Units are binary and case-insensitive."""
        self.assertEqual(parse_byte_size("8GiB"), 8 * 1024**3)
        self.assertEqual(parse_byte_size("512m"), 512 * 1024**2)
        self.assertEqual(parse_byte_size("1.5K"), 1536)
        self.assertEqual(parse_byte_size("100"), 100)
        self.assertEqual(parse_byte_size(42), 42)
        for bad in ("", "G", "8Q", "-1K"):
            with self.assertRaises(ValueError, msg=bad):
                parse_byte_size(bad)

    def test_format_helpers(self):
        """Human-readable sizes and seven-digit values."""
        self.assertEqual(format_byte_size(1536), "1.5 KB")
        self.assertEqual(format_value(2**0.5), "1.4142136")

    def test_render_table(self):
        """Grids render with blanks for missing cells."""
        text = render_table("R", {(1, 0): 1.0, (2, 1): 2.0}, format_value)
        lines = text.splitlines()
        self.assertEqual(lines[0], "R")
        self.assertIn("n=2", lines[-1])
        self.assertIn("1.0000000", lines[3])
        self.assertEqual(render_table("E", {}), "E\n(empty)")

    def test_grid_rows_and_csv(self):
        """Rows follow the requested labels and land in a new directory."""
        rows = grid_rows({(1, 0): 6, (1, 1): 18}, [1, 2], [0, 1])
        self.assertEqual(rows, [[1, 6, 18], [2, "", ""]])
        path = write_csv(self.temp_dir / "sub" / "grid.csv", ["n", "k=0", "k=1"], rows)
        self.assertEqual(path.read_text().splitlines(), ["n,k=0,k=1", "1,6,18", "2,,"])


if __name__ == "__main__":
    unittest.main()
