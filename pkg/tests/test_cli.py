"""
Tests for the clifford-kt command-line interface
"""

import json
import math
import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from cliffordkt import __version__
from cliffordkt.ckts import layer_path, read_state_set, write_state_set
from cliffordkt.cli import EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_USAGE, main
from cliffordkt.enumeration import CUMULATIVE, StateSet, enumerate_cumulative


class TestCLI(unittest.TestCase):
    """Test cases for the CLI commands"""

    def setUp(self):
        """Set up test fixtures"""
        self.runner = CliRunner()
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir)

    def invoke(self, *args):
        return self.runner.invoke(main, ["--no-progress", *args], env={"CKT_CONFIG": str(self.temp_dir / "none.cfg")})

    def read_json(self, name):
        return json.loads((self.temp_dir / name).read_text())

    def test_version(self):
        """--version prints the package version."""
        result = self.invoke("--version")
        self.assertEqual(result.exit_code, 0)
        self.assertIn(__version__, result.output)

    def test_counts(self):
        """The counts table includes the n = 1, k = 10 entry."""
        result = self.invoke("counts")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("12282", result.output)
        self.assertIn("6·2^k", result.output)

    def test_counts_csv(self):
        """counts --csv writes one row per grid cell."""
        csv_path = self.temp_dir / "counts.csv"
        result = self.invoke("counts", "--n-max", "1", "--csv", str(csv_path))
        self.assertEqual(result.exit_code, 0, result.output)
        lines = csv_path.read_text().splitlines()
        self.assertEqual(lines[0], "n,k,cumulative,strict")
        self.assertEqual(lines[1], "1,0,6,6")

    def test_enumerate_writes_layers(self):
        """Cumulative and strict layers are written for every level."""
        out = self.temp_dir / "layers"
        result = self.invoke("enumerate", "1", "3", "-o", str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("6 18 42 90", result.output)
        for k in range(4):
            self.assertTrue(layer_path(out, 1, k).exists())
            self.assertTrue(layer_path(out, 1, k, "strict").exists())
        self.assertEqual(len(read_state_set(layer_path(out, 1, 3, "strict"))), 48)

    def test_enumerate_resume(self):
        """--resume continues after the stored levels."""
        out = self.temp_dir / "layers"
        self.assertEqual(self.invoke("enumerate", "1", "1", "-o", str(out)).exit_code, 0)
        result = self.invoke("enumerate", "1", "2", "-o", str(out), "--resume")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("Resuming n=1 after level 1", result.output)
        self.assertIn("6 18 42", result.output)
        self.assertEqual(len(read_state_set(layer_path(out, 1, 2))), 42)

    def test_enumerate_budget(self):
        """A tiny memory budget exits with the budget code."""
        result = self.invoke("--memory-budget", "1K", "enumerate", "2", "2", "-o", str(self.temp_dir / "x"))
        self.assertEqual(result.exit_code, EXIT_BUDGET)

    def test_robustness_json(self):
        """R_0(T|+⟩) = √2 with its certificate fields."""
        result = self.invoke("robustness", "tplus", "-k", "0", "--json-output", str(self.temp_dir / "r.json"))
        self.assertEqual(result.exit_code, 0, result.output)
        data = self.read_json("r.json")
        self.assertAlmostEqual(data["value"], math.sqrt(2), places=7)
        self.assertLess(abs(data["duality_gap"]), 1e-7)
        self.assertEqual(data["n"], 1)

    def test_robustness_with_symmetry(self):
        """--sym reaches the same value."""
        result = self.invoke("robustness", "tplus^2", "--sym", "perm,localH", "--json-output", str(self.temp_dir / "r.json"))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertAlmostEqual(self.read_json("r.json")["value"], 1.7475469, places=6)

    def test_robustness_json_ignores_worker_count(self):
        """One and four workers write the same result apart from timing."""
        outputs = []
        for workers in ("1", "4"):
            name = f"r{workers}.json"
            result = self.invoke(
                "--workers", workers, "robustness", "tplus^2", "-k", "1",
                "--json-output", str(self.temp_dir / name),
            )
            self.assertEqual(result.exit_code, 0, result.output)
            data = self.read_json(name)
            del data["solver"]["time_ms"]
            outputs.append(data)
        self.assertEqual(outputs[0], outputs[1])

    def test_robustness_bad_symmetry(self):
        """Unknown symmetry flags are usage errors."""
        result = self.invoke("robustness", "tplus", "--sym", "mirror")
        self.assertEqual(result.exit_code, EXIT_USAGE)

    def test_robustness_parse_error(self):
        """Malformed targets exit with the usage code."""
        result = self.invoke("robustness", "tplus^^2")
        self.assertEqual(result.exit_code, EXIT_USAGE)
        self.assertIn("Error", result.output)

    def test_robustness_infeasible(self):
        """A state file holding only |0⟩ cannot reach |+⟩."""
        stabilizers = enumerate_cumulative(1, 0)[0]
        zero = int(np.argmax(stabilizers.expectation_matrix()[3]))
        path = write_state_set(
            StateSet(1, 0, CUMULATIVE, stabilizers.rows[[zero]]), self.temp_dir / "zero.ckts"
        )
        result = self.invoke("robustness", "plus", "--states", str(path))
        self.assertEqual(result.exit_code, EXIT_INFEASIBLE)

    def test_robustness_table(self):
        """--table prints the grid and writes CSV."""
        csv_path = self.temp_dir / "grid.csv"
        result = self.invoke("robustness", "tplus", "--table", "--n-max", "1", "--k-max", "1", "--csv", str(csv_path))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("1.4142136", result.output)
        self.assertEqual(csv_path.read_text().splitlines()[0], "n,k=0,k=1")

    def test_lower_bound(self):
        """The |H⟩ bound at k = 0 is (1 + √2)/2."""
        result = self.invoke("lower-bound", "h")
        self.assertEqual(result.exit_code, 0, result.output)
        data = json.loads(result.stdout)
        self.assertAlmostEqual(data["lower_bound"], (1 + math.sqrt(2)) / 2, places=9)
        self.assertAlmostEqual(data["thresholds"]["H"], 2 * math.log2((1 + math.sqrt(2)) / 2), places=12)

    def test_sample(self):
        """Sampling ⟨X⟩ of T|+⟩ plans 1476 shots and lands near 1/√2."""
        result = self.invoke(
            "sample", "--target", "tplus", "--pauli", "X", "--k", "0",
            "--delta", "0.1", "--eps", "0.05", "--json-output", str(self.temp_dir / "s.json"),
        )
        self.assertEqual(result.exit_code, 0, result.output)
        data = self.read_json("s.json")
        self.assertEqual(data["plan"]["shots"], 1476)
        self.assertAlmostEqual(data["exact"], 1 / math.sqrt(2), places=12)
        self.assertLessEqual(data["max_abs_sample"], math.sqrt(2) + 1e-9)

    def test_sample_qubit_mismatch(self):
        """The Pauli must act on the target's qubits."""
        result = self.invoke("sample", "--target", "tplus", "--pauli", "XX")
        self.assertEqual(result.exit_code, EXIT_USAGE)

    def test_ma_normal(self):
        """HTHT is already in normal form with T-count 2."""
        result = self.invoke("ma-normal", "HTHT")
        self.assertEqual(result.exit_code, 0, result.output)
        data = json.loads(result.stdout)
        self.assertEqual(data["t_count"], 2)
        self.assertEqual(data["syllables"], ["HT", "HT"])

    def test_ma_normal_check(self):
        """--check reports no failures at low T-count."""
        result = self.invoke("ma-normal", "--check", "2")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertNotIn("❌", result.output)

    def test_ma_normal_bad_word(self):
        """Letters outside {H, S, T} are usage errors."""
        self.assertEqual(self.invoke("ma-normal", "HTX").exit_code, EXIT_USAGE)

    def test_verify(self):
        """Known suites pass; unknown names are usage errors."""
        result = self.invoke("verify", "t-strategy")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("✅", result.output)
        self.assertEqual(self.invoke("verify", "nosuch").exit_code, EXIT_USAGE)

    def test_verify_list(self):
        """Without names the suites are listed."""
        result = self.invoke("verify", "--list")
        self.assertEqual(result.exit_code, 0)
        self.assertIn("counts-n1", result.output)


if __name__ == "__main__":
    unittest.main()
