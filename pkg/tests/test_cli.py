"""Tests for the command-line front end.

Tests cover:
- Grid parsing
- Subcommand outputs and manifests
- Config files and flag precedence
- Exit codes for usage errors, lab errors and validation failures
"""

import csv
import json
from unittest.mock import patch

import pytest

from tmlab.cli import COMMANDS, Outcome, main, parse_grid
from tmlab.errors import OutOfRangeError
from tmlab.manifest import RunManifest, manifest_path, read_manifest
from tmlab.thermo import PressureCurve, PressurePoint


@pytest.fixture(autouse=True)
def quiet_logging():
    with patch("tmlab.cli.configure_logging"):
        yield


def read_rows(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


# ============================================================================
# Grid Parsing Tests
# ============================================================================

class TestParseGrid:
    """Tests for parse_grid."""

    def test_range_includes_stop(self):
        """start:stop:step includes the stop value."""
        assert parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_comma_list(self):
        """A comma-separated list is read as given."""
        assert parse_grid("0.25,0.5,1") == [0.25, 0.5, 1.0]


# ============================================================================
# Subcommand Tests
# ============================================================================

class TestSubcommands:
    """Tests for subcommand outputs."""

    def test_complexity(self, tmp_path):
        """complexity writes one matching row per length and a manifest."""
        out = tmp_path / "p.csv"

        assert main(["complexity", "--max-n", "64", "--out", str(out)]) == 0

        rows = read_rows(out)
        assert rows[0] == ["n", "p", "formula", "match"]
        assert len(rows) == 65
        assert all(row[3] == "1" for row in rows[1:])
        manifest = read_manifest(manifest_path(out))
        assert manifest.subcommand == "complexity"
        assert manifest.parameters["max_n"] == 64
        assert manifest.language_hash is not None

    def test_manifest_keys_sorted(self, tmp_path):
        """Manifests are JSON with sorted keys."""
        out = tmp_path / "p.csv"
        main(["complexity", "--max-n", "8", "--out", str(out)])

        data = json.loads(manifest_path(out).read_text(encoding="utf-8"))
        assert list(data) == sorted(data)

    def test_output_is_reproducible(self, tmp_path):
        """Identical parameters give byte-identical CSV."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["accidents", "--samples", "20", "--seed", "3"]

        assert main([*argv, "--out", str(first)]) == 0
        assert main([*argv, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_fixed_residual_uc(self, tmp_path):
        """U_c is an exact fixed point."""
        out = tmp_path / "r.csv"

        assert main(["fixed-residual", "--potential", "uc", "--samples", "20", "--out", str(out)]) == 0
        assert all(float(row[1]) == 0.0 for row in read_rows(out)[1:])

    def test_fixed_residual_v0_fails_validation(self, tmp_path):
        """V0 is not a fixed point, so the residual suite fails."""
        out = tmp_path / "r.csv"

        assert main(["fixed-residual", "--potential", "v0", "--samples", "5", "--out", str(out)]) == 2

    def test_pi_code(self, tmp_path):
        """The coding checks pass on a small sample."""
        out = tmp_path / "pi.csv"

        assert main(["pi-code", "--words", "50", "--pairs", "200", "--out", str(out)]) == 0
        rows = read_rows(out)
        assert rows[1][:2] == ["pi_rho0_prefix", "1011101010111011"]

    def test_interval_map(self, tmp_path):
        """interval-map writes one row per sampled interval."""
        out = tmp_path / "fa.csv"
        argv = ["interval-map", "--gamma1", "1.0", "--depth", "8", "--grid-size", "64", "--eigen-tol", "1.0"]

        assert main([*argv, "--out", str(out)]) == 0
        rows = read_rows(out)
        assert rows[0] == ["t", "f_a", "slope", "W"]
        assert len(rows) == 65
        results = read_manifest(manifest_path(out)).results
        assert results["gamma_1"] == 1.0
        assert results["violations"] == []
        assert results["eigenvalue_gap"] == results["conformal"]["eigenvalue_gap"]
        assert results["depth_drift"] >= 0.0
        assert results["derivative"]["offset"] == 0.0

    def test_interval_map_eigenvalue_off_transition(self, tmp_path):
        """An eigenvalue away from 1 is a validation failure."""
        out = tmp_path / "fa.csv"
        argv = ["interval-map", "--gamma1", "1.0", "--depth", "8", "--grid-size", "64", "--eigen-tol", "0.0"]

        assert main([*argv, "--out", str(out)]) == 2
        violations = read_manifest(manifest_path(out)).results["violations"]
        assert any("eigenvalue" in v for v in violations)

    def test_excursion_bounds(self, tmp_path):
        """excursion-bounds reports the gamma_0 certificate."""
        out = tmp_path / "b.csv"

        assert main(["excursion-bounds", "--a", "0.5", "--gamma-grid", "2,4", "--out", str(out)]) == 0
        certificate = read_manifest(manifest_path(out)).results["certificate"]
        assert 2.0 < certificate["gamma0"] < 4.0


# ============================================================================
# Config Tests
# ============================================================================

class TestConfig:
    """Tests for --config handling."""

    def test_config_sets_defaults(self, tmp_path):
        """Config keys act as flag defaults."""
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"max_n": 10}))
        out = tmp_path / "p.csv"

        assert main(["complexity", "--config", str(config), "--out", str(out)]) == 0
        assert len(read_rows(out)) == 11

    def test_flags_win_over_config(self, tmp_path):
        """An explicit flag overrides the config value."""
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"max_n": 10}))
        out = tmp_path / "p.csv"

        assert main(["complexity", "--config", str(config), "--max-n", "5", "--out", str(out)]) == 0
        assert len(read_rows(out)) == 6

    def test_unknown_config_key(self, tmp_path):
        """Keys that are not flag destinations are a usage error."""
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"bogus": 1}))

        assert main(["complexity", "--config", str(config), "--out", str(tmp_path / "p.csv")]) == 1


# ============================================================================
# Exit Code Tests
# ============================================================================

class TestExitCodes:
    """Tests for exit codes."""

    def test_unknown_flag(self, tmp_path):
        """Unknown flags exit with 1."""
        assert main(["complexity", "--nope", "--out", str(tmp_path / "p.csv")]) == 1

    def test_missing_subcommand(self):
        """A missing subcommand exits with 1."""
        assert main([]) == 1

    def test_lab_error(self, tmp_path):
        """Lab errors exit with 1."""
        def broken(args):
            raise OutOfRangeError("bad input")

        with patch.dict(COMMANDS, {"complexity": broken}):
            assert main(["complexity", "--out", str(tmp_path / "p.csv")]) == 1

    def test_validation_failure(self, tmp_path):
        """Reported violations exit with 2 and still write outputs."""
        out = tmp_path / "p.csv"

        def failing(args):
            return Outcome(header=["n"], rows=[[1]], violations=["broken invariant"])

        with patch.dict(COMMANDS, {"complexity": failing}):
            assert main(["complexity", "--out", str(out)]) == 2
        assert out.exists()
        manifest = RunManifest.model_validate_json(manifest_path(out).read_text(encoding="utf-8"))
        assert manifest.results["violations"] == ["broken invariant"]

    def test_pressure_invariants_fail_validation(self, tmp_path):
        """A curve that turns positive again after vanishing exits with 2."""
        out = tmp_path / "c.csv"
        points = [
            PressurePoint(gamma=g, z_star=z, z_c=0.0, zc_delta=0.0, pressure=p, stability_delta=0.0, n_max=16)
            for g, z, p in [(0.0, 0.6, 0.6), (1.0, None, 0.0), (2.0, 0.2, 0.2)]
        ]
        curve = PressureCurve(gamma_grid=[0.0, 1.0, 2.0], points=points)

        with patch("tmlab.cli.pressure_curve", return_value=curve):
            code = main(["pressure", "--gamma-grid", "0,1,2", "--nmax", "16", "--out", str(out)])

        assert code == 2
        violations = read_manifest(manifest_path(out)).results["violations"]
        assert any("pressure zero at gamma=1" in v for v in violations)

    def test_factor_return_word(self, tmp_path):
        """A return word that is a factor is an input error."""
        out = tmp_path / "c.csv"
        assert main(["pressure", "--j", "0110", "--gamma-grid", "0", "--out", str(out)]) == 1
