"""End-to-end tests for the lindfrag command line."""
import csv
import io
import json
import pytest
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

FIXTURES = Path(__file__).parent / "fixtures"


def _run(capsys, *argv):
    from cli import main

    code = main(list(argv))
    return code, capsys.readouterr().out


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestUsage:
    """Tests for argument handling and exit codes."""

    def test_no_command_prints_help(self, capsys):
        """Test a bare invocation shows help and succeeds."""
        code, out = _run(capsys)
        assert code == 0
        assert "lindfrag" in out

    def test_unknown_subcommand(self):
        """Test argparse errors exit with 64."""
        from cli import main

        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 64

    def test_missing_model(self):
        """Test model commands need --builtin or --model."""
        from cli import main

        with pytest.raises(SystemExit) as exc:
            main(["fragments", "--histogram"])
        assert exc.value.code == 64

    def test_builtin_needs_n(self):
        """Test --builtin without --n is a usage error."""
        from cli import main

        with pytest.raises(SystemExit) as exc:
            main(["validate", "--builtin", "cluster_y"])
        assert exc.value.code == 64

    def test_theta_excludes_couplings(self):
        """Test --theta and --J together are rejected."""
        from cli import main

        with pytest.raises(SystemExit) as exc:
            main(["tfim", "--M", "3", "--theta", "0.3", "--J", "1.0"])
        assert exc.value.code == 64

    def test_echo_needs_seed_op(self):
        """Test echo on a model without an operator is rejected."""
        from cli import main

        with pytest.raises(SystemExit) as exc:
            main(["echo", "--builtin", "cluster_y", "--n", "6"])
        assert exc.value.code == 64

    def test_bad_thread_variable(self, monkeypatch):
        """Test a malformed thread count in the environment is a usage error."""
        from cli import main

        monkeypatch.setenv("LINDFRAG_THREADS", "zero")
        with pytest.raises(SystemExit) as exc:
            main(["rmt", "--n", "4", "--chi", "1"])
        assert exc.value.code == 64


class TestModelCommands:
    """Tests for validate, fragments, graph, effective and spectrum."""

    def test_validate_json(self, capsys):
        """Test the tilde layout is reported for a valid model."""
        code, out = _run(capsys, "validate", "--builtin", "cluster_y", "--n", "6", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["generator_sites"] == [2, 3, 4, 5]
        assert data["free_sites"] == [1, 6]
        assert data["single_generator"] is True

    def test_validate_invalid_model(self, capsys):
        """Test an invalid model file exits with 1."""
        code, out = _run(capsys, "validate", "--model", str(FIXTURES / "noncommuting.yaml"), "--format", "csv")
        assert code == 1
        assert any(r["level"] == "error" for r in _rows(out))

    def test_fragment_histogram(self, capsys):
        """Test the ZIZ histogram at N=8 totals 16 * 3^6."""
        code, out = _run(capsys, "fragments", "--builtin", "cluster_ziz", "--n", "8", "--histogram")
        assert code == 0
        rows = _rows(out)
        assert sum(int(r["count"]) for r in rows) == 11664
        assert sum(int(r["count"]) * int(r["dim"]) for r in rows) == 4 ** 8

    def test_fragment_from_model_file(self, capsys):
        """Test a YAML model file gives the same fragment as the builtin."""
        code, out = _run(
            capsys, "fragments", "--model", str(FIXTURES / "cluster_ziz_8.yaml"), "--seed", "IXXIZXYI"
        )
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 1
        assert rows[0]["active_count"] == "4"

    def test_reachability_histogram(self, capsys):
        """Test a multi-generator model falls back to reachability fragments."""
        code, out = _run(capsys, "fragments", "--model", str(FIXTURES / "three_qubit.json"), "--histogram")
        assert code == 0
        rows = _rows(out)
        assert list(rows[0]) == ["dim", "count"]
        assert sum(int(r["count"]) * int(r["dim"]) for r in rows) == 64

    def test_graph_components(self, capsys):
        """Test the frozen middle site splits the ZIZ paths."""
        code, out = _run(
            capsys, "graph", "--builtin", "cluster_ziz", "--n", "8", "--fragment", "i...I..i", "--format", "csv"
        )
        assert code == 0
        rows = _rows(out)
        assert [int(r["size"]) for r in rows] == [3, 6, 2]
        assert all(r["is_path"] == "true" for r in rows)

    def test_graph_dot_file(self, capsys, tmp_path):
        """Test --dot writes the graph."""
        dot = tmp_path / "graph.dot"
        code, _ = _run(capsys, "graph", "--builtin", "cluster_y", "--n", "6", "--dot", str(dot), "--format", "json")
        assert code == 0
        assert dot.read_text().startswith("graph frustration {")

    def test_effective_json(self, capsys):
        """Test the effective generator of the worked fragment."""
        code, out = _run(
            capsys, "effective", "--builtin", "cluster_y", "--n", "8", "--seed", "ZXY I XYXY", "--format", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["fragment"]["label"] == "z..I...y"
        assert data["dim"] == 32
        assert data["active_sites"] == [2, 3, 5, 6, 7]

    def test_effective_ising(self, capsys, tmp_path):
        """Test --ising reports the chain and --matrix writes triplets."""
        matrix = tmp_path / "gen.csv"
        code, out = _run(
            capsys, "effective", "--builtin", "cluster_ziz", "--n", "8", "--fragment", "i...I..i",
            "--component", "1", "--ising", "--matrix", str(matrix), "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["ising"]["n_sites"] == 4
        assert matrix.read_text().startswith("i,j,re,im\n")

    def test_bad_seed(self, capsys):
        """Test an unparseable seed exits with 1."""
        code, _ = _run(capsys, "effective", "--builtin", "cluster_y", "--n", "8", "--seed", "ABC")
        assert code == 1

    def test_component_out_of_range(self, capsys):
        """Test a missing component index exits with 1."""
        code, _ = _run(
            capsys, "spectrum", "--builtin", "cluster_ziz", "--n", "8", "--fragment", "i...I..i", "--component", "7"
        )
        assert code == 1

    def test_spectrum_then_stats(self, capsys, tmp_path):
        """Test a written spectrum feeds the statistics command."""
        spectrum = tmp_path / "spectrum.csv"
        code, _ = _run(
            capsys, "spectrum", "--builtin", "cluster_y", "--n", "8", "--seed", "IXXXXXXI", "-o", str(spectrum)
        )
        assert code == 0
        code, out = _run(capsys, "stats", "--in", str(spectrum), "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["n_eigenvalues"] == 64
        assert 0.0 <= data["f_r"] <= 1.0


class TestChainCommands:
    """Tests for tfim, echo and rmt."""

    def test_open_chain(self, capsys):
        """Test one row per mode."""
        code, out = _run(capsys, "tfim", "--M", "8", "--zeta", "1", "1", "--theta", "0.45")
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 9
        assert list(rows[0]) == ["re_k", "im_k", "re_eps", "im_eps"]

    def test_open_chain_json_zero_mode(self, capsys):
        """Test the JSON output carries the zero mode for kappa < J."""
        code, out = _run(capsys, "tfim", "--M", "8", "--J", "1.0", "--kappa", "0.3", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["has_zero_mode"] is True
        assert data["zero_mode"]["momentum"] is not None
        assert 0 < data["zero_mode"]["abs_energy"] < 1e-3

    def test_bulk_band(self, capsys):
        """Test the Bloch eigenvalues square to the band."""
        code, out = _run(capsys, "tfim", "--M", "3", "--pbc", "--points", "5", "--theta", "0.3")
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 5
        assert all(float(r["bloch_residual"]) < 1e-10 for r in rows)

    def test_exceptional_point_scan(self, capsys):
        """Test the single-bond chain has its EP at J = 2 kappa."""
        import math

        code, out = _run(capsys, "tfim", "--M", "1", "--ep-step", "0.01")
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 1
        assert abs(float(rows[0]["theta"]) - 2 / math.pi * math.atan(0.5)) < 1e-6

    def test_chain_echo(self, capsys):
        """Test the echo has one row per time step."""
        code, out = _run(capsys, "echo", "--M", "2", "--theta", "0.3", "--steps", "50")
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 50
        assert float(rows[0]["abs_e"]) == pytest.approx(1.0)

    def test_model_echo(self, capsys):
        """Test an echo from a seed operator inside a fragment."""
        code, out = _run(
            capsys, "echo", "--builtin", "cluster_y", "--n", "6", "--seed-op", "IXXXXI",
            "--steps", "20", "--tmax", "5",
        )
        assert code == 0
        assert len(_rows(out)) == 20

    def test_regime_scan(self, capsys):
        """Test the regime scan lists one theta per step."""
        code, out = _run(capsys, "echo", "--M", "3", "--scan-step", "0.25", "--steps", "100", "--tmax", "30")
        assert code == 0
        rows = _rows(out)
        assert [float(r["theta"]) for r in rows] == [0.25, 0.5, 0.75]

    def test_config_file(self, capsys):
        """Test --config supplies the default number of echo steps."""
        code, out = _run(capsys, "echo", "--M", "2", "--config", str(FIXTURES / "loose_settings.yaml"))
        assert code == 0
        assert len(_rows(out)) == 50

    def test_rmt_is_deterministic(self, capsys):
        """Test equal seeds print equal tables."""
        argv = ("rmt", "--n", "8", "--chi", "0", "1", "--samples", "3", "--seed", "5")
        code, first = _run(capsys, *argv)
        assert code == 0
        _, second = _run(capsys, *argv, "--threads", "2")
        assert first == second
        assert len(_rows(first)) == 2


class TestOracleCommand:
    """Tests for the brute-force verification command."""

    def test_all_checks_pass(self, capsys):
        """Test every oracle check passes on cluster_y at N=4."""
        code, out = _run(capsys, "oracle", "--builtin", "cluster_y", "--n", "4", "--format", "csv")
        assert code == 0
        rows = _rows(out)
        assert {r["kind"] for r in rows} == {"fragmentation", "conservation", "dense"}
        assert all(r["passed"] == "true" for r in rows)

    def test_too_large(self, capsys):
        """Test N above the oracle limit exits with 2."""
        code, _ = _run(capsys, "oracle", "--builtin", "cluster_y", "--n", "6", "--check", "fragmentation")
        assert code == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
