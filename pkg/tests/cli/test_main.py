"""
Tests for the command-line front end: outputs and exit codes.
"""
import json

import pytest

from app.cli import main as cli
from app.domain.exceptions import TrainingDivergedError


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    """Keep the root logger untouched and the environment neutral."""
    monkeypatch.setattr(cli, "configure_logging", lambda settings: None)
    for name in ("RSC_SEED", "RSC_OUTPUT_DIR", "RSC_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def experiment(tmp_path):
    def write(**sections):
        document = {"seed": 3, "output_dir": str(tmp_path / "runs")}
        document.update(sections)
        path = tmp_path / "experiment.json"
        path.write_text(json.dumps(document))
        return str(path)

    return write


def hard_instance(tmp_path, horizon=10) -> str:
    path = str(tmp_path / "hard.json")
    assert cli.main(["gen-hard-instance", "--T", str(horizon), "--out", path]) == 0
    return path


class TestSolve:
    """Test the solve subcommand."""

    def test_rsc_full_radius(self, tmp_path, capsys):
        """The hard instance at sigma = 1 prints 5.5 at [0,0]."""
        path = hard_instance(tmp_path)
        capsys.readouterr()
        assert cli.main(["solve", path, "--sigma", "1.0", "--robust", "rsc"]) == 0
        assert "V*_1[[0, 0]] = 5.5" in capsys.readouterr().out

    def test_zero_radius_matches_non_robust(self, tmp_path, capsys):
        """sigma = 0 prints the nominal optimum T."""
        path = hard_instance(tmp_path)
        capsys.readouterr()
        assert cli.main(["solve", path, "--sigma", "0", "--robust", "rsc"]) == 0
        assert cli.main(["solve", path, "--sigma", "0", "--robust", "none"]) == 0
        lines = [line for line in capsys.readouterr().out.splitlines() if "V*_1" in line]
        assert len(lines) == 2
        assert all(line.endswith("= 10") for line in lines)

    def test_report_on_stdout_without_out(self, tmp_path, capsys):
        """Without --out the JSON report follows the summary line on stdout."""
        path = hard_instance(tmp_path)
        capsys.readouterr()
        assert cli.main(["solve", path, "--sigma", "1.0", "--robust", "rsc"]) == 0
        summary, body = capsys.readouterr().out.split("\n", 1)
        report = json.loads(body)
        assert summary.startswith("rsc sigma=1")
        assert report["initial_value"] == pytest.approx(5.5, abs=1e-9)
        assert report["model_path"] == path
        assert report["version"]

    def test_report_file(self, tmp_path):
        """--out writes the full report with a version stamp."""
        path = hard_instance(tmp_path, horizon=4)
        out = tmp_path / "report.json"
        assert cli.main(["solve", path, "--sigma", "0.5", "--robust", "rmdp", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["kind"] == "rmdp"
        assert report["version"]
        assert report["model_path"] == path

    def test_malformed_json(self, tmp_path, capsys):
        """Broken model files exit 1 with line and column."""
        path = tmp_path / "broken.json"
        path.write_text('{"num_states": 4,\n oops}')
        assert cli.main(["solve", str(path), "--sigma", "0.1"]) == 1
        assert f"{path}:2:2" in capsys.readouterr().err

    def test_missing_sigma(self, tmp_path):
        """A model without --sigma or --config is a validation error."""
        assert cli.main(["solve", hard_instance(tmp_path)]) == 1

    def test_solver_section(self, tmp_path, experiment, capsys):
        """--config reads the solver section."""
        path = hard_instance(tmp_path)
        config = experiment(solver={"model_path": path, "sigma": 1.0, "robust": "rsc"})
        capsys.readouterr()
        assert cli.main(["solve", "--config", config]) == 0
        assert "= 5.5" in capsys.readouterr().out


class TestVerifyTheorem2:
    """Test the separation subcommand."""

    def test_standard_point(self, capsys):
        """T = 10, sigma1 = 0.3, sigma2 = 1 holds with gap 4.5."""
        assert cli.main(["verify-theorem2", "--T", "10", "--sigma1", "0.3", "--sigma2", "1.0"]) == 0
        out = capsys.readouterr().out
        assert "gap=4.5" in out
        assert "-> holds" in out

    def test_report_on_stdout_without_out(self, capsys):
        """Without --out the rows are printed as JSON after the summary line."""
        assert cli.main(["verify-theorem2", "--T", "10", "--sigma1", "0.3", "--sigma2", "1.0"]) == 0
        _, body = capsys.readouterr().out.split("\n", 1)
        document = json.loads(body)
        assert len(document["rows"]) == 1
        assert document["rows"][0]["gap"] == pytest.approx(4.5, abs=1e-9)
        assert document["rows"][0]["holds"] is True
        assert document["config"]["horizon"] == 10

    def test_grid_rows(self, capsys, tmp_path):
        """--grid prints one row per sigma2 and writes them with --out."""
        out_path = tmp_path / "grid.json"
        assert cli.main(["verify-theorem2", "--grid", "--horizons", "10", "50", "--out", str(out_path)]) == 0
        lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("T=")]
        assert len(lines) == 20
        rows = json.loads(out_path.read_text())["rows"]
        assert [row["holds"] for row in rows[:10]].count(False) > 0

    @pytest.mark.parametrize("argv", [
        ["verify-theorem2", "--sigma2", "0.5"],
        ["verify-theorem2", "--T", "1"],
    ])
    def test_rejected_arguments(self, argv):
        """Out-of-range arguments exit 1."""
        assert cli.main(argv) == 1


class TestParser:
    """Test argument parsing."""

    def test_usage_error_exit_code(self):
        """argparse errors use the validation exit code."""
        with pytest.raises(SystemExit) as info:
            cli.main(["gen-hard-instance", "--T", "3"])
        assert info.value.code == 1

    def test_unknown_command(self):
        """Unknown subcommands are usage errors."""
        with pytest.raises(SystemExit) as info:
            cli.main(["plot"])
        assert info.value.code == 1


class TestTrain:
    """Test the train and eval subcommands."""

    def test_dry_run_prints_resolved_config(self, experiment, tiny_train, capsys, monkeypatch):
        """--dry-run prints the config with the RSC_SEED override and exits 0."""
        monkeypatch.setenv("RSC_SEED", "9")
        config = experiment(train=tiny_train())
        assert cli.main(["train", config, "--dry-run"]) == 0
        resolved = json.loads(capsys.readouterr().out)
        assert resolved["seed"] == 9
        assert resolved["train"]["sac"]["gamma"] == 0.99

    def test_missing_env_name(self, experiment, tiny_train):
        """A train section without env_name exits 1."""
        assert cli.main(["train", experiment(train=tiny_train(env={"horizon": 10}))]) == 1

    def test_unknown_key(self, experiment, tiny_train):
        """Unknown keys exit 1."""
        assert cli.main(["train", experiment(train=tiny_train(), plots=True)]) == 1

    def test_missing_section(self, experiment):
        """A file without a train section exits 1."""
        assert cli.main(["train", experiment()]) == 1

    def test_run_then_evaluate(self, tmp_path, experiment, tiny_train, capsys):
        """A completed run writes its summary and its checkpoint evaluates."""
        assert cli.main(["train", experiment(train=tiny_train())]) == 0
        run_dir = tmp_path / "runs" / "toy_lift-rsc-beta50-seed3"
        summary = json.loads((run_dir / "summary.json").read_text())
        assert set(summary["final"]) >= {"nominal_return", "shifted_return"}
        capsys.readouterr()

        assert cli.main(["eval", str(run_dir / "checkpoint"), "--episodes", "2", "--seed", "3"]) == 0
        results = json.loads(capsys.readouterr().out)["results"]
        assert results["nominal"]["mean"] == summary["final"]["nominal_return"]

    def test_missing_checkpoint(self, tmp_path):
        """eval on a missing directory exits 1."""
        assert cli.main(["eval", str(tmp_path / "nothing")]) == 1

    def test_divergence_exit_code(self, experiment, tiny_train, monkeypatch):
        """Numerical failures exit 2."""
        def diverge(self, section, seed, output_dir):
            raise TrainingDivergedError(20, "critic1 output", "runs/diverged")

        monkeypatch.setattr(cli.TrainAgentUseCase, "execute", diverge)
        assert cli.main(["train", experiment(train=tiny_train())]) == 2


class TestSweeps:
    """Test the sweep and comparison subcommands."""

    def test_sweep_beta(self, tmp_path, experiment, tiny_train):
        """A two-point sweep writes its table."""
        config = experiment(
            train=tiny_train(total_steps=30, eval_every=30), sweep={"betas": [0, 100], "seeds": [0]}
        )
        assert cli.main(["sweep-beta", config]) == 0
        assert (tmp_path / "runs" / "sweep-beta-toy_lift-rsc" / "sweep.csv").exists()

    def test_sweep_needs_section(self, experiment, tiny_train):
        """sweep-beta without a sweep section exits 1."""
        assert cli.main(["sweep-beta", experiment(train=tiny_train())]) == 1

    def test_compare_dry_run(self, experiment, tiny_train, capsys):
        """compare-augmenters validates and prints the resolved config."""
        config = experiment(train=tiny_train(), sweep={"seeds": [0]})
        assert cli.main(["compare-augmenters", config, "--dry-run"]) == 0
        assert json.loads(capsys.readouterr().out)["sweep"]["augmenters"] == ["none", "gaussian", "uniform", "rsc"]
