import json

import numpy as np
import pytest

from fperiod.cli import main
from fperiod.ingest import fourier_design, write_coef_csv
from fperiod.simulate import DgpSpec, GaussianInnovations, SignalSpec, gen_far1
from fperiod.testing import TestOptions, tn_test


@pytest.fixture()
def signal_series():
    spec = DgpSpec(
        n=175,
        rho=0.3 * np.eye(3),
        innovations=GaussianInnovations((1.0, 0.5, 0.25)),
        signal=SignalSpec(amplitude=3.0, period=7),
        seed=2024,
    )
    return gen_far1(spec)


@pytest.fixture()
def coef_csv(tmp_path, signal_series):
    path = tmp_path / "series.csv"
    write_coef_csv(signal_series, path)
    return path


class TestCmdTest:
    def test_detects_fixture_signal(self, tmp_path, coef_csv, signal_series):
        out = tmp_path / "report.json"
        code = main(["test", "--input", str(coef_csv), "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["reject"] is True
        expected = tn_test(signal_series, TestOptions())
        assert data["t_n"] == pytest.approx(expected.t_n, abs=1e-9)

    def test_grid_input_equals_prefitted_coefficients(self, tmp_path):
        rng = np.random.default_rng(120)
        grid = np.linspace(0.0, 1.0, 48)
        design = fourier_design(grid, 21)
        coeffs = rng.standard_normal((80, 21)) * 0.5
        curves = coeffs @ design.T
        grid_path = tmp_path / "curves.csv"
        lines = [",".join(f"{v:.17g}" for v in row) for row in curves]
        grid_path.write_text("\n".join(lines) + "\n")
        coef_path = tmp_path / "coef.csv"
        write_coef_csv(coeffs, coef_path)

        out_grid = tmp_path / "grid_report.json"
        out_coef = tmp_path / "coef_report.json"
        assert main(["test", "--input", str(grid_path), "--basis-size", "21",
                     "--noise-model", "iid", "--output", str(out_grid)]) == 0
        assert main(["test", "--input", str(coef_path), "--noise-model", "iid",
                     "--output", str(out_coef)]) == 0
        t_grid = json.loads(out_grid.read_text())["t_n"]
        t_coef = json.loads(out_coef.read_text())["t_n"]
        assert t_grid == pytest.approx(t_coef, abs=1e-9)

    def test_missing_file_exit_2_no_output(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["test", "--input", str(tmp_path / "nope.csv"), "--output", str(out)])
        assert code == 2
        assert not out.exists()
        assert "fperiod" in capsys.readouterr().err

    def test_csv_format_writes_per_frequency_table(self, tmp_path, coef_csv):
        out = tmp_path / "report.csv"
        code = main(["test", "--input", str(coef_csv), "--format", "csv",
                     "--output", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "j,omega,t_n_j"
        assert len(lines) - 1 == 87

    def test_degenerate_input_exit_3(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        write_coef_csv(np.ones((50, 2)), path)
        code = main(["test", "--input", str(path)])
        assert code == 3
        assert "degeneracy" in capsys.readouterr().err


class TestCmdSpectrum:
    def test_csv_row_count_and_critical_values(self, tmp_path, coef_csv):
        out = tmp_path / "spectrum.csv"
        code = main(["spectrum", "--input", str(coef_csv), "--output", str(out),
                     "--format", "csv", "--alpha", "0.05"])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "j,omega,t_n_j,crit_0.05"
        assert len(lines) - 1 == 87  # q for n=175
        crit = float(lines[1].rsplit(",", 1)[1])
        assert crit == pytest.approx(2.9701952490, abs=1e-6)

    def test_max_row_matches_cmd_test(self, tmp_path, coef_csv):
        spec_out = tmp_path / "spectrum.csv"
        test_out = tmp_path / "report.json"
        main(["spectrum", "--input", str(coef_csv), "--output", str(spec_out),
              "--format", "csv"])
        main(["test", "--input", str(coef_csv), "--output", str(test_out)])
        rows = [line.split(",") for line in spec_out.read_text().strip().splitlines()[1:]]
        best = max(float(r[2]) for r in rows)
        assert best == json.loads(test_out.read_text())["t_n"]

    def test_json_format(self, tmp_path, coef_csv):
        out = tmp_path / "spectrum.json"
        code = main(["spectrum", "--input", str(coef_csv), "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert len(data["rows"]) == 87
        assert set(data["critical_values"]) == {"0.1", "0.05", "0.01"}


class TestCmdSimulate:
    def test_null_run_writes_rates(self, tmp_path):
        out = tmp_path / "mc.json"
        code = main(["simulate", "--n", "100", "--reps", "50", "--seed", "3",
                     "--rho-diag", "0.3,0.2", "--alpha", "0.1", "--alpha", "0.05",
                     "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["replications"] == 50
        assert set(data["per_alpha"]) == {"0.1", "0.05"}

    def test_same_seed_byte_identical(self, tmp_path):
        args = ["simulate", "--n", "120", "--reps", "40", "--seed", "11",
                "--rho-diag", "0.4,0.1", "--amplitude", "1.0", "--poisson-lambda", "5",
                "--format", "csv"]
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_strong_signal_rejects_everywhere(self, tmp_path):
        out = tmp_path / "mc.json"
        code = main(["simulate", "--n", "200", "--reps", "40", "--seed", "4",
                     "--rho-diag", "0.3", "--amplitude", "10", "--period", "7",
                     "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert all(rate == 1.0 for rate in data["per_alpha"].values())

    def test_bootstrap_pool_mode(self, tmp_path):
        rng = np.random.default_rng(122)
        pool_path = tmp_path / "pool.csv"
        write_coef_csv(rng.standard_normal((60, 2)), pool_path)
        out = tmp_path / "mc.json"
        code = main(["simulate", "--n", "120", "--reps", "30", "--seed", "6",
                     "--pool", str(pool_path), "--rho-diag", "0.3",
                     "--alpha", "0.1", "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["replications"] == 30

    def test_conflicting_period_flags_exit_2(self, capsys):
        code = main(["simulate", "--n", "100", "--reps", "10", "--amplitude", "1",
                     "--period", "7", "--poisson-lambda", "5"])
        assert code == 2
        assert "exactly one" in capsys.readouterr().err


class TestCmdMvTest:
    def test_runs_on_coefficients(self, tmp_path):
        rng = np.random.default_rng(121)
        path = tmp_path / "mv.csv"
        write_coef_csv(rng.standard_normal((200, 3)), path)
        out = tmp_path / "mv.json"
        code = main(["mvtest", "--input", str(path), "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["a_n"] is None
        assert data["alpha"] == 0.05

    def test_sqrt_without_basis_rejected(self, tmp_path, capsys):
        path = tmp_path / "mv.csv"
        write_coef_csv(np.random.default_rng(0).standard_normal((50, 2)), path)
        assert main(["mvtest", "--input", str(path), "--sqrt-transform"]) == 2
