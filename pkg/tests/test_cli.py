import pytest

from lwpint.cli import main
from lwpint.experiments import CSV_HEADER


class TestRun:
    def test_smoke_run_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "one.csv"
        code = main(["run", "--method", "lwp1", "--epsilon", "1.0",
                     "--tau", "0.01", "--n-modes", "64",
                     "--output", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2
        assert lines[1].startswith("lwp1,bbm,1,")

    def test_run_without_output_prints_csv(self, capsys):
        code = main(["run", "--epsilon", "1.0", "--tau", "0.01",
                     "--n-modes", "64", "--t-final", "1.0"])
        assert code == 0
        captured = capsys.readouterr().out.strip().split("\n")
        assert captured[0] == CSV_HEADER
        assert len(captured) == 2


class TestSweep:
    def test_tau_not_dividing_horizon_exits_two(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--model", "bbm", "--epsilons", "0.5",
                  "--taus", "0.3", "--methods", "lwp1",
                  "--output", str(out)])
        assert exc.value.code == 2
        assert "0.3" in capsys.readouterr().err
        assert not out.exists()

    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--frobnicate", "1"])
        assert exc.value.code == 2

    def test_unparsable_number_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--epsilons", "zero", "--taus", "0.1",
                  "--output", "x.csv"])
        assert exc.value.code == 2

    def test_small_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--model", "bbm", "--epsilons", "0.5",
                     "--taus", "0.05,0.025", "--methods", "lwp1,lwp2",
                     "--t-final-rule", "fixed", "--t-final", "1.0",
                     "--n-modes", "64", "--output", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 5

    def test_jobs_flag_reproduces_serial_errors(self, tmp_path):
        args = ["sweep", "--model", "bbm", "--epsilons", "0.5",
                "--taus", "0.05,0.025", "--methods", "lwp1",
                "--t-final-rule", "fixed", "--t-final", "1.0",
                "--n-modes", "64"]
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        assert main(args + ["--output", str(serial)]) == 0
        assert main(args + ["--jobs", "2", "--output", str(parallel)]) == 0

        def error_columns(path):
            rows = path.read_text().strip().split("\n")[1:]
            return [",".join(r.split(",")[6:9]) for r in rows]

        assert error_columns(serial) == error_columns(parallel)


class TestValidate:
    def test_validate_passes(self, capsys):
        code = main(["validate"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "PASS" in captured
        assert "FAIL" not in captured


class TestHelp:
    def test_help_lists_defaults(self, capsys):
        for args, needles in (
            (["run", "--help"], ("bbm", "128", "lwp1")),
            (["sweep", "--help"], ("bbm", "128", "inverse-epsilon", "--jobs")),
        ):
            with pytest.raises(SystemExit) as exc:
                main(args)
            assert exc.value.code == 0
            text = capsys.readouterr().out
            for needle in needles:
                assert needle in text
