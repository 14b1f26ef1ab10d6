import io
import math
import subprocess
import sys

import numpy as np
import pytest

from entropic_bounds.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from entropic_bounds.figures import OutputRecord, format_value, read_csv, write_csv

LN2 = math.log(2)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    return read_csv(io.StringIO(text))


class TestEvaluate:
    def test_maximal_entanglement(self, capsys):
        code, out, _ = run(capsys, "evaluate", "--lambda", "0.5", "--theta", "0.3",
                           "--epsilon", "0.5", "--q", "2")
        assert code == EXIT_OK
        rec = parse(out)
        assert rec.column("exact")[0] == 0
        for name in ("b_kpp", "b_theta", "analytic_min"):
            assert rec.column(name)[0] == pytest.approx(0.0, abs=1e-12)
        # no memory-assisted bound away from q = 1
        assert np.isnan(rec.column("b_bccrr")[0])

    def test_product_state(self, capsys):
        code, out, _ = run(capsys, "evaluate", "--lambda", "0", "--theta", "1.178",
                           "--epsilon", "0.7854", "--q", "1")
        assert code == EXIT_OK
        assert parse(out).column("exact")[0] == pytest.approx(0.8326, abs=5e-4)

    def test_bits(self, capsys):
        argv = ["evaluate", "--lambda", "0", "--theta", "1.178", "--epsilon", "0.7854"]
        nats = parse(run(capsys, *argv)[1])
        bits = parse(run(capsys, "--bits", *argv)[1])
        assert bits.column("exact")[0] == pytest.approx(nats.column("exact")[0] / LN2, rel=1e-11)
        assert bits.column("theta")[0] == nats.column("theta")[0]

    def test_out_of_range(self, capsys):
        code, _, err = run(capsys, "evaluate", "--lambda", "2", "--theta", "0.1", "--epsilon", "0.1")
        assert code == EXIT_USAGE
        assert "lambda" in err and "[0, 1]" in err

    def test_missing_argument(self, capsys):
        assert run(capsys, "evaluate", "--lambda", "0.2")[0] == EXIT_USAGE

    def test_unwritable_output(self, capsys, tmp_path):
        target = tmp_path / "missing" / "out.csv"
        code, _, err = run(capsys, "evaluate", "--lambda", "0.2", "--theta", "0.1",
                           "--epsilon", "0.1", "--output", str(target))
        assert code == EXIT_IO
        assert "I/O" in err


class TestFigures:
    @pytest.mark.parametrize("fig", ["1", "2a", "2b", "3", "4"])
    def test_deterministic(self, capsys, tmp_path, fig):
        paths = [tmp_path / f"a{fig}.csv", tmp_path / f"b{fig}.csv"]
        for p in paths:
            assert run(capsys, "figure", fig, "--points", "21", "--output", str(p))[0] == EXIT_OK
        first, second = (p.read_bytes() for p in paths)
        assert first == second
        assert first.startswith(b"# ")
        assert b"points=21" in first.splitlines()[0]

    def test_figure1_columns(self, capsys, tmp_path):
        path = tmp_path / "f1.csv"
        run(capsys, "figure", "1", "--points", "31", "--output", str(path))
        rec = read_csv(path.open())
        assert rec.columns == ["epsilon", "optimal", "b_mu", "b_maj2", "b_kpp"]
        assert len(rec.rows) == 31
        assert np.all(rec.column("b_kpp") >= rec.column("b_mu") - 1e-11)

    @pytest.mark.parametrize("fig", ["2a", "2b", "3"])
    def test_exact_dominates(self, capsys, fig):
        code, out, _ = run(capsys, "figure", fig, "--points", "41", "--output", "-")
        assert code == EXIT_OK
        rec = parse(out)
        assert np.all(rec.column("exact") >= rec.column("b_theta") - 1e-9)
        assert np.all(rec.column("exact") >= rec.column("b_bccrr") - 1e-9)

    def test_figure3_half_row(self, capsys):
        rec = parse(run(capsys, "figure", "3", "--points", "11", "--output", "-")[1])
        k = list(rec.column("lambda")).index(0.5)
        assert rec.column("exact")[k] == pytest.approx(0.0, abs=1e-12)
        assert rec.column("b_theta")[k] == 0.0

    def test_figure4(self, capsys):
        rec = parse(run(capsys, "figure", "4", "--points", "11", "--q-list", "1,2", "--output", "-")[1])
        assert rec.columns == ["lambda", "c_star_q1", "c_star_q2"]
        assert rec.column("c_star_q1")[0] == pytest.approx(0.8336, abs=5e-4)
        assert np.isnan(rec.column("c_star_q1")[-1])  # lambda = 1/2
        assert np.all(np.isnan(rec.column("c_star_q2")))

    def test_override_parameters(self, capsys):
        out = run(capsys, "figure", "2a", "--points", "5", "--lambda", "0.3", "--epsilon", "0.2",
                  "--output", "-")[1]
        assert "lambda=0.3" in out.splitlines()[0]

    def test_default_path(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(capsys, "figure", "2b", "--points", "5")
        assert code == EXIT_OK
        assert (tmp_path / "figure_2b.csv").exists()

    @pytest.mark.parametrize("argv", [["figure", "5"], ["figure", "1", "--points", "1"],
                                      ["figure", "1", "--tol", "0"], ["figure", "1", "--tol", "0.1"]])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv, "--output", "-")[0] == EXIT_USAGE

    def test_thread_count_does_not_change_output(self, capsys, monkeypatch):
        outputs = []
        for n in ("1", "4"):
            monkeypatch.setenv("ENTROPIC_BOUNDS_THREADS", n)
            outputs.append(run(capsys, "figure", "1", "--points", "25", "--output", "-")[1])
        assert outputs[0] == outputs[1]

    def test_bad_thread_count(self, capsys, monkeypatch):
        monkeypatch.setenv("ENTROPIC_BOUNDS_THREADS", "zero")
        assert run(capsys, "figure", "1", "--points", "5", "--output", "-")[0] == EXIT_USAGE


class TestVerify:
    def test_default_passes(self, capsys, tmp_path):
        report = tmp_path / "report.txt"
        code, out, _ = run(capsys, "verify", "--output", str(report))
        assert code == EXIT_OK
        text = report.read_text()
        assert text == out
        assert "result = PASS" in text and "grid_min_gap" in text and "equality_max_abs" in text

    def test_exploratory_order_warns(self, capsys):
        code, out, _ = run(capsys, "verify", "--q-list", "1,2.5", "--sweep-points", "10", "--output", "-")
        assert code == EXIT_OK
        assert "[warnings]" in out

    def test_strict_range_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--q-list", "2.5", "--sweep-points", "10",
                           "--strict-range", "--output", "-")
        assert code == EXIT_FAIL
        assert "result = FAIL" in out

    def test_zero_tolerance_is_usage_error(self, capsys):
        assert run(capsys, "verify", "--tol", "0", "--output", "-")[0] == EXIT_USAGE


class TestKeyrate:
    def test_direct(self, capsys):
        rec = parse(run(capsys, "keyrate", "--c", "0.7071", "--sb", "0", "--sab", "0",
                        "--sx", "0", "--sy", "0")[1])
        assert rec.column("key_rate")[0] == pytest.approx(LN2, abs=1e-4)
        assert rec.column("positive_key")[0] == 1

    def test_scenario(self, capsys):
        rec = parse(run(capsys, "keyrate", "--scenario", "--lambda", "0.2", "--epsilon", "0.7854",
                        "--sx", "0.3", "--sy", "0.3")[1])
        assert rec.column("key_rate")[0] == pytest.approx(0.093147, abs=1e-5)
        assert rec.column("positive_key")[0] == 1

    def test_no_key(self, capsys):
        rec = parse(run(capsys, "keyrate", "--c", "1", "--sb", "0.6", "--sab", "0",
                        "--sx", "0", "--sy", "0")[1])
        assert rec.column("key_rate")[0] == 0
        assert rec.column("positive_key")[0] == 0

    def test_missing_inputs(self, capsys):
        code, _, err = run(capsys, "keyrate", "--c", "0.8")
        assert code == EXIT_USAGE
        assert "--sb" in err


class TestConfigFile:
    def test_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\npoints = 7\nbits = true\n")
        rec = parse(run(capsys, "--config", str(cfg), "figure", "2a", "--output", "-")[1])
        assert len(rec.rows) == 7
        direct = parse(run(capsys, "figure", "2a", "--points", "7", "--output", "-")[1])
        np.testing.assert_allclose(rec.column("exact"), direct.column("exact") / LN2, rtol=1e-11)

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("points=7\n")
        rec = parse(run(capsys, "--config", str(cfg), "figure", "2a", "--points", "9", "--output", "-")[1])
        assert len(rec.rows) == 9

    def test_malformed(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("points 7\n")
        assert run(capsys, "--config", str(cfg), "figure", "1", "--output", "-")[0] == EXIT_USAGE

    def test_missing_file(self, capsys, tmp_path):
        code = run(capsys, "--config", str(tmp_path / "nope.cfg"), "figure", "1", "--output", "-")[0]
        assert code == EXIT_IO


class TestCsv:
    def test_round_trip(self):
        rec = OutputRecord(["x", "y"], entropic=frozenset({"y"}))
        rec.add(0.1, None)
        rec.add(1 / 3, -0.0)
        buf = io.StringIO()
        write_csv(rec, buf, {"b": 2, "a": 1})
        text = buf.getvalue()
        assert text.splitlines()[0] == "# a=1 b=2"
        assert "-0" not in text
        back = read_csv(io.StringIO(text))
        assert back.rows[0] == (0.1, None)
        assert back.rows[1][0] == pytest.approx(1 / 3, rel=1e-12)

    def test_twelve_significant_digits(self):
        assert format_value(math.pi) == "3.14159265359"
        assert format_value(True) == "1"
        assert format_value(None) == ""

    def test_row_width_enforced(self):
        with pytest.raises(ValueError):
            OutputRecord(["a", "b"]).add(1.0)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entropic_bounds", "keyrate", "--c", "1", "--sb", "0",
                           "--sab", "0", "--sx", "0", "--sy", "0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("c,")
