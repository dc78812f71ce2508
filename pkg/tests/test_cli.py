import json
import math
import re

import pytest

from mbstat import parse_trades
from mbstat.cli import main
from mbstat.reports import RECORD_FIELDS

WORKED_ASSET1 = "t,price,volume\n0,2,1\n1,4,2\n2,3,1\n"
WORKED_ASSET2 = "t,price,volume\n0,1,2\n1,2,1\n2,2,1\n"


def write_pair(tmp_path, text1=WORKED_ASSET1, text2=WORKED_ASSET2):
    p1 = tmp_path / "a1.csv"
    p2 = tmp_path / "a2.csv"
    p1.write_text(text1)
    p2.write_text(text2)
    return str(p1), str(p2)


def generate_pair(tmp_path, n=400, seed=5, mode="free", extra=()):
    paths = []
    for k, name in enumerate(("g1.csv", "g2.csv")):
        out = tmp_path / name
        argv = [
            "generate", "--n", str(n), "--seed", str(seed + k),
            "--out", str(out), "--mode", mode, *extra,
        ]
        assert main(argv) == 0
        paths.append(str(out))
    return paths


class TestGenerate:
    def test_writes_parseable_csv(self, tmp_path):
        out = tmp_path / "a.csv"
        assert main(["generate", "--n", "1000", "--seed", "7", "--out", str(out)]) == 0
        text = out.read_text()
        series = parse_trades(text)
        assert len(series) == 1000
        assert text.endswith("\n")

    def test_n_below_minimum_is_usage_error(self, capsys):
        assert main(["generate", "--n", "1"]) == 2
        assert "n_ticks" in capsys.readouterr().err

    def test_constant_volume_cells_identical(self, tmp_path):
        out = tmp_path / "cv.csv"
        assert main([
            "generate", "--mode", "constant-volume", "--n", "100", "--seed", "1",
            "--out", str(out),
        ]) == 0
        cells = {line.split(",")[2] for line in out.read_text().splitlines()[1:]}
        assert len(cells) == 1

    def test_unwritable_path_is_io_error(self, tmp_path, capsys):
        missing = tmp_path / "no" / "such" / "dir" / "x.csv"
        assert main(["generate", "--n", "10", "--out", str(missing)]) == 3

    def test_stdout_default(self, capsys):
        assert main(["generate", "--n", "3", "--seed", "2"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("t,price,volume\n")


class TestAnalyze:
    def test_worked_pair_price_corr(self, tmp_path):
        p1, p2 = write_pair(tmp_path)
        out = tmp_path / "report.json"
        code = main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "3", "--beta", "0", "--stats", "price_corr",
            "--output", str(out),
        ])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["schema_version"] == 1
        (record,) = report["records"]
        assert record["stat_family"] == "price_corr"
        assert record["market_value"] == pytest.approx(0.375, rel=1e-12)
        # frequency side: (1/N) sum p1*p2 - mean(p1) mean(p2) = 16/3 - 5
        assert record["frequency_value"] == pytest.approx(1 / 3, rel=1e-12)
        assert record["a1"] == pytest.approx(3.25, rel=1e-15)
        assert record["a2"] == pytest.approx(1.5, rel=1e-15)
        assert record["h1"] == 0.0
        assert record["N"] == 3 and record["beta"] == 0
        assert set(record) == set(RECORD_FIELDS)

    def test_constant_volume_reduction_visible(self, tmp_path):
        p1, p2 = generate_pair(tmp_path, n=200, mode="constant-volume",
                               extra=("--price-start", "1.0"))
        out = tmp_path / "cv.json"
        assert main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "32", "--beta", "0", "--stride", "16",
            "--stats", "price_corr", "--output", str(out),
        ]) == 0
        for record in json.loads(out.read_text())["records"]:
            gap = abs(record["market_value"] - record["frequency_value"])
            assert gap <= 1e-12 * max(1.0, abs(record["frequency_value"]))

    def test_all_fields_finite(self, tmp_path):
        p1, p2 = generate_pair(tmp_path, n=300)
        out = tmp_path / "all.json"
        assert main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "16", "--alpha", "1", "--beta", "2",
            "--output", str(out),
        ]) == 0
        records = json.loads(out.read_text())["records"]
        families = {r["stat_family"] for r in records}
        assert len(families) == 7  # joint_moments expands to two families
        for record in records:
            for key, value in record.items():
                if isinstance(value, float):
                    assert math.isfinite(value), (key, record)

    def test_csv_format(self, tmp_path):
        p1, p2 = write_pair(tmp_path)
        out = tmp_path / "report.csv"
        assert main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "3", "--beta", "0", "--stats", "price_corr",
            "--format", "csv", "--output", str(out),
        ]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(RECORD_FIELDS)
        assert len(lines) == 2
        cells = lines[1].split(",")
        assert cells[4] == "price_corr"
        assert float(cells[5]) == pytest.approx(0.375, rel=1e-12)

    def test_byte_stable_reports(self, tmp_path):
        p1, p2 = generate_pair(tmp_path, n=150)
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            assert main([
                "analyze", "--asset1-path", p1, "--asset2-path", p2,
                "--window", "8", "--alpha", "1", "--beta", "1",
                "--output", str(out),
            ]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_missing_history_exit_5(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path)
        code = main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "3", "--alpha", "5", "--beta", "1",
            "--stats", "return_corr",
        ])
        assert code == 5

    def test_parse_failure_exit_4_names_rule(self, tmp_path, capsys):
        p1 = tmp_path / "bad.csv"
        p1.write_text("t,price,volume\n0,2,1\n5,4,2\n6,3,1\n")
        p2 = tmp_path / "ok.csv"
        p2.write_text(WORKED_ASSET2)
        code = main([
            "analyze", "--asset1-path", str(p1), "--asset2-path", str(p2),
            "--window", "2", "--beta", "0", "--stats", "price_corr",
        ])
        assert code == 4
        assert "NonUniformSpacing" in capsys.readouterr().err

    def test_unknown_stat_exit_2(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path)
        code = main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "3", "--stats", "volatility_smile",
        ])
        assert code == 2

    def test_bad_window_exit_2(self, tmp_path):
        p1, p2 = write_pair(tmp_path)
        assert main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "0",
        ]) == 2

    def test_return_stats_need_alpha(self, tmp_path):
        p1, p2 = write_pair(tmp_path)
        assert main([
            "analyze", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "2", "--alpha", "0", "--stats", "return_corr",
        ]) == 2

    def test_missing_input_file_exit_3(self, tmp_path):
        p2 = tmp_path / "b.csv"
        p2.write_text(WORKED_ASSET2)
        assert main([
            "analyze", "--asset1-path", str(tmp_path / "absent.csv"),
            "--asset2-path", str(p2), "--window", "2",
        ]) == 3

    def test_argparse_rejects_unknown_flag(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "--nope"])
        assert exc.value.code == 2


class TestVerify:
    def test_synthetic_pair_passes(self, tmp_path, capsys):
        p1, p2 = generate_pair(tmp_path, n=240)
        code = main([
            "verify", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "24", "--stride", "8", "--alpha", "1", "--beta", "2",
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert out.count("[ok]") == 3

    def test_zero_tolerance_fails(self, tmp_path, capsys):
        p1, p2 = generate_pair(tmp_path, n=240)
        code = main([
            "verify", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "24", "--stride", "8", "--alpha", "1", "--beta", "2",
            "--tol", "0",
        ])
        captured = capsys.readouterr()
        assert code == 1
        assert "tolerance breach" in captured.err
        assert "family=" in captured.err

    def test_constant_volume_price_family_deviation_tiny(self, tmp_path, capsys):
        p1, p2 = generate_pair(tmp_path, n=200, mode="constant-volume",
                               extra=("--price-start", "1.0"))
        code = main([
            "verify", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "25", "--stride", "25", "--beta", "0",
            "--stats", "price_corr",
        ])
        out = capsys.readouterr().out
        assert code == 0
        (dev,) = [
            float(m.group(1))
            for m in re.finditer(r"max_rel_dev=([0-9.e+-]+)", out)
        ]
        assert dev <= 1e-12

    def test_verify_flag_validation(self, tmp_path):
        p1, p2 = write_pair(tmp_path)
        assert main([
            "verify", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "2", "--stats", "price_corr", "--tol", "-1",
        ]) == 2
        assert main([
            "verify", "--asset1-path", p1, "--asset2-path", p2,
            "--window", "2", "--stats", "nope",
        ]) == 2
