import csv
import json

import numpy as np
import pytest

from trendirr.cli import WINDOW_COLUMNS, main

T0 = 1_600_000_020


def write_ohlcv(path, n, seed=0, drop=()):
    rng = np.random.default_rng(seed)
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 1e-3, n)))
    with open(path, "w") as fh:
        fh.write("https://www.CryptoDataDownload.com\n")
        fh.write("unix,date,symbol,open,high,low,close,Volume BTC,Volume USD\n")
        for i in reversed(range(n)):
            if i in drop:
                continue
            p = prices[i]
            fh.write(f"{T0 + 60 * i},d,BTC/USD,{p},{p * 1.001},{p * 0.999},{p},1,{p}\n")
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


ANALYZE = ["--window-minutes", "1000", "--step-minutes", "1000", "--surrogates", "20", "--seed", "5"]


def test_analyze_two_windows(tmp_path):
    src = write_ohlcv(tmp_path / "btc.csv", 2001, drop={500})
    out = tmp_path / "out"
    assert main(["analyze", "--input", str(src), "--out-dir", str(out), *ANALYZE]) == 0
    rows = read_csv(out / "windows.csv")
    assert tuple(rows[0]) == WINDOW_COLUMNS
    assert len(rows) == 3
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_windows"] == 2
    assert summary["ingest"]["gaps_found"] == 1
    assert summary["ingest"]["source"] == "btc.csv"
    assert "pearson_r_i_t_i_star" in summary
    digest = summary["manifest_digest"]
    assert all(r[-1] == digest for r in rows[1:])
    assert json.loads((out / "manifest.json").read_text())["digest"] == digest


def test_analyze_is_reproducible(tmp_path):
    src = write_ohlcv(tmp_path / "eth.csv", 3001, seed=2)
    for name in ("a", "b"):
        assert main(["analyze", "--input", str(src), "--out-dir", str(tmp_path / name), *ANALYZE]) == 0
    for f in ("windows.csv", "summary.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    main(["analyze", "--input", str(src), "--out-dir", str(tmp_path / "c"), *ANALYZE[:-1], "6"])
    assert (tmp_path / "a" / "summary.json").read_bytes() != (tmp_path / "c" / "summary.json").read_bytes()


def test_missing_input(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    code = main(["analyze", "--input", str(missing), "--out-dir", str(tmp_path / "o")])
    assert code != 0
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["path"] == str(missing)
    assert json.loads((tmp_path / "o" / "error.json").read_text())["path"] == str(missing)


def test_insufficient_data_is_an_error(tmp_path, capsys):
    src = write_ohlcv(tmp_path / "short.csv", 50)
    code = main(["analyze", "--input", str(src), "--out-dir", str(tmp_path / "o"), *ANALYZE])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"] == "InsufficientDataError"


def test_synth_random_walk(tmp_path):
    out = tmp_path / "rw"
    assert main(["synth", "--process", "random_walk", "--p", "0.6", "--n", "1000", "--seed", "1", "--out-dir", str(out)]) == 0
    rows = read_csv(out / "series.csv")
    assert rows[0][:2] == ["t", "value"]
    values = [int(r[1]) for r in rows[1:]]
    assert len(values) == 1000
    assert set(np.diff(values).tolist()) == {-1, 1}


@pytest.mark.parametrize("process, check", [("ar2", np.isfinite), ("nar2", lambda v: v >= 0)])
def test_synth_processes(tmp_path, process, check):
    out = tmp_path / process
    assert main(["synth", "--process", process, "--n", "100000", "--out-dir", str(out)]) == 0
    values = np.array([float(r[1]) for r in read_csv(out / "series.csv")[1:]])
    assert values.size == 100000 and check(values).all()


def test_synth_feeds_analyze(tmp_path):
    main(["synth", "--process", "nar2", "--nar-time-mode", "scaled", "--n", "4000", "--out-dir", str(tmp_path / "s")])
    out = tmp_path / "a"
    code = main(["analyze", "--input", str(tmp_path / "s" / "series.csv"), "--out-dir", str(out), *ANALYZE])
    assert code == 0
    rows = read_csv(out / "windows.csv")[1:]
    assert len(rows) == 4
    assert all(r[3] == "true" for r in rows)
    assert json.loads((out / "summary.json").read_text())["ingest"] is None


def test_validate_nar_suite(tmp_path, capsys):
    out = tmp_path / "v"
    code = main(["validate", "--suite", "nar", "--max-n", "10000", "--out-dir", str(out)])
    table = read_csv(out / "validate.csv")
    assert table[0][:3] == ["suite", "name", "n"]
    assert len(table) == 1 + 2 * 2
    report = json.loads((out / "validate.json").read_text())
    assert code == (0 if report["passed"] else 1)
    assert code == 0
    assert "validation passed" in capsys.readouterr().out


def test_validate_reports_failures(tmp_path):
    out = tmp_path / "v"
    code = main(["validate", "--suite", "random_walk", "--out-dir", str(out)])
    report = json.loads((out / "validate.json").read_text())
    failed = {f["name"] for f in report["failures"]}
    assert code == (1 if failed else 0)
    rows = read_csv(out / "validate.csv")[1:]
    assert {r[1] for r in rows if r[7] == "false"} == failed
    assert "p=0.5" not in failed
