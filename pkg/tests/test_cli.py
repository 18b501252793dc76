import json
import subprocess
import sys

from clusterbench.cli import main


def run_cli(args):
    return main(args)


def test_cli_happy_path(spectf_csv, tmp_path, capsys):
    out = tmp_path / "out"
    rc = run_cli([
        "--data", str(spectf_csv), "--class-col", "44", "--k", "3",
        "--seed", "1", "--max-epochs", "20", "--out", str(out), "--format", "json",
    ])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert set(report["algorithms"]) == {"kmeans", "kstar", "em"}
    scatter = list(out.glob("fig2_*_cluster*.csv"))
    assert len(scatter) == 9  # 3 algorithms x 3 clusters


def test_cli_csv_format(spectf_csv, tmp_path):
    out = tmp_path / "out"
    rc = run_cli([
        "--data", str(spectf_csv), "--class-col", "44", "--k", "2",
        "--algos", "kmeans", "--max-epochs", "10", "--out", str(out), "--format", "csv",
    ])
    assert rc == 0
    assert (out / "times.csv").exists()
    assert (out / "purity_entropy.csv").exists()


def test_cli_config_error_exit_code(tmp_path, capsys):
    rc = run_cli(["--data", str(tmp_path / "none.csv"), "--k", "0"])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:")


def test_cli_missing_data_exit_code(tmp_path, capsys):
    rc = run_cli(["--data", str(tmp_path / "none.csv"), "--k", "2"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_cli_bad_sigma2(spectf_csv, capsys):
    rc = run_cli(["--data", str(spectf_csv), "--sigma2", "junk"])
    assert rc == 2


def test_cli_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "clusterbench.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "--seed" in proc.stdout and "--format" in proc.stdout


def test_cli_thin_client(spectf_csv, tmp_path, monkeypatch):
    from fastapi.testclient import TestClient

    from clusterbench.service import app

    tc = TestClient(app)
    monkeypatch.setattr(
        "httpx.post", lambda url, json=None, timeout=None: tc.post("/experiments", json=json)
    )
    out = tmp_path / "remote"
    rc = run_cli([
        "--data", str(spectf_csv), "--class-col", "44", "--k", "2",
        "--algos", "kmeans", "--out", str(out), "--format", "csv",
        "--server", "http://fake",
    ])
    assert rc == 0
    assert (out / "purity_entropy.csv").exists()
