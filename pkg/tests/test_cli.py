"""Command-line interface: exit codes, JSON status lines, file outputs."""
import json
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "cablebot", *args],
        capture_output=True,
        text=True,
        timeout=120,
    )


def test_scenarios_list():
    proc = run_cli("scenarios", "list")
    assert proc.returncode == 0
    names = {line.split(":")[0] for line in proc.stdout.splitlines()}
    assert {"climb", "desk", "flat"} <= names


def test_simulate_shipped_scenario(tmp_path):
    out = tmp_path / "trace.csv"
    proc = run_cli("simulate", "--config", "flat", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    status = json.loads(proc.stdout)
    assert status["event"] == "done"
    lines = out.read_text().splitlines()
    assert status["records"] == len(lines) - 1 == 750  # 15 s at 50 Hz


def test_simulate_duration_override(tmp_path):
    out = tmp_path / "trace.csv"
    proc = run_cli("simulate", "--config", "flat", "--out", str(out),
                   "--duration", "2.0", "--seed", "99")
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["records"] == 100


def test_config_error_is_json_on_stderr(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("sim: {duration_s: 1.0, seed: 1}\ncontrol: {gain: 2}\n")
    out = tmp_path / "x.csv"
    proc = run_cli("simulate", "--config", str(bad), "--out", str(out))
    assert proc.returncode == 2
    err = json.loads(proc.stderr)
    assert "control.gain" in err["error"]
    assert not out.exists()


def test_missing_config_file(tmp_path):
    proc = run_cli("simulate", "--config", str(tmp_path / "nope.yaml"),
                   "--out", str(tmp_path / "x.csv"))
    assert proc.returncode == 2
    assert "error" in json.loads(proc.stderr)


def test_serve_announces_ports_and_finishes():
    proc = run_cli("serve", "--config", "flat", "--duration", "1.0", "--pace", "0")
    assert proc.returncode == 0, proc.stderr
    lines = [json.loads(line) for line in proc.stdout.splitlines()]
    assert lines[0]["event"] == "serving"
    assert lines[0]["tcp_port"] > 0 and lines[0]["ws_port"] > 0
    assert lines[-1]["event"] == "finished"
