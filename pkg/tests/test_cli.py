import json
import subprocess
import sys

import pytest

from lbconsensus.cli import main
from lbconsensus.harness import SweepReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_verdicts(capsys):
    code, out, _ = run(capsys, "check", "--graph", "cycle:5", "--f", "1")
    assert code == 0 and "ACHIEVABLE" in out
    record = json.loads(out.split("RECORD ", 1)[1])
    assert record["achievable"] is True and record["model"] == "local-broadcast"
    code, out, _ = run(capsys, "check", "--graph", "cycle:5", "--f", "2")
    assert code == 1 and "NOT ACHIEVABLE" in out and "witness" in out
    code, out, _ = run(capsys, "check", "--graph", "complete:10", "--model", "hybrid", "--f", "3", "--t", "3")
    assert code == 0


def test_gen_graph_writes_file(capsys, tmp_path):
    p = tmp_path / "g.txt"
    code, out, _ = run(capsys, "gen-graph", "--family", "fig1b", "--out", str(p))
    assert code == 0 and p.read_text().splitlines()[0] == "8"
    code, out, _ = run(capsys, "gen-graph", "--family", "cycle", "--n", "4")
    assert out.splitlines() == ["4", "0 1", "0 3", "1 2", "2 3"]
    code, out, _ = run(capsys, "check", "--graph", str(p), "--f", "2")
    assert code == 0


def test_run_and_replay(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "--graph", "cycle:5", "--f", "1", "--inputs", "00100", "--faulty", "2", "--strategy", "flip", "--out", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[:4] == ["DECIDE 0 0 30", "DECIDE 1 0 30", "DECIDE 3 0 30", "DECIDE 4 0 30"]
    key = [x for x in lines if x.startswith("KEY ")][0][4:]
    assert (tmp_path / "key.txt").read_text().strip() == key
    code, again, _ = run(capsys, "replay", "--key", key)
    assert code == 0
    assert again.splitlines()[:4] == lines[:4]


def test_replay_rejects_tampered_key(capsys):
    code, out, _ = run(capsys, "run", "--graph", "cycle:5", "--f", "1", "--inputs", "00000")
    key = [x for x in out.splitlines() if x.startswith("KEY ")][0][4:]
    code, _, err = run(capsys, "replay", "--key", key.replace("seed=0", "seed=9"))
    assert code == 2 and "rejected key" in err


def test_sweep_writes_report_and_replays_from_it(capsys, tmp_path):
    code, out, _ = run(
        capsys, "sweep", "--graph", "cycle:5", "--f", "1", "--inputs", "sample:4",
        "--strategy", "silent,tamper:first-hop=1", "--invariants", "--out", str(tmp_path),
    )
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("SUMMARY runs=48 passed=48")
    rep = SweepReport.read(tmp_path / "report.txt")
    assert rep.total == 48 and not rep.violations
    code, out, _ = run(capsys, "replay", "--report", str(tmp_path / "report.txt"), "--run", "7")
    assert code == 0 and "RESULT agreement=ok" in out
    code, _, err = run(capsys, "replay", "--report", str(tmp_path / "report.txt"))
    assert code == 2 and "no failing runs" in err


def test_sweep_on_nonconforming_graph_fails(capsys):
    code, out, _ = run(capsys, "sweep", "--graph", "path:3", "--f", "1", "--strategy", "silent")
    assert code == 1 and "FAILED" in out


def test_demo_necessity(capsys, tmp_path):
    code, out, _ = run(capsys, "demo-necessity", "--graph", "path:3", "--f", "1", "--construction", "degree", "--out", str(tmp_path))
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("VERDICT degree: protocol alg1 fails")
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["E1.script", "E1.trace", "E2.script", "E2.trace", "E3.script", "E3.trace", "split.trace", "summary.txt"]
    code, out, _ = run(capsys, "demo-necessity", "--graph", "fig1b", "--f", "2", "--construction", "connectivity")
    assert code == 1 and "no partition" in out


def test_run_with_scripted_strategy(capsys, tmp_path):
    run(capsys, "demo-necessity", "--graph", "path:3", "--f", "1", "--construction", "degree", "--out", str(tmp_path))
    script = tmp_path / "E2.script"
    # E2 of this demo has no faulty node; E1 has node 1 faulty
    code, out, _ = run(capsys, "run", "--graph", "path:3", "--f", "1", "--inputs", "010", "--faulty", "1",
                       "--strategy", f"script:{tmp_path / 'E1.script'}", "--lenient")
    assert code == 0 and "DECIDE 0 0" in out
    assert script.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--graph", "no/such/file", "--f", "1"],
        ["run", "--graph", "cycle:5", "--f", "1", "--inputs", "0101"],
        ["run", "--graph", "cycle:5", "--f", "1", "--inputs", "01010", "--strategy", "bogus"],
        ["run", "--graph", "cycle:5", "--f", "1", "--t", "1", "--inputs", "01010"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lbconsensus", "check", "--graph", "cycle:5", "--f", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "ACHIEVABLE" in proc.stdout
