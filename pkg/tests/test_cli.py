import json
import subprocess
import sys

import pytest

from rigidkit.cli import main
from rigidkit.experiments import read_csv
from rigidkit.graph import Graph, write_edgelist


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, G in {"k4": Graph.complete(4), "c4": Graph.cycle(4), "k30": Graph.complete(30)}.items():
        paths[name] = tmp_path / f"{name}.txt"
        write_edgelist(G, paths[name])
    paths["bad"] = tmp_path / "bad.txt"
    paths["bad"].write_text("3 1\n0 0\n")
    paths["dir"] = tmp_path
    return paths


def test_check_exit_codes(files, capsys):
    assert main(["check", str(files["k4"]), "-d", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rigid"] and out["rank"] == 5
    assert main(["check", str(files["c4"]), "-d", "2"]) == 1
    assert main(["check", str(files["bad"]), "-d", "2"]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["check", str(files["dir"] / "missing.txt"), "-d", "2"]) == 2
    assert main(["check"]) == 2


def test_certify_partition_cli(files, tmp_path):
    part = tmp_path / "p.json"
    part.write_text(json.dumps({"blocks": [list(range(i, i + 6)) for i in range(0, 30, 6)]}))
    out = tmp_path / "v.json"
    assert main(["certify-partition", str(files["k30"]), str(part), "-d", "3", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["accepted"]
    two = tmp_path / "two.txt"
    write_edgelist(Graph(30, [(u, v) for u in range(30) for v in range(u + 1, 30) if (u < 15) == (v < 15)]), two)
    assert main(["certify-partition", str(two), str(part), "-d", "2"]) == 1
    assert main(["certify-partition", str(files["k30"]), str(part), "-d", "9"]) == 2


def test_connector_cli_exit_codes(files, tmp_path, capsys):
    part = tmp_path / "p.json"
    part.write_text(json.dumps({"blocks": [list(range(i, i + 6)) for i in range(0, 30, 6)]}))
    assert main(["connector", str(files["k30"]), "--partition", str(part), "--k", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"]["accepted"]
    assert main(["connector", str(files["k30"]), "--partition", str(part), "--eta", "0.6"]) == 3
    assert main(["connector", str(files["k30"])]) == 2


def _run(argv, tmp_path, name):
    out = tmp_path / name
    assert main(argv + ["--out", str(out)]) == 0
    return out.read_text()


def test_threshold_csv_deterministic_and_thread_invariant(tmp_path):
    argv = ["threshold", "--n", "30", "-d", "2", "--p-grid", "0.1,0.2,0.3", "--trials", "6", "--seed", "4"]
    a = _run(argv, tmp_path, "a.csv")
    b = _run(argv, tmp_path, "b.csv")
    c = _run(argv + ["--threads", "3"], tmp_path, "c.csv")
    assert a == b == c
    assert a.startswith("# experiment=threshold seed=4 trials=6")
    rows = read_csv(a)
    assert [float(r["p"]) for r in rows] == [0.1, 0.2, 0.3]
    assert _run(argv[:-1] + ["5"], tmp_path, "d.csv") != a


def test_codegree_and_regular_run(tmp_path):
    text = _run(["codegree", "--n", "12", "--model", "cliques", "--k-grid", "2,4", "--trials", "1"], tmp_path, "c.csv")
    rows = read_csv(text)
    assert len(rows) == 2
    text = _run(["regular", "--n", "30", "--r", "6", "-d", "2", "--trials", "3"], tmp_path, "r.csv")
    assert len(read_csv(text)) == 3


def test_plot_deterministic_and_errors(tmp_path):
    csv = tmp_path / "t.csv"
    csv.write_text(_run(["threshold", "--n", "20", "--p-grid", "0.2,0.4", "--trials", "3"], tmp_path, "t.csv"))
    a = _run(["plot", str(csv), "--x", "p", "--y", "frac_rigid,frac_mindeg"], tmp_path, "a.svg")
    b = _run(["plot", str(csv), "--x", "p", "--y", "frac_rigid,frac_mindeg"], tmp_path, "b.svg")
    assert a == b and a.startswith("<svg")
    assert main(["plot", str(csv), "--x", "p", "--y", "nope"]) == 2
    assert main(["plot", str(tmp_path / "missing.csv"), "--x", "p", "--y", "rigid"]) == 2


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 20, "p-grid": "0.3", "trials": 2, "seed": 9}))
    text = _run(["threshold", "--config", str(cfg)], tmp_path, "x.csv")
    rows = read_csv(text)
    assert rows[0]["n"] == "20" and rows[0]["n_trials"] == "2"
    assert "seed=9" in text
    # explicit flags still win
    text = _run(["threshold", "--config", str(cfg), "--trials", "3"], tmp_path, "y.csv")
    assert read_csv(text)[0]["n_trials"] == "3"
    (tmp_path / "broken.json").write_text("{")
    assert main(["threshold", "--config", str(tmp_path / "broken.json")]) == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "rigidkit", "check", str(files["k4"]), "-d", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rigid"]
