import json
import subprocess
import sys

import pytest

from freelip.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_gen_writes_schema_tagged_graph(tmp_path):
    out = tmp_path / "g.json"
    assert run_cli("gen", "--family", "laakso", "--level", "1", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["schema"] == "freelip/1"
    assert len(obj["edges"]) == 6


def test_gen_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("gen", "--family", "diamond", "--level", "2", "--out", str(a))
    run_cli("gen", "--family", "diamond", "--level", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_norm_command(tmp_path, capsys):
    space = tmp_path / "s.json"
    mol = tmp_path / "m.json"
    space.write_text(json.dumps({"points": ["p", "q"], "dist": [[0, 3], [3, 0]]}))
    mol.write_text(json.dumps({"coeffs": {"p": 1, "q": -1}}))
    assert run_cli("norm", "--space", str(space), "--molecule", str(mol)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == 3
    assert out["dual"]["value"] == 3


def test_quotient_norm_command(tmp_path, capsys):
    g = tmp_path / "g.json"
    x = tmp_path / "x.json"
    run_cli("gen", "--family", "diamond", "--level", "1", "--out", str(g))
    x.write_text(json.dumps({"coeffs": {"tl": 1}}))
    assert run_cli("quotient-norm", "--graph", str(g), "--vector", str(x)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == out["boundary_norm"] == 1


def test_cyclespace_command(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli("gen", "--family", "diamond", "--level", "2", "--out", str(g))
    assert run_cli("cyclespace", "--graph", str(g)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mu"] == 5
    assert len(out["basis"]) == 5
    assert len(out["packing"]) >= 4


def test_projconst_command(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli("gen", "--family", "diamond", "--level", "1", "--out", str(g))
    assert run_cli("projconst", "--graph", str(g), "--mode", "orthogonal") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["is_projection"] and out["norm_l1"] == 1


def test_recursive_and_witness_commands(capsys):
    assert run_cli("recursive", "--base", "k2n:3", "--check-conditions") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["conditions"]["all_ok"]
    assert out["profile"]["alpha"] == "4/3"

    assert run_cli("witness", "--base", "square", "--r", "2") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["norm_sum"] == 1 and out["norm_C"] == "15/8"


def test_haar_csv_row(capsys):
    assert run_cli("haar", "--n", "3", "--upper-cells", "16") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("n,k,lower_bound")
    last = lines[-1].split(",")
    assert last[0] == "3" and last[2] == "7/3"


def test_haar_multibranch_csv(tmp_path):
    out = tmp_path / "bounds.csv"
    assert run_cli("haar", "--n", "1", "--branch", "3", "--report", str(out)) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[1].split(",")[2] == "1/3"


def test_haar_plot_data(tmp_path):
    plot = tmp_path / "curve.dat"
    assert run_cli("haar", "--n", "2", "--upper-cells", "4",
                   "--plot", str(plot)) == 0
    lines = plot.read_text().strip().splitlines()
    assert len(lines) == 2
    assert lines[1].split() == ["2", "1.75"]


def test_projconst_averaged_mode(tmp_path, capsys):
    g = tmp_path / "g.json"
    gens = tmp_path / "gens.json"
    run_cli("gen", "--family", "diamond", "--level", "1", "--out", str(g))
    capsys.readouterr()
    # generators: swap the two ascending and the two descending edges
    gens.write_text(json.dumps({"maps": [
        {"bl": "br", "br": "bl", "tl": "tr", "tr": "tl"},
        {"bl": "tl", "tl": "bl", "br": "tr", "tr": "br"},
    ]}))
    assert run_cli("projconst", "--graph", str(g), "--mode", "averaged",
                   "--generators", str(gens)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["is_projection"]


def test_embed_command(tmp_path, capsys):
    space = tmp_path / "s.json"
    space.write_text(json.dumps(
        {"points": ["a", "b", "c"], "dist": [[0, 1, 1], [1, 0, 2], [1, 2, 0]]}))
    assert run_cli("embed", "--space", str(space), "--strategy", "half") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["k"] == 2 and out["C"] == 1


def test_embed_diamond_top(capsys):
    assert run_cli("embed", "--strategy", "diamond-top", "--level", "1") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["k"] == 2 and out["proj_norm"] == 1


def test_exit_codes(tmp_path, monkeypatch):
    assert run_cli("gen", "--family", "nonsense") == 1          # usage
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": ["a", "b"], "dist": [[0, 1], [2, 0]]}))
    mol = tmp_path / "m.json"
    mol.write_text(json.dumps({"coeffs": {"a": 1, "b": -1}}))
    assert run_cli("norm", "--space", str(bad), "--molecule", str(mol)) == 2
    monkeypatch.setenv("FREELIP_CAP_EDGES", "10")
    assert run_cli("gen", "--family", "diamond", "--level", "3") == 4


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "freelip.cli", "gen",
                           "--family", "path", "--level", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == "freelip/1"


def test_reproduce_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("reproduce", "--seed", "7", "--out", str(a)) == 0
    capsys.readouterr()
    assert run_cli("reproduce", "--seed", "7", "--out", str(b)) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == "claim,target,computed,status"
