import json

import pytest

from actin_automaton.main import run
from actin_automaton.outputs.service import read_manifest
from conftest import write_edges

C6_EDGES = [(i, (i + 1) % 6) for i in range(6)]
TREE_EDGES = [(i, (i - 1) // 2) for i in range(1, 40)]


@pytest.fixture(autouse=True)
def quiet_env(monkeypatch):
    for key in ("THREADS", "LOG_LEVEL", "MAX_STEPS_FACTOR", "SERIES_LIMIT"):
        monkeypatch.setenv(f"ACTIN_{key}", "")


@pytest.fixture
def c6_file(tmp_path):
    return write_edges(tmp_path / "c6.txt", C6_EDGES)


@pytest.fixture
def tree_file(tmp_path):
    return write_edges(tmp_path / "tree.txt", TREE_EDGES)


# ── exit codes ───────────────────────────────────────────────────

def test_run_single_node(c6_file, capsys):
    assert run(["run", "--graph", str(c6_file), "--init", "single:0"]) == 0
    assert capsys.readouterr().out == (
        "seed,scenario,rho,rule,p,c,e,termination\n"
        "0,single:0,,a0,5,1,0,absorbing\n"
    )


def test_run_ring_wave(c6_file, capsys):
    assert run(["run", "--graph", str(c6_file), "--init", "ring:0:0"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,ring:0:0,,a0,0,6,1,limit-cycle"


def test_missing_graph_writes_nothing(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code = run(["run", "--graph", str(tmp_path / "absent.txt"), "--init", "single:0", "-o", str(out)])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert captured.err.startswith("error:")
    assert not out.exists()


def test_unknown_flag(c6_file):
    assert run(["run", "--graph", str(c6_file), "--init", "single:0", "--bogus"]) == 1


def test_no_command(capsys):
    assert run([]) == 1


def test_bad_output_format(c6_file, tmp_path):
    assert run(["run", "--graph", str(c6_file), "--init", "single:0", "-o", str(tmp_path / "out.xlsx")]) == 1


def test_bad_rule(c6_file):
    assert run(["run", "--graph", str(c6_file), "--init", "single:0", "--rule", "a7"]) == 1


def test_empty_stimulation_is_an_input_error(c6_file, capsys):
    assert run(["run", "--graph", str(c6_file), "--init", "plus:0.1"]) == 2
    assert "selects no node" in capsys.readouterr().err


# ── outputs ──────────────────────────────────────────────────────

def test_dump_states(c6_file, tmp_path, capsys):
    dump = tmp_path / "states.ndjson"
    assert run(["run", "--graph", str(c6_file), "--init", "single:0", "--dump-states", str(dump)]) == 0
    records = [json.loads(line) for line in dump.read_text().splitlines()]
    assert [r["step"] for r in records] == [0, 1, 2, 3, 4, 5]
    assert records[0] == {"step": 0, "excited": 1, "states": "+ooooo"}
    assert records[-1]["states"] == "oooooo"


def test_restimulation_series(c6_file, tmp_path, capsys):
    series = tmp_path / "series.csv"
    code = run([
        "run", "--graph", str(c6_file), "--init", "single:0",
        "--restim", "8:single:3", "--series-out", str(series),
    ])
    assert code == 0
    lines = series.read_text().splitlines()
    assert lines[0] == "step,excited,stimulated"
    assert lines[9] == "8,1,1"
    assert capsys.readouterr().out.splitlines()[1] == "0,single:0,,a0,5,1,0,absorbing"


def test_sweep_is_reproducible(tree_file, tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--graph", str(tree_file), "--rho", "0.1:0.5:0.2", "--trials", "3", "--seed", "7"]
    assert run(["--threads", "1", *args, "-o", str(first)]) == 0
    assert run(["--threads", "2", *args, "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().splitlines()[0] == "rho,trial,seed,scenario,rule,p,c,e,termination"
    assert len(first.read_text().splitlines()) == 1 + 3 * 3


def test_manifest_and_replay(tree_file, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code = run([
        "sweep", "--graph", tree_file.name, "--rho", "0.2,0.6", "--trials", "2", "--seed", "3",
        "--summary-out", "summary.csv", "-o", "raw.csv",
    ])
    assert code == 0

    manifest = read_manifest(tmp_path / "raw.csv.manifest.json")
    assert manifest.command == "sweep"
    assert set(manifest.outputs) == {"raw.csv", "summary.csv"}
    assert manifest.graph_checksum is not None
    assert manifest.parameters["base_seed"] == 3
    capsys.readouterr()

    assert run(["replay", "raw.csv.manifest.json"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "verified 2 output(s)"


def test_replay_detects_changed_output(tree_file, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(["sweep", "--graph", tree_file.name, "--rho", "0.5", "--trials", "2", "-o", "raw.csv"]) == 0
    manifest = tmp_path / "raw.csv.manifest.json"
    data = json.loads(manifest.read_text())
    data["outputs"]["raw.csv"] = "0" * 64
    manifest.write_text(json.dumps(data))
    assert run(["replay", str(manifest)]) == 2


def test_fit_from_sweep(tree_file, tmp_path, capsys):
    raw = tmp_path / "raw.csv"
    assert run(["sweep", "--graph", str(tree_file), "--rho", "0.2:0.8:0.2", "--trials", "2", "-o", str(raw)]) == 0
    capsys.readouterr()
    assert run(["fit", str(raw)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "a,b,residual,n_points"
    assert out[1].endswith(",4")


def test_single_sweep(tmp_path, capsys):
    graph = write_edges(tmp_path / "p3.txt", [(0, 1), (1, 2)])
    rows = tmp_path / "nodes.csv"
    assert run(["single-sweep", "--graph", str(graph), "-o", str(rows)]) == 0
    assert "max_p,4" in capsys.readouterr().out
    assert rows.read_text().splitlines()[1:] == ["0,4,1,0,absorbing", "1,3,1,0,absorbing", "2,4,1,0,absorbing"]


def test_stats(c6_file, capsys):
    assert run(["stats", "--graph", str(c6_file)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("key,value\nnode_count,6\nedge_count,6\n")
    assert "diameter_nodes,4\n" in out


# ── structures and rings ─────────────────────────────────────────

def test_ingest_then_rings(aromatic_pdb, tmp_path, capsys):
    graph = tmp_path / "mini.txt"
    assert run(["ingest", str(aromatic_pdb), "-o", str(graph)]) == 0
    assert graph.read_text().startswith("nodes 13 edges 13\n")
    assert (tmp_path / "mini.txt.atoms.csv").is_file()
    assert (tmp_path / "mini.txt.manifest.json").is_file()
    capsys.readouterr()

    assert run(["rings", "--graph", str(graph)]) == 0
    assert capsys.readouterr().out == "residue,count\nHIS,1\nPHE,1\nTRP,0\nTYR,0\ntotal,2\n"


def test_rings_tolerance_check(capsys):
    assert run(["rings", "--tolerance-check", "6"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# ring_size=6 in_situ=false single_cases=24 pair_cases=36")
    assert "counterexample,0,4,absorbing," in "\n".join(lines)


def test_rings_capacity(capsys):
    assert run(["rings", "--capacity", "--rings-per-unit", "40"]) == 0
    out = capsys.readouterr().out
    assert "units_per_filament,8000,unit\n" in out
    assert "bits_per_filament,320000,bit\n" in out


def test_rings_demo(tmp_path, capsys):
    edges = C6_EDGES + [(2, 6), (6, 7), (7, 8)]
    graph = write_edges(tmp_path / "gadget.txt", edges)
    frames = tmp_path / "demo.ndjson"
    assert run(["rings", "--graph", str(graph), "--demo", "0", "--steps", "10", "--demo-out", str(frames)]) == 0
    assert "escape_step=3 node=6" in capsys.readouterr().err
    assert len(frames.read_text().splitlines()) == 11


def test_rings_needs_graph():
    assert run(["rings", "--list"]) == 1


def test_stats_takes_positional_graph(c6_file, capsys):
    assert run(["stats", "--graph", str(c6_file)]) == 0
    flagged = capsys.readouterr().out
    assert run(["stats", str(c6_file)]) == 0
    assert capsys.readouterr().out == flagged


def test_stats_needs_exactly_one_graph(c6_file, tmp_path):
    other = write_edges(tmp_path / "other.txt", [(0, 1)])
    assert run(["stats"]) == 1
    assert run(["stats", str(c6_file), "--graph", str(other)]) == 1


@pytest.mark.parametrize("mode", ["paper", "residues"])
def test_rings_count_mode_per_residue(aromatic_pdb, tmp_path, mode):
    out = tmp_path / "census.csv"
    assert run(["rings", "--graph", str(aromatic_pdb), "--count-mode", mode, "-o", str(out)]) == 0
    assert out.read_text() == "residue,count\nHIS,1\nPHE,1\nTRP,0\nTYR,0\ntotal,2\n"
    manifest = read_manifest(tmp_path / "census.csv.manifest.json")
    assert manifest.parameters["count_mode"] == "residues"


def test_rings_rejects_unknown_count_mode(aromatic_pdb):
    assert run(["rings", "--graph", str(aromatic_pdb), "--count-mode", "atoms"]) == 1


def test_rings_list(aromatic_pdb, capsys):
    assert run(["rings", "--graph", str(aromatic_pdb), "--list"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "id,kind,residue_name,residue_seq,chain,size,nodes,attachments",
        "0,PHE,PHE,1,A,6,0 1 2 3 4 5,0",
        "1,HIS,HIS,2,A,5,7 8 9 10 11,7",
    ]


def test_rings_demo_streams_to_stdout(tmp_path, capsys):
    graph = write_edges(tmp_path / "gadget.txt", C6_EDGES + [(2, 6), (6, 7), (7, 8)])
    assert run(["rings", "--graph", str(graph), "--demo", "0", "--steps", "10"]) == 0
    captured = capsys.readouterr()
    records = [json.loads(line) for line in captured.out.splitlines()]
    assert [r["step"] for r in records] == list(range(11))
    assert records[0]["states"] == "+oooo-ooo"
    assert "escape_step=3 node=6" in captured.err


def test_single_sweep_bare_sample(tmp_path, capsys):
    graph = write_edges(tmp_path / "p3.txt", [(0, 1), (1, 2)])
    assert run(["single-sweep", "--graph", str(graph), "--sample"]) == 0
    out = capsys.readouterr().out
    assert "sampled,true\n" in out
    assert "nodes_run,3\n" in out
