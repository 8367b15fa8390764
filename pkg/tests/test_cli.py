import json

import pytest

from teashare.cli import main
from teashare.io import fixture_path

NESTED = str(fixture_path("nested_tree.json"))
NESTED_MOVES = str(fixture_path("nested_tree_moves.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_simulate_nested_tree(capsys):
    out = run_json(capsys, "--instance", NESTED, "simulate", NESTED_MOVES, "--target", "v", "--trace")
    assert out["final"]["v"] == "132" and out["target_value"] == "132"
    assert out["conserved"] and out["total_final"] == "588"
    assert [s["state"]["v"] for s in out["trace"]] == ["108", "108", "132"]


def test_simulate_empty_file_echoes(capsys, tmp_path):
    moves = tmp_path / "m.json"
    moves.write_text("[]")
    out = run_json(capsys, "simulate", "--instance", NESTED, str(moves))
    assert out["final"] == out["initial"]


def test_simulate_with_graph_and_weights(capsys, tmp_path):
    g = tmp_path / "g.json"
    w = tmp_path / "w.json"
    m = tmp_path / "m.json"
    g.write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"]]}))
    w.write_text(json.dumps({"a": "1", "b": "0"}))
    m.write_text(json.dumps([{"edge": ["b", "a"], "s": "1/4"}]))
    out = run_json(capsys, "simulate", "--graph", str(g), "--weights", str(w), str(m))
    assert out["final"] == {"a": "3/4", "b": "1/4"}


def test_exit_codes(capsys, tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{")
    assert run(capsys, "simulate", "--instance", str(bad_json))[0] == 2
    quasi = tmp_path / "q.json"
    quasi.write_text(json.dumps([{"edge": ["t", "v"], "s": "1"}, {"edge": ["r", "s"], "s": "1000"}]))
    code, _, err = run(capsys, "simulate", "--instance", NESTED, str(quasi))
    assert code == 3 and "index 1" in err
    disconnected = tmp_path / "d.json"
    disconnected.write_text(json.dumps([["r", "v"]]))
    assert run(capsys, "simulate", "--instance", NESTED, str(disconnected))[0] == 3
    star = str(fixture_path("star_3.json"))
    assert run(capsys, "bound", "--instance", star, "--kind", "feasibility")[0] == 4
    assert run(capsys, "bound", "--instance", star, "--kind", "distance", "--target", "c")[0] == 4
    assert run(capsys, "search", "--instance", NESTED, "--target", "zz")[0] == 4
    assert run(capsys, "search", "--instance", NESTED, "--depth", "-1")[0] == 5
    with pytest.raises(SystemExit) as info:
        main(["bound", "--kind", "nonsense"])
    assert info.value.code == 2


def test_bound_kinds(capsys, tmp_path):
    unit = tmp_path / "unit.json"
    inst = json.loads(open(NESTED).read())
    inst["weights"] = {x: ("1" if x == "r" else "0") for x in inst["weights"]}
    unit.write_text(json.dumps(inst))
    out = run_json(capsys, "bound", "--instance", str(unit), "--kind", "distance")
    assert out["value"] == "1/4" and out["source_feasible"]
    out = run_json(capsys, "bound", "--instance", str(unit), "--kind", "feasibility")
    assert out["feasible"] is True and out["kind"] == "feasibility"
    out = run_json(capsys, "bound", "--instance", NESTED, "--kind", "phi")
    assert out["value"] == "156" and out["witness"]["enumeration"] == ["t", "r"]
    out = run_json(capsys, "bound", "--instance", NESTED, "--kind", "dual")
    assert out["kind"] == "dual"
    flat = tmp_path / "flat.json"
    inst["weights"] = {x: "2/3" for x in inst["weights"]}
    flat.write_text(json.dumps(inst))
    assert run_json(capsys, "bound", "--instance", str(flat), "--kind", "phi")["value"] == "2/3"


def test_search_output(capsys):
    out = run_json(capsys, "search", "--instance", NESTED, "--depth", "3")
    assert out["best"] == "132" and out["optimal_within_depth"] == 3 and out["phi_bound"] == "156"
    assert out["witness"] == [["t", "v"], ["s", "t", "u"], ["r", "s", "t", "v"]]
    assert {"explored", "pruned"} <= set(out)


def test_limit_and_duality(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps([["r", "s"], ["s", "t"]]))
    out = run_json(capsys, "limit", "--instance", NESTED, str(fam))
    assert out["limit"]["r"] == "148" and out["components"] == [["r", "s", "t"]]
    assert out["converged"]
    out = run_json(capsys, "duality", "--seed", "7")
    assert out["equal"] and out["lhs"] == out["rhs"]
    out = run_json(capsys, "duality", "--instance", NESTED, NESTED_MOVES)
    assert out["equal"]


def test_output_is_deterministic_and_float_flag(capsys):
    a = run(capsys, "--seed", "3", "duality")[1]
    b = run(capsys, "duality", "--seed", "3")[1]
    assert a == b
    out = run_json(capsys, "--float", "search", "--instance", NESTED)
    assert out["approximate_float"]["best"] == 132.0
    assert "." not in json.dumps({k: v for k, v in out.items() if k != "approximate_float"})


def test_table_format(capsys):
    code, out, _ = run(capsys, "search", "--instance", NESTED, "--format", "table")
    assert code == 0 and "best" in out and "132" in out


def test_verify_command(capsys):
    out = run_json(capsys, "verify", "--suite", "duality", "--seed", "7", "--trials", "30")
    assert out["passed"] and all(p["failed"] == 0 for p in out["properties"])
    out = run_json(capsys, "verify", "--suite", "audit")
    assert out["passed"]
