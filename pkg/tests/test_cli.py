import json
import subprocess
import sys

import pytest

from hinge_sandpile.cli import EXIT_BUDGET, EXIT_DATA, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from hinge_sandpile.graph_core import build_thick_cycle, loads_graph, loads_layout


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_hinge_and_layout(capsys, tmp_path):
    graph, layout = tmp_path / "h.json", tmp_path / "h.layout.json"
    code, _, _ = run(capsys, "gen", "hinge", "5,5,5", "--out", str(graph), "--layout", str(layout))
    assert code == EXIT_OK
    g = loads_graph(graph.read_text())
    assert g.n_vertices == 11
    assert loads_layout(layout.read_text(), g).spec.cycle_sizes == (5, 5, 5)


def test_gen_thick_cycle_and_dual(capsys):
    code, out, _ = run(capsys, "gen", "thick-cycle", "2,3,4,1")
    assert code == EXIT_OK and loads_graph(out).n_vertices == 4
    code, out, _ = run(capsys, "gen", "hinge", "5,5,5", "--dual")
    assert loads_graph(out) == build_thick_cycle([4, 4, 4, 1])


def test_gen_errors(capsys):
    assert run(capsys, "gen", "hinge", "2,5")[0] == EXIT_DATA
    assert run(capsys, "gen", "hinge", "a,b")[0] == EXIT_USAGE
    assert run(capsys, "gen", "thick-cycle", "1,2", "--dual")[0] == EXIT_USAGE
    assert run(capsys, "gen", "torus", "3")[0] == EXIT_USAGE


def test_group(capsys, tmp_path):
    code, out, _ = run(capsys, "group", "hinge:5,5,5")
    assert code == EXIT_OK and out == "invariant factors: 4 28\norder: 112\n"
    code, out, _ = run(capsys, "group", "thick-cycle:1,1,1", "--json")
    assert json.loads(out)["invariant_factors"] == [3]
    code, out, _ = run(capsys, "group", "hinge(3,4,5)", "--json")
    doc = json.loads(out)
    assert doc["order"] == 50 and doc["schema"] == 1
    assert run(capsys, "group", "hinge:7")[1].endswith("order: 7\n")


def test_group_bad_inputs(capsys, tmp_path):
    disconnected = tmp_path / "d.json"
    disconnected.write_text('{"edges": [[0, 1, 1]], "n_vertices": 3}')
    assert run(capsys, "group", str(disconnected))[0] == EXIT_DATA
    junk = tmp_path / "junk.json"
    junk.write_text("{")
    assert run(capsys, "group", str(junk))[0] == EXIT_DATA
    assert run(capsys, "group", str(tmp_path / "missing.json"))[0] == EXIT_DATA


@pytest.mark.parametrize(
    "graph, divisor, expected",
    [("hinge(3,4,5)", "delta", 25), ("hinge(5,5,5)", "eta:1,2", 4), ("hinge(5,5,5)", "epsilon:1", 28)],
)
@pytest.mark.parametrize("method", ["coords", "gcd", "brute"])
def test_order_named_divisors(capsys, graph, divisor, expected, method):
    code, out, _ = run(capsys, "order", graph, "--divisor", divisor, "--method", method)
    assert code == EXIT_OK and out == f"{expected}\n"


def test_order_with_files(capsys, tmp_path):
    graph, layout = tmp_path / "g.json", tmp_path / "l.json"
    run(capsys, "gen", "hinge", "3,4,5", "--out", str(graph), "--layout", str(layout))
    code, out, _ = run(capsys, "order", str(graph), "--layout", str(layout), "--divisor", "delta", "--json")
    assert json.loads(out)["order"] == 25
    div = tmp_path / "d.json"
    div.write_text("[1, -1, 0, 0, 0, 0, 0, 0]")
    assert run(capsys, "order", str(graph), "--divisor-file", str(div))[1] == "25\n"
    div.write_text("[1, 0, 0, 0, 0, 0, 0, 0]")
    assert run(capsys, "order", str(graph), "--divisor-file", str(div))[0] == EXIT_DATA
    # named divisors need a layout
    assert run(capsys, "order", str(graph), "--divisor", "delta")[0] == EXIT_USAGE
    assert run(capsys, "order", "hinge:5,5,5", "--divisor", "zeta")[0] == EXIT_USAGE
    assert run(capsys, "order", "hinge:5,5,5")[0] == EXIT_USAGE


def test_order_budget_exit(capsys):
    code, _, _ = run(capsys, "order", "hinge:5,5,5", "--divisor", "delta", "--method", "brute",
                     "--max-group-order", "10")
    assert code == EXIT_BUDGET


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "thm3.1", "--k", "3..7", "--n", "1..5")
    assert code == EXIT_OK and out.endswith("thm3.1: 25 pass, 0 fail, 0 skipped, 0 budget\n")
    code, out, _ = run(capsys, "verify", "duality", "--specs", "random:50", "--max-cycles", "5")
    assert code == EXIT_OK and "50 pass" in out
    code, out, _ = run(capsys, "verify", "lemma2.16", "--samples", "1000")
    assert code == EXIT_OK and "1000 pass" in out


def test_verify_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "verify", "prop4.2", "--max-cycles", "3", "--json", "--out", str(a))
    run(capsys, "verify", "prop4.2", "--max-cycles", "3", "--json", "--out", str(b), "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["schema"] == 1 and doc["summary"]["fail"] == 0


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "thm3.8", "--k", "5", "--n", "3", "--csv")
    lines = out.splitlines()
    assert lines[0] == "params,predicted,computed,match,status"
    assert lines[1].endswith("True,pass")


def test_verify_mismatch_exit_code(capsys):
    # six mixed cycles: the generating-set prediction over-counts (see ledger)
    code, out, _ = run(capsys, "verify", "thm4.4", "--specs", "5,5,7,7,13,13")
    assert code == EXIT_MISMATCH and "1 fail" in out


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "thm3.1", "--k", "3..x")[0] == EXIT_USAGE
    assert run(capsys, "verify", "nope")[0] == EXIT_USAGE
    assert run(capsys, "verify", "thm3.1", "--json", "--csv")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE


def test_claim45(capsys, tmp_path):
    out_file = tmp_path / "claim.json"
    code, _, _ = run(capsys, "claim45", "--specs", "all", "--max-n", "4", "--max-k", "7", "--out", str(out_file))
    assert code == EXIT_OK
    doc = json.loads(out_file.read_text())
    assert doc["summary"]["total"] == 120
    assert doc["summary"]["same_shape"] == doc["summary"]["same_shape_consistent"]
    code, out, _ = run(capsys, "claim45", "--specs", "4,5,6", "--convention", "minus-one", "--csv")
    assert out.splitlines()[1].startswith("5 6 7,")
    code, out, _ = run(capsys, "claim45", "--specs", "3,3")
    assert "consistent" in out
    assert run(capsys, "claim45", "--specs", "2,2")[0] == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hinge_sandpile", "order", "hinge(3,4,5)", "--divisor", "delta"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "25\n"
