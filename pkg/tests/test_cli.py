import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from bartholdi.cli import main
from bartholdi.graph_io import load_graph, parse_document, parse_edge_list, parse_rational
from bartholdi.errors import BadRational, DuplicateEdge, ParseError

GOLDEN = Path(__file__).parent / "golden"
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
from regen_golden import GOLDEN as GOLDEN_ARGS  # noqa: E402


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, _ = run(argv)
    return code, json.loads(out)


@pytest.mark.parametrize("name", sorted(GOLDEN_ARGS))
def test_golden_reports(name):
    code, out, _ = run(GOLDEN_ARGS[name])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_reports_are_deterministic():
    argv = ["poles", "--graph", "builtin:Petersen", "--u", "1/3"]
    assert run(argv)[1] == run(argv)[1]


def test_info_examples():
    code, rep = run_json(["info", "--graph", "builtin:P3"])
    r = rep["result"]
    assert code == 0 and (r["kappa"], r["u_star"], r["mp_value"]) == (1, "1/3", "2/9")
    code, rep = run_json(["info", "builtin:K4"])
    r = rep["result"]
    assert (r["kappa"], r["u_star"], r["mp_value"]) == (16, "-1/2", "0")


def test_zeta_examples():
    _, rep = run_json(["zeta", "--graph", "builtin:P2", "--symbolic"])
    assert rep["result"]["polynomial"] == "1 - u^2*q^2"
    _, rep = run_json(["zeta", "--graph", "builtin:C3", "--u", "0"])
    assert rep["result"]["square_free"] == "(1 - q^3)^2"
    _, rep = run_json(["zeta", "--graph", "builtin:K4", "--u", "0"])
    assert rep["result"]["factorization"] == "(1 - 2*q)*(1 - q)^3*(1 + q)^2*(1 + q + 2*q^2)^3"


def test_vertex_form_matches_edge_form():
    for u in ("0", "1/2", "-3"):
        _, e = run_json(["zeta", "builtin:K13", "--u", u])
        _, v = run_json(["zeta", "builtin:K13", "--u", u, "--form", "vertex"])
        assert e["result"]["polynomial"] == v["result"]["polynomial"]


def test_check_examples():
    code, rep = run_json(["check", "--graph", "builtin:P3", "--suite", "fe-q"])
    assert code == 0 and rep["result"]["verdicts"][0]["verdict"] == "not_applicable"
    code, rep = run_json(["check", "--graph", "builtin:C5", "--suite", "bu-inv", "--u", "-1"])
    assert code == 0 and rep["result"]["verdicts"][0]["verdict"] == "skipped"


def test_corrupted_operator_exits_one():
    code, rep = run_json(["check", "--graph", "builtin:K4", "--suite", "expressions", "--corrupt-w"])
    assert code == 1 and rep["result"]["violations"] == 1


def test_poles_examples():
    code, rep = run_json(["poles", "--graph", "builtin:K4", "--u", "0"])
    r = rep["result"]
    assert code == 0
    assert (r["r_G"], r["r_G_prime"], r["order_plus"], r["order_minus"]) == (0.5, 1.0, 3, 2)
    assert r["rh"]["verdict"] == "holds"
    _, rep = run_json(["poles", "--graph", "builtin:K4", "--u", "-1/2"])
    assert rep["result"]["order_plus"] == 4 and rep["result"]["enhancement"]["at_u_star"]
    _, rep = run_json(["poles", "--graph", "builtin:C4", "--u", "0"])
    r = rep["result"]
    assert r["order_plus"] == r["order_minus"] == 2
    assert r["rh"]["verdict"] == "hypothesis_fails" and r["rh"]["failing_eigenvalues"] == [-2.0]


@pytest.mark.parametrize(
    "argv",
    [
        ["poles", "--graph", "builtin:K4", "--u", "1"],
        ["poles", "--graph", "builtin:K4", "--u", "0.5"],
        ["info", "--graph", "builtin:Nope"],
        ["info", "--graph", "/nonexistent/file.txt"],
        ["info"],
        ["zeta", "--graph", "builtin:K4", "--u", "1/0"],
        ["check", "--graph", "builtin:K4", "--suite", "bogus"],
    ],
)
def test_input_errors_exit_two(argv):
    assert run(argv)[0] == 2


def test_duplicate_edge_file(tmp_path):
    f = tmp_path / "dup.txt"
    f.write_text("0 1\n1 2\n# comment\n\n0 1\n")
    code, _, err = run(["info", "--graph", str(f)])
    assert code == 2 and "DuplicateEdge" in err


def test_text_format(tmp_path):
    code, out, _ = run(["check", "builtin:C4", "--suite", "fe-u", "--format", "text"])
    assert code == 0 and "[holds] fe-u: fe-u" in out


def test_parsers(tmp_path):
    g = parse_edge_list("0 1\n1 2  # tail\n\n2 0\n")
    assert (g.n_vertices, g.n_edges) == (3, 3)
    with pytest.raises(ParseError) as exc:
        parse_edge_list("0 1\n1 x\n")
    assert exc.value.line == 2
    with pytest.raises(DuplicateEdge):
        parse_edge_list("0 1\n1 0\n")
    g = parse_document('{"n_vertices": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}')
    assert g.degrees == (2, 2, 2, 2)
    with pytest.raises(ParseError) as exc:
        parse_document('{"n_vertices": 4,\n "edges": [[0,1],]}')
    assert exc.value.line == 2
    f = tmp_path / "g.json"
    f.write_text('{"n_vertices": 2, "edges": [[0, 1]]}')
    assert load_graph(str(f)).n_edges == 1


def test_parse_rational():
    assert parse_rational("-1/2") * 2 == -1
    assert parse_rational("6/3") == 2
    for bad in ("0.5", "1/0", "a", "1e3"):
        with pytest.raises(BadRational):
            parse_rational(bad)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bartholdi", "info", "--graph", "builtin:C3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["kappa"] == 3
