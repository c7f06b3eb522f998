import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial import framework as fw
from fewnomial.cli import main, route, run_command
from fewnomial.errors import DimensionMismatch, ParseError
from fewnomial.io import Report, dump_problem, fixture_names, load_fixture, parse_problem, problem_from_dict
from fewnomial.linalg import RatMatrix, RealMatrix


def test_parse_two_component():
    p = problem_from_dict(load_fixture("two_component"))
    assert p.A == RatMatrix([[-1, 1, -1, 0], [0, -1, 1, 1]])
    assert p.B == RatMatrix([[1, 0, 1, 0], [0, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])


def test_parse_trivial():
    p = parse_problem('{"A": [], "B": [[1]], "c": [2]}')
    assert p.m == 1 and fw.classify(p).d == 0


def test_parse_rationals_and_decimals():
    p = parse_problem('{"A": [["1/2", 1, -1]], "B": [[1.5, "2/3", 0]], "c": ["3/4", 1, 1e0]}')
    assert p.A.row(0) == (F(1, 2), 1, -1)
    assert isinstance(p.B, RealMatrix)
    assert p.c[0] == F(3, 4) and isinstance(p.c[2], float)


def test_parse_length_mismatch():
    with pytest.raises(DimensionMismatch) as e:
        parse_problem('{"A": [[1, 1, -1]],\n "B": [[1, 2, 0]],\n "c": [1, 1]}')
    assert e.value.field == "A"


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as e:
        parse_problem('{\n "A": [[1, 1, -1]],\n "B": [[1, "x", 0]],\n "c": [1, 1, 1]\n}')
    assert e.value.field == "B" and e.value.line == 3
    with pytest.raises(ParseError) as e:
        parse_problem('{"A": [[1, 1, -1]], "B": [[1, 2, 0]], "c": [1, -1, 1]}')
    assert e.value.field == "c"
    with pytest.raises(ParseError):
        parse_problem('{"A": [[0.5, 1, -1]], "B": [[1, 2, 0]], "c": [1, 1, 1]}')
    with pytest.raises(ParseError) as e:
        parse_problem('{"A": [[1, 1, -1]],\n "B": ')
    assert e.value.line == 2


def test_parse_missing_and_ragged():
    with pytest.raises(ParseError):
        parse_problem('{"A": [[1, 1, -1]], "c": [1, 1, 1]}')
    with pytest.raises(DimensionMismatch):
        parse_problem('{"A": [[1, 1, -1], [1, 0]], "B": [[1, 2, 0]], "c": [1, 1, 1]}')
    with pytest.raises(DimensionMismatch):
        parse_problem('{"A": [[1, 1, -1]], "B": [[1, 2, 0]], "c": [1, 1, 1], "classes": [2]}')


fracs = st.fractions(-5, 5, max_denominator=7)


@given(st.lists(fracs, min_size=2, max_size=2), st.lists(st.fractions(F(1, 7), 9, max_denominator=7), min_size=3, max_size=3))
def test_round_trip_exact(b, c):
    p = fw.ProblemInstance(RatMatrix([[1, 1, -1]]), RatMatrix([[b[0], b[1], 0]]), tuple(c))
    q = parse_problem(dump_problem(p))
    assert (q.A, q.B, q.c, q.partition) == (p.A, p.B, p.c, p.partition)


def test_report_renderings():
    r = Report("x", {"a": F(1, 3), "b": [np.float64(0.5), 2], "c": {"d": True}})
    d = json.loads(r.render("json"))
    assert d["a"] == "1/3" and d["b"] == [0.5, 2] and d["status"] == 0
    assert "a: 1/3" in r.render("text")
    with pytest.raises(ValueError):
        r.render("csv")


def test_route(ex41, haas):
    assert route(ex41) == "parametrization"
    assert route(haas) == "two_trinomial"
    assert route(problem_from_dict(load_fixture("segment"))) == "segment"
    assert route(problem_from_dict(load_fixture("tri3d"))) == "curve"


# -- commands ------------------------------------------------------------------------


def test_solve_two_component():
    code, rep = run_command(["solve", "examples/two_component.json", "--lambda", "0.5", "--tau", "1"])
    assert code == 0
    (sol,) = rep.data["solutions"]
    assert np.allclose(sol["x"], [1, 2, 1, 1]) and sol["residual"] < 1e-10


def test_solve_d0_samples_carry_residuals():
    code, rep = run_command(["solve", "two_component"])
    assert code == 0 and rep.data["n_lambda"] == 1
    assert all(s["residual"] < 1e-10 for s in rep.data["samples"])
    assert len(rep.data["closed_form"]) == 4


def test_bound_haas():
    code, rep = run_command(["bound", "examples/haas_like.json"])
    assert code == 0 and rep.data["bounds"]["two_trinomial"] == 5


def test_classify_tri3d():
    code, rep = run_command(["classify", "tri3d"])
    cl = rep.data["classification"]
    assert code == 0 and (cl["d"], cl["ell"]) == (1, 2)
    assert rep.data["geometry"]["Gp"]


def test_certify_two_component():
    code, rep = run_command(["certify", "two_component"])
    assert rep.data["uniqueness"]["holds"] is False
    assert any(rep.data["uniqueness"]["witness"])


def test_oracle_command():
    code, rep = run_command(["oracle", "haas_like", "--starts", "1024", "--seed", "3"])
    assert code == 0 and rep.data["count"] == 5 and rep.data["seed"] == 3


def test_examples_pass():
    code, rep = run_command(["examples"])
    assert code == 0
    assert set(rep.data["fixtures"]) == set(fixture_names())
    assert all(v["pass"] for v in rep.data["fixtures"].values())


def test_exit_codes(tmp_path):
    assert run_command(["frobnicate"])[0] == 64
    assert run_command(["solve"])[0] == 64
    assert run_command(["solve", str(tmp_path / "missing.json")])[0] == 1
    empty = tmp_path / "empty.json"
    # x + 1/x = 1 has no positive solution
    empty.write_text('{"A": [[1, 1, -1]], "B": [[1, -1, 0]], "c": [1, 1, 1]}')
    assert run_command(["solve", str(empty)])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"A": [[1, 1, 1]], "B": [[1, -1, 0]], "c": [1, 1, 1]}')
    assert run_command(["classify", str(bad)])[0] == 2


def test_main_curve_csv(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    assert main(["curve", "tri3d", "--samples", "16", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "component,param1,param2,x1,x2,x3"
    assert len(lines) == 1 + 2 * 16
    assert {ln.split(",")[0] for ln in lines[1:]} == {"0", "1"}


def test_main_json(capsys):
    assert main(["classify", "trinomial", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["classification"]["d"] == 1


def test_main_usage(capsys):
    assert main(["classify", "trinomial", "--format", "xml"]) == 64
    assert "fewnomial:" in capsys.readouterr().err
