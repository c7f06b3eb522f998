import math

import numpy as np
import pytest
from scipy.special import expit

from fewnomial import framework as fw
from fewnomial import trinomials as tr
from fewnomial.cli import route
from fewnomial.errors import NonSquare
from fewnomial.io import fixture_names, load_fixture, problem_from_dict
from fewnomial.linalg import RatMatrix
from fewnomial.oracle import OracleConfig, grid_count, multistart_solve
from fewnomial.signchar import sc_log_logit, trinomial_solve

from .conftest import trinomial


def test_kouchnirenko(haas):
    res = multistart_solve(haas)
    assert len(res) == 5
    assert np.all(res.residuals <= 1e-10)


def test_no_solutions():
    # x + 1/x = 1
    assert len(multistart_solve(trinomial(1, -1), OracleConfig(starts=256))) == 0


def test_line_circle():
    A = RatMatrix([[1, 1, -1, 0, 0, 0], [0, 0, 0, 1, 1, -1]])
    B = RatMatrix([[1, 0, 0, 2, 0, 0], [0, 1, 0, 0, 2, 0]])
    res = multistart_solve(fw.ProblemInstance(A, B, (1, 1, 1, 8, 8, 5)), OracleConfig(starts=512))
    assert np.allclose(res.solutions, [[0.25, 0.75], [0.75, 0.25]], atol=1e-10)


def test_non_square(ex41):
    with pytest.raises(NonSquare):
        multistart_solve(ex41)


def test_deterministic(haas):
    cfg = OracleConfig(seed=7, starts=512)
    a, b = multistart_solve(haas, cfg), multistart_solve(haas, cfg)
    assert np.array_equal(a.solutions, b.solutions)
    assert a.converged_starts == b.converged_starts


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(starts=0)


def test_grid_tangential():
    g = grid_count(lambda t: t * (1 - t) - 0.25, 0.0, 1.0)
    assert g.crossings == [] and g.tangential == [pytest.approx(0.5)]


def test_grid_linear():
    g = grid_count(lambda t: t - 0.5, 0.0, 1.0, resolution=1e-3)
    assert g.count == 1 and g.crossings[0] == pytest.approx(0.5, abs=1e-14)


def test_grid_kouchnirenko_reduction(haas):
    tp = tr.two_trinomial_standardize(haas)

    def h(u):
        return np.logaddexp(math.log(tp.gamma1) + sc_log_logit(tp.pairs[0], u),
                            math.log(tp.gamma2) + sc_log_logit(tp.pairs[1], u))

    g = grid_count(h, -30, 30, resolution=1e-4)
    assert len(g.crossings) == 5 and not g.tangential
    lams = sorted(lam for lam, _ in tr.two_trinomial_solve(tp))
    assert np.allclose(expit(np.array(g.crossings)), lams, atol=1e-12)


def _solver_count(p):
    r = route(p)
    if r == "segment":
        return len(tr.segment_solve(tr.segment_problem(p)))
    if r == "two_trinomial":
        return len(tr.two_trinomial_solve(tr.two_trinomial_standardize(p)))
    if r == "parametrization" and fw.parametrization(p).n_weights == 0:
        return 1
    # single trinomial c1 x^b1 + c2 x^b2 = c3
    b = p.B.row(0)
    return len(trinomial_solve(b[0], b[1], p.c[0] / p.c[2], p.c[1] / p.c[2]))


def _square_fixtures():
    out = []
    for n in fixture_names():
        doc = load_fixture(n)
        if "A" in doc and len(doc["A"]) == len(doc["B"]):
            out.append(n)
    return out


@pytest.mark.parametrize("name", _square_fixtures())
def test_fixture_counts_agree(name):
    p = problem_from_dict(load_fixture(name))
    assert len(multistart_solve(p, OracleConfig(starts=2048))) == _solver_count(p)
