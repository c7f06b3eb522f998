import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fewnomial import framework as fw
from fewnomial import trinomials as tr
from fewnomial.errors import DegenerateExponents, DegenerateToUnivariate, NoSolutions
from fewnomial.io import load_fixture, problem_from_dict
from fewnomial.linalg import RatMatrix, kernel_basis
from fewnomial.signchar import sc_log_logit

from .conftest import kouchnirenko, tri3d
from .oracles import wide_grid_count

TWO_TRI_A = RatMatrix([[1, 1, -1, 0, 0, 0], [0, 0, 0, 1, 1, -1]])


def two_tri(B, c):
    return fw.ProblemInstance(TWO_TRI_A, RatMatrix(B) if all(isinstance(v, int) for r in B for v in r) else B, c)


def segment_instance(q, cnf, B, c):
    K = RatMatrix([cnf, [a * b for a, b in zip(cnf, q)]])
    return fw.ProblemInstance(RatMatrix(kernel_basis(K)), RatMatrix(B), c)


def test_sgnvar():
    assert tr.sgnvar([1, -2, 0, 3]) == 2
    assert tr.sgnvar([0, 0]) == 0
    assert tr.sgnvar([F(1, 2), F(3)]) == 0


# -- segment systems -------------------------------------------------------------


def test_segment_fixture():
    p = problem_from_dict(load_fixture("segment"))
    sp = tr.segment_problem(p)
    assert tr.segment_rule_of_signs(sp) == 3
    sols = tr.segment_solve(sp)
    assert [s.t for s in sols] == [pytest.approx(-0.9108, abs=1e-4), pytest.approx(0.0, abs=1e-12),
                                   pytest.approx(0.8789, abs=1e-4)]
    assert all(s.residual <= 1e-10 for s in sols)


def test_segment_bound_n2_partial_sums():
    p = problem_from_dict(load_fixture("segment"))
    sp = tr.segment_problem(p)
    b = sp.b_collapsed
    assert sp.partial_sums == (b[0], b[0] + b[1], b[0] + b[1] + b[2])


def test_segment_monotone():
    # x − 1 and y − 1 glued by one kernel: all partial sums of one sign
    p = segment_instance([1, F(1, 2), -1], [1, 1, 1], [[1, 2, 3]], (1, 1, 1))
    sp = tr.segment_problem(p)
    if tr.segment_rule_of_signs(sp) == 1:
        assert len(tr.segment_solve(sp)) == 1


def test_segment_collapsed_classes():
    # q2 = q3: two columns share their q value
    q = [1, F(1, 3), F(1, 3), -1]
    p = segment_instance(q, [1, 2, 1, 1], [[2, -1, 3, 0], [1, 2, -2, 1]], (1, 1, 1, 1))
    sp = tr.segment_problem(p)
    assert len(sp.q_classes) == 3
    assert tr.segment_rule_of_signs(sp) <= len(sp.q_classes) - 1
    assert len(tr.segment_solve(sp)) <= tr.segment_rule_of_signs(sp)


def test_fqq_positive():
    t = np.linspace(-0.999, 0.999, 101)
    assert np.all(tr.f_qq(0.5, -0.2, t) > 0)
    h = 1e-6
    assert tr.f_qq_deriv(0.5, -0.2, 0.3) == pytest.approx(
        (tr.f_qq(0.5, -0.2, 0.3 + h) - tr.f_qq(0.5, -0.2, 0.3 - h)) / (2 * h), rel=1e-6)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_segment_solver_matches_grid(seed, n):
    rng = np.random.default_rng(seed)
    p = tr.random_segment_instance(rng, n)
    sp = tr.segment_problem(p)
    sols = tr.segment_solve(sp)
    assume(all(s.multiplicity == 1 for s in sols))
    g = wide_grid_count(lambda w: sp.h(w))
    assume(not g.tangential)
    assert len(sols) == g.count <= tr.segment_rule_of_signs(sp)
    assert all(s.residual <= 1e-8 for s in sols)


# -- curves ------------------------------------------------------------------------


def test_curve_two_components():
    comps = tr.curve_parametrize_d1(1, 2, -2, 2.0)
    assert len(comps) == 2


def test_curve_one_component():
    assert len(tr.curve_parametrize_d1(1, 2, 2, 1.0)) == 1


def test_curve_components_meet_at_one():
    # for c* = 1 the two graphs share the point where both sides are extremal
    comps = tr.curve_parametrize_d1(1, 2, -2, 1.0, samples=2001)
    a, b = (c.points for c in comps)
    d = np.min(np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2))
    assert d < 1e-2
    far = tr.curve_parametrize_d1(1, 2, -2, 2.0, samples=2001)
    a, b = (c.points for c in far)
    assert np.min(np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)) > 1e-2


def test_curve_threshold():
    crit = (27 / 4) ** 2
    with pytest.raises(NoSolutions):
        tr.curve_parametrize_d1(-1, -2, -2, 0.99 * crit)
    comps = tr.curve_parametrize_d1(-1, -2, -2, 1.01 * crit)
    assert len(comps) == 1 and comps[0].kind == "loop"


def test_curve_degenerate():
    with pytest.raises(DegenerateExponents):
        tr.curve_parametrize_d1(0, 2, 1, 1.0)


@pytest.mark.parametrize("b,cstar", [((1, 2, -2), 2.0), ((1, 2, 2), 0.3), ((-1, -2, -2), 50.0), ((2, -1, 3), 5.0),
                                     ((-1, -2, 2), 0.2)])
def test_curve_samples_satisfy_condition(b, cstar):
    b1, b2, b3 = b
    for comp in tr.curve_parametrize_d1(b1, b2, b3, cstar, samples=64):
        u1, u2 = comp.logits[:, 0], comp.logits[:, 1]
        # λ1^{b1}(1−λ1)^{b2} λ2^{b3} (1−λ2)^{−1} = c*
        gap = sc_log_logit((b1, b2), u1) + sc_log_logit((b3, -1), u2) - math.log(cstar)
        assert np.max(np.abs(gap)) <= 1e-9


def test_curve_from_instance_residuals():
    p = tri3d(1, 2, -2, (1, 1, 1, 1, F(1, 2), 1))
    cd, comps = tr.curve_from_instance(p, samples=64)
    assert len(comps) == 2
    for comp, xs in comps:
        assert np.max(np.abs(cd.log_gap(comp.logits[:, 0], comp.logits[:, 1]))) <= 1e-9
        assert max(fw.residual(p, x) for x in xs) <= 1e-8


# -- two trinomials ------------------------------------------------------------------

LINE_CIRCLE_B = [[1, 0, 0, 2, 0, 0], [0, 1, 0, 0, 2, 0]]


def test_standardize_line_circle():
    tp = tr.two_trinomial_standardize(two_tri(LINE_CIRCLE_B, (1, 1, 1, 8, 8, 5)))
    assert tp.pairs == ((2, 0), (0, 2))
    assert (tp.gamma1, tp.gamma2) == (pytest.approx(8 / 5), pytest.approx(8 / 5))
    lam = np.linspace(0.05, 0.95, 7)
    assert np.allclose(tp.f(lam), 8 / 5 * lam**2 + 8 / 5 * (1 - lam) ** 2 - 1)


def test_solve_line_circle():
    p = two_tri(LINE_CIRCLE_B, (1, 1, 1, 8, 8, 5))
    sols = tr.two_trinomial_solutions(tr.two_trinomial_standardize(p))
    xs = sorted(tuple(x) for x, _, _ in sols)
    assert np.allclose(xs, [(0.25, 0.75), (0.75, 0.25)], atol=1e-12)


def test_solve_line_circle_empty():
    p = two_tri(LINE_CIRCLE_B, (1, 1, 1, 3, 3, 1))
    assert tr.two_trinomial_solve(tr.two_trinomial_standardize(p)) == []


def test_standardize_identity():
    # x + y − 1 already has the exponent block equal to the identity
    tp = tr.two_trinomial_standardize(two_tri([[1, 0, 0, 3, 1, 0], [0, 1, 0, -1, 2, 0]], (1, 1, 1, 1, 1, 1)))
    assert np.array_equal(tp.Bbar, np.eye(2))
    assert tp.pairs == ((3, -1), (1, 2))


def test_standardize_kouchnirenko(haas):
    tp = tr.two_trinomial_standardize(haas)
    # first trinomial x^5/y + a y = 1: columns (5,−1), (0,1) with inverse [[1,0],[1,5]]/5
    # applied to the second trinomial's exponents (−1,5) and (1,0)
    assert tp.pairs == ((F(-1, 5), F(24, 5)), (F(1, 5), F(1, 5)))
    assert np.allclose(tp.Bbar, [[5, 0], [-1, 1]])


def test_standardize_swaps_trinomials():
    # first trinomial x + x^2 − 1 involves one direction only; the second one is used instead
    tp = tr.two_trinomial_standardize(two_tri([[1, 2, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]], (1, 1, 1, 1, 1, 2)))
    assert np.allclose(tp.Bbar, np.eye(2))


def test_standardize_degenerate():
    # both trinomials depend on a single monomial direction
    p = two_tri([[1, 2, 0, 1, 2, 0], [0, 0, 0, 1, 2, 0]], (1, 1, 1, 1, 1, 2))
    with pytest.raises(DegenerateToUnivariate) as e:
        tr.two_trinomial_standardize(p)
    assert e.value.reduced["b2"] == 2


def test_kouchnirenko_five(haas):
    tp = tr.two_trinomial_standardize(haas)
    sols = tr.two_trinomial_solutions(tp)
    assert len(sols) == 5
    assert all(k == 1 and r <= 1e-8 for _, k, r in sols)
    assert tr.two_trinomial_bound(tp) == 5


def test_explicit_cubic_matches_chain():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a1, b1, a2, b2 = (F(int(v), 2) for v in rng.integers(-9, 10, 4))
        tp = tr.TwoTrinomialProblem(a1, b1, a2, b2, 1.0, 1.0, np.eye(2), (1, 1))
        assert tr.derivative_chain(tp)[-1] == tr.explicit_q3(tp)


def test_bound_cases():
    def tp(a1, b1, a2, b2):
        return tr.TwoTrinomialProblem(F(a1), F(b1), F(a2), F(b2), 1.0, 1.0, np.eye(2), (1, 1))

    assert tr.two_trinomial_bound(tp(0, 2, 3, 1)) <= 4
    assert tr.two_trinomial_bound(tp(1, 2, -1, -3)) == 4
    k = tr.two_trinomial_standardize(kouchnirenko())
    assert k.alpha1 * k.beta1 < 0 or k.alpha2 * k.beta2 < 0
    assert tr.w3_zero_count(k) == 3


def _grid_f(tp):
    # ln(γ1 s1 + γ2 s2) has the same zeros as f and does not overflow
    def h(u):
        return np.logaddexp(math.log(tp.gamma1) + sc_log_logit(tp.pairs[0], u),
                            math.log(tp.gamma2) + sc_log_logit(tp.pairs[1], u))
    return wide_grid_count(h, outer=700.0)


exps = st.integers(-5, 5)


@given(st.lists(exps, min_size=12, max_size=12), st.lists(st.floats(0.1, 3), min_size=6, max_size=6))
def test_two_trinomial_matches_grid(e, c):
    B = [e[:6], e[6:]]
    try:
        p = two_tri(B, tuple(c))
        tp = tr.two_trinomial_standardize(p)
    except (DegenerateToUnivariate, ValueError):
        assume(False)
    assume(tp.pairs[0] != tp.pairs[1])
    sols = tr.two_trinomial_solutions(tp)
    assume(all(k == 1 for _, k, _ in sols))
    g = _grid_f(tp)
    assume(not g.tangential)
    assert len(sols) == g.count <= tr.two_trinomial_bound(tp) <= 5
    assert all(r <= 1e-8 for _, _, r in sols)


# -- t-nomial bound ---------------------------------------------------------------


@pytest.mark.parametrize("t,bound,two,cubic", [(3, 6, 6, 33), (4, 14, 14, F(188, 3)), (5, 28, 30, F(325, 3)),
                                               (6, 50, 62, 174), (10, 258, 1022, F(2150, 3))])
def test_tnomial_table(t, bound, two, cubic):
    assert tr.tnomial_table_row(t) == (t, bound, two, cubic)
    assert tr.tnomial_bound_from_wronskians(t) == bound


def test_format_mixed():
    assert tr.format_mixed(F(2150, 3)) == "716 2/3"
    assert tr.format_mixed(F(33)) == "33"
