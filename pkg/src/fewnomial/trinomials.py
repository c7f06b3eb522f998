"""Systems built from trinomials.

* segment systems: n equations, n+2 monomials, ker A = c ∘ im(1, q). The
  solutions correspond to t in (−1,1) with Π (1 + t q_i)^{b_i} = ȳ*.
* d = 1 curves of two trinomials in three variables.
* two trinomials in two variables, reduced to one equation in λ in (0,1).
* the t-nomial bound and its comparison table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import expit

from . import framework as fw
from . import geometry as geo
from .errors import (
    DegenerateExponents,
    DegenerateToUnivariate,
    InfiniteSolutions,
    NoSolutions,
)
from .linalg import RatMatrix, is_exact, kernel_basis, rank, to_numpy
from .poly import count_zeros_unit, num, padd, pderiv, pmul, real_roots_interval, real_roots_unit, trim
from .signchar import (
    SignCharParams,
    koiran_bound,
    sc_extremum,
    sc_log,
    sc_log_logit,
    sc_root_logit,
    wronskian_signchar,
)

MERGE_TOL = 1e-10
ZERO_TOL = 1e-12


def sgnvar(seq: Sequence) -> int:
    """Sign changes in a sequence, zeros skipped."""
    signs = [1 if x > 0 else -1 for x in seq if x != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# -- segment systems -------------------------------------------------------------


@dataclass(frozen=True)
class SegmentProblem:
    """Data in sorted column order (see ``perm``).

    ``c_nf`` and ``q`` come from the segment normal form, ``b`` spans the
    dependency subspace, ``log_target`` is ln ȳ*.
    """

    instance: fw.ProblemInstance
    nf: geo.SegmentNormalForm
    b: tuple
    log_target: float

    @property
    def q(self):
        return self.nf.q

    @property
    def perm(self):
        return self.nf.perm

    def groups(self) -> list[list[int]]:
        """Indices (sorted order) with equal q, in order."""
        out: list[list[int]] = []
        for i, qi in enumerate(self.q):
            if out and self.q[out[-1][0]] == qi:
                out[-1].append(i)
            else:
                out.append([i])
        return out

    @property
    def q_classes(self) -> tuple:
        return tuple(self.q[g[0]] for g in self.groups())

    @property
    def b_collapsed(self) -> tuple:
        return tuple(sum((self.b[i] for i in g), 0 * self.b[0]) for g in self.groups())

    @property
    def partial_sums(self) -> tuple:
        """s̃_i = b̃_1 + … + b̃_i for i = 1..k−1."""
        bt = self.b_collapsed
        out, acc = [], 0 * bt[0]
        for x in bt[:-1]:
            acc = acc + x
            out.append(acc)
        return tuple(out)

    def log_f(self, t):
        """ln f(t) = Σ b_i ln(1 + t q_i)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for bi, qi in zip(self.b, self.q):
            out = out + float(bi) * np.log1p(t * float(qi))
        return out

    def h(self, w):
        """ln f(tanh w) − ln ȳ*, accurate for large |w|."""
        w = np.asarray(w, dtype=float)
        out = -self.log_target * np.ones_like(w)
        norm = np.logaddexp(w, -w)
        for bi, qi in zip(self.b, self.q):
            if bi == 0:
                continue
            qf = float(qi)
            lp = math.log1p(qf) if qf > -1 else -math.inf
            lm = math.log1p(-qf) if qf < 1 else -math.inf
            out = out + float(bi) * (np.logaddexp(lp + w, lm - w) - norm)
        return out

    def g_numerator(self) -> list:
        """Polynomial N(t) with g(t) = Σ b̃_j q_j / (1 + t q_j) = N(t) / Π(1 + t q_j)."""
        qs, bs = self.q_classes, self.b_collapsed
        total = [0 * num(bs[0])]
        for j, (qj, bj) in enumerate(zip(qs, bs)):
            term = [num(bj) * num(qj)]
            for k, qk in enumerate(qs):
                if k != j:
                    term = pmul(term, [num(1) + 0 * num(qk), num(qk)])
            total = padd(total, term)
        return trim(total)


def segment_problem(p: fw.ProblemInstance) -> SegmentProblem:
    nf = geo.segment_normal_form(p.A)
    aux = p.aux
    if aux.d != 1:
        raise ValueError(f"segment systems need a one-dimensional dependency subspace, got d = {aux.d}")
    z = list(aux.Gp.col(0))
    b = tuple(z[j] for j in nf.perm)
    c = [p.c[j] for j in nf.perm]
    lt = sum(float(bi) * (math.log(float(ci)) - math.log(float(cn))) for bi, ci, cn in zip(b, c, nf.c))
    return SegmentProblem(p, nf, b, lt)


def segment_rule_of_signs(sp: SegmentProblem) -> int:
    return 1 + sgnvar(sp.partial_sums)


@dataclass(frozen=True)
class SegmentSolution:
    t: float
    x: np.ndarray
    multiplicity: int
    residual: float


def _limit_sign(sp: SegmentProblem, side: int) -> tuple[float, float]:
    """(sign, value) of h at w → side·∞; value is finite or ±inf."""
    bt, qs = sp.b_collapsed, sp.q_classes
    # at w → +∞ the q = −1 class diverges, at −∞ the q = +1 class
    idx = -1 if side > 0 else 0
    if qs[idx] == -side and bt[idx] != 0:
        v = -math.inf if float(bt[idx]) > 0 else math.inf
        return float(np.sign(v)), v
    val = -sp.log_target
    for bi, qi in zip(sp.b, sp.q):
        qf = float(qi) * side
        if qf > -1:
            val += float(bi) * math.log1p(qf)
    return float(np.sign(val)) if abs(val) > ZERO_TOL else 0.0, val


def _bisect(f, lo, hi, flo):
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or hi - lo <= 1e-15 * max(1.0, abs(mid)):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _outward(f, start, direction, want_sign, limit=1e4):
    step = 1.0
    while step < limit:
        u = start + direction * step
        v = f(u)
        if np.sign(v) == want_sign:
            return u
        step *= 2
    return None


def _merge(roots: list[tuple[float, int]], tol: float = MERGE_TOL) -> list[tuple[float, int]]:
    roots = sorted(roots)
    out: list[tuple[float, int]] = []
    for r, k in roots:
        if out and abs(r - out[-1][0]) <= tol:
            out[-1] = (out[-1][0], max(2, out[-1][1] + k))
        else:
            out.append((r, k))
    return out


def _roots_on_pieces(f, crit: list[float], lim_left, lim_right, tol: float) -> list[tuple[float, int]]:
    """Roots of f on R given points splitting R into monotone pieces.

    ``lim_left``/``lim_right`` are (sign, value) limits at ∓∞.
    """
    roots: list[tuple[float, int]] = []
    vals = [f(w) for w in crit]
    for w, v in zip(crit, vals):
        if abs(v) <= tol:
            roots.append((w, 2))
    # finite pieces
    for (a, fa), (b, fb) in zip(zip(crit, vals), zip(crit[1:], vals[1:])):
        if abs(fa) > tol and abs(fb) > tol and np.sign(fa) != np.sign(fb):
            roots.append((_bisect(f, a, b, fa), 1))
    # unbounded pieces
    ends = [(-1.0, lim_left, crit[0] if crit else None), (1.0, lim_right, crit[-1] if crit else None)]
    if not crit:
        s0, s1 = lim_left[0], lim_right[0]
        if s0 != 0 and s1 != 0 and s0 != s1:
            f0 = f(0.0)
            if f0 == 0:
                return [(0.0, 1)]
            direction = -1.0 if np.sign(f0) == s1 else 1.0
            other = _outward(f, 0.0, direction, -np.sign(f0))
            if other is not None:
                a, b = sorted((0.0, other))
                roots.append((_bisect(f, a, b, f(a)), 1))
        return _merge(roots)
    for direction, (sgn, _), w0 in ends:
        f0 = f(w0)
        if abs(f0) <= tol or sgn == 0 or sgn == np.sign(f0):
            continue
        other = _outward(f, w0, direction, sgn)
        if other is None:
            continue
        a, b = sorted((w0, other))
        roots.append((_bisect(f, a, b, f(a)), 1))
    return _merge(roots)


def _log1p_qtanh(q: float, w: float) -> float:
    """ln(1 + q tanh w) without cancellation near t = ±1."""
    lp = math.log1p(q) if q > -1 else -math.inf
    lm = math.log1p(-q) if q < 1 else -math.inf
    return float(np.logaddexp(lp + w, lm - w) - np.logaddexp(w, -w))


def segment_solve(sp: SegmentProblem, tol: float = 1e-12) -> list[SegmentSolution]:
    """All t in (−1,1) with f(t) = ȳ*, lifted to positive solutions x."""
    N = sp.g_numerator()
    p = sp.instance
    hfun = lambda w: float(sp.h(w))  # noqa: E731
    if all(c == 0 for c in N):
        if abs(sp.log_target) <= 1e-9 and all(x == 0 for x in sp.b_collapsed):
            raise InfiniteSolutions("f is constant and equals the target")
        if all(x == 0 for x in sp.b_collapsed):
            return []
    exact = all(isinstance(c, (int, Fraction)) for c in N)
    lo, hi = (Fraction(-1), Fraction(1)) if exact else (-1.0, 1.0)
    crit_t = real_roots_interval(N, lo, hi) if not all(c == 0 for c in N) else []
    crit_w = [math.atanh(t) for t in crit_t]
    scale = tol * max(1.0, abs(sp.log_target))
    found = _roots_on_pieces(hfun, crit_w, _limit_sign(sp, -1), _limit_sign(sp, 1), scale)
    out = []
    for w, mult in found:
        t = math.tanh(w)
        ly_sorted = np.array([math.log(float(cn)) + _log1p_qtanh(float(qi), w) for cn, qi in zip(sp.nf.c, sp.q)])
        ly = np.empty_like(ly_sorted)
        ly[list(sp.perm)] = ly_sorted
        x = fw.lift_solution_log(ly, p.aux, p.c, tol=1e-7)
        out.append(SegmentSolution(t, x, mult, fw.residual(p, x)))
    return out


def f_qq(q, qp, t):
    """q/(1 + tq) − q'/(1 + tq'); positive on (−1,1) when q > q'."""
    return q / (1 + t * q) - qp / (1 + t * qp)


def f_qq_deriv(q, qp, t):
    return -q * q / (1 + t * q) ** 2 + qp * qp / (1 + t * qp) ** 2


def random_segment_instance(rng: np.random.Generator, n: int, max_exp: int = 6, target_t: float | None = None):
    """Random segment instance with n equations and integer exponents.

    The coefficients are chosen so that f(target_t) = ȳ*, which makes at least
    one solution exist; ``target_t`` defaults to a uniform draw.
    """
    m = n + 2
    while True:
        interior = sorted(
            (Fraction(int(v), 8) for v in rng.integers(-7, 8, size=n)), reverse=True
        )
        q = [Fraction(1)] + interior + [Fraction(-1)]
        cnf = [Fraction(int(v)) for v in rng.integers(1, 4, size=m)]
        K = RatMatrix([cnf, [a * b for a, b in zip(cnf, q)]])
        A = RatMatrix(kernel_basis(K))
        B = RatMatrix(rng.integers(-max_exp, max_exp + 1, size=(n, m)).tolist())
        Bp = RatMatrix(list(B.rows) + [[1] * m])
        if rank(Bp) != n + 1:
            continue
        try:
            probe = fw.ProblemInstance(A, B, tuple([1] * m))
        except Exception:
            continue
        if probe.ell != 1:
            continue
        sp0 = segment_problem(probe)
        if all(bi == 0 for bi in sp0.b_collapsed):
            continue
        t0 = float(rng.uniform(-0.95, 0.95)) if target_t is None else target_t
        target = float(sp0.log_f(t0)) + sp0.log_target
        # pick c = c_nf ∘ e^r with Σ b_i r_i = target (original column order)
        z = [float(v) for v in probe.aux.Gp.col(0)]
        r = rng.normal(0, 0.5, size=m)
        j = int(np.argmax(np.abs(z)))
        r[j] += (target - float(np.dot(z, r))) / z[j]
        cn_orig = sp0.nf.c_original()
        c = tuple(float(cn) * math.exp(ri) for cn, ri in zip(cn_orig, r))
        return fw.ProblemInstance(A, B, c)


# -- d = 1 curves ---------------------------------------------------------------


@dataclass(frozen=True)
class CurveComponent:
    """A sampled component, stored in logit coordinates u_i = ln(λ_i/(1−λ_i))."""

    logits: np.ndarray  # (N, 2)
    kind: str  # "graph1", "graph2" or "loop"

    @property
    def points(self) -> np.ndarray:
        """(λ1, λ2) samples."""
        return expit(self.logits)

    def __len__(self):
        return len(self.logits)


def _logit_grid(n: int) -> np.ndarray:
    return np.linspace(-12, 12, n)


def _log_ext(p: SignCharParams) -> float:
    ext = sc_extremum(p)
    return float(sc_log(p, float(ext.lam)))


def curve_components(a1, b1, a2, b2, K: float, samples: int = 512) -> list[CurveComponent]:
    """Solution curve of s_{a1,b1}(λ1) = K · s_{a2,b2}(λ2) on (0,1)²."""
    if min(abs(float(v)) for v in (a1, b1, a2, b2)) == 0:
        raise DegenerateExponents("the case analysis needs nonzero exponents")
    if not K > 0:
        raise ValueError("K must be positive")
    p1, p2 = SignCharParams(a1, b1), SignCharParams(a2, b2)
    lK = math.log(K)
    e1, e2 = sc_extremum(p1), sc_extremum(p2)
    grid = _logit_grid(samples)

    def graph_over_1(branch):
        pts = [(u1, sc_root_logit(p2, sc_log_logit(p1, u1) - lK, branch)) for u1 in grid]
        return CurveComponent(np.array(pts), "graph1")

    def graph_over_2(branch):
        pts = [(sc_root_logit(p1, sc_log_logit(p2, u2) + lK, branch), u2) for u2 in grid]
        return CurveComponent(np.array(pts), "graph2")

    if e2.kind == "none":
        return [graph_over_1("whole")]
    if e1.kind == "none":
        return [graph_over_2("whole")]
    L1, L2 = _log_ext(p1), _log_ext(p2) + lK
    if e1.kind == e2.kind:
        # both maxima (or both minima): the side with the narrower range is free
        if (e1.kind == "max") == (L1 <= L2):
            return [graph_over_1("minus"), graph_over_1("plus")]
        return [graph_over_2("minus"), graph_over_2("plus")]
    lo, hi = (L1, L2) if e1.kind == "min" else (L2, L1)
    if hi < lo - 1e-12:
        raise NoSolutions("the level sets of the two sides do not meet")
    star = [[math.log(float(e.lam)) - math.log1p(-float(e.lam)) for e in (e1, e2)]]
    if hi - lo <= 1e-12:
        return [CurveComponent(np.array(star), "loop")]
    per = max(samples // 4, 2)
    levels = np.linspace(lo, hi, per)
    arcs = []
    for br1, br2, rev in (("minus", "minus", False), ("minus", "plus", True), ("plus", "plus", False), ("plus", "minus", True)):
        lv = levels[::-1] if rev else levels
        arcs.extend((sc_root_logit(p1, v, br1), sc_root_logit(p2, v - lK, br2)) for v in lv)
    return [CurveComponent(np.array(arcs), "loop")]


def curve_parametrize_d1(b1, b2, b3, cstar: float, samples: int = 512) -> list[CurveComponent]:
    """λ1^{b1}(1−λ1)^{b2} = c* λ2^{−b3}(1−λ2) for two trinomials in three variables."""
    return curve_components(b1, b2, -b3, 1, cstar, samples)


@dataclass(frozen=True)
class CurveData:
    """Reduction of a two-class, d = 1 instance to a curve in (λ1, λ2)."""

    params1: SignCharParams
    params2: SignCharParams
    K: float
    instance: fw.ProblemInstance

    def y(self, u1: float, u2: float) -> np.ndarray:
        """Point of P at logits (u1, u2)."""
        p = self.instance
        y = np.zeros(p.m)
        for u, g in zip((u1, u2), p.geometry.classes):
            v1, v2 = (np.array([float(t) for t in v]) for v in g.vertices)
            y[list(g.block)] = expit(u) * v1 + expit(-u) * v2
        return y

    def log_gap(self, u1, u2):
        """ln s1(λ1) − ln K − ln s2(λ2); zero on the curve."""
        return sc_log_logit(self.params1, u1) - math.log(self.K) - sc_log_logit(self.params2, u2)


def curve_data(p: fw.ProblemInstance) -> CurveData:
    """s_{α1,β1}(λ1) = K s_{α2,β2}(λ2) for an instance with two two-vertex classes and d = 1."""
    aux = p.aux
    if aux.d != 1 or p.ell != 2:
        raise ValueError("curve extraction needs two classes and d = 1")
    z = [float(v) for v in aux.Gp.col(0)]
    lc = np.log(p.c_float)
    log_k = float(np.dot(z, lc))
    ab = []
    for g in p.geometry.classes:
        if len(g.vertices) != 2:
            raise ValueError("each class must have exactly two vertices")
        v1, v2 = g.vertices
        al = be = 0.0
        for j, x1, x2 in zip(g.block, v1, v2):
            if x2 == 0:
                al += z[j]
                log_k -= z[j] * math.log(float(x1))
            elif x1 == 0:
                be += z[j]
                log_k -= z[j] * math.log(float(x2))
            elif x1 == x2:
                log_k -= z[j] * math.log(float(x1))
            else:
                raise ValueError("vertices do not share their common coordinate")
        ab.append((al, be))
    (a1, b1), (a2, b2) = ab
    return CurveData(SignCharParams(a1, b1), SignCharParams(-a2, -b2), math.exp(log_k), p)


def curve_from_instance(p: fw.ProblemInstance, samples: int = 512):
    """Components as (λ1, λ2) samples plus lifted x for every sample."""
    cd = curve_data(p)
    comps = curve_components(cd.params1.alpha, cd.params1.beta, cd.params2.alpha, cd.params2.beta, cd.K, samples)
    out = []
    for comp in comps:
        xs = np.array([fw.lift_solution(cd.y(a, b), p.aux, p.c, tol=1e-7) for a, b in comp.logits])
        out.append((comp, xs))
    return cd, out


# -- two trinomials in two variables --------------------------------------------


@dataclass(frozen=True)
class TwoTrinomialProblem:
    """f(λ) = γ1 s_{α1,β1}(λ) + γ2 s_{α2,β2}(λ) − 1 on (0,1).

    ``Bbar`` holds the exponent vectors of the first (normalized) trinomial as
    columns and ``cbar`` its coefficients; ln x = Bbar^{−T} ln(λ/c̄1, (1−λ)/c̄2).
    """

    alpha1: float | Fraction
    beta1: float | Fraction
    alpha2: float | Fraction
    beta2: float | Fraction
    gamma1: float
    gamma2: float
    Bbar: np.ndarray
    cbar: tuple
    instance: fw.ProblemInstance | None = None

    @property
    def pairs(self):
        return (self.alpha1, self.beta1), (self.alpha2, self.beta2)

    def f(self, lam):
        return (
            self.gamma1 * np.exp(sc_log(self.pairs[0], lam))
            + self.gamma2 * np.exp(sc_log(self.pairs[1], lam))
            - 1.0
        )

    def to_x(self, lam: float) -> np.ndarray:
        return self.to_x_logit(math.log(lam) - math.log1p(-lam))

    def to_x_logit(self, u: float) -> np.ndarray:
        """Same as :meth:`to_x` at λ = σ(u); keeps 1 − λ accurate near λ = 1."""
        ll, lm = -float(np.logaddexp(0, -u)), -float(np.logaddexp(0, u))
        lu = np.array([ll - math.log(float(self.cbar[0])), lm - math.log(float(self.cbar[1]))])
        return np.exp(np.linalg.solve(self.Bbar.T, lu))


def _normalize_trinomial(arow, B, c, block):
    """Divide by the term with the odd sign: returns [(coef, exponent)]×2."""
    signs = [1 if arow[j] > 0 else -1 for j in range(3)]
    k = next(j for j in range(3) if signs.count(signs[j]) == 1)
    out = []
    for j in range(3):
        if j == k:
            continue
        coef = float(arow[j]) * float(c[block[j]]) / (-float(arow[k]) * float(c[block[k]]))
        exp = [B[r][block[j]] - B[r][block[k]] for r in range(len(B))]
        out.append((coef, exp))
    return out


def two_trinomial_standardize(p: fw.ProblemInstance) -> TwoTrinomialProblem:
    if p.n != 2 or p.ell != 2 or p.partition.sizes != (3, 3):
        raise ValueError("expected two trinomials (two classes of three monomials) in two variables")
    exact = is_exact(p.B)
    B = [list(r) for r in p.B.rows] if exact else to_numpy(p.B).tolist()
    tris = []
    for blk in p.partition.blocks:
        row = fw._row_basis(p.A.submatrix(cols=list(blk))).row(0)
        tris.append(_normalize_trinomial(row, B, p.c, blk))
    for first, second in ((0, 1), (1, 0)):
        (cb1, eb1), (cb2, eb2) = tris[first]
        det = eb1[0] * eb2[1] - eb1[1] * eb2[0]
        if det != 0:
            break
    else:
        (cb1, eb1), (cb2, eb2) = tris[0]
        reduced = None
        if any(v != 0 for v in eb1):
            k = next(i for i in range(2) if eb1[i] != 0)
            reduced = {"b1": 1, "b2": eb2[k] / eb1[k] if exact else float(eb2[k]) / float(eb1[k]), "c1": cb1, "c2": cb2}
        raise DegenerateToUnivariate("the first trinomial's exponent vectors are dependent", reduced)
    Bbar = [[eb1[0], eb2[0]], [eb1[1], eb2[1]]]
    inv = [[Bbar[1][1] / det, -Bbar[0][1] / det], [-Bbar[1][0] / det, Bbar[0][0] / det]]
    ab = []
    for coef, e in tris[second]:
        a = inv[0][0] * e[0] + inv[0][1] * e[1]
        b = inv[1][0] * e[0] + inv[1][1] * e[1]
        g = coef / (cb1 ** float(a) * cb2 ** float(b))
        ab.append((a, b, g))
    (a1, b1, g1), (a2, b2, g2) = ab
    return TwoTrinomialProblem(
        a1, b1, a2, b2, g1, g2, np.array(Bbar, dtype=float), (cb1, cb2), p
    )


def _lin(a, b):
    """a(1−λ) − bλ as ascending coefficients."""
    return [a, -a - b]


def derivative_chain(tp: TwoTrinomialProblem):
    """(a, b, L1, L2, q2, q3) for g = γ1 s_{a,b} L1 + γ2 L2 ∼ f'."""
    a1, b1, a2, b2 = (num(v) for v in (tp.alpha1, tp.beta1, tp.alpha2, tp.beta2))
    a, b = a1 - a2, b1 - b2
    L1, L2 = _lin(a1, b1), _lin(a2, b2)
    one = a - a + 1
    lam1m = [0 * one, one, -one]
    q2 = trim(padd(pmul(_lin(a, b), L1), [-(a1 + b1) * t for t in lam1m]))
    q3 = trim(padd(pmul(_lin(a - 1, b - 1), q2), pmul(lam1m, pderiv(q2))))
    return a, b, L1, L2, q2, q3


def explicit_q3(tp: TwoTrinomialProblem) -> list:
    """Closed-form cubic for g'' in the Bernstein-like basis, expanded."""
    a1, b1, a2, b2 = (num(v) for v in (tp.alpha1, tp.beta1, tp.alpha2, tp.beta2))
    one = a1 - a1 + 1
    om = [one, -one]  # 1−λ
    lam = [0 * one, one]
    c0 = a1 * (a1 - a2) * (a1 - a2 - 1)
    c1 = -(a1 - a2) * (2 * a1 * (b1 - b2 + 1) + b1 * (a1 - a2 + 1))
    c2 = (b1 - b2) * (a1 * (b1 - b2 + 1) + 2 * b1 * (a1 - a2 + 1))
    c3 = -b1 * (b1 - b2) * (b1 - b2 - 1)
    terms = [
        [c0 * t for t in pmul(pmul(om, om), om)],
        [c1 * t for t in pmul(lam, pmul(om, om))],
        [c2 * t for t in pmul(pmul(lam, lam), om)],
        [c3 * t for t in pmul(pmul(lam, lam), lam)],
    ]
    out = terms[0]
    for t in terms[1:]:
        out = padd(out, t)
    return trim(out)


def _signed_logsum(terms):
    """Sign of Σ s_i e^{l_i} for (s_i, l_i) pairs, computed without overflow."""
    pos = [l for s, l in terms if s > 0 and l > -math.inf]
    neg = [l for s, l in terms if s < 0 and l > -math.inf]
    lp = float(np.logaddexp.reduce(pos)) if pos else -math.inf
    ln = float(np.logaddexp.reduce(neg)) if neg else -math.inf
    if lp == ln:
        return 0.0
    big = max(lp, ln)
    val = math.exp(lp - big) - math.exp(ln - big)
    # only the sign matters to callers; keep the magnitude finite and nonzero
    return val * math.exp(min(max(big, -700.0), 700.0))


def _log_s(a, b, u):
    return float(a) * -float(np.logaddexp(0, -u)) + float(b) * -float(np.logaddexp(0, u))


def to_bernstein(p) -> list:
    """Coefficients of p in the basis λ^k (1−λ)^{d−k}."""
    d = len(p) - 1
    return [sum(p[j] * math.comb(d - j, k - j) for j in range(k + 1)) for k in range(d + 1)]


def _poly_terms(bern, u, log_scale=0.0, coef=1.0):
    """Signed log terms of coef · e^{log_scale} · p(σ(u)) from Bernstein coefficients."""
    d = len(bern) - 1
    ll, lm = -float(np.logaddexp(0, -u)), -float(np.logaddexp(0, u))
    out = []
    for k, ck in enumerate(bern):
        v = float(ck) * coef
        if v != 0:
            out.append((1 if v > 0 else -1, math.log(abs(v)) + log_scale + k * ll + (d - k) * lm))
    return out


def two_trinomial_solve(tp: TwoTrinomialProblem, tol: float = 1e-12, U: float = 700.0) -> list[tuple[float, int]]:
    """Roots λ of f in (0,1) with multiplicities."""
    return [(float(expit(u)), k) for u, k in two_trinomial_logits(tp, tol, U)]


def two_trinomial_logits(tp: TwoTrinomialProblem, tol: float = 1e-12, U: float = 700.0) -> list[tuple[float, int]]:
    """Roots of f as logits u = ln(λ/(1−λ)) with multiplicities.

    The derivative chain g'' ∼ q3, g', g ∼ f', f is resolved bottom-up: the
    exact roots of q3 split (0,1) into pieces where g' is monotone, the roots
    of g' split it where g is monotone, and so on. All searches run in the
    logit coordinate u and only use signs, so large exponents do not overflow.
    """
    if tp.pairs[0] == tp.pairs[1] and float(tp.alpha1) == 0 == float(tp.beta1):
        if abs(tp.gamma1 + tp.gamma2 - 1) <= tol:
            raise InfiniteSolutions("f vanishes identically")
        return []
    a, b, L1, L2, q2, q3 = derivative_chain(tp)
    g1, g2 = tp.gamma1, tp.gamma2
    a2, b2 = float(tp.alpha2), float(tp.beta2)

    bq2, bL1, bL2 = to_bernstein(q2), to_bernstein(L1), to_bernstein(L2)
    lg1, lg2 = math.log(g1), math.log(g2)

    def gp(u):
        return _signed_logsum(
            _poly_terms(bq2, u, lg1 + _log_s(a - 1, b - 1, u)) + _poly_terms([-(a2 + b2)], u, lg2)
        )

    def g(u):
        return _signed_logsum(_poly_terms(bL1, u, lg1 + _log_s(a, b, u)) + _poly_terms(bL2, u, lg2))

    def f(u):
        return _signed_logsum([
            (1, lg1 + _log_s(tp.alpha1, tp.beta1, u)),
            (1, lg2 + _log_s(tp.alpha2, tp.beta2, u)),
            (-1, 0.0),
        ])

    def logit(lam):
        return math.log(lam) - math.log1p(-lam)

    if all(c == 0 for c in q3):
        crit3 = []
    else:
        crit3 = [logit(r) for r in real_roots_unit(q3)]
    crit2 = _zeros_between(gp, crit3, U)
    crit1 = _zeros_between(g, crit2, U)
    return _zeros_between(f, crit1, U, tol=tol, with_mult=True)


def _zeros_between(fun, splits: list[float], U: float, tol: float = 0.0, with_mult: bool = False):
    """Zeros of fun on (−U, U), given that fun is monotone between splits."""
    pts = [-U] + [s for s in sorted(splits) if -U < s < U] + [U]
    vals = [fun(p) for p in pts]
    scale = 1.0
    found: list[tuple[float, int]] = []
    for i in range(1, len(pts) - 1):
        if abs(vals[i]) <= tol * scale:
            found.append((pts[i], 2))
    for (x0, f0), (x1, f1) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        if abs(f0) <= tol * scale or abs(f1) <= tol * scale:
            continue
        if np.sign(f0) != np.sign(f1):
            found.append((_bisect(fun, x0, x1, f0), 1))
    found = _merge(found, 1e-9)
    if with_mult:
        return found
    return [x for x, _ in found]


def two_trinomial_solutions(tp: TwoTrinomialProblem):
    """(x, multiplicity, residual) for every root of f."""
    out = []
    for u, mult in two_trinomial_logits(tp):
        x = tp.to_x_logit(u)
        res = fw.residual(tp.instance, x) if tp.instance is not None else float("nan")
        out.append((x, mult, res))
    return out


def w3_zero_count(tp: TwoTrinomialProblem):
    w = wronskian_signchar([(0, 0), (tp.alpha1, tp.beta1), (tp.alpha2, tp.beta2)])
    return count_zeros_unit(list(w.coeffs))


def two_trinomial_bound(tp: TwoTrinomialProblem) -> int:
    """Exponent-based bound on the number of roots of f (at most 5)."""
    a1, b1, a2, b2 = (float(v) for v in (tp.alpha1, tp.beta1, tp.alpha2, tp.beta2))
    z3 = w3_zero_count(tp)
    if not math.isfinite(z3):
        z3 = 3
    zero = 0.0 in (a1, b1, a2, b2)
    mixed1, mixed2 = a1 * b1 < 0, a2 * b2 < 0
    if zero or mixed1 or mixed2:
        cap = 4 if zero or (mixed1 and mixed2) else 5
        return int(min(2 + z3, cap))
    if (a1 > 0) == (a2 > 0):
        return 4 if z3 >= 2 else 2
    return 4


# -- t-nomial bound ----------------------------------------------------------------


def tnomial_bound(t: int) -> int:
    """t³/3 − t² + 8t/3 − 2 for one trinomial and one t-nomial in two variables."""
    if t < 3:
        raise ValueError("t must be at least 3")
    v = Fraction(t**3, 3) - t * t + Fraction(8 * t, 3) - 2
    assert v.denominator == 1
    return int(v)


def tnomial_bound_from_wronskians(t: int) -> int:
    """Koiran's combination with Z(W_i) ≤ C(i, 2); equals :func:`tnomial_bound`."""
    return koiran_bound([i * (i - 1) // 2 for i in range(1, t + 1)])


def tnomial_table_row(t: int) -> tuple[int, int, int, Fraction]:
    """(t, this bound, 2^t − 2, (2/3)t³ + 5t)."""
    return t, tnomial_bound(t), 2**t - 2, Fraction(2, 3) * t**3 + 5 * t


def format_mixed(x: Fraction) -> str:
    """62⅔-style rendering as '62 2/3'."""
    x = Fraction(x)
    whole, frac = divmod(x.numerator, x.denominator)
    return str(whole) if frac == 0 else f"{whole} {frac}/{x.denominator}"
