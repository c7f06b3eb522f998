"""Sign-characteristic functions s_{α,β}(λ) = λ^α (1−λ)^β on (0,1).

Evaluation happens in log space. Branch inverses ("roots") are computed by
bisection in the logit coordinate u = ln(λ/(1−λ)), where ln s is smooth and
its derivative α σ(−u) − β σ(u) has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np
from scipy.special import expit

from .errors import DegenerateExponents, DomainError, OutOfRange, Unsupported
from .poly import count_zeros_unit, num, padd, pderiv, pmul, poly_eval, pscale, real_roots_unit, trim  # noqa: F401

ROOT_RTOL = 1e-12
DOUBLE_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class SignCharParams:
    alpha: float | Fraction
    beta: float | Fraction

    def __post_init__(self):
        for v in (self.alpha, self.beta):
            if not math.isfinite(float(v)):
                raise ValueError("exponents must be finite")

    @property
    def a(self) -> float:
        return float(self.alpha)

    @property
    def b(self) -> float:
        return float(self.beta)


def _params(p) -> SignCharParams:
    if isinstance(p, SignCharParams):
        return p
    return SignCharParams(*p)


def _check_domain(lam):
    arr = np.asarray(lam, dtype=float)
    if np.any(~(arr > 0)) or np.any(~(arr < 1)):
        raise DomainError("λ must lie in the open interval (0,1)")
    return arr


def sc_log(p, lam):
    p = _params(p)
    lam = _check_domain(lam)
    out = np.zeros_like(lam)
    if p.a:
        out = out + p.a * np.log(lam)
    if p.b:
        out = out + p.b * np.log1p(-lam)
    return out if out.ndim else float(out)


def sc_eval(p, lam):
    return np.exp(sc_log(p, lam))


def sc_deriv(p, lam):
    """s'_{α,β}(λ) = s_{α−1,β−1}(λ) (α(1−λ) − βλ)."""
    p = _params(p)
    lam = _check_domain(lam)
    lin = p.a * (1 - lam) - p.b * lam
    return np.exp(sc_log(SignCharParams(p.a - 1, p.b - 1), lam)) * lin


# -- extrema -----------------------------------------------------------------------


@dataclass(frozen=True)
class Extremum:
    lam: float | Fraction | None
    value: float | Fraction | None
    kind: str  # "max", "min" or "none"


def _exact_power(base: Fraction, e: Fraction):
    if e.denominator == 1:
        return base ** int(e)
    return float(base) ** float(e)


def sc_extremum(p) -> Extremum:
    """Critical point λ* = α/(α+β) and value (α/(α+β))^α (β/(α+β))^β.

    Rational exponents give exact results when the value is rational.
    """
    p = _params(p)
    a, b = p.alpha, p.beta
    if not (float(a) * float(b) > 0):
        return Extremum(None, None, "none")
    kind = "max" if float(a) > 0 else "min"
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        a, b = Fraction(a), Fraction(b)
        lam = a / (a + b)
        val = _exact_power(lam, a) * _exact_power(1 - lam, b)
        if isinstance(val, float):
            val = math.exp(float(a) * math.log(lam) + float(b) * math.log(1 - lam))
        return Extremum(lam, val, kind)
    a, b = float(a), float(b)
    lam = a / (a + b)
    return Extremum(lam, math.exp(a * math.log(lam) + b * math.log1p(-lam)), kind)


# -- roots -------------------------------------------------------------------------


def _log_sigma(u):
    if isinstance(u, float):
        # scalar fast path, used inside the root bisection
        return -math.log1p(math.exp(-u)) if u >= 0 else u - math.log1p(math.exp(u))
    return -np.logaddexp(0.0, -u)


def _h(p: SignCharParams, u: float) -> float:
    """ln s_{α,β}(σ(u))."""
    u = float(u)
    out = 0.0
    if p.a:
        out += p.a * _log_sigma(u)
    if p.b:
        out += p.b * _log_sigma(-u)
    return float(out)


def _dh(p: SignCharParams, u: float) -> float:
    return float(p.a * expit(-u) - p.b * expit(u))


def _bisect_u(f, lo: float, hi: float, flo: float, dfn=None) -> float:
    """Root of a sign-changing f on [lo, hi]; bisection, then one Newton step."""
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or hi - lo <= 1e-14 * max(1.0, abs(mid)):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    if dfn is not None:
        d = dfn(u)
        if d != 0 and math.isfinite(d):
            step = u - f(u) / d
            if lo <= step <= hi:
                u = step
    return u


def _expand(f, start: float, direction: float, target_sign: int, limit: float = 1e5):
    """Walk from ``start`` until f changes sign relative to f(start)."""
    step = 1.0
    u = start
    while abs(u - start) < limit:
        u = start + direction * step
        if np.sign(f(u)) == target_sign:
            return u
        step *= 2
    return None


def sc_root(p, y: float, branch: str = "whole") -> float:
    """λ with s_{α,β}(λ) = y on the requested monotone branch.

    ``branch`` is "whole" for monotone s, else "minus" (λ ≤ λ*) or "plus".
    """
    if not y > 0:
        raise OutOfRange("y must be positive")
    return sc_root_log(p, math.log(y), branch)


def sc_root_log(p, ly: float, branch: str = "whole") -> float:
    """Same as :func:`sc_root` with the target given as ln y."""
    return float(expit(sc_root_logit(p, ly, branch)))


def sc_log_logit(p, u):
    """ln s_{α,β}(σ(u)); keeps full precision where λ is close to 0 or 1."""
    p = _params(p)
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    if p.a:
        out = out + p.a * _log_sigma(u)
    if p.b:
        out = out + p.b * _log_sigma(-u)
    return out if out.ndim else float(out)


def sc_root_logit(p, ly: float, branch: str = "whole") -> float:
    """Root in the logit coordinate u = ln(λ/(1−λ))."""
    p = _params(p)
    a, b = p.a, p.b
    if a == 0 and b == 0:
        raise DegenerateExponents("s_{0,0} is constant")
    f = lambda u: _h(p, u) - ly  # noqa: E731
    df = lambda u: _dh(p, u)  # noqa: E731
    if branch == "whole":
        if a * b > 0:
            raise ValueError("s has an extremum; choose branch 'minus' or 'plus'")
        inc = a >= 0 and b <= 0
        # limits of ln s at λ → 0+ and 1−
        lim0 = -math.inf if a > 0 else (math.inf if a < 0 else 0.0)
        lim1 = math.inf if b < 0 else (-math.inf if b > 0 else 0.0)
        if not (min(lim0, lim1) < ly < max(lim0, lim1)):
            raise OutOfRange(f"target outside the range of s_{{{a},{b}}}")
        start = 0.0
    else:
        if branch not in ("minus", "plus"):
            raise ValueError(f"unknown branch {branch!r}")
        if not a * b > 0:
            raise ValueError("branches only exist when αβ > 0")
        start = math.log(a / b)
        gap = f(start) if a > 0 else -f(start)
        if gap < -ROOT_RTOL * max(1.0, abs(ly)):
            raise OutOfRange("target beyond the extremum value")
        if gap <= ROOT_RTOL * max(1.0, abs(ly)):
            return start
        inc = (a > 0) == (branch == "minus")
    f0 = f(start)
    if f0 == 0:
        return start
    if branch == "whole":
        direction = -1.0 if (f0 > 0) == inc else 1.0
    else:
        direction = -1.0 if branch == "minus" else 1.0
    u1 = _expand(f, start, direction, -int(np.sign(f0)))
    if u1 is None:
        raise OutOfRange("root outside representable range")
    lo, hi = sorted((start, u1))
    return _bisect_u(f, lo, hi, f(lo), df)


def derivative_factors(alpha, beta, order: int):
    """Polynomials P_k with s^{(k)}_{α,β} = s_{α−k,β−k} · P_k for k < order."""
    a, b = num(alpha), num(beta)
    one = a - a + 1
    lam_1m = [0 * one, one, -one]  # λ(1−λ)
    P = [one]
    out = [P]
    for k in range(order - 1):
        lin = [a - k, -(a - k) - (b - k)]  # (α−k)(1−λ) − (β−k)λ
        P = trim(padd(pmul(lin, P), pmul(lam_1m, pderiv(P))))
        out.append(P)
    return out


@dataclass(frozen=True)
class WronskianForm:
    alpha_shift: float | Fraction
    beta_shift: float | Fraction
    coeffs: tuple  # ascending powers of λ
    d: int

    def poly(self, lam):
        return poly_eval(self.coeffs, lam)

    def __call__(self, lam):
        s = sc_eval((self.alpha_shift, self.beta_shift), lam)
        return s * np.vectorize(lambda t: float(self.poly(t)))(lam) if np.ndim(lam) else s * float(self.poly(lam))


def _perm_sign(perm) -> int:
    s, seen = 1, list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            s = -s
    return s


def wronskian_signchar(params: Sequence) -> WronskianForm:
    """W(s_1,…,s_n) = s_{ᾱ−d, β̄−d} · p_d with d = n(n−1)/2, for n ≤ 3."""
    params = [_params(p) for p in params]
    n = len(params)
    if n == 0:
        raise ValueError("need at least one function")
    if n > 3:
        raise Unsupported("symbolic Wronskians are implemented for at most three functions")
    factors = [derivative_factors(p.alpha, p.beta, n) for p in params]
    total = None
    for perm in permutations(range(n)):
        term = None
        for k, i in enumerate(perm):
            term = factors[i][k] if term is None else pmul(term, factors[i][k])
        term = pscale(term, _perm_sign(perm))
        total = term if total is None else padd(total, term)
    d = n * (n - 1) // 2
    abar = sum((num(p.alpha) for p in params), num(0) * 0)
    bbar = sum((num(p.beta) for p in params), num(0) * 0)
    return WronskianForm(abar - d, bbar - d, tuple(trim(total)), d)


# -- counting combinators ------------------------------------------------------


def rolle_refined_bound(zfprime: int, f_a: float | None = None, f_b: float | None = None,
                        fp_a: float | None = None) -> int:
    """Bound on Z(f) from Z(f') and endpoint signs.

    ``f_a``, ``f_b`` are values (or signs, ±inf allowed) of f at the ends and
    ``fp_a`` that of f' at the left end. Missing data gives Z(f') + 1.
    """
    bound = zfprime + 1
    if f_a is not None and f_b is not None:
        prod = np.sign(f_a) * np.sign(f_b)
        even = zfprime % 2 == 0
        if (even and prod > 0) or (not even and prod < 0):
            bound = zfprime
        if fp_a is not None and np.sign(f_a) * np.sign(fp_a) > 0:
            if (even and prod < 0) or (not even and prod > 0):
                bound = zfprime - 1
    return max(int(bound), 0)


def koiran_bound(w_zeros: Sequence[int]) -> int:
    """n − 1 + Z(W_n) + Z(W_{n−1}) + 2 Σ_{i ≤ n−2} Z(W_i)."""
    z = list(w_zeros)
    n = len(z)
    if n == 0:
        raise ValueError("need at least one Wronskian")
    last = z[n - 1]
    prev = z[n - 2] if n >= 2 else 0
    return n - 1 + last + prev + 2 * sum(z[: max(n - 2, 0)])


# -- univariate trinomials -----------------------------------------------------


def trinomial_discriminant(b1, b2, c1, c2) -> float:
    """|b|^{|b|}/(1+|b|)^{1+|b|} − c1 c2^{|b|} for b = b1/b2 < 0."""
    b = abs(float(b1) / float(b2))
    return math.exp(b * math.log(b) - (1 + b) * math.log1p(b)) - float(c1) * float(c2) ** b


@dataclass(frozen=True)
class TrinomialRoot:
    x: float
    lam: float
    multiplicity: int


def trinomial_solve(b1, b2, c1, c2, tol: float = DOUBLE_ROOT_TOL) -> list[TrinomialRoot]:
    """Positive solutions of c1 x^b1 + c2 x^b2 = 1.

    On the coefficient polytope y = (λ, 1−λ, 1) the single condition reads
    s_{1,−b}(λ) = c1 c2^{−b} with b = b1/b2; its solutions are lifted back to x
    through the instance's exponentiation matrix.
    """
    from .framework import ProblemInstance, lift_solution_log
    from .linalg import RatMatrix

    if b1 == 0 or b2 == 0 or b1 == b2:
        raise DegenerateExponents("need nonzero, distinct exponents")
    c1f, c2f = float(c1), float(c2)
    if not (c1f > 0 and c2f > 0):
        raise ValueError("coefficients must be positive")
    exact = all(isinstance(v, (int, Fraction)) for v in (b1, b2))
    B = [[b1, b2, 0]] if exact else [[float(b1), float(b2), 0.0]]
    p = ProblemInstance(RatMatrix([[1, 1, -1]]), B, (c1, c2, 1))
    b = float(b1) / float(b2)
    log_t = math.log(c1f) - b * math.log(c2f)
    # roots are kept as logits u = ln(λ/(1−λ)) so that λ ≈ 1 survives the lift
    us: list[tuple[float, int]] = []
    if b > 0:
        us.append((sc_root_logit((1.0, -b), log_t), 1))
    else:
        ab = -b
        log_max = ab * math.log(ab) - (1 + ab) * math.log1p(ab)
        gap = log_t - log_max
        if gap > 1.0:
            return []
        rel = -math.expm1(gap)  # discriminant / s_max
        if rel < -tol:
            return []
        if rel <= tol:
            us.append((-math.log(ab), 2))
        else:
            us.append((sc_root_logit((1.0, ab), log_t, "minus"), 1))
            us.append((sc_root_logit((1.0, ab), log_t, "plus"), 1))
    out = []
    for u, mult in us:
        ly = np.array([_log_sigma(u), _log_sigma(-u), 0.0])
        x = lift_solution_log(ly, p.aux, p.c, tol=max(1e-9, 10 * tol))
        out.append(TrinomialRoot(float(x[0]), float(expit(u)), mult))
    out.sort(key=lambda r: r.x)
    return out
