"""Small dense polynomials with ascending coefficient lists.

Coefficients may be Fractions (exact root isolation through sympy) or floats
(companion-matrix roots).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def padd(p, q):
    n = max(len(p), len(q))
    zero = 0 * (p[0] if p else q[0])
    return [(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n)]


def pmul(p, q):
    if not p or not q:
        return []
    out = [0 * p[0]] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def pscale(p, s):
    return [s * a for a in p]


def pderiv(p):
    return [i * p[i] for i in range(1, len(p))] or [0 * p[0]] if p else []


def trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p, x):
    out = 0
    for a in reversed(p):
        out = out * x + a
    return out


def num(v):
    """Fraction for exact inputs, float otherwise."""
    return Fraction(v) if isinstance(v, (int, Fraction)) else float(v)


def count_zeros_unit(coeffs, tol: float = 1e-12) -> float:
    """Number of distinct zeros of a polynomial in the open interval (0,1).

    Rational coefficients use exact real-root isolation; float coefficients go
    through numpy's companion-matrix roots. Returns ``math.inf`` for the zero
    polynomial.
    """
    coeffs = trim(coeffs)
    if all(c == 0 for c in coeffs):
        return math.inf
    if all(isinstance(c, (int, Fraction)) for c in coeffs):
        poly = _sympy_poly(coeffs)
        if poly.degree() <= 0:
            return 0
        cnt = poly.count_roots(0, 1)
        cnt -= int(poly.eval(0) == 0) + int(poly.eval(1) == 0)
        return cnt
    roots = real_roots_unit(coeffs, tol)
    return len(roots)


def _sympy_poly(coeffs):
    import sympy as sp

    x = sp.Symbol("x")
    return sp.Poly(sum(sp.Rational(c) * x**i for i, c in enumerate(coeffs)), x)


def real_roots_interval(coeffs, lo, hi, tol: float = 1e-9) -> list[float]:
    """Distinct real roots in the open interval (lo, hi), sorted."""
    coeffs = trim(coeffs)
    if len(coeffs) <= 1:
        return []
    if all(isinstance(c, (int, Fraction)) for c in coeffs) and all(isinstance(v, (int, Fraction)) for v in (lo, hi)):
        poly = _sympy_poly(coeffs)
        out = []
        for (a, b), _mult in poly.intervals(eps=Fraction(1, 10**15), inf=lo, sup=hi):
            r = (float(a) + float(b)) / 2
            if a == b and (a == lo or a == hi):
                continue
            if float(lo) < r < float(hi):
                out.append(r)
        return sorted(set(out))
    arr = np.array([float(c) for c in coeffs[::-1]])
    rts = np.roots(arr)
    scale = max(1.0, float(np.max(np.abs(rts)))) if rts.size else 1.0
    real = sorted(float(r.real) for r in rts if abs(r.imag) <= tol * scale and float(lo) < r.real < float(hi))
    out: list[float] = []
    for r in real:
        if not out or r - out[-1] > 1e-10:
            out.append(r)
    return out


def real_roots_unit(coeffs, tol: float = 1e-9) -> list[float]:
    """Distinct real roots in (0,1), sorted."""
    return real_roots_interval(coeffs, 0, 1, tol)
