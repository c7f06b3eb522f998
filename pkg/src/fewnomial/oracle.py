"""Independent numerical oracles.

Nothing here uses the parametrization machinery: ``multistart_solve`` runs
damped Newton on the raw system in log coordinates and ``grid_count`` counts
roots of a univariate function by dense sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NonSquare
from .framework import residual
from .linalg import to_numpy


@dataclass
class OracleConfig:
    seed: int = 0
    starts: int = 4096
    box: float = 6.0  # starts are uniform in [−box, box]^n for ln x
    max_iter: int = 80
    polish: float = 1e-12  # Newton stops below this scaled residual
    accept: float = 1e-10
    dedup: float = 1e-6  # in ln x

    def __post_init__(self):
        if self.starts < 1 or not self.box > 0:
            raise ValueError("need at least one start and a nonempty box")


@dataclass
class OracleResult:
    solutions: np.ndarray  # (k, n), sorted lexicographically
    residuals: np.ndarray
    converged_starts: int = 0
    config: OracleConfig = field(default_factory=OracleConfig)

    def __len__(self):
        return len(self.solutions)


def _scaled_system(A, B, c, xi):
    """Residual and Jacobian of the row-normalized system at log points xi (k, n)."""
    terms = c[None, :] * np.exp(xi @ B)  # (k, m)
    F = terms @ A.T  # (k, r)
    S = np.abs(terms) @ np.abs(A.T)
    S[S == 0] = 1.0
    # J_ik = Σ_j a_ij c_j x^b_j b_kj; the scale is frozen within a step
    J = np.einsum("ij,kj,lj->kil", A, terms, B)
    return F / S, J / S[:, :, None]


def multistart_solve(p, config: OracleConfig | None = None) -> OracleResult:
    """Positive solutions of a square instance from many random starts."""
    cfg = config or OracleConfig()
    if p.n_eq != p.n:
        raise NonSquare(f"multistart needs as many equations as variables ({p.n_eq} != {p.n})")
    A, B, c = to_numpy(p.A), to_numpy(p.B), p.c_float
    rng = np.random.default_rng(cfg.seed)
    xi = rng.uniform(-cfg.box, cfg.box, size=(cfg.starts, p.n))
    F, J = _scaled_system(A, B, c, xi)
    norm = np.linalg.norm(F, axis=1)
    active = np.ones(len(xi), dtype=bool)
    for _ in range(cfg.max_iter):
        idx = np.flatnonzero(active & (norm > cfg.polish))
        if idx.size == 0:
            break
        try:
            step = np.linalg.solve(J[idx], -F[idx][:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            step = np.stack([np.linalg.lstsq(Jk, -Fk, rcond=None)[0] for Jk, Fk in zip(J[idx], F[idx])])
        step = np.nan_to_num(step, nan=0.0, posinf=0.0, neginf=0.0)
        big = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, 5.0 / np.maximum(big, 1e-300))[:, None]
        t = np.ones(idx.size)
        done = np.zeros(idx.size, dtype=bool)
        new_xi = xi[idx].copy()
        new_F, new_J = F[idx].copy(), J[idx].copy()
        for _ in range(30):
            trial = xi[idx] + t[:, None] * step
            Ft, Jt = _scaled_system(A, B, c, trial)
            nt = np.linalg.norm(Ft, axis=1)
            ok = ~done & np.isfinite(nt) & (nt < (1 - 1e-4 * t) * norm[idx])
            new_xi[ok], new_F[ok], new_J[ok] = trial[ok], Ft[ok], Jt[ok]
            done |= ok
            if done.all():
                break
            t[~done] *= 0.5
        xi[idx], F[idx], J[idx] = new_xi, new_F, new_J
        norm[idx] = np.linalg.norm(F[idx], axis=1)
        active[idx[~done]] = False  # stalled
        if np.any(np.abs(xi) > 60):
            active[np.any(np.abs(xi) > 60, axis=1)] = False
    good = np.isfinite(norm) & (norm <= cfg.accept)
    cand = xi[good][np.argsort(norm[good], kind="stable")]
    kept: list[np.ndarray] = []
    for z in cand:
        if all(np.max(np.abs(z - k)) > cfg.dedup for k in kept):
            kept.append(z)
    kept.sort(key=lambda v: tuple(v))
    arr = np.exp(np.array(kept).reshape(-1, p.n))
    res = np.array([residual(p, x) for x in arr])
    return OracleResult(arr, res, int(good.sum()), cfg)


@dataclass
class GridCount:
    crossings: list[float]
    tangential: list[float]

    @property
    def count(self) -> int:
        return len(self.crossings) + len(self.tangential)


def grid_count(f, a: float, b: float, resolution: float | None = None, zero_tol: float = 1e-12) -> GridCount:
    """Roots of a vectorized f on (a, b) by sampling.

    Sign changes are refined with Brent's method. Local minima of |f| below
    ``zero_tol`` without a sign change are reported as tangential roots.
    """
    if resolution is None:
        resolution = 1e-4 * (b - a)
    n = int(np.ceil((b - a) / resolution)) + 1
    xs = np.linspace(a, b, n + 2)[1:-1]
    with np.errstate(all="ignore"):
        vals = np.asarray(f(xs), dtype=float)
    ok = np.isfinite(vals)
    xs, vals = xs[ok], vals[ok]
    s = np.sign(vals)
    crossings = []
    exact = np.flatnonzero(s == 0)
    nz = np.flatnonzero(s != 0)
    tangential = []
    for i in exact:
        k = np.searchsorted(nz, i)
        left = s[nz[k - 1]] if k > 0 else 0
        right = s[nz[k]] if k < len(nz) else 0
        (tangential if left == right and left != 0 else crossings).append(float(xs[i]))
    flips = np.flatnonzero(s[nz[:-1]] != s[nz[1:]])
    for i, j in zip(nz[flips], nz[flips + 1]):
        if j - i == 1:  # otherwise an exact zero in between is already recorded
            crossings.append(float(brentq(lambda t: float(f(np.array([t]))[0]), xs[i], xs[j], xtol=1e-15)))
    av = np.abs(vals)
    mid = np.arange(1, len(av) - 1)
    hit = (
        (av[mid] <= av[mid - 1]) & (av[mid] < av[mid + 1]) & (av[mid] < zero_tol)
        & (s[mid - 1] == s[mid + 1]) & (s[mid] != 0)
    )
    tangential.extend(float(xs[i]) for i in mid[hit])
    return GridCount(sorted(crossings), sorted(tangential))
