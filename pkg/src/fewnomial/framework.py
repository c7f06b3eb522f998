"""Solution sets of ``A (c ∘ x^B) = 0`` over the positive orthant.

The pipeline: classes of A, auxiliary matrices built from B and the classes,
the monomial dependency d, and the map from the coefficient polytope to the
solutions, ``x = (y ∘ c^{-1})^E ∘ e^v`` with v in the orthogonal complement of
the monomial difference subspace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import geometry as geo
from .errors import (
    ConditionViolated,
    DimensionMismatch,
    NotDecomposable,
    NotDependencyZero,
    RankDeficient,
)
from .linalg import (
    RatMatrix,
    RealMatrix,
    as_matrix,
    gale_dual,
    generalized_inverse,
    is_exact,
    kernel_basis,
    matmul,
    rank,
    rref,
    to_numpy,
    vstack,
)

CONDITION_TOL = 1e-9


def _positive_number(v):
    if isinstance(v, (int, Fraction)):
        v = Fraction(v)
    else:
        v = float(v)
    if not v > 0:
        raise ValueError(f"coefficients must be positive, got {v}")
    return v


@dataclass(frozen=True)
class ProblemInstance:
    """The system ``A (c ∘ x^B) = 0`` for x in the positive orthant.

    ``variables`` records the original variable indices when the instance was
    cut out of a larger one (see :func:`decompose`).
    """

    A: RatMatrix
    B: RatMatrix | RealMatrix
    c: tuple
    partition: geo.ClassPartition | None = None
    name: str = ""
    variables: tuple[int, ...] | None = None

    def __post_init__(self):
        A = as_matrix(self.A)
        if not is_exact(A):
            raise TypeError("A must be exact (rational)")
        B = as_matrix(self.B)
        c = tuple(_positive_number(x) for x in self.c)
        m = len(c)
        if A.ncols != m and not (A.nrows == 0):
            raise DimensionMismatch(f"A has {A.ncols} columns but c has length {m}", field="A")
        if A.nrows == 0:
            A = RatMatrix.zeros(0, m)
        if B.ncols != m:
            raise DimensionMismatch(f"B has {B.ncols} columns but c has length {m}", field="B")
        if rank(A) != A.nrows:
            raise RankDeficient("A must have full row rank")
        part = self.partition
        if part is None:
            part = geo.finest_partition(A)
        elif part.m != m:
            raise DimensionMismatch("classes do not sum to m", field="classes")
        elif not geo.is_direct_product(A, part.blocks):
            raise ValueError("ker A is not a direct product over the given classes")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "partition", part)
        self.geometry  # raises EmptyInterior when ker A has no positive vector

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def n(self) -> int:
        return self.B.nrows

    @property
    def n_eq(self) -> int:
        return self.A.nrows

    @property
    def ell(self) -> int:
        return self.partition.ell

    @property
    def c_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.c])

    @cached_property
    def geometry(self) -> geo.CoefficientGeometry:
        return geo.coefficient_geometry(self.A, self.partition)

    @cached_property
    def aux(self) -> "AuxMatrices":
        return build_aux(self)

    def monomials(self, x) -> np.ndarray:
        """c ∘ x^B, evaluated in log space."""
        lx = np.log(np.asarray(x, dtype=float))
        return self.c_float * np.exp(to_numpy(self.B).T @ lx)

    def with_c(self, c) -> "ProblemInstance":
        return ProblemInstance(self.A, self.B, tuple(c), self.partition, self.name, self.variables)


# -- auxiliary matrices -----------------------------------------------------------


def incidence_matrix(part: geo.ClassPartition) -> RatMatrix:
    """m × (m−ℓ); per class, columns e_j − e_last for the non-reference columns."""
    m = part.m
    cols = []
    for b in part.blocks:
        for j in b[:-1]:
            v = [0] * m
            v[j], v[b[-1]] = 1, -1
            cols.append(v)
    return RatMatrix.from_columns(cols, nrows=m) if cols else RatMatrix.zeros(m, 0)


def cayley_matrix(part: geo.ClassPartition) -> RatMatrix:
    rows = []
    for b in part.blocks:
        r = [0] * part.m
        for j in b:
            r[j] = 1
        rows.append(r)
    return RatMatrix(rows, ncols=part.m)


@dataclass(frozen=True)
class AuxMatrices:
    I: RatMatrix
    J: RatMatrix
    Bp: RatMatrix | RealMatrix
    M: RatMatrix | RealMatrix
    G: RatMatrix | RealMatrix
    Gp: RatMatrix | RealMatrix
    Mstar: RatMatrix | RealMatrix
    E: RatMatrix | RealMatrix
    Ap: RatMatrix
    Lperp: tuple

    @property
    def d(self) -> int:
        return self.Gp.ncols


def build_aux(p: ProblemInstance) -> AuxMatrices:
    I = incidence_matrix(p.partition)
    J = cayley_matrix(p.partition)
    M = matmul(p.B, I)
    G = gale_dual(M)
    Gp = matmul(I, G)
    Mstar = generalized_inverse(M)
    E = matmul(I, Mstar)
    aux = AuxMatrices(
        I=I,
        J=J,
        Bp=vstack(p.B, J),
        M=M,
        G=G,
        Gp=Gp,
        Mstar=Mstar,
        E=E,
        Ap=vstack(p.A, J),
        Lperp=tuple(kernel_basis(M.T)),
    )
    _check_aux(aux)
    return aux


def _check_aux(aux: AuxMatrices):
    if not (aux.J @ aux.I).is_zero():
        raise AssertionError("J I != 0")
    BpGp = matmul(aux.Bp, aux.Gp)
    MMM = matmul(matmul(aux.M, aux.Mstar), aux.M)
    if is_exact(aux.M):
        ok = BpGp.is_zero() and MMM == aux.M
    else:
        scale = max(1.0, float(np.max(np.abs(to_numpy(aux.M)))) if aux.M.ncols else 1.0)
        ok = np.allclose(to_numpy(BpGp), 0, atol=1e-8 * scale) and np.allclose(
            to_numpy(MMM), to_numpy(aux.M), atol=1e-8 * scale
        )
    if not ok:
        raise AssertionError("auxiliary matrix identities failed")


# -- classification ---------------------------------------------------------------


class Case(str, enum.Enum):
    D0_SUBSPACE = "D0_SUBSPACE"
    D0_FULL = "D0_FULL"
    DPOS = "DPOS"
    NONGENERIC = "NONGENERIC"


@dataclass(frozen=True)
class Classification:
    ell: int
    m: int
    n: int
    n_eq: int
    d: int
    dimL: int
    dimP: int
    generic: bool
    case: Case

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "m": self.m,
            "n": self.n,
            "n_eq": self.n_eq,
            "d": self.d,
            "dimL": self.dimL,
            "dimP": self.dimP,
            "generic": self.generic,
            "case": self.case.value,
        }


def classify(p: ProblemInstance) -> Classification:
    aux = p.aux
    dimL = rank(aux.M)
    m, ell, n = p.m, p.ell, p.n
    d = m - ell - dimL
    assert d == aux.d
    generic = dimL == n or d == 0
    if not generic:
        case = Case.NONGENERIC
    elif m < n + ell:
        case = Case.D0_SUBSPACE
    elif m == n + ell:
        case = Case.D0_FULL
    else:
        case = Case.DPOS
    return Classification(ell, m, n, p.n_eq, d, dimL, m - ell - p.n_eq, generic, case)


# -- conditions on the coefficient polytope ---------------------------------------


@dataclass(frozen=True)
class Condition:
    """y^z = c^z, stored in log form as z·ln y = log_target."""

    z: tuple
    log_target: float

    def residual(self, y) -> float:
        return float(np.dot(np.asarray(self.z, dtype=float), np.log(np.asarray(y, dtype=float)))) - self.log_target

    @property
    def target(self) -> float:
        return float(np.exp(self.log_target))


def dependency_conditions(aux: AuxMatrices, c) -> list[Condition]:
    lc = np.log(np.asarray([float(x) for x in c]))
    out = []
    for z in aux.Gp.columns():
        z = tuple(z)
        out.append(Condition(z, float(np.dot(np.asarray(z, dtype=float), lc))))
    return out


def condition_residuals(conds: Sequence[Condition], y) -> np.ndarray:
    return np.array([cd.residual(y) for cd in conds])


def lift_solution(y, aux: AuxMatrices, c, v=None, tol: float = CONDITION_TOL, A=None) -> np.ndarray:
    """x = (y ∘ c^{-1})^E ∘ e^v for y on the coefficient polytope.

    ``v`` is either a vector in the complement of L or coordinates with
    respect to ``aux.Lperp``.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ConditionViolated("y must be strictly positive")
    if A is not None:
        Ay = to_numpy(A) @ y
        if np.max(np.abs(Ay), initial=0.0) > 1e-9 * max(1.0, float(np.max(y))):
            raise ConditionViolated("y is not in ker A")
    return lift_solution_log(np.log(y), aux, c, v=v, tol=tol)


def lift_solution_log(ly, aux: AuxMatrices, c, v=None, tol: float = CONDITION_TOL) -> np.ndarray:
    """:func:`lift_solution` with y given as ln y, for points near the boundary."""
    ly = np.asarray(ly, dtype=float)
    conds = dependency_conditions(aux, c)
    res = np.array([np.dot(np.asarray(cd.z, dtype=float), ly) - cd.log_target for cd in conds])
    if res.size and np.max(np.abs(res)) > tol:
        raise ConditionViolated(f"dependency conditions violated (max log residual {np.max(np.abs(res)):.3g})")
    lc = np.log(np.asarray([float(x) for x in c]))
    lx = to_numpy(aux.E).T @ (ly - lc)
    if v is not None:
        v = np.asarray(v, dtype=float)
        if aux.Lperp and v.shape == (len(aux.Lperp),):
            v = np.column_stack([np.asarray(w, dtype=float) for w in aux.Lperp]) @ v
        lx = lx + v
    return np.exp(lx)


def residual(p: ProblemInstance, x) -> float:
    """Max over equations of |Σ a_ij c_j x^b_j| relative to the largest term."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    if p.n_eq == 0:
        return 0.0
    terms = to_numpy(p.A) * p.monomials(x)[None, :]
    scale = np.max(np.abs(terms), axis=1)
    scale[scale == 0] = 1.0
    return float(np.max(np.abs(terms.sum(axis=1)) / scale))


def project_to_polytope(p: ProblemInstance, x) -> np.ndarray:
    """Map a solution x back to y on P by per-class normalization with u."""
    w = p.monomials(x)
    y = np.empty_like(w)
    for g in p.geometry.classes:
        b = list(g.block)
        u = np.array([float(t) for t in g.u])
        y[b] = w[b] / float(u @ w[b])
    return y


def in_polytope(p: ProblemInstance, y, atol: float = 1e-9) -> bool:
    y = np.asarray(y, dtype=float)
    if np.any(y < -atol):
        return False
    if p.n_eq and np.max(np.abs(to_numpy(p.A) @ y)) > atol * max(1.0, float(np.max(np.abs(y)))):
        return False
    for g in p.geometry.classes:
        u = np.array([float(t) for t in g.u])
        if abs(float(u @ y[list(g.block)]) - 1.0) > atol:
            return False
    return True


# -- parametrizations --------------------------------------------------------------


@dataclass(frozen=True)
class SolutionParametrization:
    """Solutions as lifts of points on the coefficient polytope.

    A point of P is given by convex weights on the vertices of each class. A
    class with k vertices uses k−1 free weights (the last is 1 − sum).
    """

    E: np.ndarray
    c: np.ndarray
    blocks: tuple[tuple[int, ...], ...]
    vertices: tuple[tuple[tuple, ...], ...]
    lperp: tuple
    conditions: tuple[Condition, ...]
    Ap: RatMatrix | None = None
    _E_exact: tuple | None = None

    @property
    def n_weights(self) -> int:
        return sum(len(v) - 1 for v in self.vertices)

    @property
    def n_taus(self) -> int:
        return len(self.lperp)

    def point(self, weights: Sequence[float]) -> np.ndarray:
        weights = list(weights)
        if len(weights) != self.n_weights:
            raise ValueError(f"expected {self.n_weights} polytope weights, got {len(weights)}")
        m = sum(len(b) for b in self.blocks)
        y = np.zeros(m)
        k = 0
        for b, verts in zip(self.blocks, self.vertices):
            w = weights[k:k + len(verts) - 1]
            k += len(verts) - 1
            w = w + [1.0 - sum(w)]
            if any(t <= 0 for t in w):
                raise ValueError("polytope weights must be positive and sum to less than 1")
            V = np.array([[float(t) for t in v] for v in verts])
            y[list(b)] = np.asarray(w) @ V
        return y

    def lift(self, y, taus: Sequence[float] | None = None, tol: float = CONDITION_TOL) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        res = condition_residuals(self.conditions, y)
        if res.size and np.max(np.abs(res)) > tol:
            raise ConditionViolated(f"dependency conditions violated (max log residual {np.max(np.abs(res)):.3g})")
        lx = self.E.T @ (np.log(y) - np.log(self.c))
        if taus is not None:
            taus = np.asarray(taus, dtype=float)
            if taus.shape != (self.n_taus,) or np.any(taus <= 0):
                raise ValueError(f"expected {self.n_taus} positive tau values")
            for t, v in zip(taus, self.lperp):
                lx = lx + np.log(t) * np.asarray(v, dtype=float)
        return np.exp(lx)

    def evaluate(self, weights, taus=None, tol: float = CONDITION_TOL) -> np.ndarray:
        return self.lift(self.point(weights), taus, tol)

    def symbolic(self, c_symbols=None):
        """Closed form of x in terms of the weights λ_k, τ_k and symbolic c.

        Requires exact E and vertices. Returns a list of sympy expressions.
        """
        import sympy as sp

        m = self.E.shape[0]
        cs = c_symbols or sp.symbols(f"c1:{m + 1}", positive=True)
        lams = sp.symbols(f"lambda1:{self.n_weights + 1}", positive=True)
        taus = sp.symbols(f"tau1:{self.n_taus + 1}", positive=True)
        if self.n_weights == 1:
            lams = (sp.Symbol("lambda", positive=True),)
        if self.n_taus == 1:
            taus = (sp.Symbol("tau", positive=True),)
        y = [sp.Integer(0)] * m
        k = 0
        for b, verts in zip(self.blocks, self.vertices):
            w = list(lams[k:k + len(verts) - 1])
            k += len(verts) - 1
            w.append(1 - sum(w))
            for wt, v in zip(w, verts):
                for j, t in zip(b, v):
                    y[j] += wt * sp.Rational(t)
        xs = []
        Er = sp.Matrix(self._E_exact) if self._E_exact is not None else sp.Matrix(self.E)
        for i in range(Er.shape[1]):
            e = sp.Integer(1)
            for j in range(m):
                if Er[j, i] != 0:
                    e *= (y[j] / cs[j]) ** Er[j, i]
            for t, v in zip(taus, self.lperp):
                if v[i] != 0:
                    e *= t ** sp.Rational(v[i])
            xs.append(sp.simplify(e))
        return xs, lams, taus


def parametrization(p: ProblemInstance) -> SolutionParametrization:
    aux = p.aux
    geom = p.geometry
    E_exact = tuple(tuple(r) for r in aux.E.rows) if is_exact(aux.E) else None
    return SolutionParametrization(
        E=to_numpy(aux.E),
        c=p.c_float,
        blocks=p.partition.blocks,
        vertices=tuple(g.vertices for g in geom.classes),
        lperp=tuple(tuple(v) for v in aux.Lperp),
        conditions=tuple(dependency_conditions(aux, p.c)),
        Ap=aux.Ap,
        _E_exact=E_exact,
    )


def solution_set_d0(p: ProblemInstance) -> SolutionParametrization:
    cl = classify(p)
    if cl.d != 0:
        raise NotDependencyZero(f"monomial dependency is {cl.d}, not 0")
    return parametrization(p)


def binomial_form(ybar, partition: geo.ClassPartition | None = None) -> RatMatrix:
    """I^T diag(ȳ^{-1}): binomial rows whose kernel contains ȳ."""
    ybar = list(ybar)
    if partition is None:
        partition = geo.ClassPartition((tuple(range(len(ybar))),))
    exact = all(isinstance(v, (int, Fraction)) for v in ybar)
    inv = [1 / Fraction(v) if exact else 1.0 / float(v) for v in ybar]
    if any(Fraction(v) <= 0 if exact else float(v) <= 0 for v in ybar):
        raise ValueError("ȳ must be positive")
    I = incidence_matrix(partition)
    rows = [[I[j, k] * inv[j] for j in range(len(ybar))] for k in range(I.ncols)]
    if exact:
        return RatMatrix(rows, ncols=len(ybar))
    return RealMatrix(np.array(rows, dtype=float).reshape(len(rows), len(ybar)))


# -- decomposition -------------------------------------------------------------------


def _row_basis(M: RatMatrix) -> RatMatrix:
    R, piv = rref(M)
    return RatMatrix(R[: len(piv)], ncols=M.ncols)


def decompose(p: ProblemInstance) -> list[ProblemInstance]:
    """Split into per-class instances when D is a product over the classes."""
    if p.ell == 1:
        return [p]
    aux = p.aux
    parts = 0
    for b in p.partition.blocks:
        parts += len(b) - rank(aux.Bp.submatrix(cols=list(b)))
    if parts != aux.d:
        raise NotDecomposable("the dependency subspace is not a product over the classes")
    B = to_numpy(p.B)
    out = []
    for i, b in enumerate(p.partition.blocks):
        bl = list(b)
        Ai = _row_basis(p.A.submatrix(cols=bl)) if p.n_eq else RatMatrix.zeros(0, len(bl))
        keep = [k for k in range(p.n) if np.any(B[k, bl] != 0)]
        Bi = p.B.submatrix(rows=keep, cols=bl)
        if Bi.nrows == 0:
            Bi = RatMatrix.zeros(0, len(bl))
        ci = tuple(p.c[j] for j in bl)
        vars_ = tuple(p.variables[k] for k in keep) if p.variables else tuple(keep)
        out.append(
            ProblemInstance(
                Ai, Bi, ci, geo.ClassPartition((tuple(range(len(bl))),)), f"{p.name}[{i}]", vars_
            )
        )
    return out


# -- sign-vector certificates -----------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    holds: bool
    witness: tuple | None = None
    reason: str = ""


def _dperp_basis(aux: AuxMatrices) -> list:
    """Basis of the orthogonal complement of D (the row space of B')."""
    return kernel_basis(aux.Gp.T)


def certify_uniqueness(p: ProblemInstance) -> Certificate:
    """sign(ker A') ∩ sign(D^⊥) = {0} implies at most one point of Y_c for all c."""
    aux = p.aux
    kerAp = kernel_basis(aux.Ap)
    if not kerAp:
        return Certificate(True, None, "ker A' = {0}")
    S = geo.sign_vectors(kerAp, p.m)
    dcirc = geo.complement_circuits(_dperp_basis(aux), p.m)
    common = sorted(s for s in S if any(s) and geo.in_sign_set(s, dcirc))
    if common:
        return Certificate(False, common[-1], "nonzero sign vector shared by ker A' and the complement of D")
    return Certificate(True, None, "only the zero sign vector is shared")


def certify_unique_existence(p: ProblemInstance) -> Certificate:
    """dim ker A' = d and sign(ker A') ⊆ sign(D)↓ implies exactly one point of Y_c."""
    aux = p.aux
    kerAp = kernel_basis(aux.Ap)
    if len(kerAp) != aux.d:
        return Certificate(False, None, f"dim ker A' = {len(kerAp)} differs from d = {aux.d}")
    S = geo.sign_vectors(kerAp, p.m)
    SD = geo.sign_vectors(list(aux.Gp.columns()) if aux.d else [], p.m)
    closure = geo.lower_closure(SD)
    missing = sorted(s for s in S if s not in closure)
    if missing:
        return Certificate(False, missing[-1], "sign vector of ker A' outside the lower closure of sign(D)")
    return Certificate(True, None, "sign(ker A') lies in the lower closure of sign(D)")
