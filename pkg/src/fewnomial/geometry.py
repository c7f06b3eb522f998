"""Polyhedral objects attached to the coefficient matrix.

Class partitions, extreme rays of the s-cone ``ker A ∩ R^m_>=``, vertices of
the coefficient polytope, sign vectors of subspaces and the segment normal
form of two-dimensional kernels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import Decomposable, DimensionTooLarge, EmptyInterior, RankDeficient
from .linalg import (
    RatMatrix,
    RealMatrix,
    as_matrix,
    kernel_basis,
    primitive,
    rank,
    rref,
    to_fraction,
)

MAX_RAY_COLUMNS = 20
MAX_SIGN_DIM = 12

SignVector = tuple  # entries in {-1, 0, 1}


@dataclass(frozen=True)
class ClassPartition:
    """Partition of the column indices into classes (blocks of monomials)."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(j) for j in b) for b in self.blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("empty class")
        flat = sorted(j for b in blocks for j in b)
        if flat != list(range(len(flat))):
            raise ValueError("classes must partition 0..m-1")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "ClassPartition":
        out, start = [], 0
        for s in sizes:
            s = int(s)
            if s <= 0:
                raise ValueError("class sizes must be positive")
            out.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(out))

    @property
    def m(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def ell(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def permutation(self) -> tuple[int, ...]:
        """Column order that makes the classes contiguous blocks."""
        return tuple(j for b in self.blocks for j in b)

    def class_of(self, j: int) -> int:
        for i, b in enumerate(self.blocks):
            if j in b:
                return i
        raise IndexError(j)


def _check_full_row_rank(A: RatMatrix):
    if rank(A) != A.nrows:
        raise RankDeficient(f"coefficient matrix has rank {rank(A)} < {A.nrows} rows")


def finest_partition(A) -> ClassPartition:
    """Finest column partition for which ker A is a direct product.

    Two columns share a class iff they are linked by a chain of circuits
    (support-minimal kernel vectors). The fundamental circuits of one basis
    already generate these connected components.
    """
    A = as_matrix(A)
    _check_full_row_rank(A)
    m = A.ncols
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    R, piv = rref(A)
    for f in (j for j in range(m) if j not in piv):
        for i, p in enumerate(piv):
            if R[i][f] != 0:
                parent[find(p)] = find(f)
    groups: dict[int, list[int]] = {}
    for j in range(m):
        groups.setdefault(find(j), []).append(j)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
    return ClassPartition(tuple(blocks))


def is_direct_product(A, blocks: Iterable[Sequence[int]]) -> bool:
    """Rank test: dim ker A equals the sum of dims of ker A within each block."""
    A = as_matrix(A)
    total = A.ncols - rank(A)
    parts = 0
    for b in blocks:
        sub = A.submatrix(cols=list(b))
        parts += len(b) - rank(sub)
    return parts == total


def _support(v) -> frozenset:
    return frozenset(i for i, x in enumerate(v) if x != 0)


def extreme_rays_scone(A, max_columns: int = MAX_RAY_COLUMNS) -> list[tuple[Fraction, ...]]:
    """Extreme rays of ``ker A ∩ R^m_>=`` as primitive integer vectors.

    Enumerates column supports of size at most rank(A)+1 and keeps the
    nonnegative circuits. Raises EmptyInterior if no strictly positive kernel
    vector exists (the rays must cover every column).
    """
    A = as_matrix(A)
    if not isinstance(A, RatMatrix):
        raise TypeError("coefficient matrices are exact")
    m = A.ncols
    if m > max_columns:
        raise DimensionTooLarge(f"{m} columns exceeds circuit-enumeration limit {max_columns}")
    r = rank(A)
    rays: list[tuple[Fraction, ...]] = []
    supports: list[frozenset] = []
    for size in range(1, min(r + 1, m) + 1):
        for S in itertools.combinations(range(m), size):
            fs = frozenset(S)
            if any(t <= fs for t in supports):
                continue
            ker = kernel_basis(A.submatrix(cols=S))
            if len(ker) != 1:
                continue
            v = ker[0]
            if any(x == 0 for x in v):
                continue
            if not (all(x > 0 for x in v) or all(x < 0 for x in v)):
                continue
            full = [Fraction(0)] * m
            for j, x in zip(S, v):
                full[j] = abs(x)
            rays.append(primitive(full))
            supports.append(fs)
    covered = frozenset().union(*supports) if supports else frozenset()
    if len(covered) != m:
        raise EmptyInterior("ker A contains no strictly positive vector")
    return rays


def polytope_vertices(rays: Sequence[Sequence], u: Sequence) -> list[tuple]:
    """Scale each ray r to r / (u·r), the vertices of the slice u·y = 1."""
    out = []
    for r in rays:
        if all(isinstance(x, (int, Fraction)) for x in list(r) + list(u)):
            r = [to_fraction(x) for x in r]
            s = sum((to_fraction(a) * b for a, b in zip(u, r)), Fraction(0))
            out.append(tuple(x / s for x in r))
        else:
            rr = np.asarray(r, dtype=float)
            out.append(tuple(rr / float(np.dot(np.asarray(u, dtype=float), rr))))
    return out


# -- sign vectors -------------------------------------------------------------


def sign(x, tol: float = 0.0) -> int:
    if isinstance(x, Fraction) or tol == 0:
        return (x > 0) - (x < 0)
    return (x > tol) - (x < -tol)


def sign_vector(v, tol: float = 0.0) -> SignVector:
    return tuple(sign(x, tol) for x in v)


def format_signs(sv: SignVector) -> str:
    return "".join({1: "+", -1: "-", 0: "0"}[s] for s in sv)


def _basis_matrix(basis: Sequence, m: int):
    if not basis:
        return RatMatrix.zeros(m, 0)
    if all(isinstance(x, (int, Fraction)) for v in basis for x in v):
        return RatMatrix.from_columns([list(v) for v in basis])
    return RealMatrix(np.column_stack([np.asarray(v, dtype=float) for v in basis]))


def complement_circuits(basis: Sequence, m: int) -> list[SignVector]:
    """Sign vectors of the support-minimal vectors of the orthogonal complement.

    Only one of each ±pair is returned.
    """
    V = _basis_matrix(basis, m)
    k = rank(V)
    VT = V.T
    out: list[SignVector] = []
    supports: list[frozenset] = []
    for size in range(1, min(k + 1, m) + 1):
        for S in itertools.combinations(range(m), size):
            fs = frozenset(S)
            if any(t <= fs for t in supports):
                continue
            sub = VT.submatrix(cols=S)
            if rank(sub) != size - 1:
                continue
            ker = kernel_basis(sub)
            w = ker[0]
            tol = 1e-9 * max(abs(float(x)) for x in w) if isinstance(V, RealMatrix) else 0.0
            sv = sign_vector(w, tol)
            if any(s == 0 for s in sv):
                continue
            full = [0] * m
            for j, s in zip(S, sv):
                full[j] = s
            out.append(tuple(full))
            supports.append(fs)
    return out


def _orthogonal_mask(X: np.ndarray, circuits: np.ndarray) -> np.ndarray:
    """Rows of X orthogonal (as sign vectors) to every circuit row."""
    if circuits.size == 0:
        return np.ones(len(X), dtype=bool)
    Xp, Xn = (X > 0).astype(np.int32), (X < 0).astype(np.int32)
    Cp, Cn = (circuits > 0).astype(np.int32).T, (circuits < 0).astype(np.int32).T
    same = Xp @ Cp + Xn @ Cn
    opp = Xp @ Cn + Xn @ Cp
    ok = ((same > 0) & (opp > 0)) | ((same == 0) & (opp == 0))
    return ok.all(axis=1)


def _all_patterns(m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return np.array(list(itertools.product((-1, 0, 1), repeat=m)), dtype=np.int8)


def sign_vectors(basis: Sequence, m: int, max_dim: int = MAX_SIGN_DIM) -> set[SignVector]:
    """All sign vectors realized by the span of ``basis`` in R^m.

    A sign pattern is realizable iff it is orthogonal to every elementary
    vector (circuit) of the orthogonal complement; this is checked for all
    3^m patterns.
    """
    if m > max_dim:
        raise DimensionTooLarge(f"sign-vector enumeration limited to m <= {max_dim}")
    circ = np.array(complement_circuits(basis, m), dtype=np.int8).reshape(-1, m)
    pats = _all_patterns(m)
    out: set[SignVector] = set()
    for start in range(0, len(pats), 65536):
        chunk = pats[start:start + 65536]
        mask = _orthogonal_mask(chunk, circ)
        out.update(tuple(int(s) for s in row) for row in chunk[mask])
    return out


def in_sign_set(X: SignVector, complement_circ: Sequence[SignVector]) -> bool:
    """Membership test against a subspace given by its complement circuits."""
    circ = np.array(complement_circ, dtype=np.int8).reshape(-1, len(X))
    return bool(_orthogonal_mask(np.array([X], dtype=np.int8), circ)[0])


def lower_closure(S: Iterable[SignVector]) -> set[SignVector]:
    """All τ with τ <= ρ componentwise (0 < -, 0 < +) for some ρ in S."""
    out: set[SignVector] = set()
    for rho in S:
        choices = [(0, s) if s != 0 else (0,) for s in rho]
        out.update(itertools.product(*choices))
    return out


# -- segment normal form ------------------------------------------------------


@dataclass(frozen=True)
class SegmentNormalForm:
    """ker A = c ∘ im(1, q) after reordering columns by ``perm``.

    ``c`` and ``q`` are listed in the sorted order: entry k belongs to the
    original column ``perm[k]``. ``rays`` are the two generators in original
    column order, scaled to agree on a shared coordinate.
    """

    c: tuple[Fraction, ...]
    q: tuple[Fraction, ...]
    perm: tuple[int, ...]
    rays: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]

    @property
    def size(self) -> int:
        return len(self.q)

    def c_original(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.size
        for k, j in enumerate(self.perm):
            out[j] = self.c[k]
        return tuple(out)

    def q_original(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.size
        for k, j in enumerate(self.perm):
            out[j] = self.q[k]
        return tuple(out)

    def u(self) -> tuple[Fraction, ...]:
        """Positive u (sorted order) with u·1 = 1 and u·q = 0."""
        q = self.q
        pos = [i for i, x in enumerate(q) if x > 0]
        neg = [i for i, x in enumerate(q) if x < 0]
        w = [Fraction(1)] * len(q)
        for i in pos:
            w[i] = 1 / (2 * len(pos) * q[i])
        for i in neg:
            w[i] = 1 / (2 * len(neg) * -q[i])
        tot = sum(w)
        return tuple(x / tot for x in w)

    def u_original(self) -> tuple[Fraction, ...]:
        """Normalization vector in original columns: u'·(c ∘ (1 + t q)) = 1."""
        u = self.u()
        out = [Fraction(0)] * self.size
        for k, j in enumerate(self.perm):
            out[j] = u[k] / self.c[k]
        return tuple(out)


def segment_normal_form(A) -> SegmentNormalForm:
    A = as_matrix(A)
    if A.ncols - rank(A) != 2:
        raise ValueError("segment normal form needs a two-dimensional kernel")
    rays = extreme_rays_scone(A)
    if len(rays) != 2:
        raise ValueError(f"expected two extreme rays, found {len(rays)}")
    r1, r2 = rays
    common = [i for i in range(A.ncols) if r1[i] != 0 and r2[i] != 0]
    if not common:
        raise Decomposable("ker A is a direct product (generators have disjoint supports)")
    m = A.ncols
    if not any(A @ ([Fraction(1)] * m)):
        # 1 already lies in ker A: keep c = 1 and rescale the other generator
        v = [a - b for a, b in zip(r1, r2)]
        hi, lo = max(v), min(v)
        ybar = [Fraction(1)] * m
        q = [(2 * x - hi - lo) / (hi - lo) for x in v]
        r1 = tuple(1 + x for x in q)
        r2 = tuple(1 - x for x in q)
    else:
        k = common[0]
        r2 = tuple(x * r1[k] / r2[k] for x in r2)
        ybar = [(a + b) / 2 for a, b in zip(r1, r2)]
        q = [(a - b) / 2 / yb for a, b, yb in zip(r1, r2, ybar)]
    perm = tuple(sorted(range(A.ncols), key=lambda i: (-q[i], i)))
    nf = SegmentNormalForm(
        c=tuple(ybar[i] for i in perm),
        q=tuple(q[i] for i in perm),
        perm=perm,
        rays=(tuple(r1), r2),
    )
    c0, q0 = nf.c_original(), nf.q_original()
    g1 = A @ list(c0)
    g2 = A @ [a * b for a, b in zip(c0, q0)]
    if any(g1) or any(g2) or rank(RatMatrix([c0, [a * b for a, b in zip(c0, q0)]])) != 2:
        raise AssertionError("segment normal form failed its rank check")
    return nf


def default_normalization(A_block, rays: Sequence) -> tuple:
    """Per-class u: the segment choice when two overlapping rays exist, else uniform."""
    m = len(rays[0]) if rays else A_block.ncols
    if len(rays) == 2:
        try:
            return segment_normal_form(A_block).u_original()
        except (Decomposable, ValueError):
            pass
    return tuple(Fraction(1, m) for _ in range(m))


@dataclass(frozen=True)
class ClassGeometry:
    """Rays, normalization and vertices of one class, in class-local coordinates."""

    block: tuple[int, ...]
    rays: tuple[tuple[Fraction, ...], ...]
    u: tuple
    vertices: tuple[tuple, ...]


@dataclass(frozen=True)
class CoefficientGeometry:
    classes: tuple[ClassGeometry, ...]
    dim_C: int
    dim_P: int

    @property
    def vertex_counts(self) -> tuple[int, ...]:
        return tuple(len(g.vertices) for g in self.classes)


def coefficient_geometry(A, partition: ClassPartition, u=None) -> CoefficientGeometry:
    """Per-class rays of C_i and vertices of P_i.

    ``u`` optionally overrides the per-class normalization with a full-length
    positive vector (sliced per class).
    """
    A = as_matrix(A)
    out = []
    for b in partition.blocks:
        Ab = A.submatrix(cols=list(b))
        rays = extreme_rays_scone(Ab)
        if u is None:
            ub = default_normalization(Ab, rays)
        else:
            ub = tuple(u[j] for j in b)
            if any(x <= 0 for x in ub):
                raise ValueError("normalization vector must be positive")
        out.append(ClassGeometry(b, tuple(rays), tuple(ub), tuple(polytope_vertices(rays, ub))))
    dim_C = A.ncols - rank(A)
    return CoefficientGeometry(tuple(out), dim_C, dim_C - partition.ell)
