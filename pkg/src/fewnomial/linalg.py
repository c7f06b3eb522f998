"""Exact-rational and binary64 linear algebra.

Two backends live side by side:

* :class:`RatMatrix` holds :class:`fractions.Fraction` entries. Everything
  derived from the coefficient matrix goes through it, so kernels, rays and
  sign vectors are exact.
* :class:`RealMatrix` wraps a float ``numpy`` array together with the relative
  tolerance used for rank decisions. It is used when exponents are irrational.

The module-level functions dispatch on the backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_TOL = 1e-10


def to_fraction(v) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` / decimal strings to a Fraction.

    Floats are converted exactly (binary value), which is rarely what callers
    want; parse decimals from strings instead.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite entry {v!r}")
        return Fraction(v)
    raise TypeError(f"cannot interpret {v!r} as a rational")


class RatMatrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ValueError("ragged matrix rows")
            w = widths.pop()
            if ncols is not None and ncols != w:
                raise ValueError(f"expected {ncols} columns, got {w}")
            ncols = w
        elif ncols is None:
            ncols = 0
        self._rows = data
        self._ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        z = Fraction(0)
        return cls([[z] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "RatMatrix":
        if not cols:
            return cls([[] for _ in range(nrows or 0)], ncols=0)
        return cls(zip(*cols), ncols=len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self._ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.columns(), ncols=self.nrows)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "RatMatrix":
        rows = range(self.nrows) if rows is None else rows
        cols = range(self._ncols) if cols is None else cols
        cols = list(cols)
        return RatMatrix([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self._ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self._rows],
                ncols=other.ncols,
            )
        if isinstance(other, RealMatrix):
            return RealMatrix(self.to_numpy() @ other.data, tol=other.tol)
        if isinstance(other, np.ndarray):
            return self.to_numpy() @ other
        vec = [to_fraction(x) for x in other]
        if len(vec) != self._ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._rows)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix([[-x for x in r] for r in self._rows], ncols=self._ncols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other.rows)], ncols=self._ncols
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, RatMatrix):
            return self.shape == other.shape and self._rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"RatMatrix({self.nrows}x{self._ncols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def to_numpy(self) -> np.ndarray:
        out = np.array([[float(x) for x in r] for r in self._rows], dtype=float)
        return out.reshape(self.nrows, self._ncols)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]


@dataclass(frozen=True, eq=False)
class RealMatrix:
    """Float matrix plus the relative tolerance used for its rank decisions."""

    data: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 2:
            raise ValueError("RealMatrix needs a 2-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite entries")
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "RealMatrix":
        return RealMatrix(self.data.T, tol=self.tol)

    def col(self, j: int) -> np.ndarray:
        return self.data[:, j]

    def columns(self) -> list[np.ndarray]:
        return [self.data[:, j] for j in range(self.ncols)]

    def submatrix(self, rows=None, cols=None) -> "RealMatrix":
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else cols
        return RealMatrix(self.data[np.ix_(np.asarray(list(rows), dtype=int), np.asarray(list(cols), dtype=int))], tol=self.tol)

    def __matmul__(self, other):
        if isinstance(other, (RealMatrix, RatMatrix)):
            return RealMatrix(self.data @ to_numpy(other), tol=self.tol)
        return self.data @ np.asarray(other, dtype=float)

    def __getitem__(self, ij):
        return float(self.data[ij])

    def to_numpy(self) -> np.ndarray:
        return np.array(self.data)

    def tolist(self) -> list[list[float]]:
        return self.data.tolist()


Matrix = Union[RatMatrix, RealMatrix]


def as_matrix(obj, tol: float = DEFAULT_TOL) -> Matrix:
    """Coerce nested sequences or arrays to one of the two backends.

    Float arrays and any float entry select :class:`RealMatrix`; everything
    else is parsed exactly.
    """
    if isinstance(obj, (RatMatrix, RealMatrix)):
        return obj
    if isinstance(obj, np.ndarray):
        if obj.dtype.kind in "iu":
            return RatMatrix(obj.tolist(), ncols=obj.shape[1] if obj.ndim == 2 else None)
        return RealMatrix(obj, tol=tol)
    rows = [list(r) for r in obj]
    if any(isinstance(x, float) for r in rows for x in r):
        return RealMatrix(np.array(rows, dtype=float), tol=tol)
    return RatMatrix(rows)


def to_numpy(M) -> np.ndarray:
    if isinstance(M, (RatMatrix, RealMatrix)):
        return M.to_numpy()
    return np.asarray(M, dtype=float)


def is_exact(M) -> bool:
    return isinstance(M, RatMatrix)


def matmul(X: Matrix, Y: Matrix) -> Matrix:
    if isinstance(X, RatMatrix) and isinstance(Y, RatMatrix):
        return X @ Y
    tol = X.tol if isinstance(X, RealMatrix) else Y.tol
    return RealMatrix(to_numpy(X) @ to_numpy(Y), tol=tol)


def vstack(*mats: Matrix) -> Matrix:
    ncols = {m.ncols for m in mats}
    if len(ncols) != 1:
        raise ValueError("column counts differ")
    if all(isinstance(m, RatMatrix) for m in mats):
        return RatMatrix([r for m in mats for r in m.rows], ncols=ncols.pop())
    tol = min(m.tol for m in mats if isinstance(m, RealMatrix))
    return RealMatrix(np.vstack([to_numpy(m) for m in mats]), tol=tol)


# -- exact elimination -------------------------------------------------------


def rref(M: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    R = [list(r) for r in M.rows]
    nr, nc = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(nr):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def primitive(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a rational vector to coprime integers with first nonzero entry > 0."""
    vec = [to_fraction(x) for x in vec]
    nz = [x for x in vec if x != 0]
    if not nz:
        return tuple(vec)
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in nz), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(math.gcd, (abs(i) for i in ints if i), 0)
    sgn = 1 if nz[0] > 0 else -1
    return tuple(Fraction(sgn * i // g) for i in ints)


def _float_rank_and_svd(A: np.ndarray, tol: float):
    if A.size == 0:
        return 0, None
    U, s, Vt = np.linalg.svd(A)
    if s.size == 0 or s[0] == 0:
        return 0, (U, s, Vt)
    return int(np.sum(s > tol * s[0])), (U, s, Vt)


def rank(M: Matrix) -> int:
    M = as_matrix(M)
    if isinstance(M, RatMatrix):
        return len(rref(M)[1])
    return _float_rank_and_svd(M.data, M.tol)[0]


def _normalize_float(v: np.ndarray, tol: float) -> np.ndarray:
    scale = np.max(np.abs(v)) if v.size else 0.0
    if scale == 0:
        return v
    cut = max(tol, 1e-12) * scale
    idx = np.nonzero(np.abs(v) > cut)[0][0]
    out = v / v[idx]
    out[np.abs(v) <= cut] = 0.0
    return out


def kernel_basis(M: Matrix) -> list:
    """Basis of ker M.

    Exact input yields primitive integer vectors (one per free column of the
    RREF, first nonzero entry positive). Float input uses the SVD; vectors are
    scaled so their first significant entry is 1.
    """
    M = as_matrix(M)
    if isinstance(M, RatMatrix):
        R, piv = rref(M)
        free = [j for j in range(M.ncols) if j not in piv]
        basis = []
        for f in free:
            v = [Fraction(0)] * M.ncols
            v[f] = Fraction(1)
            for i, p in enumerate(piv):
                v[p] = -R[i][f]
            basis.append(primitive(v))
        return basis
    n = M.ncols
    if M.nrows == 0:
        return [np.eye(n)[j] for j in range(n)]
    r, (U, s, Vt) = _float_rank_and_svd(M.data, M.tol)
    N = Vt[r:].T
    if N.shape[1] == 0:
        return []
    # column-reduce so the basis is reproducible rather than an arbitrary rotation
    Q, R_, piv = _qr_pivot(N.T)
    sel = piv[: N.shape[1]]
    N = N @ np.linalg.inv(N[sel, :])
    return [_normalize_float(N[:, k], M.tol) for k in range(N.shape[1])]


def _qr_pivot(X: np.ndarray):
    import scipy.linalg

    return scipy.linalg.qr(X, pivoting=True)


def gale_dual(M: Matrix) -> Matrix:
    """Matrix G with independent columns and im G = ker M."""
    M = as_matrix(M)
    basis = kernel_basis(M)
    if isinstance(M, RatMatrix):
        return RatMatrix.from_columns(basis, nrows=M.ncols) if basis else RatMatrix.zeros(M.ncols, 0)
    if not basis:
        return RealMatrix(np.zeros((M.ncols, 0)), tol=M.tol)
    return RealMatrix(np.column_stack(basis), tol=M.tol)


def _rat_inverse(S: RatMatrix) -> RatMatrix:
    n = S.nrows
    aug = RatMatrix([list(S.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)])
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return RatMatrix([r[n:] for r in R], ncols=n)


def generalized_inverse(M: Matrix) -> Matrix:
    """Some M* with M M* M = M.

    Exact: pick a maximal invertible submatrix via pivot rows/columns, invert
    it and pad with zeros. Float: Moore-Penrose pseudo-inverse.
    """
    M = as_matrix(M)
    nr, nc = M.shape
    if isinstance(M, RealMatrix):
        if M.data.size == 0:
            return RealMatrix(np.zeros((nc, nr)), tol=M.tol)
        return RealMatrix(np.linalg.pinv(M.data, rcond=M.tol), tol=M.tol)
    _, cols = rref(M)
    _, rows = rref(M.T)
    out = [[Fraction(0)] * nr for _ in range(nc)]
    if cols:
        inv = _rat_inverse(M.submatrix(rows, cols))
        for a, j in enumerate(cols):
            for b, i in enumerate(rows):
                out[j][i] = inv[a, b]
    return RatMatrix(out, ncols=nr)


def max_abs(M: Matrix) -> float:
    arr = to_numpy(M)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def is_zero(M: Matrix, atol: float = 1e-10) -> bool:
    if isinstance(M, RatMatrix):
        return M.is_zero()
    return max_abs(M) <= atol
