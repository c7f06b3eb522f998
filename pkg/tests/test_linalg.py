from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial.linalg import (
    RatMatrix,
    RealMatrix,
    as_matrix,
    gale_dual,
    generalized_inverse,
    is_zero,
    kernel_basis,
    rank,
    to_numpy,
)


def _span_equal(U, V):
    U, V = [list(u) for u in U], [list(v) for v in V]
    return rank(RatMatrix(U)) == rank(RatMatrix(V)) == rank(RatMatrix(U + V))


def test_kernel_of_trinomial_row():
    K = kernel_basis(RatMatrix([[1, 1, -1]]))
    assert len(K) == 2
    assert _span_equal(K, [(1, 0, 1), (0, 1, 1)])


def test_kernel_of_identity_is_empty():
    assert kernel_basis(RatMatrix.identity(2)) == []


def test_kernel_two_component():
    K = kernel_basis(RatMatrix([[-1, 1, -1, 0], [0, -1, 1, 1]]))
    assert _span_equal(K, [(0, 1, 1, 0), (1, 1, 0, 1)])


def test_kernel_float_backend():
    M = RealMatrix(np.array([[1.0, np.sqrt(2), -1.0]]))
    K = kernel_basis(M)
    assert len(K) == 2
    for v in K:
        assert abs(to_numpy(M) @ np.asarray(v, dtype=float)) < 1e-12


def test_gale_dual_trinomial():
    # M = B I for b = (b1, b2, 0) with I columns e1 - e3, e2 - e3
    b1, b2 = F(3), F(2)
    M = RatMatrix([[b1, b2]])
    G = gale_dual(M)
    assert G.shape == (2, 1)
    I = RatMatrix([[1, 0], [0, 1], [-1, -1]])
    z = (I @ G).col(0)
    b = b1 / b2
    z = tuple(t / z[0] for t in z)
    assert z == (1, -b, b - 1)


def test_gale_dual_trivial_kernel():
    assert gale_dual(RatMatrix.identity(3)).ncols == 0


def test_gale_dual_tri3d():
    b1, b2, b3 = 1, 2, -2
    Bp = RatMatrix([
        [1, 0, 0, 0, b1, 0],
        [0, 1, 0, 0, b2, 0],
        [0, 0, 0, 1, b3, 0],
        [1, 1, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
    ])
    G = gale_dual(Bp)
    assert G.ncols == 1
    z = G.col(0)
    z = tuple(t / z[0] * b1 for t in z)
    assert z == (b1, b2, -(b1 + b2), b3, -1, 1 - b3)


def test_generalized_inverse_two_component():
    M = RatMatrix([[1, 0, 1], [0, 1, 0], [0, 1, 0], [-1, -1, 0]])
    Ms = generalized_inverse(M)
    assert M @ Ms @ M == M
    # the displayed choice is a valid generalized inverse as well
    shown = RatMatrix([[0, -1, 0, -1], [0, 1, 0, 0], [1, 1, 0, 1]])
    assert M @ shown @ M == M


def test_generalized_inverse_identity():
    assert generalized_inverse(RatMatrix.identity(3)) == RatMatrix.identity(3)


small = st.integers(-4, 4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_mmstar_m_exact(rows):
    M = RatMatrix(rows)
    assert M @ generalized_inverse(M) @ M == M


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_gale_identities(rows):
    M = RatMatrix(rows)
    G = gale_dual(M)
    if G.ncols:
        assert (M @ G).is_zero()
        assert rank(G) == G.ncols
    assert rank(M) + G.ncols == M.ncols


@given(st.lists(st.lists(st.floats(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_float_backend_identities(rows):
    M = RealMatrix(np.array(rows))
    Ms = generalized_inverse(M)
    assert np.max(np.abs(to_numpy(M) @ to_numpy(Ms) @ to_numpy(M) - to_numpy(M))) <= 1e-10 * max(1, np.abs(rows).max()) ** 3
    G = gale_dual(M)
    if G.ncols:
        assert np.max(np.abs(to_numpy(M) @ to_numpy(G))) <= 1e-10 * max(1, np.abs(rows).max())


def test_kernel_reproducible():
    M = RatMatrix([[1, 2, 3, 4], [2, -1, 0, 5]])
    assert kernel_basis(M) == kernel_basis(M)


def test_as_matrix_routes_floats():
    assert isinstance(as_matrix([[1, 2]]), RatMatrix)
    assert isinstance(as_matrix([[1, 0.5]]), RealMatrix)
    assert is_zero(RatMatrix.zeros(2, 2))


def test_ratmatrix_rejects_ragged():
    with pytest.raises(ValueError):
        RatMatrix([[1, 2], [3]])
