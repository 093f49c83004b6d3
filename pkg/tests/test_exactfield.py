import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from supportvar import exactfield as ef
from supportvar.exactfield import FieldSpec

FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(2, 2, (1, 1, 1)), FieldSpec(3, 2, (1, 0, 1))]


@st.composite
def field_and_matrix(draw, max_dim=6):
    F = draw(st.sampled_from(FIELDS))
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    vals = draw(st.lists(st.integers(0, F.q - 1), min_size=r * c, max_size=r * c))
    return F, np.array(vals, dtype=np.int64).reshape(r, c)


@settings(max_examples=60, deadline=None)
@given(field_and_matrix())
def test_rank_nullity(fm):
    F, M = fm
    K = ef.kernel_basis(M, F)
    assert ef.rank(M, F) + K.shape[0] == M.shape[1]
    if K.size and M.size:
        assert not np.any(F.matmul(M, K.T))


@settings(max_examples=60, deadline=None)
@given(field_and_matrix())
def test_rref_idempotent(fm):
    F, M = fm
    if M.shape[0] == 0:
        return
    R, r, piv = ef.rref(M, F)
    R2, r2, piv2 = ef.rref(R, F)
    assert np.array_equal(R, R2) and r == r2 and piv == piv2


@settings(max_examples=40, deadline=None)
@given(field_and_matrix(), st.integers(0, 2**31))
def test_solve_roundtrip(fm, seed):
    F, M = fm
    if M.shape[0] == 0:
        return
    x = F.random_matrix(np.random.default_rng(seed), M.shape[1], 2)
    b = F.matmul(M, x)
    y = ef.solve(M, b, F)
    assert y is not None and np.array_equal(F.matmul(M, y), b)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"q{F.q}")
def test_field_axioms(F):
    e = np.arange(F.q)
    a, b = np.meshgrid(e, e)
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.all(F.add(e, F.neg(e)) == 0)
    for x in range(1, F.q):
        assert F.mul(x, F.inv(x)) == 1
    for c in range(F.q):
        assert np.array_equal(F.mul(c, F.add(a, b)), F.add(F.mul(c, a), F.mul(c, b)))


def test_reducible_min_poly_rejected():
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))
    with pytest.raises(ValueError):
        FieldSpec(4)


def test_inverse_and_kron():
    F = FieldSpec(5)
    rng = np.random.default_rng(1)
    while True:
        A = F.random_matrix(rng, 3, 3)
        if ef.rank(A, F) == 3:
            break
    assert np.array_equal(F.matmul(A, ef.inverse(A, F)), ef.identity(3))
    B = F.random_matrix(rng, 2, 2)
    u, v = F.random_matrix(rng, 3, 1), F.random_matrix(rng, 2, 1)
    lhs = F.matmul(ef.kron(A, B, F), ef.kron(u, v, F))
    assert np.array_equal(lhs, ef.kron(F.matmul(A, u), F.matmul(B, v), F))
