from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rp3kh.f2 import as_f2, matmul_f2_is_zero, rank_f2, rank_f2_dense, rank_packed_words


def random_f2(rng, rows, cols, density):
    return (rng.random((rows, cols)) < density).astype(np.uint8)


@pytest.mark.parametrize("size", [16, 64, 256])
def test_optimized_rank_matches_dense_reference(size):
    rng = np.random.default_rng(size)
    for trial in range(1000):
        rows = size if trial % 3 else int(rng.integers(1, 2 * size))
        density = float(rng.choice([0.005, 0.02, 0.1, 0.5]))
        m = random_f2(rng, rows, size, density)
        if trial % 7 == 0:
            # force rank deficiency through repeated rows
            m[rows // 2 :] = m[: rows - rows // 2]
        assert rank_f2(sp.csr_matrix(m)) == rank_f2_dense(m)


@pytest.mark.parametrize("switch", [0, 2, 48, 10**9])
def test_every_dense_switch_agrees(switch):
    rng = np.random.default_rng(switch % 1000)
    for _ in range(50):
        m = random_f2(rng, 80, 70, 0.05)
        assert rank_f2(m, dense_switch=switch) == rank_f2_dense(m)


matrices = arrays(np.uint8, st.tuples(st.integers(1, 24), st.integers(1, 24)), elements=st.integers(0, 1))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_properties(m):
    r = rank_f2(m)
    assert r == rank_f2_dense(m) == rank_packed_words(m)
    assert r == rank_f2(m.T)
    assert r <= min(m.shape)


@settings(max_examples=100, deadline=None)
@given(matrices, matrices)
def test_rank_of_block_diagonal_is_additive(a, b):
    assert rank_f2(sp.block_diag([a, b])) == rank_f2(a) + rank_f2(b)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_products_of_thin_factors(rows, cols, k, seed):
    rng = np.random.default_rng(seed)
    a = random_f2(rng, rows, k, 0.5)
    b = random_f2(rng, k, cols, 0.5)
    assert rank_f2((a.astype(int) @ b) % 2) <= k


def test_as_f2_reduces_mod_two():
    m = as_f2(np.array([[2, 3], [1, 4]]))
    assert m.toarray().tolist() == [[0, 1], [1, 0]]
    assert rank_f2(np.zeros((3, 4))) == 0


def test_matmul_zero_test():
    d1 = np.array([[1, 1]])
    d0 = np.array([[1], [1]])
    assert matmul_f2_is_zero(d1, d0)
    assert not matmul_f2_is_zero(d1, np.array([[1], [0]]))
