"""Rank of matrices over F_2.

Two independent paths:

* :func:`rank_f2_dense` -- plain Gaussian elimination on a dense ``uint8``
  array (reference).
* :func:`rank_f2` -- sparse elimination with Markowitz-style pivoting
  (sparsest column, shortest row), switching to elimination on rows packed
  into 64-bit words once every remaining column is dense.
"""

from __future__ import annotations

import numba
import numpy as np
import scipy.sparse as sp
from numba.typed import List

__all__ = ["as_f2", "rank_f2", "rank_f2_dense", "rank_packed_words", "matmul_f2_is_zero"]

DENSE_SWITCH = 48


def as_f2(m) -> sp.csr_matrix:
    """Coerce to a CSR matrix with entries reduced mod 2 (explicit zeros dropped)."""
    if sp.issparse(m):
        out = sp.csr_matrix(m, dtype=np.int64, copy=True)
    else:
        out = sp.csr_matrix(np.asarray(m, dtype=np.int64))
    out.sum_duplicates()
    out.data %= 2
    out.eliminate_zeros()
    out.data = out.data.astype(np.uint8)
    return out


def rank_f2_dense(m) -> int:
    """Reference rank: row reduction of a dense 0/1 array."""
    a = (m.toarray() if sp.issparse(m) else np.array(m)).astype(np.uint8) % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(a[r:, c])[0]
        if len(piv) == 0:
            continue
        p = r + piv[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        hit = np.nonzero(a[:, c])[0]
        hit = hit[hit != r]
        if len(hit):
            a[hit] ^= a[r]
        r += 1
    return r


# ---------------------------------------------------------------------------
# Packed-word elimination
# ---------------------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _rank_words(a):
    """Rank of a (rows, words) uint64 bit matrix; destroys ``a``."""
    n_rows, n_words = a.shape
    r = 0
    for w in range(n_words):
        for b in range(64):
            if r == n_rows:
                return r
            bit = np.uint64(1) << np.uint64(b)
            p = -1
            for i in range(r, n_rows):
                if a[i, w] & bit:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for k in range(w, n_words):
                    t = a[p, k]
                    a[p, k] = a[r, k]
                    a[r, k] = t
            for i in range(r + 1, n_rows):
                if a[i, w] & bit:
                    for k in range(w, n_words):
                        a[i, k] ^= a[r, k]
            r += 1
    return r


def rank_packed_words(m) -> int:
    """Rank by elimination on rows packed into 64-bit words (no sparse phase)."""
    a = as_f2(m)
    if a.nnz == 0:
        return 0
    if a.shape[1] > a.shape[0]:
        a = a.T.tocsr()
    dense = a.toarray().astype(np.uint8)
    pad = (-dense.shape[1]) % 64
    bits = np.packbits(np.pad(dense, ((0, 0), (0, pad))), axis=1, bitorder="little")
    return int(_rank_words(bits.view(np.uint64).copy()))


# ---------------------------------------------------------------------------
# Sparse phase
# ---------------------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _xor_sorted(a, b):
    out = np.empty(len(a) + len(b), dtype=np.int64)
    i = j = n = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out[n] = a[i]
            i += 1
            n += 1
        elif a[i] > b[j]:
            out[n] = b[j]
            j += 1
            n += 1
        else:
            i += 1
            j += 1
    while i < len(a):
        out[n] = a[i]
        i += 1
        n += 1
    while j < len(b):
        out[n] = b[j]
        j += 1
        n += 1
    return out[:n]


@numba.njit(cache=True, nogil=True)
def _contains(a, x):
    lo, hi = 0, len(a)
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(a) and a[lo] == x


@numba.njit(cache=True, nogil=True)
def _heap_push(heap, size, key):
    if size == len(heap):
        grown = np.empty(2 * len(heap), dtype=np.int64)
        grown[:size] = heap
        heap = grown
    i = size
    heap[i] = key
    while i > 0:
        p = (i - 1) >> 1
        if heap[p] <= heap[i]:
            break
        heap[p], heap[i] = heap[i], heap[p]
        i = p
    return heap, size + 1


@numba.njit(cache=True, nogil=True)
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        s = i
        if left < size and heap[left] < heap[s]:
            s = left
        if right < size and heap[right] < heap[s]:
            s = right
        if s == i:
            break
        heap[s], heap[i] = heap[i], heap[s]
        i = s
    return top, size


@numba.njit(cache=True, nogil=True)
def _grow(arr, cap):
    out = np.empty(cap, dtype=np.int64)
    out[: len(arr)] = arr
    return out


@numba.njit(cache=True, nogil=True)
def _rank_sparse(n_rows, n_cols, indptr, indices, dense_switch):
    rows = List()
    for r in range(n_rows):
        rows.append(np.sort(indices[indptr[r] : indptr[r + 1]].astype(np.int64)))
    alive = np.ones(n_rows, dtype=np.bool_)
    count = np.zeros(n_cols, dtype=np.int64)
    # Per-column linked lists of rows that may contain the column (stale entries allowed).
    cap = max(16, 2 * len(indices))
    head = np.full(n_cols, -1, dtype=np.int64)
    nxt = np.empty(cap, dtype=np.int64)
    rof = np.empty(cap, dtype=np.int64)
    ne = 0
    for r in range(n_rows):
        for c in rows[r]:
            count[c] += 1
            rof[ne] = r
            nxt[ne] = head[c]
            head[c] = ne
            ne += 1
    heap = np.empty(max(16, n_cols), dtype=np.int64)
    hs = 0
    shift = np.int64(1) << 32
    for c in range(n_cols):
        if count[c] > 0:
            heap, hs = _heap_push(heap, hs, count[c] * shift + c)
    stamp = np.full(n_rows, -1, dtype=np.int64)
    rank = 0
    it = 0
    while hs > 0:
        key, hs = _heap_pop(heap, hs)
        c = key % shift
        if count[c] == 0 or count[c] != key // shift:
            continue
        if count[c] > dense_switch:
            break
        it += 1
        cand = List()
        best = -1
        bestlen = n_cols + 1
        e = head[c]
        while e >= 0:
            r = rof[e]
            if alive[r] and stamp[r] != it and _contains(rows[r], c):
                stamp[r] = it
                cand.append(r)
                if len(rows[r]) < bestlen:
                    bestlen = len(rows[r])
                    best = r
            e = nxt[e]
        head[c] = -1
        piv = rows[best]
        alive[best] = False
        rank += 1
        for x in piv:
            count[x] -= 1
        for r in cand:
            if r == best:
                continue
            old = rows[r]
            for x in piv:
                if _contains(old, x):
                    count[x] -= 1
                else:
                    count[x] += 1
                    if ne == cap:
                        cap *= 2
                        nxt = _grow(nxt, cap)
                        rof = _grow(rof, cap)
                    rof[ne] = r
                    nxt[ne] = head[x]
                    head[x] = ne
                    ne += 1
            new = _xor_sorted(old, piv)
            rows[r] = new
            if len(new) == 0:
                alive[r] = False
        for x in piv:
            if count[x] > 0:
                heap, hs = _heap_push(heap, hs, count[x] * shift + x)
    # Dense phase on whatever is left.
    col_map = np.full(n_cols, -1, dtype=np.int64)
    n_live_cols = 0
    for c in range(n_cols):
        if count[c] > 0:
            col_map[c] = n_live_cols
            n_live_cols += 1
    if n_live_cols == 0:
        return rank
    live_rows = 0
    for r in range(n_rows):
        if alive[r]:
            live_rows += 1
    n_words = (n_live_cols + 63) // 64
    a = np.zeros((live_rows, n_words), dtype=np.uint64)
    i = 0
    for r in range(n_rows):
        if alive[r]:
            for x in rows[r]:
                j = col_map[x]
                a[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
            i += 1
    return rank + _rank_words(a)


def rank_f2(m, dense_switch: int = DENSE_SWITCH) -> int:
    """Optimized rank: sparse pivoting, then packed-word elimination on the dense remainder.

    ``dense_switch`` is the column count above which the sparse phase stops;
    0 sends the whole matrix to the packed phase.
    """
    a = as_f2(m)
    if a.nnz == 0:
        return 0
    if a.shape[1] > a.shape[0]:
        a = a.T.tocsr()
    return int(_rank_sparse(a.shape[0], a.shape[1], a.indptr.astype(np.int64),
                            a.indices.astype(np.int64), dense_switch))


def matmul_f2_is_zero(a, b) -> bool:
    """True when ``a @ b`` vanishes over F_2."""
    if a.shape[0] == 0 or b.shape[1] == 0:
        return True
    prod = sp.csr_matrix(a, dtype=np.int64) @ sp.csr_matrix(b, dtype=np.int64)
    return not np.any(prod.data % 2)
