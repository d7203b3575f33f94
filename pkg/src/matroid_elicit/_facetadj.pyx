# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled facet-adjacency kernel.

Hot loop of every polytope cut: for each pair of vertices lying on the
new facet, decide adjacency by the rank of their shared tight-halfspace
normals.  Tight sets are packed into uint64 words so the pair filter is
a handful of popcounts; the rank test is an in-place Gaussian
elimination on a scratch buffer.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport uint64_t

cnp.import_array()

BACKEND_NAME = "compiled"


cdef extern from *:
    """
    static inline int popcount64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    #endif
    }
    static inline int ctz64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_ctzll(x);
    #else
        int c = 0;
        while (!(x & 1ULL)) { x >>= 1; c++; }
        return c;
    #endif
    }
    """
    int popcount64(unsigned long long x) nogil
    int ctz64(unsigned long long x) nogil


cdef int _ge_rank_inplace(double* a, int rows, int cols, double tol) nogil:
    """Rank of the rows x cols row-major buffer ``a`` (destroyed)."""
    cdef int r = 0, c, i, j, piv
    cdef double best, val, scale, factor
    # normalize rows to unit max-abs so tol acts relatively
    for i in range(rows):
        scale = 0.0
        for j in range(cols):
            val = fabs(a[i * cols + j])
            if val > scale:
                scale = val
        if scale > 0.0:
            for j in range(cols):
                a[i * cols + j] /= scale
    for c in range(cols):
        if r >= rows:
            break
        piv = r
        best = fabs(a[r * cols + c])
        for i in range(r + 1, rows):
            val = fabs(a[i * cols + c])
            if val > best:
                best = val
                piv = i
        if best <= tol:
            continue
        if piv != r:
            for j in range(cols):
                val = a[r * cols + j]
                a[r * cols + j] = a[piv * cols + j]
                a[piv * cols + j] = val
        scale = a[r * cols + c]
        for j in range(cols):
            a[r * cols + j] /= scale
        for i in range(r + 1, rows):
            factor = a[i * cols + c]
            for j in range(cols):
                a[i * cols + j] -= factor * a[r * cols + j]
        r += 1
    return r


def ge_rank(mat, double tol=1e-9):
    """Rank by partial-pivot row reduction (same contract as the fallback)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] a = np.ascontiguousarray(
        mat, dtype=np.float64
    ).copy()
    if a.size == 0:
        return 0
    return _ge_rank_inplace(<double*> a.data, a.shape[0], a.shape[1], tol)


def facet_adjacency_pairs(tight, normals, int dim, double tol=1e-9):
    """Adjacent vertex pairs among on-facet vertices; see pure fallback."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] tight_u8 = np.ascontiguousarray(
        tight, dtype=np.uint8
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] norm = np.ascontiguousarray(
        normals, dtype=np.float64
    )
    cdef int k = tight_u8.shape[0]
    cdef int m = tight_u8.shape[1]
    if k < 2:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty.copy()
    cdef int words = (m + 63) // 64
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] bits = np.zeros(
        (k, words), dtype=np.uint64
    )
    cdef int i, j, w, b, need, nc, row
    for i in range(k):
        for j in range(m):
            if tight_u8[i, j]:
                bits[i, j >> 6] |= (<uint64_t> 1) << (j & 63)
    need = dim - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] scratch = np.empty(
        (m, dim), dtype=np.float64
    )
    cdef cnp.ndarray[cnp.uint64_t, ndim=1, mode="c"] common = np.zeros(
        words, dtype=np.uint64
    )
    out_i = []
    out_j = []
    cdef uint64_t word
    cdef int col, rank_, c_
    for i in range(k):
        for j in range(i + 1, k):
            nc = 0
            for w in range(words):
                common[w] = bits[i, w] & bits[j, w]
                nc += popcount64(common[w])
            if nc < need:
                continue
            # gather shared normals into the scratch buffer
            row = 0
            for w in range(words):
                word = common[w]
                while word != 0:
                    b = ctz64(word)
                    word &= word - 1  # clear lowest set bit
                    col = (w << 6) + b
                    for c_ in range(dim):
                        scratch[row, c_] = norm[col, c_]
                    row += 1
            rank_ = _ge_rank_inplace(<double*> scratch.data, row, dim, tol)
            if rank_ == need:
                out_i.append(i)
                out_j.append(j)
    return np.asarray(out_i, dtype=np.intp), np.asarray(out_j, dtype=np.intp)
