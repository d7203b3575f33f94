"""Pure-NumPy fallback for the facet-adjacency kernel.

Mirrors the semantics of the compiled extension exactly: Gaussian
elimination with partial pivoting on max-abs-normalized rows, pivot
threshold ``tol``, and the vertex-pair filter on shared tight-set size.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def ge_rank(mat: np.ndarray, tol: float = 1e-9) -> int:
    """Rank by row reduction with partial pivoting.

    Rows are scaled to unit max-abs first so ``tol`` is a relative
    pivot threshold.
    """
    a = np.array(mat, dtype=float)
    if a.ndim != 2 or a.size == 0:
        return 0
    rows, cols = a.shape
    norms = np.abs(a).max(axis=1)
    nz = norms > 0.0
    a[nz] /= norms[nz, None]
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = int(np.argmax(np.abs(a[r:, c]))) + r
        if abs(a[piv, c]) <= tol:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        if r + 1 < rows:
            a[r + 1 :] -= a[r + 1 :, c : c + 1] * a[r]
        r += 1
    return r


def facet_adjacency_pairs(
    tight: np.ndarray, normals: np.ndarray, dim: int, tol: float = 1e-9
) -> tuple[np.ndarray, np.ndarray]:
    """Adjacent vertex pairs among vertices sharing enough tight halfspaces.

    Parameters
    ----------
    tight : (k, m) boolean matrix, row per vertex, column per halfspace.
    normals : (m, dim) halfspace normal matrix.
    dim : ambient dimension; two vertices are adjacent iff their common
        tight normals have rank exactly dim - 1.

    Returns two aligned index arrays (i, j) with i < j.
    """
    tight = np.ascontiguousarray(tight, dtype=bool)
    k = tight.shape[0]
    if k < 2:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
    need = dim - 1
    # cheap combinatorial pre-filter: |common tight set| >= dim - 1
    counts = tight.astype(np.int32) @ tight.astype(np.int32).T
    cand_i, cand_j = np.nonzero(np.triu(counts >= need, k=1))
    out_i: list[int] = []
    out_j: list[int] = []
    for i, j in zip(cand_i, cand_j):
        common = tight[i] & tight[j]
        if ge_rank(normals[common], tol) == need:
            out_i.append(int(i))
            out_j.append(int(j))
    return np.asarray(out_i, dtype=np.intp), np.asarray(out_j, dtype=np.intp)
