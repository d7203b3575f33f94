"""Shared helpers for geometry and elicitation tests."""

from __future__ import annotations

import numpy as np

from matroid_elicit.polytope import UncertaintyPolytope, cut, initial_simplex
from matroid_elicit.uncertainty import AttributeMatrix, preference_halfspace


def match_vertices(A: np.ndarray, B: np.ndarray, tol: float = 1e-7) -> list[int] | None:
    """Bijection mapping rows of A onto rows of B within tol, or None."""
    if A.shape != B.shape:
        return None
    used: set[int] = set()
    order: list[int] = []
    for a in A:
        d = np.linalg.norm(B - a, axis=1)
        j = int(np.argmin(d))
        if d[j] > tol or j in used:
            return None
        used.add(j)
        order.append(j)
    return order


def adjacency_under(order: list[int], pairs: set[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(min(order[i], order[j]), max(order[i], order[j])) for i, j in pairs}


def random_cut_sequence(
    rng: np.random.Generator,
    p: int,
    max_cuts: int,
    n: int = 8,
) -> tuple[UncertaintyPolytope, AttributeMatrix, np.ndarray]:
    """Apply a consistent random preference-cut sequence to the simplex.

    Cuts are halfspaces of random element pairs oriented by a hidden
    true weight vector, exactly as production cuts arise; uninformative
    pairs are skipped.  Returns the polytope, the attribute matrix, and
    the hidden sigma point (always inside the region).
    """
    Y = AttributeMatrix(rng.integers(1, 10, size=(n, p)).astype(float))
    raw = rng.exponential(size=p)
    lam_true = raw / raw.sum()
    sigma_true = lam_true[:-1]
    w_true = Y.y @ lam_true
    P = initial_simplex(p)
    applied = 0
    attempts = 0
    while applied < max_cuts and attempts < max_cuts * 6:
        attempts += 1
        l, k = rng.choice(n, size=2, replace=False) + 1
        if w_true[l - 1] < w_true[k - 1]:
            l, k = k, l
        h = preference_halfspace(Y, int(l), int(k))
        g = P.slack(h)
        if not ((g > 1e-9).any() and (g < -1e-9).any()):
            continue
        P = cut(P, h)
        applied += 1
    return P, Y, sigma_true
