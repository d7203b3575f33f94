"""Parametric weight uncertainty: attribute matrix, simplex coordinates,
and the halfspace induced by a pairwise preference answer.

Weights are convex combinations of p attribute columns, ``w = Y @ lam``
with ``lam`` in the probability simplex.  Dropping the last coordinate
maps the simplex to sigma-space in R^(p-1), where the uncertainty region
is maintained as a polytope.  A stated preference "element l outweighs
element k" is the linear inequality ``w_l >= w_k``, which in sigma-space
is the halfspace ``a . sigma + c >= 0`` with

    a_j = y[l,j] - y[l,p] - y[k,j] + y[k,p]      (1 <= j <= p-1)
    c   = y[l,p] - y[k,p]
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matroid import InputError

__all__ = [
    "EPS",
    "AttributeMatrix",
    "PreferenceConstraint",
    "sigma_to_lambda",
    "lambda_to_sigma",
    "realize_weights",
    "preference_halfspace",
]

EPS = 1e-9


@dataclass(frozen=True)
class AttributeMatrix:
    """n x p matrix of nonnegative attribute values; y[i-1, j-1] is
    attribute j of element i."""

    y: np.ndarray

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 2:
            raise InputError("attribute matrix must be two-dimensional")
        n, p = y.shape
        if n < 2 or p < 2:
            raise InputError(f"attribute matrix needs n >= 2 and p >= 2, got {y.shape}")
        if (y < 0).any():
            raise InputError("attribute values must be nonnegative")
        y = y.copy()
        y.flags.writeable = False
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.y.shape[1]


@dataclass(frozen=True)
class PreferenceConstraint:
    """Halfspace {sigma : a . sigma + c >= 0} meaning w_l >= w_k."""

    l: int
    k: int
    a: np.ndarray
    c: float

    def evaluate(self, sigma: np.ndarray) -> np.ndarray | float:
        """Signed slack a . sigma + c; accepts one point or a stack."""
        sigma = np.asarray(sigma, dtype=float)
        return sigma @ self.a + self.c


def sigma_to_lambda(sigma: np.ndarray, eps: float = EPS) -> np.ndarray:
    """Lift a sigma-space point to the full simplex coordinate vector.

    lam_j = sigma_j for j < p and lam_p = 1 - sum(sigma).  Components
    within ``eps`` of the [0, 1] boundary are clamped; points outside
    the simplex beyond ``eps`` are rejected.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1:
        raise InputError("sigma must be a single point")
    total = sigma.sum()
    if (sigma < -eps).any() or total > 1.0 + eps:
        raise InputError(f"sigma {sigma} lies outside the simplex")
    lam = np.empty(sigma.size + 1)
    lam[:-1] = sigma
    lam[-1] = 1.0 - total
    return np.clip(lam, 0.0, 1.0)


def lambda_to_sigma(lam: np.ndarray) -> np.ndarray:
    """Drop the last simplex coordinate (inverse of sigma_to_lambda)."""
    lam = np.asarray(lam, dtype=float)
    return lam[:-1].copy()


def realize_weights(Y: AttributeMatrix, lam: np.ndarray) -> np.ndarray:
    """Scenario weights w = Y @ lam (nonnegative for simplex lam)."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (Y.p,):
        raise InputError(f"lambda must have length p={Y.p}, got shape {lam.shape}")
    return Y.y @ lam


def preference_halfspace(Y: AttributeMatrix, l: int, k: int) -> PreferenceConstraint:
    """Constraint expressing that element l is weighted at least element k.

    Substituting lam_p = 1 - sum(sigma) into w_l - w_k >= 0 gives the
    coefficients in the module docstring; for identical attribute rows
    the constraint degenerates to 0 >= 0 (vacuous).
    """
    n, p = Y.n, Y.p
    if l == k:
        raise InputError("preference requires two distinct elements")
    if not (1 <= l <= n and 1 <= k <= n):
        raise InputError(f"element indices must lie in 1..{n}")
    yl = Y.y[l - 1]
    yk = Y.y[k - 1]
    a = (yl[:-1] - yl[-1]) - (yk[:-1] - yk[-1])
    c = float(yl[-1] - yk[-1])
    a = a.copy()
    a.flags.writeable = False
    return PreferenceConstraint(l=l, k=k, a=a, c=c)
