"""Exact regret machinery and the simulated decision maker.

Regret of a base in a scenario is the gap to that scenario's optimal
value (nonnegative in both objective senses).  Because the scenario
weights are affine in sigma and the scenario optimum is a pointwise
min/max of affine functions, the regret of a fixed base is convex over
the region, so its maximum is attained at a vertex: enumerating region
vertices is exact and no LP is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .matroid import (
    InputError,
    MatroidInstance,
    Sense,
    base_weight,
    enumerate_bases,
    greedy_opt_base,
    is_independent,
)
from .polytope import UncertaintyPolytope
from .uncertainty import AttributeMatrix, realize_weights, sigma_to_lambda

__all__ = [
    "Choice",
    "Scenario",
    "EvalContext",
    "SimulatedOracle",
    "regret",
    "max_regret",
    "exact_mmr",
]

#: quantization used to key scenario caches by vertex coordinates; finer
#: than the vertex merge radius so distinct vertices never share a key
CACHE_DECIMALS = 8


class Choice(str, Enum):
    """Answer to a preference query (l, k): which element outweighs."""

    L = "l"
    K = "k"


@dataclass(frozen=True)
class Scenario:
    """One realization: a region vertex with its optimal base."""

    sigma: np.ndarray
    lam: np.ndarray
    weights: np.ndarray
    z_star: float
    b_star: tuple[int, ...]


@dataclass
class EvalContext:
    """Instance + attribute matrix + sense, with a scenario cache."""

    instance: MatroidInstance
    Y: AttributeMatrix
    sense: Sense = Sense.MIN
    _cache: dict[tuple[float, ...], Scenario] = field(default_factory=dict, repr=False)

    def scenario(self, sigma: np.ndarray) -> Scenario:
        key = tuple(np.round(np.asarray(sigma, dtype=float), CACHE_DECIMALS))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        lam = sigma_to_lambda(sigma)
        w = realize_weights(self.Y, lam)
        b_star, z_star = greedy_opt_base(self.instance, w, self.sense)
        scen = Scenario(sigma=np.asarray(sigma, dtype=float), lam=lam, weights=w,
                        z_star=z_star, b_star=b_star)
        self._cache[key] = scen
        return scen

    def scenarios(self, P: UncertaintyPolytope) -> list[Scenario]:
        return [self.scenario(v) for v in P.vertices]


def regret(B: tuple[int, ...], s: Scenario, sense: Sense | str = Sense.MIN,
           ctx: EvalContext | None = None) -> float:
    """Regret of base B in scenario s; always >= 0, zero iff B optimal."""
    if ctx is not None:
        if not is_independent(ctx.instance, B) or len(B) != len(s.b_star):
            raise InputError(f"{B} is not a base of the instance")
    value = base_weight(B, s.weights)
    if Sense(sense) is Sense.MIN:
        return value - s.z_star
    return s.z_star - value


def max_regret(
    B: tuple[int, ...], P: UncertaintyPolytope, ctx: EvalContext
) -> tuple[float, np.ndarray]:
    """Worst-case regret of B over the region and an attaining vertex."""
    best = -np.inf
    arg = P.vertices[0]
    for v in P.vertices:
        s = ctx.scenario(v)
        r = regret(B, s, ctx.sense)
        if r > best:
            best = r
            arg = v
    return float(best), np.asarray(arg)


def exact_mmr(
    P: UncertaintyPolytope, ctx: EvalContext, cap: int = 20
) -> tuple[float, tuple[int, ...]]:
    """Minimax regret by full base enumeration (oracle scale only).

    Ties on the minimizing value are broken by lexicographically
    smallest base for determinism.
    """
    bases = enumerate_bases(ctx.instance, cap=cap)
    scens = ctx.scenarios(P)
    n = ctx.instance.n
    ind = np.zeros((len(bases), n))
    for row, b in enumerate(bases):
        ind[row, np.asarray(b, dtype=int) - 1] = 1.0
    W = np.stack([s.weights for s in scens])  # (V, n)
    z = np.asarray([s.z_star for s in scens])  # (V,)
    values = ind @ W.T  # (K, V)
    if ctx.sense is Sense.MIN:
        regrets = values - z[None, :]
    else:
        regrets = z[None, :] - values
    worst = regrets.max(axis=1)
    order = min(range(len(bases)), key=lambda i: (worst[i], bases[i]))
    return float(worst[order]), bases[order]


@dataclass(frozen=True)
class SimulatedOracle:
    """Stand-in decision maker answering from hidden true weights.

    Every answer is a true statement about ``weights_true``, so the cut
    it induces always keeps the true sigma point in the region.  Weight
    ties are answered as "l preferred" deterministically.
    """

    lam_true: np.ndarray
    weights_true: np.ndarray

    @classmethod
    def from_lambda(cls, Y: AttributeMatrix, lam_true: np.ndarray) -> "SimulatedOracle":
        lam_true = np.asarray(lam_true, dtype=float)
        if (lam_true < -1e-12).any() or abs(lam_true.sum() - 1.0) > 1e-9:
            raise InputError("lam_true must lie in the probability simplex")
        return cls(lam_true=lam_true, weights_true=realize_weights(Y, lam_true))

    @classmethod
    def random(cls, Y: AttributeMatrix, rng: np.random.Generator) -> "SimulatedOracle":
        """Hidden point uniform over the simplex (normalized exponentials)."""
        raw = rng.exponential(size=Y.p)
        return cls.from_lambda(Y, raw / raw.sum())

    @property
    def sigma_true(self) -> np.ndarray:
        return self.lam_true[:-1]

    def answer(self, l: int, k: int) -> Choice:
        if l == k:
            raise InputError("query requires two distinct elements")
        return Choice.L if self.weights_true[l - 1] >= self.weights_true[k - 1] else Choice.K
