"""Matroid families, independence tests, and the greedy optimal-base solver.

Four matroid kinds are supported, all on a ground set indexed 1..n:

* uniform    -- independent iff |S| <= k
* graphic    -- elements are edges of a connected multigraph; independent
                iff the edge subset is a forest
* scheduling -- unit-time jobs with integer deadlines and release time 0;
                independent iff the i-th smallest deadline is >= i
* partition  -- disjoint blocks covering 1..n with capacity one per block

The greedy algorithm over any of these returns a minimum- or
maximum-weight base, which is the per-scenario subproblem of the
elicitation loop.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MatroidKind",
    "Sense",
    "MatroidInstance",
    "is_independent",
    "rank",
    "greedy_opt_base",
    "enumerate_bases",
    "InputError",
    "SizeCapError",
]

ENUMERATION_CAP = 20


class InputError(ValueError):
    """Malformed instance data or out-of-range element indices."""


class SizeCapError(InputError):
    """Instance exceeds the cap of a combinatorial (oracle-scale) routine."""


class MatroidKind(str, Enum):
    UNIFORM = "uniform"
    GRAPHIC = "graphic"
    SCHEDULING = "scheduling"
    PARTITION = "partition"


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class MatroidInstance:
    """Ground set 1..n plus the kind-specific independence structure.

    Immutable after construction; safe to share across threads.
    """

    kind: MatroidKind
    n: int
    uniform_k: int | None = None
    edges: tuple[tuple[int, int], ...] | None = None  # element i -> edges[i-1]
    deadlines: tuple[int, ...] | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None
    _block_of: dict[int, int] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"ground set must be nonempty, got n={self.n}")
        if self.kind is MatroidKind.UNIFORM:
            if self.uniform_k is None or not (1 <= self.uniform_k <= self.n):
                raise InputError(f"uniform matroid needs 1 <= k <= n, got k={self.uniform_k}")
        elif self.kind is MatroidKind.GRAPHIC:
            self._validate_graph()
        elif self.kind is MatroidKind.SCHEDULING:
            if self.deadlines is None or len(self.deadlines) != self.n:
                raise InputError("scheduling matroid needs one deadline per element")
            if any(d < 1 for d in self.deadlines):
                raise InputError("deadlines must be >= 1")
        elif self.kind is MatroidKind.PARTITION:
            self._validate_partition()

    def _validate_graph(self) -> None:
        if self.edges is None or len(self.edges) != self.n:
            raise InputError("graphic matroid needs one edge per element")
        verts: set[int] = set()
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop ({u},{v}) is never in a base; rejected")
            verts.add(u)
            verts.add(v)
        # connectivity via union-find over all edges (parallel edges allowed)
        parent = {w: w for w in verts}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        if len({find(w) for w in verts}) != 1:
            raise InputError("graphic matroid requires a connected graph")
        object.__setattr__(self, "_num_vertices", len(verts))

    def _validate_partition(self) -> None:
        if self.blocks is None:
            raise InputError("partition matroid needs blocks")
        seen: set[int] = set()
        block_of: dict[int, int] = {}
        for bi, block in enumerate(self.blocks):
            if not block:
                raise InputError("partition blocks must be nonempty")
            for e in block:
                if e in seen:
                    raise InputError(f"element {e} appears in two blocks")
                seen.add(e)
                block_of[e] = bi
        if seen != set(range(1, self.n + 1)):
            raise InputError("partition blocks must cover exactly 1..n")
        object.__setattr__(self, "_block_of", block_of)

    def check_subset(self, subset: Iterable[int]) -> tuple[int, ...]:
        """Normalize a subset to a sorted tuple, validating index range."""
        out = tuple(sorted(set(subset)))
        if out and (out[0] < 1 or out[-1] > self.n):
            raise InputError(f"element indices must lie in 1..{self.n}")
        return out


def is_independent(instance: MatroidInstance, subset: Iterable[int]) -> bool:
    """Kind-specific independence test; the empty set is always independent."""
    sub = instance.check_subset(subset)
    if not sub:
        return True
    kind = instance.kind
    if kind is MatroidKind.UNIFORM:
        return len(sub) <= instance.uniform_k  # type: ignore[operator]
    if kind is MatroidKind.SCHEDULING:
        # Hall-type prefix rule for unit jobs released at time 0: the i-th
        # smallest deadline must be at least i.
        ds = sorted(instance.deadlines[e - 1] for e in sub)  # type: ignore[index]
        return all(d >= i for i, d in enumerate(ds, start=1))
    if kind is MatroidKind.PARTITION:
        used: set[int] = set()
        for e in sub:
            b = instance._block_of[e]
            if b in used:
                return False
            used.add(b)
        return True
    # graphic: subset is independent iff it is a forest
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in sub:
        u, v = instance.edges[e - 1]  # type: ignore[index]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


class _GreedyBuilder:
    """Incremental independence oracle used by the greedy loop.

    Re-testing the whole partial set on each insertion would be O(n^2);
    each kind instead keeps just enough state for an O(rank) extension
    test.
    """

    def __init__(self, instance: MatroidInstance):
        self.instance = instance
        kind = instance.kind
        if kind is MatroidKind.GRAPHIC:
            self._parent: dict[int, int] = {}
        elif kind is MatroidKind.SCHEDULING:
            self._deadlines: list[int] = []
        elif kind is MatroidKind.PARTITION:
            self._used_blocks: set[int] = set()
        self._count = 0

    def try_add(self, e: int) -> bool:
        ins = self.instance
        kind = ins.kind
        if kind is MatroidKind.UNIFORM:
            if self._count < ins.uniform_k:  # type: ignore[operator]
                self._count += 1
                return True
            return False
        if kind is MatroidKind.GRAPHIC:
            parent = self._parent

            def find(x: int) -> int:
                parent.setdefault(x, x)
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            u, v = ins.edges[e - 1]  # type: ignore[index]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
            self._count += 1
            return True
        if kind is MatroidKind.SCHEDULING:
            ds = self._deadlines
            d = ins.deadlines[e - 1]  # type: ignore[index]
            pos = bisect.bisect_right(ds, d)
            ds.insert(pos, d)
            # inserting shifts positions pos.. by one; the prefix rule can
            # only break at or after the insertion point
            ok = True
            for i in range(pos, len(ds)):
                if ds[i] < i + 1:
                    ok = False
                    break
            if ok:
                self._count += 1
                return True
            ds.pop(pos)
            return False
        # partition
        b = ins._block_of[e]
        if b in self._used_blocks:
            return False
        self._used_blocks.add(b)
        self._count += 1
        return True


def rank(instance: MatroidInstance) -> int:
    """Common cardinality of all bases, via unit-weight greedy."""
    base, _ = greedy_opt_base(instance, np.ones(instance.n), Sense.MAX)
    return len(base)


def greedy_opt_base(
    instance: MatroidInstance,
    w: Sequence[float] | np.ndarray,
    sense: Sense | str = Sense.MIN,
) -> tuple[tuple[int, ...], float]:
    """Optimal base for the given weights by the matroid greedy algorithm.

    Elements are scanned by ascending weight for ``min`` (descending for
    ``max``), ties broken by ascending element index, and kept whenever
    the partial set stays independent.  Returns the base as a sorted
    tuple together with its total weight.
    """
    sense = Sense(sense)
    w = np.asarray(w, dtype=float)
    if w.shape != (instance.n,):
        raise InputError(f"weight vector must have length {instance.n}")
    order = np.argsort(w, kind="stable")
    if sense is Sense.MAX:
        # stable descending sort with ascending-index ties: sort by -w
        order = np.argsort(-w, kind="stable")
    builder = _GreedyBuilder(instance)
    chosen: list[int] = []
    for idx in order:
        e = int(idx) + 1
        if builder.try_add(e):
            chosen.append(e)
    chosen.sort()
    value = float(w[np.asarray(chosen) - 1].sum())
    return tuple(chosen), value


def base_weight(base: Sequence[int], w: np.ndarray) -> float:
    """Total weight of a base, summed the same way greedy reports values."""
    return float(w[np.asarray(base, dtype=int) - 1].sum())


def enumerate_bases(
    instance: MatroidInstance, cap: int = ENUMERATION_CAP
) -> list[tuple[int, ...]]:
    """All bases by depth-first extension with independence pruning.

    Refuses instances with more than ``cap`` elements to bound the
    combinatorial blowup; this routine exists as the exact oracle behind
    greedy and minimax-regret checks.
    """
    if instance.n > cap:
        raise SizeCapError(f"enumerate_bases capped at n={cap}, got n={instance.n}")
    r = rank(instance)
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], start: int) -> None:
        if len(prefix) == r:
            out.append(tuple(prefix))
            return
        # prune: not enough elements left to reach rank
        for e in range(start, instance.n - (r - len(prefix)) + 2):
            prefix.append(e)
            if is_independent(instance, prefix):
                extend(prefix, e + 1)
            prefix.pop()

    extend([], 1)
    return out


def random_independent_sets(
    instance: MatroidInstance, rng: np.random.Generator, count: int
) -> list[tuple[int, ...]]:
    """Sample independent sets by random greedy insertion (test helper)."""
    sets = []
    for _ in range(count):
        perm = rng.permutation(instance.n) + 1
        stop = rng.integers(0, instance.n + 1)
        cur: list[int] = []
        for e in perm[:stop]:
            if is_independent(instance, cur + [int(e)]):
                cur.append(int(e))
        sets.append(tuple(sorted(cur)))
    return sets
