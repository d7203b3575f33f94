"""The incremental preference-elicitation loop.

Each iteration solves the greedy subproblem at every region vertex,
checks whether one base is optimal at all of them (which certifies
minimax regret zero over the whole region by convexity), computes the
regret upper bound over the pooled vertex-optimal bases, and otherwise
asks the decision maker about the most frequent disparity pair.  The
answer becomes a halfspace cut and the loop repeats.

The loop is exposed two ways: ``run`` drives it to termination against
an oracle object, while ``ElicitationEngine`` steps it one answer at a
time (the shape the HTTP service and the interactive CLI need).  Both
paths share the same state transitions, so replaying a session's
answers through either produces identical traces.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .matroid import InputError, MatroidInstance, Sense, base_weight
from .polytope import (
    ContradictionError,
    UncertaintyPolytope,
    UninformativeCutWarning,
    cut,
    initial_simplex,
)
from .regret import Choice, EvalContext, Scenario
from .uncertainty import AttributeMatrix, preference_halfspace

__all__ = [
    "RunStatus",
    "QueryRecord",
    "TraceRow",
    "ElicitationState",
    "ElicitationReport",
    "ElicitationEngine",
    "solve_at_vertices",
    "uniformly_optimal_check",
    "probe_uniformly_optimal",
    "disparity_table",
    "unresolved_disparity_count",
    "select_query",
    "mmr_upper_bound",
    "apply_answer",
    "run",
]

DEFAULT_MAX_ITERS = 500

#: relative tolerance for "this base attains the scenario optimum"
VALUE_RTOL = 1e-9


class RunStatus(str, Enum):
    RUNNING = "Running"
    UNIFORM_OPTIMAL = "UniformOptimal"
    BOUND_BELOW_TAU = "BoundBelowTau"
    CONTRADICTION = "Contradiction"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class QueryRecord:
    l: int
    k: int
    answer: Choice
    iteration: int


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    vertex_count: int
    pool_size: int
    disparity_pairs: int
    mmr_bound: float
    elapsed_s: float


@dataclass
class ElicitationState:
    """Mutable loop state; one instance per elicitation session."""

    ctx: EvalContext
    polytope: UncertaintyPolytope
    tau: float = 0.0
    max_iters: int = DEFAULT_MAX_ITERS
    r: int = 0
    vertex_solutions: list[Scenario] = field(default_factory=list)
    base_pool: tuple[tuple[int, ...], ...] = ()
    history: list[QueryRecord] = field(default_factory=list)
    mmr_bound: float = math.inf
    status: RunStatus = RunStatus.RUNNING
    pending: tuple[int, int] | None = None
    final_base: tuple[int, ...] | None = None
    trace: list[TraceRow] = field(default_factory=list)
    started_at: float = field(default_factory=time.perf_counter)

    @property
    def asked(self) -> set[tuple[int, int]]:
        return {(min(q.l, q.k), max(q.l, q.k)) for q in self.history}


def solve_at_vertices(state: ElicitationState) -> None:
    """Greedy-solve the subproblem at every region vertex.

    Scenario objects are cached by vertex coordinates inside the
    context, so only vertices created by the latest cut trigger fresh
    greedy solves.  The base pool is the deduplicated, lexicographically
    sorted collection of vertex-optimal bases.
    """
    state.vertex_solutions = state.ctx.scenarios(state.polytope)
    state.base_pool = tuple(sorted({s.b_star for s in state.vertex_solutions}))


def _pool_values(state: ElicitationState) -> tuple[np.ndarray, np.ndarray]:
    """(K, V) base-value matrix and (V,) optimal-value vector."""
    n = state.ctx.instance.n
    members = np.zeros((len(state.base_pool), n))
    for row, base in enumerate(state.base_pool):
        members[row, np.asarray(base, dtype=int) - 1] = 1.0
    W = np.stack([s.weights for s in state.vertex_solutions])
    z = np.asarray([s.z_star for s in state.vertex_solutions])
    return members @ W.T, z


def uniformly_optimal_check(state: ElicitationState) -> tuple[int, ...] | None:
    """A pooled base optimal at every vertex, if one exists.

    By convexity of regret such a base is optimal over the entire
    region, certifying minimax regret zero.
    """
    if not state.base_pool:
        return None
    values, z = _pool_values(state)
    tol = VALUE_RTOL * np.maximum(1.0, np.abs(z))
    if state.ctx.sense is Sense.MIN:
        ok = values <= z[None, :] + tol
    else:
        ok = values >= z[None, :] - tol
    hits = np.flatnonzero(ok.all(axis=1))
    if hits.size == 0:
        return None
    return state.base_pool[int(hits[0])]


def probe_uniformly_optimal(state: ElicitationState) -> tuple[int, ...] | None:
    """Certificate attempt beyond the pool: greedy at the vertex centroid.

    Vertices created by cuts sit exactly on preference hyperplanes, so
    tie-broken greedy can return a different optimal base at every
    vertex even when one base is optimal across the region; that base
    then never enters the pool and the pooled check cannot see it.  At
    a relative-interior point only region-wide ties remain, so the
    greedy base there is the natural candidate; it is accepted only if
    it attains the optimum at every vertex (the same certificate the
    pooled check uses), hence no false positives.
    """
    if not state.vertex_solutions:
        return None
    centroid = state.polytope.vertices.mean(axis=0)
    candidate = state.ctx.scenario(centroid).b_star
    for s in state.vertex_solutions:
        tol = VALUE_RTOL * max(1.0, abs(s.z_star))
        if abs(base_weight(candidate, s.weights) - s.z_star) > tol:
            return None
    return candidate


def disparity_table(state: ElicitationState) -> dict[tuple[int, int], int]:
    """Frequency of each unordered disparity pair over pooled base pairs.

    (l, k) is a disparity pair of bases (B, B') when l is exclusive to
    one and k exclusive to the other; its frequency counts how many
    unordered base pairs exhibit it.  Computed via the membership
    matrix: with A[l, k] = #bases containing l but not k, the frequency
    of {l, k} is A[l, k] * A[k, l].
    """
    if len(state.base_pool) < 2:
        return {}
    n = state.ctx.instance.n
    members = np.zeros((len(state.base_pool), n))
    for row, base in enumerate(state.base_pool):
        members[row, np.asarray(base, dtype=int) - 1] = 1.0
    A = members.T @ (1.0 - members)  # (n, n)
    freq = A * A.T
    out: dict[tuple[int, int], int] = {}
    for l, k in zip(*np.nonzero(np.triu(freq, k=1))):
        out[(int(l) + 1, int(k) + 1)] = int(round(freq[l, k]))
    return out


def _optimality_matrix(state: ElicitationState) -> tuple[np.ndarray, np.ndarray]:
    """(K, V) bool matrix "pooled base optimal at vertex", plus the pool
    index of each vertex's recorded base."""
    values, z = _pool_values(state)
    tol = VALUE_RTOL * np.maximum(1.0, np.abs(z))
    if state.ctx.sense is Sense.MIN:
        opt = values <= z[None, :] + tol
    else:
        opt = values >= z[None, :] - tol
    pool_index = {b: i for i, b in enumerate(state.base_pool)}
    rec = np.asarray([pool_index[s.b_star] for s in state.vertex_solutions])
    return opt, rec


def unresolved_disparity_count(state: ElicitationState) -> int:
    """Distinct disparity pairs among base pairs not explained by ties.

    This is the convergence metric reported in the per-iteration trace:
    a pair of pooled bases no longer witnesses disagreement once a
    single pooled base is optimal at every vertex where either of them
    was recorded.  The count is therefore zero exactly when one base
    explains the whole vertex set, in particular at the uniformly
    optimal stop.
    """
    pool = state.base_pool
    if len(pool) < 2:
        return 0
    opt, rec = _optimality_matrix(state)
    if opt.all(axis=1).any():
        return 0
    # C[b, i]: base b optimal at every vertex whose recorded base is i
    K = len(pool)
    n = state.ctx.instance.n
    C = np.ones((K, K), dtype=bool)
    for i in range(K):
        C[:, i] = opt[:, rec == i].all(axis=1)
    resolved = (C.astype(np.float32).T @ C.astype(np.float32)) > 0.5
    members = np.zeros((K, n))
    for row, base in enumerate(pool):
        members[row, np.asarray(base, dtype=int) - 1] = 1.0
    # all-pairs disparity counts factorize through the membership matrix;
    # subtract the (typically few) resolved pairs, counted explicitly
    A = members.T @ (1.0 - members)
    full = A * A.T
    gone = np.zeros((n, n))
    for i, j in np.argwhere(np.triu(resolved, k=1)):
        in_i = members[i] > 0.5
        in_j = members[j] > 0.5
        li = np.flatnonzero(in_i & ~in_j)
        kj = np.flatnonzero(~in_i & in_j)
        gone[np.ix_(li, kj)] += 1.0
    gone = gone + gone.T
    remaining = np.triu(full - gone, k=1)
    return int((remaining > 0.5).sum())


def select_query(
    state: ElicitationState, table: dict[tuple[int, int], int] | None = None
) -> tuple[int, int] | None:
    """Most frequent disparity pair that can still shrink the region.

    A pair is skipped when it was already asked, or when its halfspace
    fails to strictly separate the vertex set (then either answer is
    already implied and the cut would be a no-op).  Ties are broken
    lexicographically so runs are deterministic.
    """
    if table is None:
        table = disparity_table(state)
    asked = state.asked
    eps = 1e-9
    for (l, k), _ in sorted(table.items(), key=lambda it: (-it[1], it[0])):
        if (l, k) in asked:
            continue
        h = preference_halfspace(state.ctx.Y, l, k)
        g = state.polytope.slack(h)
        if (g > eps).any() and (g < -eps).any():
            return (l, k)
    return None


def mmr_upper_bound(state: ElicitationState) -> tuple[float, tuple[int, ...]]:
    """Minimum over pooled bases of their worst vertex regret.

    This is an upper bound on the region's true minimax regret (the
    pool is a subset of all bases and vertex maxima are exact for
    convex regret); it also stores the bound and its argmin base on
    the state.
    """
    values, z = _pool_values(state)
    if state.ctx.sense is Sense.MIN:
        regrets = values - z[None, :]
    else:
        regrets = z[None, :] - values
    worst = regrets.max(axis=1)
    idx = min(range(len(state.base_pool)), key=lambda i: (worst[i], state.base_pool[i]))
    bound = float(worst[idx])
    state.mmr_bound = bound
    state.final_base = state.base_pool[idx]
    return bound, state.base_pool[idx]


def apply_answer(
    state: ElicitationState, pair: tuple[int, int], answer: Choice
) -> None:
    """Cut the region with the answered preference and refresh the state.

    A cut that keeps every vertex is logged but leaves the region
    unchanged (select_query filters such pairs; this path is defensive
    for scripted answer streams).  A cut that would empty the region
    marks the session contradictory.
    """
    l, k = pair
    preferred, other = (l, k) if answer is Choice.L else (k, l)
    h = preference_halfspace(state.ctx.Y, preferred, other)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UninformativeCutWarning)
            state.polytope = cut(state.polytope, h)
    except ContradictionError:
        state.status = RunStatus.CONTRADICTION
    state.history.append(QueryRecord(l=l, k=k, answer=answer, iteration=state.r))
    state.r += 1
    state.pending = None
    if state.status is not RunStatus.CONTRADICTION:
        solve_at_vertices(state)
        mmr_upper_bound(state)


@dataclass(frozen=True)
class ElicitationReport:
    status: RunStatus
    final_base: tuple[int, ...] | None
    final_bound: float
    query_count: int
    history: tuple[QueryRecord, ...]
    trace: tuple[TraceRow, ...]
    sense: Sense
    tau: float
    aborted: bool = False


class ElicitationEngine:
    """Steps the loop one pending query at a time.

    ``advance`` runs solve/check/bound/select until a query awaits an
    answer or the session reaches a terminal status; ``submit`` applies
    one answer.  Callers alternate the two.
    """

    def __init__(
        self,
        instance: MatroidInstance,
        Y: AttributeMatrix,
        tau: float = 0.0,
        sense: Sense | str = Sense.MIN,
        max_iters: int = DEFAULT_MAX_ITERS,
    ):
        if Y.n != instance.n:
            raise InputError(
                f"attribute matrix has {Y.n} rows but the instance has {instance.n} elements"
            )
        if tau < 0:
            raise InputError("tau must be >= 0")
        if max_iters < 1:
            raise InputError("max_iters must be >= 1")
        self.state = ElicitationState(
            ctx=EvalContext(instance, Y, Sense(sense)),
            polytope=initial_simplex(Y.p),
            tau=tau,
            max_iters=max_iters,
        )

    @property
    def status(self) -> RunStatus:
        return self.state.status

    @property
    def pending(self) -> tuple[int, int] | None:
        return self.state.pending

    def advance(self) -> None:
        state = self.state
        while state.status is RunStatus.RUNNING and state.pending is None:
            solve_at_vertices(state)
            uo = uniformly_optimal_check(state)
            query = None
            stop: RunStatus | None = None
            if uo is None:
                table = disparity_table(state)
                bound, _ = mmr_upper_bound(state)
                if bound <= state.tau:
                    stop = RunStatus.BOUND_BELOW_TAU
                elif state.r >= state.max_iters:
                    stop = RunStatus.MAX_ITERATIONS
                else:
                    query = select_query(state, table)
                    if query is None:
                        # every disparity answer is already implied by the
                        # region; re-verify optimality beyond the pool
                        uo = probe_uniformly_optimal(state)
                        if uo is not None:
                            state.base_pool = tuple(
                                sorted(set(state.base_pool) | {uo})
                            )
                        else:
                            stop = RunStatus.MAX_ITERATIONS
            if uo is not None:
                state.mmr_bound = 0.0
                state.final_base = uo
                state.status = RunStatus.UNIFORM_OPTIMAL
                self._record()
                return
            self._record()
            if stop is not None:
                state.status = stop
                return
            state.pending = query

    def submit(self, answer: Choice) -> None:
        state = self.state
        if state.pending is None:
            raise InputError("no pending query to answer")
        apply_answer(state, state.pending, Choice(answer))

    def _record(self) -> None:
        state = self.state
        state.trace.append(
            TraceRow(
                iteration=state.r,
                vertex_count=state.polytope.num_vertices,
                pool_size=len(state.base_pool),
                disparity_pairs=unresolved_disparity_count(state),
                mmr_bound=state.mmr_bound,
                elapsed_s=time.perf_counter() - state.started_at,
            )
        )

    def report(self, aborted: bool = False) -> ElicitationReport:
        state = self.state
        return ElicitationReport(
            status=state.status,
            final_base=state.final_base,
            final_bound=0.0
            if state.status is RunStatus.UNIFORM_OPTIMAL
            else state.mmr_bound,
            query_count=len(state.history),
            history=tuple(state.history),
            trace=tuple(state.trace),
            sense=state.ctx.sense,
            tau=state.tau,
            aborted=aborted,
        )


def run(
    instance: MatroidInstance,
    Y: AttributeMatrix,
    oracle,
    tau: float = 0.0,
    sense: Sense | str = Sense.MIN,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> ElicitationReport:
    """Drive the loop to termination against an oracle.

    The oracle is anything with ``answer(l, k) -> Choice``; see
    ``regret.SimulatedOracle`` for the seeded stand-in.
    """
    engine = ElicitationEngine(instance, Y, tau=tau, sense=sense, max_iters=max_iters)
    engine.advance()
    while engine.status is RunStatus.RUNNING and engine.pending is not None:
        l, k = engine.pending
        engine.submit(oracle.answer(l, k))
        engine.advance()
    return engine.report()
