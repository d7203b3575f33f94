"""Elicitation loop: per-vertex solves, disparity, query selection,
bound, answer application, and full runs."""

import numpy as np
import pytest

from matroid_elicit.elicitation import (
    ElicitationEngine,
    ElicitationState,
    RunStatus,
    apply_answer,
    disparity_table,
    mmr_upper_bound,
    run,
    select_query,
    solve_at_vertices,
    uniformly_optimal_check,
    unresolved_disparity_count,
)
from matroid_elicit.instances import generate_instance, toy_instance
from matroid_elicit.matroid import MatroidKind, Sense
from matroid_elicit.polytope import cut, initial_simplex
from matroid_elicit.regret import Choice, EvalContext, SimulatedOracle, exact_mmr
from matroid_elicit.uncertainty import AttributeMatrix

TOY_DISPARITY = {
    (1, 2): 1,
    (1, 3): 2,
    (1, 4): 1,
    (2, 3): 2,
    (2, 4): 1,
    (3, 5): 2,
    (4, 5): 3,
}


def toy_engine(tau=0.0, max_iters=500):
    instance, Y = toy_instance()
    return ElicitationEngine(instance, Y, tau=tau, sense=Sense.MAX, max_iters=max_iters)


def fresh_state(instance, Y, sense=Sense.MIN) -> ElicitationState:
    return ElicitationState(ctx=EvalContext(instance, Y, sense),
                            polytope=initial_simplex(Y.p))


# ------------------------------------------------------------ solve_at_vertices

def test_toy_vertex_solutions():
    engine = toy_engine()
    state = engine.state
    solve_at_vertices(state)
    by_vertex = {tuple(s.sigma): s.b_star for s in state.vertex_solutions}
    assert by_vertex[(0.0, 0.0, 0.0)] == (2, 3, 4, 6, 7)
    assert by_vertex[(1.0, 0.0, 0.0)] == (1, 3, 4, 6, 7)
    assert by_vertex[(0.0, 1.0, 0.0)] == (1, 2, 4, 6, 7)
    assert by_vertex[(0.0, 0.0, 1.0)] == (1, 2, 5, 6, 7)
    assert set(state.base_pool) == set(by_vertex.values())


def test_solutions_cached_across_cuts():
    engine = toy_engine()
    engine.advance()
    cache_before = dict(engine.state.ctx._cache)
    engine.submit(Choice.L)
    # surviving vertices reuse their cached scenarios
    for key, scen in cache_before.items():
        assert engine.state.ctx._cache.get(key) is scen


def test_single_vertex_polytope_pool_of_one():
    instance, Y = generate_instance(MatroidKind.PARTITION, 6, 2, seed=3)
    state = fresh_state(instance, Y)

    class H:
        a = np.array([1.0])
        c = -1.0

    state.polytope = cut(state.polytope, H())
    solve_at_vertices(state)
    assert len(state.vertex_solutions) == 1
    assert len(state.base_pool) == 1


# ----------------------------------------------------- uniformly_optimal_check

def test_toy_iteration0_not_uniformly_optimal():
    engine = toy_engine()
    solve_at_vertices(engine.state)
    assert uniformly_optimal_check(engine.state) is None


def test_single_vertex_region_uniformly_optimal():
    instance, Y = generate_instance(MatroidKind.UNIFORM, 5, 2, seed=4)
    state = fresh_state(instance, Y)

    class H:
        a = np.array([1.0])
        c = -1.0

    state.polytope = cut(state.polytope, H())
    solve_at_vertices(state)
    assert uniformly_optimal_check(state) == state.vertex_solutions[0].b_star


def test_dominant_elements_uniformly_optimal_immediately():
    instance, _ = generate_instance(MatroidKind.UNIFORM, 5, 3, seed=5)
    y = np.ones((5, 3))
    y[:3] = 50.0  # elements 1..3 dominate everywhere; k = 3
    state = fresh_state(instance, AttributeMatrix(y), Sense.MAX)
    solve_at_vertices(state)
    assert uniformly_optimal_check(state) == (1, 2, 3)


# ------------------------------------------------------------- disparity table

def test_toy_disparity_table_exact():
    engine = toy_engine()
    solve_at_vertices(engine.state)
    assert disparity_table(engine.state) == TOY_DISPARITY


def test_disparity_empty_for_single_base_pool():
    instance, Y = generate_instance(MatroidKind.UNIFORM, 5, 2, seed=6)
    state = fresh_state(instance, Y)
    solve_at_vertices(state)
    state.base_pool = (state.base_pool[0],)
    assert disparity_table(state) == {}


def test_disparity_matches_double_loop_recount():
    rng = np.random.default_rng(7)
    for seed in range(10):
        instance, Y = generate_instance(MatroidKind.SCHEDULING, 9, 3, seed)
        state = fresh_state(instance, Y)
        solve_at_vertices(state)
        table = disparity_table(state)
        recount: dict[tuple[int, int], int] = {}
        pool = state.base_pool
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                si, sj = set(pool[i]), set(pool[j])
                for l in si - sj:
                    for k in sj - si:
                        key = (min(l, k), max(l, k))
                        recount[key] = recount.get(key, 0) + 1
        assert table == recount


# ---------------------------------------------------------------- select_query

def test_toy_selects_4_5_then_5_6():
    engine = toy_engine()
    engine.advance()
    assert engine.pending == (4, 5)
    engine.submit(Choice.L)
    engine.advance()
    assert engine.pending == (5, 6)


def test_select_query_skips_asked_pairs():
    engine = toy_engine()
    engine.advance()
    engine.submit(Choice.L)
    engine.advance()
    asked = engine.state.asked
    assert (4, 5) in asked
    assert engine.pending not in asked


def test_select_query_filters_non_separating_pair():
    # two identical attribute rows: their halfspace is vacuous everywhere
    instance, _ = generate_instance(MatroidKind.UNIFORM, 4, 2, seed=8)
    y = np.array([[5.0, 5.0], [5.0, 5.0], [1.0, 2.0], [2.0, 1.0]])
    state = fresh_state(instance, AttributeMatrix(y))
    solve_at_vertices(state)
    state.base_pool = ((1, 3), (2, 4))  # force (1,2) among the disparity pairs
    table = disparity_table(state)
    assert (1, 2) in table
    q = select_query(state, {(1, 2): table[(1, 2)]})
    assert q is None


def test_select_query_stable_under_pool_reordering():
    engine = toy_engine()
    solve_at_vertices(engine.state)
    state = engine.state
    q1 = select_query(state)
    state.base_pool = tuple(reversed(state.base_pool))
    q2 = select_query(state)
    assert q1 == q2 == (4, 5)


# ------------------------------------------------------------- mmr_upper_bound

def test_toy_iteration0_bound_is_7():
    # hand computation: worst regrets per pooled base are 9, 7, 10, 10
    engine = toy_engine()
    solve_at_vertices(engine.state)
    bound, base = mmr_upper_bound(engine.state)
    assert bound == pytest.approx(7.0)
    assert base == (1, 2, 4, 6, 7)


def test_bound_zero_for_uniformly_optimal_state():
    instance, _ = generate_instance(MatroidKind.UNIFORM, 5, 3, seed=9)
    y = np.ones((5, 3))
    y[:3] = 50.0
    state = fresh_state(instance, AttributeMatrix(y), Sense.MAX)
    solve_at_vertices(state)
    bound, _ = mmr_upper_bound(state)
    assert bound == pytest.approx(0.0, abs=1e-9)


def test_bound_dominates_exact_mmr_on_random_states():
    for seed in range(12):
        kind = list(MatroidKind)[seed % 4]
        instance, Y = generate_instance(kind, 8, 3, seed)
        state = fresh_state(instance, Y)
        solve_at_vertices(state)
        bound, _ = mmr_upper_bound(state)
        exact, _ = exact_mmr(state.polytope, state.ctx)
        assert bound >= exact - 1e-9


# ---------------------------------------------------------------- apply_answer

def test_apply_answer_toy_first_cut():
    engine = toy_engine()
    engine.advance()
    apply_answer(engine.state, (4, 5), Choice.L)
    assert engine.state.polytope.num_vertices == 6
    assert engine.state.r == 1
    assert engine.state.history[-1].l == 4


def test_apply_answer_uninformative_is_noop():
    engine = toy_engine()
    engine.advance()
    before = engine.state.polytope
    # (6, 8): row 6 dominates row 8, so w6 >= w8 holds everywhere
    apply_answer(engine.state, (6, 8), Choice.L)
    assert engine.state.polytope is before
    assert engine.state.r == 1  # still logged
    assert engine.state.status is RunStatus.RUNNING


def test_apply_answer_contradiction_sets_status():
    instance, _ = generate_instance(MatroidKind.UNIFORM, 2, 2, seed=10)
    y = np.array([[1.0, 1.0], [9.0, 9.0]])
    state = fresh_state(instance, AttributeMatrix(y))
    solve_at_vertices(state)
    apply_answer(state, (1, 2), Choice.L)  # w1 >= w2 impossible
    assert state.status is RunStatus.CONTRADICTION


def test_apply_answer_keeps_true_point():
    instance, Y = toy_instance()
    rng = np.random.default_rng(11)
    for _ in range(10):
        oracle = SimulatedOracle.random(Y, rng)
        engine = ElicitationEngine(instance, Y, sense=Sense.MAX)
        engine.advance()
        while engine.status is RunStatus.RUNNING and engine.pending is not None:
            l, k = engine.pending
            engine.submit(oracle.answer(l, k))
            assert engine.state.polytope.contains(oracle.sigma_true)
            engine.advance()


# ------------------------------------------------------------------------- run

def test_run_tau_infinite_stops_immediately():
    instance, Y = toy_instance()
    oracle = SimulatedOracle.from_lambda(Y, np.array([0.25] * 4))
    report = run(instance, Y, oracle, tau=float("inf"), sense=Sense.MAX)
    assert report.status is RunStatus.BOUND_BELOW_TAU
    assert report.query_count == 0


def test_run_toy_terminates_with_mmr_zero():
    instance, Y = toy_instance()
    # consistent with both stated toy answers: prefers 4 over 5 and 6 over 5
    oracle = SimulatedOracle.from_lambda(Y, np.array([0.2, 0.3, 0.1, 0.4]))
    assert oracle.answer(4, 5) is Choice.L
    assert oracle.answer(5, 6) is Choice.K
    report = run(instance, Y, oracle, tau=0.0, sense=Sense.MAX)
    assert report.status is RunStatus.UNIFORM_OPTIMAL
    assert report.query_count <= 12
    assert report.final_bound == 0.0


def test_run_random_certifies_exact_mmr_zero():
    rng = np.random.default_rng(12)
    for seed in range(8):
        kind = list(MatroidKind)[seed % 4]
        instance, Y = generate_instance(kind, 8, 3, seed)
        oracle = SimulatedOracle.random(Y, rng)
        engine = ElicitationEngine(instance, Y, tau=0.0, sense=Sense.MIN)
        engine.advance()
        while engine.status is RunStatus.RUNNING and engine.pending is not None:
            l, k = engine.pending
            engine.submit(oracle.answer(l, k))
            engine.advance()
        assert engine.status is RunStatus.UNIFORM_OPTIMAL
        exact, _ = exact_mmr(engine.state.polytope, engine.state.ctx)
        assert exact == pytest.approx(0.0, abs=1e-9)
        # final trace row reports zero unresolved disparity
        assert engine.state.trace[-1].disparity_pairs == 0
        assert unresolved_disparity_count(engine.state) == 0


def test_run_never_repeats_a_query():
    instance, Y = toy_instance()
    rng = np.random.default_rng(13)
    for _ in range(5):
        oracle = SimulatedOracle.random(Y, rng)
        report = run(instance, Y, oracle, sense=Sense.MAX)
        pairs = [(min(q.l, q.k), max(q.l, q.k)) for q in report.history]
        assert len(pairs) == len(set(pairs))


def test_run_deterministic_for_fixed_oracle():
    instance, Y = toy_instance()
    oracle = SimulatedOracle.from_lambda(Y, np.array([0.1, 0.2, 0.3, 0.4]))
    rep1 = run(instance, Y, oracle, sense=Sense.MAX)
    rep2 = run(instance, Y, oracle, sense=Sense.MAX)
    assert [(q.l, q.k, q.answer) for q in rep1.history] == [
        (q.l, q.k, q.answer) for q in rep2.history
    ]
    assert rep1.final_base == rep2.final_base


def test_run_max_iters_cap():
    instance, Y = toy_instance()
    oracle = SimulatedOracle.from_lambda(Y, np.array([0.2, 0.3, 0.1, 0.4]))
    report = run(instance, Y, oracle, sense=Sense.MAX, max_iters=2)
    assert report.status in (RunStatus.MAX_ITERATIONS, RunStatus.UNIFORM_OPTIMAL)
    assert report.query_count <= 2


def test_trace_has_one_row_per_iteration():
    instance, Y = toy_instance()
    oracle = SimulatedOracle.from_lambda(Y, np.array([0.2, 0.3, 0.1, 0.4]))
    report = run(instance, Y, oracle, sense=Sense.MAX)
    assert [row.iteration for row in report.trace] == list(
        range(report.query_count + 1)
    )
    assert report.trace[0].vertex_count == 4
    assert report.trace[0].disparity_pairs == len(TOY_DISPARITY)
    assert report.trace[-1].mmr_bound == 0.0
