"""Quick oracle cross-checks behind the ``verify`` subcommand.

Each check validates one production path against an independent
brute-force computation at small scale.  The pytest suite runs the same
comparisons at larger scale; this module gives a fast field check.
"""

from __future__ import annotations

import numpy as np

from .elicitation import RunStatus, run
from .instances import generate_instance, toy_instance
from .matroid import MatroidKind, Sense, base_weight, enumerate_bases, greedy_opt_base
from .polytope import brute_force_vertex_enum, cut, initial_simplex
from .regret import EvalContext, SimulatedOracle, exact_mmr
from .uncertainty import preference_halfspace

KINDS = list(MatroidKind)


def check_greedy_vs_enumeration(seed: int, runs: int = 40) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for i in range(runs):
        kind = KINDS[i % len(KINDS)]
        n = int(rng.integers(4, 10))
        instance, _ = generate_instance(kind, n, 2, int(rng.integers(0, 2**31)))
        w = rng.uniform(0.0, 10.0, size=n)
        bases = enumerate_bases(instance)
        for sense in (Sense.MIN, Sense.MAX):
            _, got = greedy_opt_base(instance, w, sense)
            values = [base_weight(b, w) for b in bases]
            want = min(values) if sense is Sense.MIN else max(values)
            if abs(got - want) > 1e-9:
                return False, f"{kind.value} n={n} sense={sense.value}: {got} != {want}"
    return True, f"{runs} instances, both senses"


def check_cuts_vs_brute_force(seed: int, sequences: int = 12) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(sequences):
        p = int(rng.integers(3, 5))
        n = int(rng.integers(5, 9))
        _, Y = generate_instance(MatroidKind.UNIFORM, n, p, int(rng.integers(0, 2**31)))
        P = initial_simplex(p)
        oracle = SimulatedOracle.random(Y, rng)
        for _ in range(int(rng.integers(2, 8))):
            l, k = rng.choice(n, size=2, replace=False) + 1
            if oracle.answer(int(l), int(k)).value == "k":
                l, k = k, l
            h = preference_halfspace(Y, int(l), int(k))
            g = P.slack(h)
            if not ((g > 1e-9).any() and (g < -1e-9).any()):
                continue
            P = cut(P, h)
        verts, _, adj = brute_force_vertex_enum(P.normals, P.offsets, P.dim)
        if verts.shape[0] != P.num_vertices:
            return False, f"vertex count {P.num_vertices} != oracle {verts.shape[0]}"
        order = _match(P.vertices, verts)
        if order is None:
            return False, "vertex sets differ beyond 1e-7"
        mapped = {(min(order[i], order[j]), max(order[i], order[j]))
                  for i, j in P.adjacency_pairs()}
        if mapped != {(int(i), int(j)) for i, j in adj}:
            return False, "adjacency differs from oracle"
    return True, f"{sequences} random cut sequences"


def _match(A: np.ndarray, B: np.ndarray, tol: float = 1e-7) -> list[int] | None:
    """Map rows of A onto rows of B within tol, or None."""
    if A.shape != B.shape:
        return None
    used = set()
    order = []
    for a in A:
        d = np.linalg.norm(B - a, axis=1)
        j = int(np.argmin(d))
        if d[j] > tol or j in used:
            return None
        used.add(j)
        order.append(j)
    return order


def check_bound_soundness(seed: int, runs: int = 8) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for i in range(runs):
        kind = KINDS[i % len(KINDS)]
        instance, Y = generate_instance(kind, int(rng.integers(5, 9)), 3,
                                        int(rng.integers(0, 2**31)))
        oracle = SimulatedOracle.random(Y, rng)
        report = run(instance, Y, oracle, tau=0.0, sense=Sense.MIN)
        if report.status is not RunStatus.UNIFORM_OPTIMAL:
            return False, f"run did not certify optimality: {report.status.value}"
    return True, f"{runs} simulated runs certified"


def check_toy_golden() -> tuple[bool, str]:
    instance, Y = toy_instance()
    h = preference_halfspace(Y, 4, 5)
    if list(h.a) != [1.0, -1.0, -13.0] or h.c != 6.0:
        return False, f"toy constraint mismatch: {h.a}, {h.c}"
    P = cut(initial_simplex(4), h)
    if P.num_vertices != 6:
        return False, f"toy first cut gave {P.num_vertices} vertices"
    ctx = EvalContext(instance, Y, Sense.MAX)
    mmr, _ = exact_mmr(initial_simplex(4), ctx)
    if mmr <= 0:
        return False, "toy initial MMR should be positive"
    return True, "constraint, cut size, initial MMR"


def run_all(seed: int = 0, verbose: bool = False) -> bool:
    checks = [
        ("toy-golden", lambda: check_toy_golden()),
        ("greedy-vs-enumeration", lambda: check_greedy_vs_enumeration(seed)),
        ("cuts-vs-brute-force", lambda: check_cuts_vs_brute_force(seed)),
        ("bound-soundness", lambda: check_bound_soundness(seed)),
    ]
    all_ok = True
    for name, fn in checks:
        ok, detail = fn()
        all_ok &= ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return all_ok
