"""Command-line entry point.

Subcommands: ``gen`` (write a random instance file), ``run`` (one
elicitation session against a simulated or scripted oracle), ``batch``
(seeded experiment grids with CSV output), ``interactive`` (terminal
Q&A), ``serve`` (HTTP session service), ``verify`` (oracle
cross-checks).

Exit codes: 0 success, 2 input error, 3 contradiction, 4 iteration cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .elicitation import (
    ElicitationEngine,
    ElicitationReport,
    RunStatus,
    run as run_elicitation,
)
from .instances import generate_instance, load_instance, save_instance, toy_instance
from .matroid import InputError, MatroidKind, Sense
from .regret import Choice, SimulatedOracle

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONTRADICTION = 3
EXIT_ITERATION_CAP = 4

TRACE_FIELDS = ["iteration", "vertices", "pool", "disparity_pairs", "mmr_bound", "cumulative_time_s"]
BATCH_FIELDS = ["kind", "n", "p", "seed", "queries", "iterations", "status",
                "final_bound", "wall_time_s", "trace_file"]


def report_to_dict(report: ElicitationReport, timings: bool = True) -> dict:
    doc = {
        "status": report.status.value,
        "final_base": list(report.final_base) if report.final_base else None,
        "final_bound": report.final_bound,
        "query_count": report.query_count,
        "sense": report.sense.value,
        "tau": report.tau,
        "aborted": report.aborted,
        "history": [
            {"l": q.l, "k": q.k, "answer": q.answer.value, "iteration": q.iteration}
            for q in report.history
        ],
        "trace": [
            {
                "iteration": row.iteration,
                "vertices": row.vertex_count,
                "pool": row.pool_size,
                "disparity_pairs": row.disparity_pairs,
                "mmr_bound": row.mmr_bound,
                "cumulative_time_s": row.elapsed_s if timings else 0.0,
            }
            for row in report.trace
        ],
    }
    return doc


def write_trace_csv(path: Path, report: ElicitationReport, timings: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TRACE_FIELDS)
        writer.writeheader()
        for row in report_to_dict(report, timings=timings)["trace"]:
            writer.writerow(row)


def _parse_tau(text: str) -> float:
    if text.strip().lower() in {"inf", "infinity"}:
        return float("inf")
    return float(text)


def _load_from_args(args) -> tuple:
    if args.instance:
        if args.instance == "toy8":
            return toy_instance()
        return load_instance(args.instance)
    if not args.kind:
        raise InputError("provide --instance PATH or a generator spec (--kind/--n/--p)")
    return generate_instance(args.kind, args.n, args.p, args.seed)


class ScriptedOracle:
    """Replays answers ('l'/'k' per line); raises StopIteration when drained."""

    def __init__(self, answers: list[str]):
        self._answers = [a.strip().lower() for a in answers if a.strip()]
        self._pos = 0

    def answer(self, l: int, k: int) -> Choice:
        if self._pos >= len(self._answers):
            raise StopIteration
        text = self._answers[self._pos]
        self._pos += 1
        if text not in ("l", "k"):
            raise InputError(f"scripted answer must be 'l' or 'k', got {text!r}")
        return Choice(text)


def _drive(engine: ElicitationEngine, oracle) -> tuple[ElicitationReport, bool]:
    """Run the engine against an oracle; aborted=True if answers ran out."""
    engine.advance()
    while engine.status is RunStatus.RUNNING and engine.pending is not None:
        l, k = engine.pending
        try:
            choice = oracle.answer(l, k)
        except StopIteration:
            return engine.report(aborted=True), True
        engine.submit(choice)
        engine.advance()
    return engine.report(), False


def _status_exit(report: ElicitationReport) -> int:
    if report.status is RunStatus.CONTRADICTION:
        return EXIT_CONTRADICTION
    if report.status is RunStatus.MAX_ITERATIONS:
        return EXIT_ITERATION_CAP
    return EXIT_OK


def cmd_gen(args) -> int:
    instance, Y = generate_instance(args.kind, args.n, args.p, args.seed)
    save_instance(args.out, instance, Y)
    print(f"wrote {args.kind} instance n={args.n} p={args.p} seed={args.seed} to {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    instance, Y = _load_from_args(args)
    engine = ElicitationEngine(instance, Y, tau=args.tau, sense=args.sense,
                               max_iters=args.max_iters)
    if args.answers:
        oracle = ScriptedOracle(Path(args.answers).read_text().splitlines())
    elif args.lambda_true:
        lam = np.asarray([float(x) for x in args.lambda_true.split(",")])
        oracle = SimulatedOracle.from_lambda(Y, lam)
    else:
        rng = np.random.default_rng([args.true_seed if args.true_seed is not None else args.seed, 1])
        oracle = SimulatedOracle.random(Y, rng)
    report, _ = _drive(engine, oracle)
    doc = report_to_dict(report, timings=args.timings == "on")
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    if args.trace_csv:
        write_trace_csv(Path(args.trace_csv), report, timings=args.timings == "on")
    print(json.dumps(doc if args.verbose else {
        "status": doc["status"], "queries": doc["query_count"],
        "final_bound": doc["final_bound"], "final_base": doc["final_base"],
    }, indent=2))
    return _status_exit(report)


def _batch_one(task: tuple) -> dict:
    kind, n, p, seed, tau, sense, max_iters = task
    start = time.perf_counter()
    try:
        instance, Y = generate_instance(kind, n, p, seed)
        oracle = SimulatedOracle.random(Y, np.random.default_rng([seed, 1]))
        report = run_elicitation(instance, Y, oracle, tau=tau, sense=sense,
                                 max_iters=max_iters)
    except Exception as exc:  # a failed run becomes a row, the batch continues
        return {
            "kind": kind, "n": n, "p": p, "seed": seed,
            "queries": 0, "iterations": 0,
            "status": f"Error: {exc}", "final_bound": "nan",
            "wall": time.perf_counter() - start, "report": None,
        }
    wall = time.perf_counter() - start
    return {
        "kind": kind, "n": n, "p": p, "seed": seed,
        "queries": report.query_count,
        "iterations": report.trace[-1].iteration if report.trace else 0,
        "status": report.status.value,
        "final_bound": repr(report.final_bound),
        "wall": wall,
        "report": report,
    }


def cmd_batch(args) -> int:
    out_dir = Path(args.out_dir)
    (out_dir / "traces").mkdir(parents=True, exist_ok=True)
    kinds = [MatroidKind(k.strip()) for k in args.kinds.split(",")]
    n_values = [int(x) for x in args.n_values.split(",")]
    p_values = [int(x) for x in args.p_values.split(",")]
    seeds = [args.seed + i for i in range(args.reps)]
    tasks = [
        (kind.value, n, p, seed, args.tau, args.sense, args.max_iters)
        for kind in kinds for n in n_values for p in p_values for seed in seeds
    ]
    timings = args.timings == "on"
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_batch_one, tasks))
    else:
        results = [_batch_one(t) for t in tasks]
    rows = []
    for res in results:
        key = f"{res['kind']}_n{res['n']}_p{res['p']}_s{res['seed']}"
        trace_file = f"traces/{key}.csv"
        if res["report"] is not None:
            write_trace_csv(out_dir / trace_file, res["report"], timings=timings)
        else:
            trace_file = ""
        rows.append({
            "kind": res["kind"], "n": res["n"], "p": res["p"], "seed": res["seed"],
            "queries": res["queries"], "iterations": res["iterations"],
            "status": res["status"], "final_bound": res["final_bound"],
            "wall_time_s": f"{res['wall']:.6f}" if timings else "0.000000",
            "trace_file": trace_file,
        })
    with open(out_dir / "runs.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BATCH_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} runs to {out_dir / 'runs.csv'}")
    return EXIT_OK


def cmd_interactive(args) -> int:
    instance, Y = _load_from_args(args)
    engine = ElicitationEngine(instance, Y, tau=args.tau, sense=args.sense,
                               max_iters=args.max_iters)
    engine.advance()
    aborted = False
    while engine.status is RunStatus.RUNNING and engine.pending is not None:
        l, k = engine.pending
        sys.stdout.write(f"Do you prefer element {l} or element {k}? [l={l} / k={k}]: ")
        sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:  # EOF: graceful abort with partial report
            aborted = True
            break
        text = line.strip().lower()
        if text not in ("l", "k"):
            print(f"please answer 'l' (element {l}) or 'k' (element {k})")
            continue
        engine.submit(Choice(text))
        state = engine.state
        print(
            f"  -> region has {state.polytope.num_vertices} vertices, "
            f"bound {state.mmr_bound:.4f}, status {engine.status.value}"
        )
        engine.advance()
    report = engine.report(aborted=aborted)
    if aborted:
        print("\nsession aborted; partial report follows")
    if report.final_base:
        print(f"recommended base: {sorted(report.final_base)} "
              f"(bound {report.final_bound:.6f}, status {report.status.value})")
    if args.out:
        Path(args.out).write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
    return EXIT_OK if aborted else _status_exit(report)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(journal_path=args.journal, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import selfcheck

    ok = selfcheck.run_all(seed=args.seed, verbose=True)
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matroid-elicit",
        description="Minimax-regret matroid bases via pairwise preference elicitation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, generator=True):
        p.add_argument("--tau", type=_parse_tau, default=0.0,
                       help="regret tolerance (number or 'inf')")
        p.add_argument("--sense", choices=[s.value for s in Sense], default="min")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--out", default=None, help="report JSON path")
        if generator:
            p.add_argument("--instance", default=None,
                           help="instance file path, or 'toy8' for the bundled 8-job example")
            p.add_argument("--kind", choices=[k.value for k in MatroidKind], default=None)
            p.add_argument("--n", type=int, default=10)
            p.add_argument("--p", type=int, default=4)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--kind", choices=[k.value for k in MatroidKind], required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_run = sub.add_parser("run", help="run one elicitation session")
    add_common(p_run)
    p_run.add_argument("--true-seed", type=int, default=None,
                       help="seed for the hidden true weights (default: --seed)")
    p_run.add_argument("--lambda-true", default=None,
                       help="comma-separated hidden simplex point for the oracle")
    p_run.add_argument("--answers", default=None,
                       help="scripted oracle: file with one 'l'/'k' answer per line")
    p_run.add_argument("--trace-csv", default=None)
    p_run.add_argument("--timings", choices=["on", "off"], default="on",
                       help="'off' zeroes wall-clock fields for reproducible bytes")
    p_run.add_argument("--verbose", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_batch = sub.add_parser("batch", help="seeded experiment grid")
    p_batch.add_argument("--kinds", default="scheduling",
                         help="comma-separated matroid kinds")
    p_batch.add_argument("--n-values", default="10,20,30", help="comma-separated")
    p_batch.add_argument("--p-values", default="4", help="comma-separated")
    p_batch.add_argument("--reps", type=int, default=20)
    p_batch.add_argument("--seed", type=int, default=0, help="first seed of the block")
    p_batch.add_argument("--tau", type=_parse_tau, default=0.0)
    p_batch.add_argument("--sense", choices=[s.value for s in Sense], default="min")
    p_batch.add_argument("--max-iters", type=int, default=500)
    p_batch.add_argument("--workers", type=int, default=1)
    p_batch.add_argument("--timings", choices=["on", "off"], default="on")
    p_batch.add_argument("--out-dir", required=True)
    p_batch.set_defaults(func=cmd_batch)

    p_int = sub.add_parser("interactive", help="answer queries at the terminal")
    add_common(p_int)
    p_int.set_defaults(func=cmd_interactive)

    p_serve = sub.add_parser("serve", help="launch the HTTP session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8731)
    p_serve.add_argument("--journal", default=None,
                         help="append-only JSONL journal for session recovery")
    p_serve.add_argument("--ui-dir", default=None,
                         help="directory of built frontend assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_verify = sub.add_parser("verify", help="run the oracle cross-checks")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
