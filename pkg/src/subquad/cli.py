"""Command line entry point: ``subquad {gen,run,sweep,mrsim}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    ALGORITHMS,
    ExperimentSpec,
    query_growth,
    rows_to_csv,
    rows_to_json,
    run_experiment,
)
from .instances import gen_pair
from .mapreduce import ClusterConfig, mr_edit
from .strings import edit_distance


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--ops", type=int, default=None, help="planted edit operations (default n/16)")
    p.add_argument("--out", default=None, help="output file (.json for JSON, otherwise CSV)")


def cmd_gen(args) -> int:
    s1, s2 = gen_pair(args.n, args.ops if args.ops is not None else max(1, args.n // 16), args.seed)
    doc = {"s1": s1.decode("latin-1"), "s2": s2.decode("latin-1"), "n": args.n, "seed": args.seed}
    _emit(json.dumps(doc), args.out)
    return 0


def _spec_from(args) -> ExperimentSpec:
    if getattr(args, "spec", None):
        doc = json.loads(Path(args.spec).read_text())
        return ExperimentSpec.from_dict(doc)
    return ExperimentSpec(
        algorithm=args.algo,
        n=args.n,
        seed=args.seed,
        epsilon=args.epsilon,
        planted_ops=args.ops,
        x=args.x,
        repetitions=args.reps,
    ).validate()


def _write_rows(rows, out: str | None) -> None:
    if out and out.endswith(".json"):
        _emit(rows_to_json(rows), out)
    else:
        _emit(rows_to_csv(rows), out)


def cmd_run(args) -> int:
    rows = run_experiment(_spec_from(args), workers=args.workers)
    _write_rows(rows, args.out)
    bad = [r for r in rows if r.violates]
    for r in bad:
        print(f"factor bound violated: n={r.n} seed={r.seed} ratio={r.ratio}", file=sys.stderr)
    return 1 if bad else 0


def cmd_sweep(args) -> int:
    ns = [int(v) for v in args.ns.split(",")]
    if args.algo in ("metric", "metric-fast"):
        variant = "threshold" if args.algo == "metric" else "fast"
        res = query_growth(ns, range(args.seed, args.seed + args.reps), variant, args.epsilon)
        lines = ["n,charged_queries"] + [f"{n},{c:.1f}" for n, c in zip(res["n"], res["charged"])]
        _emit("\n".join(lines), args.out)
        print(f"log-log slope: {res['slope']:.3f}", file=sys.stderr)
        return 0
    rows = []
    for n in ns:
        spec = ExperimentSpec(args.algo, n, args.seed, args.epsilon, args.ops, args.x, args.reps).validate()
        rows += run_experiment(spec, workers=args.workers)
    _write_rows(rows, args.out)
    return 1 if any(r.violates for r in rows) else 0


def cmd_mrsim(args) -> int:
    s1, s2 = gen_pair(args.n, args.ops if args.ops is not None else max(1, args.n // 16), args.seed)
    cfg = ClusterConfig.for_input(len(s1) + len(s2), x=args.x, eps=args.epsilon)
    res = mr_edit(s1, s2, args.epsilon, cfg)
    exact = edit_distance(s1, s2)
    snap = res.meter_snapshot
    doc = {
        "n": args.n,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "x": args.x,
        "exact": exact,
        "estimate": res.estimate,
        "rounds": snap["rounds"],
        "machines": snap["machines"],
        "mem_cap": snap["mem_cap"],
        "max_machine_mem": snap["max_machine_mem"],
        "subproblems": snap["subproblems"],
        "traces": snap["traces"],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True), args.out)
    violated = res.estimate is None or res.estimate > res.factor_bound * exact or res.estimate < exact
    return 1 if violated else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subquad", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a planted string pair as JSON")
    _common(p)
    p.set_defaults(func=cmd_gen)

    for name, func, helptext in (
        ("run", cmd_run, "run one experiment spec"),
        ("sweep", cmd_sweep, "run a spec over several sizes"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--algo", choices=ALGORITHMS, default="quantum7")
        p.add_argument("--x", type=float, default=8 / 9)
        p.add_argument("--reps", type=int, default=1)
        p.add_argument("--workers", type=int, default=1)
        p.set_defaults(func=func)
    sub.choices["run"].add_argument("spec", nargs="?", help="JSON experiment spec (overrides flags)")
    sub.choices["sweep"].add_argument("--ns", default="64,128,256,512")

    p = sub.add_parser("mrsim", help="simulate the MapReduce pipeline and dump round traces")
    _common(p)
    p.add_argument("--x", type=float, default=8 / 9)
    p.set_defaults(func=cmd_mrsim)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
