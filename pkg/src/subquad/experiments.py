"""Experiment specs, report rows, and the drivers behind the CLI and scripts."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .approx import BootstrapConfig, e_e, edit_approx, edit_approx_boot
from .instances import gen_pair, random_graph_metric
from .mapreduce import ClusterConfig, mr_edit
from .metric import (
    em_factor,
    estimate_metric,
    estimate_with_threshold,
    fast_estimate_metric,
    fast_estimate_with_threshold,
)
from .oracle import MeteredMetric
from .strings import edit_distance, validate_script

STRING_ALGOS = ("quantum7", "bootstrap", "mr")
METRIC_ALGOS = ("metric", "metric-fast")
ALGORITHMS = STRING_ALGOS + METRIC_ALGOS

CSV_FIELDS = (
    "n",
    "algorithm",
    "epsilon",
    "exact",
    "estimate",
    "ratio",
    "charged_queries",
    "time_units",
    "rounds",
    "max_machine_mem",
)

GROWTH_QUANTILES = (0.01, 0.05, 0.1, 0.25, 0.5)


def exact_cap() -> int:
    return int(os.environ.get("SUBQUAD_EXACT_CAP", "4096"))


@dataclass
class ExperimentSpec:
    algorithm: str
    n: int
    seed: int = 0
    epsilon: float = 0.5
    planted_ops: int | None = None
    x: float = 8 / 9
    repetitions: int = 1

    def __post_init__(self):
        if self.planted_ops is None:
            self.planted_ops = max(1, self.n // 16)

    def validate(self) -> "ExperimentSpec":
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= self.planted_ops <= self.n:
            raise ValueError("planted_ops must lie in [0, n]")
        if not 0 < self.x <= 7 / 6:
            raise ValueError("x must lie in (0, 7/6]")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        return self

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown spec fields: {sorted(unknown)}")
        return cls(**doc).validate()


@dataclass
class ReportRow:
    n: int
    algorithm: str
    epsilon: float
    exact: int | None
    estimate: int | None
    ratio: float | None
    charged_queries: int
    time_units: int
    rounds: int
    max_machine_mem: int
    seed: int = 0
    factor_bound: float = math.inf

    @property
    def violates(self) -> bool:
        if self.ratio is None:
            return self.estimate is None
        return self.ratio > self.factor_bound + 1e-9 or (self.exact is not None and self.ratio < 1 - 1e-9)

    def csv_values(self) -> list:
        return [getattr(self, k) for k in CSV_FIELDS]


def _ratio(estimate, exact):
    if estimate is None or exact is None:
        return None
    if exact == 0:
        return 1.0 if estimate == 0 else math.inf
    return estimate / exact


def _string_row(spec: ExperimentSpec, seed: int) -> ReportRow:
    s1, s2 = gen_pair(spec.n, spec.planted_ops, seed)
    exact = edit_distance(s1, s2) if spec.n <= exact_cap() else None
    rounds = mem = 0
    if spec.algorithm == "quantum7":
        res = edit_approx(s1, s2, spec.epsilon)
    elif spec.algorithm == "bootstrap":
        res = edit_approx_boot(s1, s2, BootstrapConfig(spec.epsilon))
    else:
        cfg = ClusterConfig.for_input(len(s1) + len(s2), x=spec.x, eps=spec.epsilon)
        res = mr_edit(s1, s2, spec.epsilon, cfg)
        rounds, mem = res.meter_snapshot["rounds"], res.meter_snapshot["max_machine_mem"]
    if res.script is not None and not validate_script(s1, s2, res.script):
        raise RuntimeError("algorithm returned an invalid script")
    snap = res.meter_snapshot
    return ReportRow(
        spec.n,
        spec.algorithm,
        spec.epsilon,
        exact,
        res.estimate,
        _ratio(res.estimate, exact),
        snap.get("charged", 0),
        snap.get("time_units", 0),
        rounds,
        mem,
        seed,
        res.factor_bound,
    )


def _metric_row(spec: ExperimentSpec, seed: int) -> ReportRow:
    d = random_graph_metric(spec.n, seed)
    m = MeteredMetric.from_matrix(d)
    if spec.algorithm == "metric":
        res = estimate_metric(m, spec.epsilon)
    else:
        res = fast_estimate_metric(m, spec.epsilon, rng_seed=seed)
    off = ~np.eye(spec.n, dtype=bool)
    ok = (res.est >= d).all()
    ratio = float((res.est[off] / d[off]).max()) if off.any() else 1.0
    return ReportRow(
        spec.n,
        spec.algorithm,
        spec.epsilon,
        None,
        None,
        ratio if ok else math.inf,
        m.meter.charged,
        m.meter.raw_evals,
        0,
        0,
        seed,
        res.factor,
    )


def run_one(spec: ExperimentSpec, seed: int) -> ReportRow:
    if spec.algorithm in METRIC_ALGOS:
        return _metric_row(spec, seed)
    return _string_row(spec, seed)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[ReportRow]:
    spec.validate()
    seeds = [spec.seed + r for r in range(spec.repetitions)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(run_one, [spec] * len(seeds), seeds))
    else:
        rows = [run_one(spec, s) for s in seeds]
    return sorted(rows, key=lambda r: (r.n, r.seed))


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(["" if v is None else v for v in r.csv_values()])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[dict]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append({k: _parse(v) for k, v in rec.items()})
    return out


def _parse(v: str):
    if v == "":
        return None
    for conv in (int, float):
        try:
            return conv(v)
        except ValueError:
            pass
    return v


def rows_to_json(rows: list[ReportRow]) -> str:
    return json.dumps([{k: getattr(r, k) for k in CSV_FIELDS} for r in rows], indent=2, sort_keys=True)


# -- query growth ----------------------------------------------------------------------


def loglog_slope(ns, values) -> float:
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def threshold_charges(n: int, seed: int, variant: str, eps: float = 0.1) -> int:
    """Charged units summed over thresholds at fixed quantiles of the pair distances."""
    d = random_graph_metric(n, seed)
    off = d[np.triu_indices(n, 1)]
    m = MeteredMetric.from_matrix(d)
    for q in GROWTH_QUANTILES:
        t = float(np.quantile(off, q))
        if variant == "threshold":
            estimate_with_threshold(m, t)
        else:
            fast_estimate_with_threshold(m, t, eps, rng_seed=seed)
    return m.meter.charged


def query_growth(ns, seeds, variant: str, eps: float = 0.1) -> dict:
    means = [float(np.mean([threshold_charges(n, s, variant, eps) for s in seeds])) for n in ns]
    return {"variant": variant, "n": list(ns), "charged": means, "slope": loglog_slope(ns, means)}


def factor_table() -> dict:
    """Recorded factors for a few epsilons."""
    return {
        "e_m": {eps: em_factor(eps) for eps in (1 / 3, 0.2, 0.1)},
        "e_e": {eps: e_e(eps) for eps in (0.4, 0.2, 0.1)},
    }


def spec_to_json(spec: ExperimentSpec) -> str:
    return json.dumps(asdict(spec), sort_keys=True)
