"""Distance oracles with a query meter that charges Grover-model costs.

Listing and search are simulated by plain scans; only the charged units follow
the quantum cost model (all constants set to 1).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np


def ceil_sqrt(x: int) -> int:
    return 0 if x <= 0 else math.isqrt(x - 1) + 1


@dataclass
class QueryMeter:
    charged: int = 0
    raw_evals: int = 0
    time_units: int = 0
    record: bool = False
    history: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        self._lock = threading.Lock()

    def charge(self, units: int, raw: int, label: str = "query") -> None:
        with self._lock:
            self.charged += units
            self.raw_evals += raw
            if self.record:
                self.history.append((label, units))

    def charge_time(self, units: int) -> None:
        with self._lock:
            self.time_units += units

    def snapshot(self) -> dict:
        return {"charged": self.charged, "raw_evals": self.raw_evals, "time_units": self.time_units}


class MeteredMetric:
    """A finite metric reachable only through ``distance_fn``.

    ``row_fn(i, js)`` may be given as a vectorised equivalent of
    ``distance_fn`` over an index array; it must agree with it exactly.
    """

    def __init__(
        self,
        n: int,
        distance_fn: Callable[[int, int], int],
        lower: int,
        upper: int,
        *,
        row_fn: Callable[[int, np.ndarray], np.ndarray] | None = None,
        meter: QueryMeter | None = None,
    ):
        if lower < 0 or upper < lower:
            raise ValueError(f"bad distance bounds [{lower}, {upper}]")
        self.n = n
        self.distance_fn = distance_fn
        self.lower = lower
        self.upper = upper
        self.row_fn = row_fn
        self.meter = meter if meter is not None else QueryMeter()

    @classmethod
    def from_matrix(cls, dist, *, lower=None, upper=None, meter=None) -> "MeteredMetric":
        d = np.asarray(dist, dtype=np.int64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        off = d[~np.eye(len(d), dtype=bool)]
        if lower is None:
            lower = int(off.min()) if off.size else 0
        if upper is None:
            upper = int(d.max()) if d.size else 0
        return cls(
            len(d),
            lambda i, j: int(d[i, j]),
            lower,
            upper,
            row_fn=lambda i, js: d[i, js],
            meter=meter,
        )

    def _check(self, i) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"point {i} out of range for {self.n} points")

    def distances(self, i: int, js) -> np.ndarray:
        """Uncharged distances from ``i`` to each of ``js`` (raw evaluations counted by callers)."""
        js = np.asarray(js, dtype=np.int64)
        if self.row_fn is not None:
            return np.asarray(self.row_fn(i, js), dtype=np.int64)
        return np.fromiter((self.distance_fn(i, int(j)) for j in js), dtype=np.int64, count=len(js))


def query(metric: MeteredMetric, i: int, j: int) -> int:
    metric._check(i)
    metric._check(j)
    metric.meter.charge(1, 1)
    return int(metric.distance_fn(i, j))


def query_row(metric: MeteredMetric, i: int, js) -> np.ndarray:
    """Classical queries from ``i`` to every index in ``js``; one unit each."""
    metric._check(i)
    js = np.asarray(js, dtype=np.int64)
    metric.meter.charge(len(js), len(js), "row")
    return metric.distances(i, js)


class Predicate(Protocol):
    pivot: int

    def test(self, distances: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Within:
    """Holds for points at distance at most ``radius`` from ``pivot``."""

    pivot: int
    radius: float

    def test(self, distances: np.ndarray) -> np.ndarray:
        return distances <= self.radius


def _scan(metric: MeteredMetric, domain: np.ndarray, predicate: Predicate) -> np.ndarray:
    metric._check(predicate.pivot)
    hits = predicate.test(metric.distances(predicate.pivot, domain))
    return np.sort(domain[hits])


def grover_list(metric: MeteredMetric, domain, predicate: Predicate, cap: int) -> tuple[np.ndarray, bool]:
    """List up to ``cap`` matches in ascending index order.

    Returns the matches and whether more than ``cap`` exist. Charges
    ceil(sqrt(|domain| * min(cap, max(1, #matches)))) for the listing plus
    ceil(sqrt(|domain|)) for the overflow test.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    domain = np.asarray(domain, dtype=np.int64)
    size = len(domain)
    if size == 0:
        return domain, False
    matches = _scan(metric, domain, predicate)
    found = len(matches)
    units = ceil_sqrt(size * min(cap, max(1, found))) + ceil_sqrt(size)
    metric.meter.charge(units, size, "list")
    return matches[:cap], found > cap


def grover_find_one(metric: MeteredMetric, domain, predicate: Predicate) -> int | None:
    """Lowest-index match or ``None``; charges ceil(sqrt(|domain|))."""
    domain = np.asarray(domain, dtype=np.int64)
    if len(domain) == 0:
        return None
    matches = _scan(metric, domain, predicate)
    metric.meter.charge(ceil_sqrt(len(domain)), len(domain), "find")
    return int(matches[0]) if len(matches) else None
