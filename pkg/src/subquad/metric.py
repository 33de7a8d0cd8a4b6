"""Threshold and full metric estimation under the Grover query model.

Two families:

* :func:`estimate_with_threshold` / :func:`estimate_metric` give a 3 (resp.
  3+eps) approximation by peeling high-degree balls.
* :func:`fast_estimate_with_threshold` / :func:`fast_estimate_metric` trade
  the factor for fewer queries using random representatives and recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .oracle import MeteredMetric, Within, grover_find_one, grover_list, query_row

MAX_RESETS = 20


@dataclass
class ThresholdMatrix:
    a: np.ndarray
    t: float
    soundness_radius: float
    resets: int = 0
    fallbacks: int = 0


@dataclass
class EstimateMatrix:
    est: np.ndarray
    factor: float


def estimate_with_threshold(metric: MeteredMetric, t: float, tau: float = 1 / 3) -> ThresholdMatrix:
    """Mark every pair at distance <= t; marked pairs are within 3t.

    Vertices are taken in ascending index order. A vertex with at most
    ceil(n**tau) neighbours among the remaining ones is settled by listing; a
    heavier one has its whole row queried and its t-ball removed after marking
    the t-ball against the 2t-ball.
    """
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    n = metric.n
    a = np.eye(n, dtype=bool)
    cap = max(1, math.ceil(n**tau))
    alive = np.ones(n, dtype=bool)
    for v in range(n):
        if not alive[v]:
            continue
        rest = np.flatnonzero(alive)
        others = rest[rest != v]
        hits, heavy = grover_list(metric, others, Within(v, t), cap)
        if not heavy:
            a[v, hits] = True
            a[hits, v] = True
            alive[v] = False
            continue
        d = query_row(metric, v, others)
        near = np.append(others[d <= t], v)
        ring = np.append(others[d <= 2 * t], v)
        a[np.ix_(near, ring)] = True
        a[np.ix_(ring, near)] = True
        alive[near] = False
    return ThresholdMatrix(a, t, 3 * t)


def _sweep(metric: MeteredMetric, step: float, factor: float, run: Callable[[float, int], ThresholdMatrix]):
    """Geometric threshold sweep; each pair gets floor(factor * t) for the first t marking it."""
    n = metric.n
    covered = run(0, 0).a.copy()
    est = np.zeros((n, n), dtype=np.int64)
    t = max(1, metric.lower)
    k = 0
    while t <= metric.upper:
        t *= step
        k += 1
        marked = run(t, k).a
        fresh = marked & ~covered
        est[fresh] = math.floor(factor * t)
        covered |= marked
    if not covered.all():
        raise ValueError("oracle returned distances outside the declared [lower, upper] range")
    return est


def estimate_metric(metric: MeteredMetric, eps: float) -> EstimateMatrix:
    if eps <= 0:
        raise ValueError("eps must be positive")
    est = _sweep(metric, 1 + eps / 3, 3, lambda t, _: estimate_with_threshold(metric, t))
    return EstimateMatrix(est, 3 + eps)


# -- representatives and recursion ----------------------------------------------


def sample_hitting_set(n_pts: int, degree: int, rng_seed) -> list[int]:
    """ceil(2 (n/degree) ln n) distinct indices (capped at n), sorted."""
    if degree < 1:
        raise ValueError("degree threshold must be at least 1")
    if n_pts <= 0:
        return []
    size = min(n_pts, math.ceil(2 * (n_pts / degree) * math.log(max(n_pts, 2))))
    rng = np.random.default_rng(rng_seed)
    return sorted(int(i) for i in rng.choice(n_pts, size=size, replace=False))


def recursion_depth(eps: float) -> int:
    """Number of nested representative levels before exact listing takes over."""
    return max(1, math.ceil(math.log(1 + 1 / eps, 3) - 1e-12))


def em_factor(eps: float) -> float:
    """Recorded soundness factor of the fast threshold estimate.

    Each representative level multiplies the child radius by 3 and adds 2, so
    ``k`` levels over an exact base give 2 * 3**k - 1. The recorded factor is
    the larger of that and 9/eps.
    """
    return max(9 / eps, 2 * 3 ** recursion_depth(eps) - 1)


class _Counters:
    resets = 0
    fallbacks = 0


def _mark_listed(metric, pts, a, v, t, cap):
    others = np.delete(pts, v)
    hits, overflow = grover_list(metric, others, Within(int(pts[v]), t), cap)
    local = np.searchsorted(pts, hits)
    a[v, local] = True
    a[local, v] = True
    return overflow


def _fast(metric, pts, t, eps, degree, depth_left, seed, counters, max_resets):
    m = len(pts)
    a = np.eye(m, dtype=bool)
    if m == 0:
        return a
    if depth_left == 0 or degree >= m:
        for v in range(m):
            _mark_listed(metric, pts, a, v, t, max(1, m - 1))
        return a

    for attempt in range(max_resets + 1):
        fallback = attempt == max_resets
        counters.fallbacks += fallback
        reps = np.array(sample_hitting_set(m, degree, (*seed, depth_left, attempt)), dtype=np.int64)
        leader = np.full(m, -1, dtype=np.int64)
        leader[reps] = np.arange(len(reps))
        a = np.eye(m, dtype=bool)
        failed = False
        for v in np.flatnonzero(leader < 0):
            r = grover_find_one(metric, pts[reps], Within(int(pts[v]), t))
            if r is not None:
                leader[v] = np.searchsorted(pts[reps], r)
                continue
            cap = max(1, m - 1) if fallback else degree
            if _mark_listed(metric, pts, a, v, t, cap):
                failed = True
                break
        if not failed:
            break
        # uncapped listing cannot overflow, so only sampled attempts get here
        counters.resets += 1
    sub = _fast(metric, pts[reps], 3 * t, 3 * eps, degree**3, depth_left - 1, seed, counters, max_resets)
    led = np.flatnonzero(leader >= 0)
    lead = leader[led]
    a[np.ix_(led, led)] |= sub[np.ix_(lead, lead)]
    return a


def fast_estimate_with_threshold(
    metric: MeteredMetric,
    t: float,
    eps: float,
    degree: int | None = None,
    rng_seed: int = 0,
    *,
    max_resets: int = MAX_RESETS,
) -> ThresholdMatrix:
    """Threshold estimate through leaders drawn from a random hitting set.

    Completeness is unconditional: a sample that misses a heavy neighbourhood
    is detected when a leaderless vertex overflows ``degree`` and the level is
    resampled, finally falling back to uncapped listing.
    """
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = metric.n
    if degree is None:
        degree = max(1, math.ceil(n ** (2 * eps)))
    counters = _Counters()
    seed = rng_seed if isinstance(rng_seed, tuple) else (rng_seed,)
    a = _fast(metric, np.arange(n), t, eps, degree, recursion_depth(eps), seed, counters, max_resets)
    return ThresholdMatrix(a, t, em_factor(eps) * t, counters.resets, counters.fallbacks)


def fast_estimate_metric(metric: MeteredMetric, eps: float, rng_seed: int = 0) -> EstimateMatrix:
    if eps <= 0:
        raise ValueError("eps must be positive")
    degree = max(1, math.ceil(metric.n ** (2 * eps)))
    factor = em_factor(eps)
    est = _sweep(
        metric,
        1 + eps,
        factor,
        lambda t, k: fast_estimate_with_threshold(metric, t, eps, degree, (rng_seed, k)),
    )
    return EstimateMatrix(est, factor * (1 + eps))
