"""Window-based edit distance approximation on top of metric estimation.

``bounded_edit_approx`` handles one distance guess, ``edit_approx`` sweeps the
guesses, and ``edit_approx_boot`` replaces the exact window oracle by a
recursive call at doubled epsilon together with the fast metric estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .metric import estimate_metric, fast_estimate_metric
from .oracle import MeteredMetric, QueryMeter
from .strings import (
    TransformationScript,
    as_bytes,
    batch_edit,
    edit_bounded_script,
    edit_exact,
    validate_script,
)
from .windows import (
    WindowSet,
    reconstruct_script,
    window_dp,
    window_length,
    windows_explicit,
)

BASE_EPS = (5 - math.sqrt(17)) / 4
BETA_7 = 6 / 7


@dataclass
class ApproxResult:
    estimate: int | None
    script: TransformationScript | None
    factor_bound: float
    meter_snapshot: dict = field(default_factory=dict)
    guarantee_violated: bool = False
    depth: int = 0
    mode: str = "exact"


@dataclass
class ApproxConfig:
    size_floor: int = 4096
    window_len: int | None = None
    gap: int | None = None
    delegate_small_delta: bool = True

    @property
    def overridden(self) -> bool:
        return self.window_len is not None or self.gap is not None


@dataclass
class BootstrapConfig:
    eps: float
    depth: int = 0
    size_floor: int = 4096
    window_len: int | None = None
    gap: int | None = None
    delegate_small_delta: bool = True

    @property
    def beta(self) -> float:
        return (math.sqrt(17) - 1) / 4 + self.eps

    @property
    def phi(self) -> float:
        return 1 - self.beta

    @property
    def factor(self) -> float:
        return e_e(self.eps)

    @property
    def max_depth(self) -> int:
        return max_boot_depth(self.eps)

    def child(self) -> "BootstrapConfig":
        # window overrides only apply at the level they were given for
        return replace(self, eps=2 * self.eps, depth=self.depth + 1, window_len=None, gap=None)


@lru_cache(maxsize=None)
def e_e(eps: float) -> float:
    """Bootstrapped factor: 1 at the exact base, else 2 (9/eps) e_e(2 eps) + 1."""
    if eps >= BASE_EPS:
        return 1.0
    return 2 * (9 / eps) * e_e(2 * eps) + 1


def max_boot_depth(eps: float) -> int:
    return math.ceil(math.log2(1 / eps)) + 1


def _exact(s1, s2, factor: float, meter: QueryMeter, depth: int = 0) -> ApproxResult:
    d, script = edit_exact(s1, s2)
    meter.charge_time(len(s1) * len(s2))
    return ApproxResult(d, script, factor, meter.snapshot(), False, depth, "exact")


# -- window metric ---------------------------------------------------------------


class _WindowMetric:
    """Points W1 then W2; distances from ``pair_rows`` over distinct window contents."""

    def __init__(self, s1, s2, w1: WindowSet, w2: WindowSet, pair_rows, upper: int, meter: QueryMeter):
        pts = np.vstack([w1.substrings(s1), w2.substrings(s2)])
        self.uniq, self.inv = np.unique(pts, axis=0, return_inverse=True)
        self.inv = self.inv.reshape(-1)
        self.rows: dict[int, np.ndarray] = {}
        self.pair_rows = pair_rows
        self.metric = MeteredMetric(
            len(pts), self._one, 0, upper, row_fn=self._row, meter=meter
        )

    def _full(self, u: int) -> np.ndarray:
        if u not in self.rows:
            self.rows[u] = self.pair_rows(self.uniq, u)
        return self.rows[u]

    def _row(self, i, js):
        return self._full(int(self.inv[i]))[self.inv[js]]

    def _one(self, i, j):
        return int(self._row(i, np.array([j]))[0])


def _exact_rows(meter: QueryMeter, l: int):
    def rows(uniq, u):
        meter.charge_time(len(uniq) * l * l)
        return batch_edit(np.broadcast_to(uniq[u], uniq.shape), uniq).astype(np.int64)

    return rows


def _windows_for(s1, s2, l: int, g: int, gamma: int):
    l = min(l, len(s1), len(s2))
    g = min(g, l)
    return windows_explicit(len(s1), l, g, gamma), windows_explicit(len(s2), l, g, gamma)


def _windowed(s1, s2, w1, w2, metric_fn, estimator, cache: dict | None) -> tuple[int, TransformationScript]:
    # estimates depend only on the window layout, so guesses sharing (l, g) reuse them
    key = ("est", w1.l, w1.g)
    if cache is not None and key in cache:
        est = cache[key]
    else:
        est = estimator(metric_fn())
        if cache is not None:
            cache[key] = est
    k1 = len(w1)
    cost, matching = window_dp(w1, w2, est[:k1, k1:])
    script = reconstruct_script(s1, s2, matching, w1, w2)
    return cost, script


# -- 7+eps ---------------------------------------------------------------------------


def bounded_edit_approx(
    s1,
    s2,
    delta: float,
    eps: float,
    cfg: ApproxConfig | None = None,
    meter: QueryMeter | None = None,
    _cache: dict | None = None,
) -> ApproxResult:
    """One distance guess: a script of length about (7+eps) delta n when edit <= delta n.

    A longer script (or none, on the delegated path) only flags the guess as
    violated; it is not an error.
    """
    cfg = cfg or ApproxConfig()
    meter = meter or QueryMeter()
    a, b = as_bytes(s1), as_bytes(s2)
    n = len(a) + len(b)
    factor = 7 + eps
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if a == b:
        return ApproxResult(0, TransformationScript(), factor, meter.snapshot(), mode="equal")
    if cfg.delegate_small_delta and delta <= n ** (-1 / 14):
        d_max = math.floor(delta * n)
        meter.charge_time(n + d_max * d_max)
        found = edit_bounded_script(a, b, d_max)
        if found is None:
            return ApproxResult(None, None, factor, meter.snapshot(), True, mode="bounded")
        return ApproxResult(found[0], found[1], factor, meter.snapshot(), mode="bounded")

    eps_w = eps / 4
    gamma = math.ceil(1 / (eps_w * delta) - 1e-12)
    l = cfg.window_len if cfg.window_len is not None else window_length(n, BETA_7)
    g = cfg.gap if cfg.gap is not None else l // gamma
    small = n < cfg.size_floor and not cfg.overridden
    if small or l < 1 or g < 1 or not a or not b:
        res = _exact(a, b, factor, meter)
        res.guarantee_violated = res.estimate > factor * delta * n
        return res
    w1, w2 = _windows_for(a, b, l, g, gamma)
    _, script = _windowed(
        a,
        b,
        w1,
        w2,
        lambda: _WindowMetric(a, b, w1, w2, _exact_rows(meter, w1.l), w1.l, meter).metric,
        lambda m: estimate_metric(m, eps_w).est,
        _cache,
    )
    meter.charge_time(len(w1) * len(w2))
    est = len(script)
    return ApproxResult(est, script, factor, meter.snapshot(), est > factor * delta * n, mode="windows")


def _guess_loop(a: bytes, b: bytes, step_eps: float, accept, bounded, meter: QueryMeter):
    """First valid script of acceptable length over geometric guesses delta = (1+e)^i / n."""
    n = len(a) + len(b)
    i = 0
    depth = 0
    while True:
        delta = (1 + step_eps) ** i / n
        probe = min(1.0, (1 + step_eps) * delta)
        res = bounded(probe)
        depth = max(depth, res.depth)
        if res.script is not None and validate_script(a, b, res.script) and len(res.script) <= accept(delta):
            res.depth = depth
            return res
        if probe >= 1.0:
            res = _exact(a, b, res.factor_bound, meter, depth)
            return res
        i += 1


def edit_approx(s1, s2, eps: float, cfg: ApproxConfig | None = None) -> ApproxResult:
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = as_bytes(s1), as_bytes(s2)
    meter = QueryMeter()
    if a == b:
        return ApproxResult(0, TransformationScript(), 7 + eps, meter.snapshot(), mode="equal")
    e = eps / 9
    n = len(a) + len(b)
    cache: dict = {}
    res = _guess_loop(
        a,
        b,
        e,
        lambda delta: (7 + e) * (1 + e) * delta * n,
        lambda delta: bounded_edit_approx(a, b, delta, e, cfg, meter, cache),
        meter,
    )
    res.factor_bound = 7 + eps
    res.meter_snapshot = meter.snapshot()
    return res


# -- bootstrapping -----------------------------------------------------------------------


def _boot_rows(cfg: BootstrapConfig, meter: QueryMeter, l: int, cache: dict, depth_seen: list):
    child = cfg.child()
    child_exact = child.eps >= BASE_EPS or 2 * l < child.size_floor or child.depth > child.max_depth

    def rows(uniq, u):
        if child_exact:
            meter.charge_time(len(uniq) * l * l)
            depth_seen[0] = max(depth_seen[0], child.depth)
            return batch_edit(np.broadcast_to(uniq[u], uniq.shape), uniq).astype(np.int64)
        out = np.empty(len(uniq), dtype=np.int64)
        for v in range(len(uniq)):
            x, y = uniq[u].tobytes(), uniq[v].tobytes()
            key = (x, y) if x <= y else (y, x)
            if key not in cache:
                r = edit_approx_boot(key[0], key[1], child, _meter=meter)
                depth_seen[0] = max(depth_seen[0], r.depth)
                cache[key] = r.estimate
            out[v] = cache[key]
        return out

    return rows


def _boot_bounded(a: bytes, b: bytes, delta: float, cfg: BootstrapConfig, meter: QueryMeter, cache: dict):
    n = len(a) + len(b)
    factor = cfg.factor
    if cfg.delegate_small_delta and delta <= n ** (-cfg.phi / 2):
        d_max = math.floor(delta * n)
        meter.charge_time(n + d_max * d_max)
        found = edit_bounded_script(a, b, d_max)
        if found is None:
            return ApproxResult(None, None, factor, {}, True, cfg.depth, "bounded")
        return ApproxResult(found[0], found[1], factor, {}, False, cfg.depth, "bounded")
    eps_w = cfg.eps / 4
    gamma = math.ceil(1 / (eps_w * delta) - 1e-12)
    l = cfg.window_len if cfg.window_len is not None else window_length(n, cfg.beta)
    g = cfg.gap if cfg.gap is not None else l // gamma
    if l < 1 or g < 1 or not a or not b:
        return _exact(a, b, factor, meter, cfg.depth)
    w1, w2 = _windows_for(a, b, l, g, gamma)
    depth_seen = [cfg.depth]
    rows = _boot_rows(cfg, meter, w1.l, cache, depth_seen)
    _, script = _windowed(
        a,
        b,
        w1,
        w2,
        lambda: _WindowMetric(a, b, w1, w2, rows, 2 * w1.l, meter).metric,
        lambda m: fast_estimate_metric(m, cfg.eps).est,
        cache,
    )
    meter.charge_time(len(w1) * len(w2))
    est = len(script)
    return ApproxResult(est, script, factor, {}, est > factor * delta * n, depth_seen[0], "windows")


def edit_approx_boot(s1, s2, cfg: BootstrapConfig, *, _meter: QueryMeter | None = None) -> ApproxResult:
    """Bootstrapped approximation with recorded factor e_e(eps).

    Window distances come from the fast metric estimator whose oracle is this
    function at 2 eps. Levels at or above the exact threshold, past the depth
    limit, or below the size floor run the exact DP.
    """
    if cfg.eps <= 0:
        raise ValueError("eps must be positive")
    meter = _meter or QueryMeter()
    a, b = as_bytes(s1), as_bytes(s2)
    factor = cfg.factor
    if a == b:
        return ApproxResult(0, TransformationScript(), factor, meter.snapshot(), depth=cfg.depth, mode="equal")
    n = len(a) + len(b)
    overridden = cfg.window_len is not None or cfg.gap is not None
    if cfg.eps >= BASE_EPS or cfg.depth > cfg.max_depth or (n < cfg.size_floor and not overridden):
        return _exact(a, b, factor, meter, cfg.depth)
    e = cfg.eps / 9
    cache: dict = {}
    res = _guess_loop(
        a,
        b,
        e,
        lambda delta: factor * (1 + e) * delta * n,
        lambda delta: _boot_bounded(a, b, delta, cfg, meter, cache),
        meter,
    )
    res.factor_bound = factor
    res.meter_snapshot = meter.snapshot()
    return res
