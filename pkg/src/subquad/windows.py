"""Layered windows and the window-compatible transformation DP."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .strings import as_bytes, edit_steps, script_from_steps, TransformationScript

INF = np.iinfo(np.int64).max // 4


class WindowParameterError(ValueError):
    """Computed window length or gap is below 1; callers fall back to exact DP."""


class MalformedMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class WindowSet:
    source_len: int
    l: int
    g: int
    gamma: int
    starts: tuple[int, ...]  # 0-based
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def ends(self) -> np.ndarray:
        """Exclusive 0-based ends, equal to the 1-based inclusive right endpoints."""
        return np.asarray(self.starts, dtype=np.int64) + self.width

    @property
    def width(self) -> int:
        return self.source_len if self.degenerate else self.l

    @property
    def windows(self) -> list[tuple[int, int]]:
        w = self.width
        return [(s + 1, s + w) for s in self.starts]

    def substrings(self, s) -> np.ndarray:
        """Stack of window contents, shape (len, width)."""
        b = np.frombuffer(as_bytes(s), dtype=np.uint8)
        if len(self) == 0:
            return np.zeros((0, self.width), dtype=np.uint8)
        idx = np.asarray(self.starts)[:, None] + np.arange(self.width)
        return b[idx]


def windows_explicit(source_len: int, l: int, g: int, gamma: int | None = None) -> WindowSet:
    if l < 1 or g < 1:
        raise WindowParameterError(f"window length {l} and gap {g} must be at least 1")
    if gamma is None:
        gamma = max(1, l // g)
    if l > source_len:
        return WindowSet(source_len, l, g, gamma, (0,) if source_len else (), degenerate=True)
    count = (source_len - l) // g + 1
    return WindowSet(source_len, l, g, gamma, tuple(i * g for i in range(count)))


def window_length(n: int, beta: float) -> int:
    return math.floor(n ** (1 - beta) + 1e-9)


def build_windows(source_len: int, beta: float, gamma: int, n: int | None = None) -> WindowSet:
    """Windows [ig+1, ig+l] with l = floor(n^(1-beta)) and g = floor(l/gamma).

    ``n`` defaults to ``source_len``; the pipelines pass the combined length.
    """
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    l = window_length(source_len if n is None else n, beta)
    return windows_explicit(source_len, l, l // gamma, gamma)


@dataclass
class WindowDistanceSource:
    lookup: Callable[[int, int], int]
    factor: float = 1.0
    matrix: np.ndarray | None = None

    @classmethod
    def from_matrix(cls, matrix, factor: float = 1.0) -> "WindowDistanceSource":
        m = np.asarray(matrix, dtype=np.int64)
        return cls(lambda i, j: int(m[i, j]), factor, m)

    def table(self, k1: int, k2: int, allowed: np.ndarray | None = None) -> np.ndarray:
        if self.matrix is not None:
            out = self.matrix[:k1, :k2].astype(np.int64)
            if allowed is not None:
                out = np.where(allowed, out, INF)
            return out
        out = np.full((k1, k2), INF, dtype=np.int64)
        for i in range(k1):
            for j in range(k2):
                if allowed is None or allowed[i, j]:
                    out[i, j] = self.lookup(i, j)
        return out


def exact_window_source(s1, s2, w1: WindowSet, w2: WindowSet, allowed=None) -> WindowDistanceSource:
    """Exact window-pair distances by batched DP (only ``allowed`` pairs if given)."""
    from .strings import batch_edit

    x, y = w1.substrings(s1), w2.substrings(s2)
    m = np.full((len(w1), len(w2)), INF, dtype=np.int64)
    if allowed is None:
        ii, jj = np.indices(m.shape).reshape(2, -1)
    else:
        ii, jj = np.nonzero(allowed)
    if len(ii):
        m[ii, jj] = batch_edit(x[ii], y[jj])
    return WindowDistanceSource.from_matrix(m)


def band_width(w1: WindowSet, w2: WindowSet, delta: float, g: int | None = None) -> int:
    g = w1.g if g is None else g
    n = w1.source_len + w2.source_len
    return math.ceil(delta * n / g - 1e-12)


def band_mask(k1: int, k2: int, band: int) -> np.ndarray:
    i, j = np.indices((k1, k2))
    return np.abs(i - j) <= band


def useful_pairs(w1: WindowSet, w2: WindowSet, delta: float, g: int | None = None) -> list[tuple[int, int]]:
    """Window pairs whose indices differ by at most ceil(delta * n / g)."""
    if not 0 <= delta <= 1:
        raise ValueError("delta must lie in [0, 1]")
    ii, jj = np.nonzero(band_mask(len(w1), len(w2), band_width(w1, w2, delta, g)))
    return list(zip(ii.tolist(), jj.tolist()))


def _layout(w: WindowSet):
    starts = np.asarray(w.starts, dtype=np.int64)
    prefix = np.concatenate([[0], w.ends])
    # last window ending at or before each start
    before = np.searchsorted(w.ends, starts, side="right")
    return starts, prefix, before


def _check_compatible(w1: WindowSet, w2: WindowSet) -> None:
    if not (w1.degenerate or w2.degenerate) and (w1.l != w2.l or w1.g != w2.g):
        raise ValueError("window sets must share window length and gap")


def window_dp(w1: WindowSet, w2: WindowSet, dist, allowed: np.ndarray | None = None):
    """Cheapest window-compatible transformation cost and its matched pairs.

    c[i][j] covers the prefixes up to the end of window i (resp. j). Skipping a
    window deletes (inserts) the characters it adds beyond the previous one; a
    match at (i, j) continues from the last windows ending before both starts,
    paying for the characters in between. Characters after the last window are
    charged at the end. ``allowed`` masks out pairs (e.g. a band).
    """
    _check_compatible(w1, w2)
    k1, k2 = len(w1), len(w2)
    if isinstance(dist, WindowDistanceSource):
        d = dist.table(k1, k2, allowed)
    else:
        d = np.asarray(dist, dtype=np.int64)[:k1, :k2]
        if allowed is not None:
            d = np.where(allowed, d, INF)
    st1, p1, a1 = _layout(w1)
    st2, p2, b2 = _layout(w2)
    gap2 = st2 - p2[b2]
    c = np.empty((k1 + 1, k2 + 1), dtype=np.int64)
    c[0] = p2
    for i in range(1, k1 + 1):
        tmp = c[i - 1] + (p1[i] - p1[i - 1])
        a = a1[i - 1]
        match = c[a, b2] + (st1[i - 1] - p1[a]) + gap2 + d[i - 1]
        np.minimum(tmp[1:], match, out=tmp[1:])
        c[i] = np.minimum.accumulate(tmp - p2) + p2

    matching = []
    i, j = k1, k2
    while i or j:
        here = c[i, j]
        if i and here == c[i - 1, j] + p1[i] - p1[i - 1]:
            i -= 1
        elif j and here == c[i, j - 1] + p2[j] - p2[j - 1]:
            j -= 1
        else:
            matching.append((i - 1, j - 1))
            i, j = a1[i - 1], b2[j - 1]
    matching.reverse()
    cost = int(c[k1, k2]) + (w1.source_len - int(p1[k1])) + (w2.source_len - int(p2[k2]))
    return cost, [(int(i), int(j)) for i, j in matching]


def reconstruct_script(s1, s2, matching, w1: WindowSet, w2: WindowSet) -> TransformationScript:
    """Script that aligns matched windows optimally and deletes/inserts everything else."""
    a, b = as_bytes(s1), as_bytes(s2)
    if len(a) != w1.source_len or len(b) != w2.source_len:
        raise MalformedMatchingError("window sets do not describe these strings")
    steps: list[str] = []
    pos1 = pos2 = 0
    for i, j in matching:
        if not (0 <= i < len(w1) and 0 <= j < len(w2)):
            raise MalformedMatchingError(f"pair ({i}, {j}) out of range")
        s, t = w1.starts[i], w2.starts[j]
        if s < pos1 or t < pos2:
            raise MalformedMatchingError(f"pair ({i}, {j}) overlaps or breaks monotonicity")
        e, f = s + w1.width, t + w2.width
        steps += ["D"] * (s - pos1) + ["I"] * (t - pos2)
        steps += edit_steps(a[s:e], b[t:f])[1]
        pos1, pos2 = e, f
    steps += ["D"] * (len(a) - pos1) + ["I"] * (len(b) - pos2)
    return script_from_steps(steps, b)
