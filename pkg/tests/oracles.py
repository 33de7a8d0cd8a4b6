"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import sys
from functools import lru_cache

import numpy as np


def recursive_edit(a: bytes, b: bytes) -> int:
    """Memoised textbook recursion over suffixes."""
    sys.setrecursionlimit(max(10_000, sys.getrecursionlimit()))

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        if a[i] == b[j]:
            return go(i + 1, j + 1)
        return 1 + min(go(i + 1, j + 1), go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def brute_window_matching(w1, w2, dist) -> int:
    """Cheapest monotone non-overlapping matching, enumerated exhaustively."""
    starts1, ends1 = list(w1.starts), list(w1.ends)
    starts2, ends2 = list(w2.starts), list(w2.ends)
    total = w1.source_len + w2.source_len
    best = total

    def rec(e1, e2, acc, matched):
        nonlocal best
        best = min(best, acc + total - matched)
        for i in range(len(starts1)):
            if starts1[i] < e1:
                continue
            for j in range(len(starts2)):
                if starts2[j] < e2:
                    continue
                rec(ends1[i], ends2[j], acc + int(dist[i][j]), matched + w1.width + w2.width)

    rec(0, 0, 0, 0)
    return best


def floyd_closure(w: np.ndarray) -> np.ndarray:
    """All-pairs shortest paths by plain Floyd-Warshall (0 = no edge off the diagonal)."""
    n = len(w)
    d = np.where(w > 0, w, np.inf).astype(float)
    np.fill_diagonal(d, 0)
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d.astype(np.int64)


def naive_min_plus(x: np.ndarray, y: np.ndarray, inf: int) -> np.ndarray:
    n, k = x.shape
    m = y.shape[1]
    out = np.full((n, m), inf, dtype=np.int64)
    for i, j, r in itertools.product(range(n), range(m), range(k)):
        out[i, j] = min(out[i, j], x[i, r] + y[r, j])
    return np.minimum(out, inf)


def direct_band(s1: bytes, s2: bytes, a: int, b: int, d: int, inf: int) -> np.ndarray:
    out = np.full((2 * d + 1, 2 * d + 1), inf, dtype=np.int64)
    for p in range(-d, d + 1):
        for q in range(-d, d + 1):
            st, en = a + p, b + q
            if 0 <= st <= en <= len(s2):
                out[p + d, q + d] = recursive_edit(s1[a:b], s2[st:en])
    return out
