"""Synthetic inputs: planted-edit string pairs and random graph metrics."""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

ALPHABET = b"ACGT"


def gen_pair(n: int, ops: int, seed: int, alphabet: bytes = ALPHABET) -> tuple[bytes, bytes]:
    """A random string of length ``n`` and a copy with ``ops`` random edits.

    Edits are drawn uniformly among insert, delete and substitute at uniform
    positions, so the true distance is at most ``ops``.
    """
    rng = np.random.default_rng(seed)
    alpha = np.frombuffer(alphabet, dtype=np.uint8)
    s1 = rng.choice(alpha, size=n)
    s2 = bytearray(s1.tobytes())
    for _ in range(ops):
        kind = rng.integers(3) if s2 else 0
        if kind == 0:
            s2.insert(int(rng.integers(len(s2) + 1)), int(rng.choice(alpha)))
        elif kind == 1:
            del s2[int(rng.integers(len(s2)))]
        else:
            s2[int(rng.integers(len(s2)))] = int(rng.choice(alpha))
    return s1.tobytes(), bytes(s2)


def random_graph_metric(n: int, seed: int, max_weight: int = 10, density: float = 3.0) -> np.ndarray:
    """Shortest-path metric of a connected random weighted graph.

    A random Hamiltonian path guarantees connectivity; every other pair is an
    edge with probability ``density * ln(n) / n``.
    """
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    if n > 1:
        p = min(1.0, density * np.log(n) / n)
        mask = np.triu(rng.random((n, n)) < p, 1)
        w[mask] = rng.integers(1, max_weight + 1, size=int(mask.sum()))
        order = rng.permutation(n)
        w[order[:-1], order[1:]] = rng.integers(1, max_weight + 1, size=n - 1)
        w = np.maximum(w, w.T)
    d = shortest_path(csr_matrix(w), method="D", directed=False)
    return d.astype(np.int64)
