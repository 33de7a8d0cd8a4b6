"""Deterministic MapReduce simulation and the banded edit-distance pipeline.

Every machine is a logical slot. Memory is the serialized size of the
key/value pairs a slot holds in one phase (inputs plus outputs plus declared
scratch) and is checked against the configured cap.
"""

from __future__ import annotations

import hashlib
import math
import struct
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .approx import ApproxResult
from .strings import as_bytes, batch_edit
from .windows import band_mask, band_width, window_dp, windows_explicit

INF = 1 << 30  # int32-safe sentinel; sums of two stay below 2**31


class MemoryOverflowError(RuntimeError):
    def __init__(self, round_index: int, machine: int, used: int, cap: int, phase: str):
        super().__init__(f"round {round_index} {phase}: machine {machine} holds {used} bytes > cap {cap}")
        self.round_index = round_index
        self.machine = machine
        self.used = used
        self.cap = cap
        self.phase = phase


class ContractViolationError(RuntimeError):
    pass


class AnchorMismatchError(ValueError):
    pass


# -- keys and values ---------------------------------------------------------------


def pack_key(*parts) -> bytes:
    """Length-prefixed tagged tuple encoding (ints, strings, bytes)."""
    out = bytearray()
    for p in parts:
        if isinstance(p, (int, np.integer)):
            out += b"i" + struct.pack(">q", int(p))
        elif isinstance(p, str):
            raw = p.encode()
            out += b"s" + struct.pack(">I", len(raw)) + raw
        else:
            raw = bytes(p)
            out += b"b" + struct.pack(">I", len(raw)) + raw
    return bytes(out)


def unpack_key(key: bytes) -> tuple:
    parts = []
    k = 0
    while k < len(key):
        tag = key[k : k + 1]
        k += 1
        if tag == b"i":
            parts.append(struct.unpack(">q", key[k : k + 8])[0])
            k += 8
            continue
        (size,) = struct.unpack(">I", key[k : k + 4])
        raw = key[k + 4 : k + 4 + size]
        parts.append(raw.decode() if tag == b"s" else raw)
        k += 4 + size
    return tuple(parts)


@dataclass(frozen=True)
class KeyValue:
    key: bytes
    value: bytes

    @property
    def size(self) -> int:
        return len(self.key) + len(self.value)


def stable_hash(key: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


# -- cluster and rounds --------------------------------------------------------------


def mem_exponent(x: float) -> float:
    return (11 - 5 * x) / 8 if x <= 13 / 20 else 2 * (4 - x) / 7


def alpha_crit(x: float) -> float:
    return 3 * (x + 1) / 16 if x <= 13 / 20 else 2 * (4 - x) / 21


@dataclass
class ClusterConfig:
    machines: int
    mem_per_machine: int
    x: float = 8 / 9
    eps_prime: float = 0.1

    @classmethod
    def for_input(
        cls, n: int, x: float = 8 / 9, eps: float = 0.5, eps_prime: float = 0.1, mem_coeff: float = 128.0
    ) -> "ClusterConfig":
        n = max(n, 2)
        machines = math.ceil(n**x)
        mem = math.ceil(mem_coeff * n ** (mem_exponent(x) + eps_prime) / eps**2)
        return cls(machines, mem, x, eps_prime)


@dataclass
class RoundTrace:
    round_index: int
    label: str
    machine_mem: dict[int, int] = field(default_factory=dict)
    machine_work: dict[int, int] = field(default_factory=dict)
    shuffle_volume: int = 0

    @property
    def max_mem(self) -> int:
        return max(self.machine_mem.values(), default=0)

    def to_dict(self) -> dict:
        return {
            "round": self.round_index,
            "label": self.label,
            "machines": sorted(self.machine_mem),
            "memory": [self.machine_mem[m] for m in sorted(self.machine_mem)],
            "work": [self.machine_work.get(m, 0) for m in sorted(self.machine_mem)],
            "shuffle_volume": self.shuffle_volume,
            "max_mem": self.max_mem,
        }


Mapper = Callable[[KeyValue], Iterable[KeyValue]]
Reducer = Callable[[bytes, list[bytes]], Iterable[KeyValue]]


def _phase_check(mem: dict[int, int], cfg: ClusterConfig, round_index: int, phase: str) -> None:
    for m in sorted(mem):
        if mem[m] > cfg.mem_per_machine:
            raise MemoryOverflowError(round_index, m, mem[m], cfg.mem_per_machine, phase)


def run_round(
    mapper: Mapper,
    reducer: Reducer,
    inputs: list[KeyValue],
    cfg: ClusterConfig,
    *,
    round_index: int = 0,
    label: str = "",
    scratch: Callable[[bytes, list[bytes]], int] | None = None,
) -> tuple[list[KeyValue], RoundTrace]:
    """One map, shuffle and reduce round.

    Inputs go to map slots round-robin; each key's values go to the slot
    ``stable_hash(key) % machines``. Reducers may only emit their own key.
    """
    trace = RoundTrace(round_index, label)
    map_mem: dict[int, int] = defaultdict(int)
    groups: dict[bytes, list[bytes]] = defaultdict(list)
    for k, kv in enumerate(inputs):
        m = k % cfg.machines
        out = list(mapper(kv))
        map_mem[m] += kv.size + sum(o.size for o in out)
        for o in out:
            groups[o.key].append(o.value)
            trace.shuffle_volume += 1
    _phase_check(map_mem, cfg, round_index, "map")

    red_mem: dict[int, int] = defaultdict(int)
    results: list[KeyValue] = []
    for key in sorted(groups):
        values = groups[key]
        m = stable_hash(key) % cfg.machines
        out = list(reducer(key, values))
        for o in out:
            if o.key != key:
                raise ContractViolationError(f"reducer for key {key!r} emitted key {o.key!r}")
        held = len(key) * len(values) + sum(map(len, values)) + sum(o.size for o in out)
        red_mem[m] += held + (scratch(key, values) if scratch else 0)
        trace.machine_work[m] = trace.machine_work.get(m, 0) + sum(map(len, values))
        results.extend(out)
    _phase_check(red_mem, cfg, round_index, "reduce")

    for m in set(map_mem) | set(red_mem):
        trace.machine_mem[m] = max(map_mem.get(m, 0), red_mem.get(m, 0))
    results.sort(key=lambda kv: kv.key)
    return results, trace


# -- band matrices -------------------------------------------------------------------


@dataclass
class BandMatrix:
    """Entry (p, q) for p, q in [-d, d] is edit(s1[a:b], s2[a+p:b+q])."""

    a: int
    b: int
    d: int
    entries: np.ndarray

    def at(self, p: int, q: int) -> int:
        return int(self.entries[p + self.d, q + self.d])


def _prefix_rows(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Final DP row of ``x`` against each row of ``ys`` (int16 codes, -1 pads)."""
    r, w = ys.shape
    idx = np.arange(w + 1, dtype=np.int64)
    row = np.broadcast_to(idx, (r, w + 1)).copy()
    tmp = np.empty_like(row)
    for i, ch in enumerate(x, start=1):
        tmp[:, 0] = i
        np.minimum(row[:, 1:] + 1, row[:, :-1] + (ys != ch), out=tmp[:, 1:])
        row = np.minimum.accumulate(tmp - idx, axis=1) + idx
    return row


def band_rows(block, target, offset: int, total: int, a: int, b: int, d: int, p_lo: int, p_hi: int) -> np.ndarray:
    """Rows p in [p_lo, p_hi) of the band matrix anchored at (a, b).

    ``block`` is s1[a:b]; ``target`` is the slice of s2 starting at ``offset``
    that covers every start a+p and end b+q; ``total`` is |s2|.
    """
    x = np.frombuffer(as_bytes(block), dtype=np.uint8).astype(np.int16)
    t = np.frombuffer(as_bytes(target), dtype=np.uint8).astype(np.int16)
    width = (b - a) + 2 * d
    ps = np.arange(p_lo, p_hi)
    starts = a + ps
    pad = d + max(0, offset - (a - d))
    first = starts - offset + pad
    tail = max(0, int(first.max(initial=0)) + width - pad - len(t))
    padded = np.concatenate([np.full(pad, -1, np.int16), t, np.full(tail, -1, np.int16)])
    ys = padded[first[:, None] + np.arange(width)]
    last = _prefix_rows(x, ys)
    out = np.full((len(ps), 2 * d + 1), INF, dtype=np.int64)
    ends = b + np.arange(-d, d + 1)
    for r, st in enumerate(starts):
        if 0 <= st <= total:
            ok = (ends >= st) & (ends <= total)
            out[r, ok] = last[r, ends[ok] - st]
    return out


def band_matrix(s1, s2, a: int, b: int, d: int) -> BandMatrix:
    s2 = as_bytes(s2)
    return BandMatrix(a, b, d, band_rows(as_bytes(s1)[a:b], s2, 0, len(s2), a, b, d, -d, d + 1))


def _min_plus(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    out = np.full((left.shape[0], right.shape[1]), INF, dtype=np.int64)
    for k in range(left.shape[1]):
        np.minimum(out, left[:, k : k + 1] + right[k], out=out)
    return np.minimum(out, INF)


def band_min_plus(A: BandMatrix, B: BandMatrix) -> BandMatrix:
    if A.b != B.a:
        raise AnchorMismatchError(f"right anchor {A.b} of the left factor differs from left anchor {B.a}")
    if A.d != B.d:
        raise AnchorMismatchError("band half-widths differ")
    return BandMatrix(A.a, B.b, A.d, _min_plus(A.entries, B.entries))


# -- rectangle payloads ----------------------------------------------------------------

_RECT = struct.Struct("<8q")


def _rect(a, b, d, r0, r1, c0, c1, data: np.ndarray, role: int = 0) -> bytes:
    return _RECT.pack(a, b, d, r0, r1, c0, c1, role) + np.ascontiguousarray(data, dtype=np.int32).tobytes()


def _unrect(raw: bytes):
    a, b, d, r0, r1, c0, c1, role = _RECT.unpack_from(raw)
    data = np.frombuffer(raw, dtype=np.int32, offset=_RECT.size).reshape(r1 - r0, c1 - c0).astype(np.int64)
    return (a, b, d, r0, r1, c0, c1, role), data


def _tile_size(d: int, rows_per: int) -> int:
    """Tile side minimising the larger of the map-phase fan-out and the tile reducer footprint."""
    side = 2 * d + 1
    overhead = _RECT.size + 48

    def peak(s: int) -> int:
        tiles = math.ceil(side / s)
        rows = max(rows_per, s)
        fan_out = (1 + tiles) * (4 * rows * side + overhead)
        reducer = 4 * (s * s + 2 * s * side) + overhead * (2 + tiles)
        return max(fan_out, reducer)

    return min(range(1, side + 1), key=lambda s: (peak(s), s))


def small_delta_params(n: int, delta: float, x: float) -> tuple[float, float, float]:
    alpha = -math.log(delta) / math.log(n) if 0 < delta < 1 else (1.0 if delta <= 0 else 0.0)
    y = min(1.0, max(0.0, (6 * alpha + 2 * x - 3) / 5))
    return alpha, y, max(0.0, x - y)


def mr_edit_small_delta(s1, s2, delta: float, cfg: ClusterConfig) -> tuple[int | None, list[RoundTrace]]:
    """Exact distance through a chain of banded (min,+) products.

    Returns ``None`` when the length difference already exceeds the band.
    The value is an upper bound in general and exact when edit <= delta n.
    """
    a_, b_ = as_bytes(s1), as_bytes(s2)
    n1, n2 = len(a_), len(b_)
    n = n1 + n2
    d = math.ceil(delta * n - 1e-12)
    if abs(n2 - n1) > d:
        return None, []
    _, y, t = small_delta_params(max(n, 2), delta, cfg.x)
    blocks = max(1, min(n1, math.ceil(max(n, 2) ** y)))
    length = math.ceil(n1 / blocks) if n1 else 0
    anchors = list(range(0, n1, length)) + [n1] if n1 else [0, 0]
    side = 2 * d + 1
    rows_per = math.ceil(side / math.ceil(max(n, 2) ** t))
    traces: list[RoundTrace] = []

    inputs = []
    for m, (a, b) in enumerate(zip(anchors, anchors[1:])):
        lo, hi = max(0, a - d), min(n2, b + d)
        for r0 in range(0, side, rows_per):
            r1 = min(side, r0 + rows_per)
            head = struct.pack("<6q", a, b, d, r0, r1, lo)
            inputs.append(KeyValue(pack_key("M", 0, m, r0, 0), head + struct.pack("<q", b - a) + a_[a:b] + b_[lo:hi]))

    def build(key, values):
        a, b, d_, r0, r1, lo = struct.unpack_from("<6q", values[0])
        (blen,) = struct.unpack_from("<q", values[0], 48)
        body = values[0][56:]
        rows = band_rows(body[:blen], body[blen:], lo, n2, a, b, d_, r0 - d_, r1 - d_)
        yield KeyValue(key, _rect(a, b, d_, r0, r1, 0, side, rows))

    def build_scratch(key, values):
        a, b, d_, r0, r1, _ = struct.unpack_from("<6q", values[0])
        return 8 * (r1 - r0) * (b - a + 2 * d_ + 1)

    chunks, tr = run_round(lambda kv: [kv], build, inputs, cfg, round_index=0, label="band-build", scratch=build_scratch)
    traces.append(tr)

    count = len(anchors) - 1
    level = 0
    s = _tile_size(d, rows_per)
    tiles = math.ceil(side / s)
    while count > 1:
        chunks, tr = run_round(
            _tile_mapper(level, count, s, tiles), _tile_reducer(s, side), chunks, cfg,
            round_index=len(traces), label=f"minplus-{level}",
        )
        traces.append(tr)
        chunks, tr = run_round(
            _combine_mapper(level, s, tiles), _combine_reducer, chunks, cfg,
            round_index=len(traces), label=f"combine-{level}",
        )
        traces.append(tr)
        count = (count + 1) // 2
        level += 1

    full = np.full((side, side), INF, dtype=np.int64)
    for kv in chunks:
        (_, _, _, r0, r1, c0, c1, _), data = _unrect(kv.value)
        full[r0:r1, c0:c1] = data
    value = int(full[d, d + n2 - n1])
    return (None if value >= INF else value), traces


def _tile_mapper(level, count, s, tiles):
    def mapper(kv):
        _, _, m, _, _ = unpack_key(kv.key)
        (a, b, d, r0, r1, c0, c1, _), data = _unrect(kv.value)
        pair = m // 2
        if m % 2 == 0 and m == count - 1:
            yield KeyValue(pack_key("P", level, pair, r0, c0), kv.value)
            return
        for i_tile in range(r0 // s, (r1 - 1) // s + 1):
            rs, re = max(r0, i_tile * s), min(r1, (i_tile + 1) * s)
            if m % 2 == 0:
                for k_tile in range(c0 // s, (c1 - 1) // s + 1):
                    cs, ce = max(c0, k_tile * s), min(c1, (k_tile + 1) * s)
                    sub = data[rs - r0 : re - r0, cs - c0 : ce - c0]
                    yield KeyValue(pack_key("T", level, pair, i_tile, k_tile), _rect(a, b, d, rs, re, cs, ce, sub, 0))
            else:
                # rows of the right factor index the split dimension
                for target in range(tiles):
                    sub = data[rs - r0 : re - r0]
                    yield KeyValue(pack_key("T", level, pair, target, i_tile), _rect(a, b, d, rs, re, c0, c1, sub, 1))

    return mapper


def _tile_reducer(s, side):
    def reducer(key, values):
        tag, _, _, i_tile, k_tile = unpack_key(key)
        if tag == "P":
            yield KeyValue(key, values[0])
            return
        r0, r1 = i_tile * s, min(side, (i_tile + 1) * s)
        k0, k1 = k_tile * s, min(side, (k_tile + 1) * s)
        left = np.full((r1 - r0, k1 - k0), INF, dtype=np.int64)
        right = np.full((k1 - k0, side), INF, dtype=np.int64)
        anchors = {}
        for raw in values:
            (a, b, d, rs, re, cs, ce, role), data = _unrect(raw)
            anchors[role] = (a, b, d)
            if role == 0:
                left[rs - r0 : re - r0, cs - k0 : ce - k0] = data
            else:
                right[rs - k0 : re - k0, cs:ce] = data
        if set(anchors) != {0, 1} or anchors[0][1] != anchors[1][0]:
            raise AnchorMismatchError(f"tile {unpack_key(key)} got inconsistent factors")
        part = _min_plus(left, right)
        yield KeyValue(key, _rect(anchors[0][0], anchors[1][1], anchors[0][2], r0, r1, 0, side, part, 0))

    return reducer


def _combine_mapper(level, s, tiles):
    def mapper(kv):
        tag, _, pair, i_tile, other = unpack_key(kv.key)
        if tag == "P":
            yield KeyValue(pack_key("M", level + 1, pair, i_tile, other), kv.value)
            return
        (a, b, d, r0, r1, c0, c1, _), data = _unrect(kv.value)
        for j_tile in range(tiles):
            cs, ce = j_tile * s, min(c1, (j_tile + 1) * s)
            yield KeyValue(pack_key("M", level + 1, pair, i_tile, j_tile), _rect(a, b, d, r0, r1, cs, ce, data[:, cs:ce]))

    return mapper


def _combine_reducer(key, values):
    head, best = _unrect(values[0])
    for raw in values[1:]:
        _, data = _unrect(raw)
        best = np.minimum(best, data)
    a, b, d, r0, r1, c0, c1, _ = head
    yield KeyValue(key, _rect(a, b, d, r0, r1, c0, c1, best))


# -- large delta ---------------------------------------------------------------------


def large_delta_params(n: int, delta: float, eps: float, eps_prime: float) -> tuple[int, int, int]:
    alpha = -math.log(delta) / math.log(n) if delta < 1 else 0.0
    beta = alpha + eps_prime / 2
    l = math.floor(n ** (1 - beta) + 1e-9)
    gamma = math.ceil(1 / (delta * eps) - 1e-12)
    return l, max(1, l // gamma), gamma


def mr_edit_large_delta(s1, s2, delta: float, eps: float, cfg: ClusterConfig) -> tuple[int, list[RoundTrace]]:
    """Two rounds: exact distances of useful window pairs, then banded window DP."""
    a_, b_ = as_bytes(s1), as_bytes(s2)
    if a_ == b_:
        return 0, []
    n = len(a_) + len(b_)
    if not a_ or not b_:
        return n, []
    l, g, gamma = large_delta_params(n, delta, eps, cfg.eps_prime)
    l = max(1, min(l, len(a_), len(b_)))
    g = min(g, l)
    w1, w2 = windows_explicit(len(a_), l, g, gamma), windows_explicit(len(b_), l, g, gamma)
    band = band_width(w1, w2, delta, g)
    allowed = band_mask(len(w1), len(w2), band)
    ii, jj = np.nonzero(allowed)
    groups = max(1, min(cfg.machines, len(ii)))
    bounds = np.linspace(0, len(ii), groups + 1).astype(int)

    inputs = []
    for gid in range(groups):
        pi, pj = ii[bounds[gid] : bounds[gid + 1]], jj[bounds[gid] : bounds[gid + 1]]
        if not len(pi):
            continue
        x0, x1 = w1.starts[pi.min()], w1.starts[pi.max()] + l
        y0, y1 = w2.starts[pj.min()], w2.starts[pj.max()] + l
        head = struct.pack("<5q", len(pi), l, x0, y0, x1 - x0)
        body = np.concatenate([pi, pj]).astype(np.int64).tobytes() + a_[x0:x1] + b_[y0:y1]
        inputs.append(KeyValue(pack_key("G", gid), head + body))

    def pair_dists(key, values):
        k, l_, x0, y0, xlen = struct.unpack_from("<5q", values[0])
        idx = np.frombuffer(values[0], dtype=np.int64, offset=40, count=2 * k)
        pi, pj = idx[:k], idx[k:]
        raw = np.frombuffer(values[0], dtype=np.uint8, offset=40 + 16 * k)
        xs, ys = raw[:xlen], raw[xlen:]
        sx = (np.asarray(w1.starts)[pi] - x0)[:, None] + np.arange(l_)
        sy = (np.asarray(w2.starts)[pj] - y0)[:, None] + np.arange(l_)
        dist = batch_edit(xs[sx], ys[sy]).astype(np.int64)
        yield KeyValue(key, np.concatenate([pi, pj, dist]).tobytes())

    def pair_scratch(key, values):
        k, l_, *_ = struct.unpack_from("<5q", values[0])
        return 8 * k * (l_ + 1) * 2

    out, tr1 = run_round(lambda kv: [kv], pair_dists, inputs, cfg, round_index=0, label="window-pairs", scratch=pair_scratch)

    k1, k2 = len(w1), len(w2)
    hold = math.ceil(l / g) + 1

    def dp(key, values):
        table = np.full((k1, k2), INF, dtype=np.int64)
        for raw in values:
            arr = np.frombuffer(raw, dtype=np.int64).reshape(3, -1)
            table[arr[0], arr[1]] = arr[2]
        cost, _ = window_dp(w1, w2, table, allowed)
        yield KeyValue(key, struct.pack("<q", cost))

    # cost-only DP keeps the rows reachable by a match jump plus the band of distances
    out, tr2 = run_round(
        lambda kv: [KeyValue(pack_key("DP"), kv.value)], dp, out, cfg, round_index=1, label="window-dp",
        scratch=lambda key, values: 8 * hold * (k2 + 1),
    )
    return struct.unpack("<q", out[0].value)[0], [tr1, tr2]


# -- driver ---------------------------------------------------------------------------


def _mr_equal(a: bytes, b: bytes, cfg: ClusterConfig) -> tuple[bool, RoundTrace]:
    if len(a) != len(b):
        return False, RoundTrace(0, "equality")
    size = max(1, math.ceil(len(a) / cfg.machines))
    inputs = [
        KeyValue(pack_key("E", k), struct.pack("<q", size) + a[k : k + size] + b[k : k + size])
        for k in range(0, max(len(a), 1), size)
    ]

    def cmp(key, values):
        (m,) = struct.unpack_from("<q", values[0])
        body = values[0][8:]
        half = len(body) // 2
        yield KeyValue(key, b"\1" if body[:half] == body[half:] else b"\0")

    out, tr = run_round(lambda kv: [kv], cmp, inputs, cfg, round_index=0, label="equality")
    return all(kv.value == b"\1" for kv in out), tr


def delta_grid(n: int, eps: float) -> list[float]:
    grid, k = [], 0
    while True:
        d = (1 + eps / 3) ** k / n
        grid.append(min(1.0, d))
        if d >= 1:
            return grid
        k += 1


def mr_edit(s1, s2, eps: float, cfg: ClusterConfig | None = None) -> ApproxResult:
    """3+eps approximation from parallel distance guesses plus one combining round."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    a, b = as_bytes(s1), as_bytes(s2)
    n = max(len(a) + len(b), 2)
    cfg = cfg or ClusterConfig.for_input(n, eps=eps)
    subproblems: list[dict] = []

    same, tr = _mr_equal(a, b, cfg)
    subproblems.append({"delta": 0.0, "path": "equal", "cost": 0 if same else None, "accepted": same, "traces": [tr]})
    if not same:
        crit = n ** (-alpha_crit(cfg.x))
        grid = delta_grid(n, eps)
        small = [d for d in grid if d < crit]
        if small:
            dl = small[-1]
            cost, trs = mr_edit_small_delta(a, b, dl, cfg)
            ok = cost is not None and cost <= dl * n
            subproblems.append({"delta": dl, "path": "small", "cost": cost, "accepted": ok, "traces": trs})
        for dl in grid:
            if dl < crit:
                continue
            cost, trs = mr_edit_large_delta(a, b, dl, eps, cfg)
            ok = cost <= (3 + eps) * dl * n
            subproblems.append({"delta": dl, "path": "large", "cost": cost, "accepted": ok, "traces": trs})

    rounds = max(len(sp["traces"]) for sp in subproblems)
    final_inputs = [
        KeyValue(pack_key("R", k), struct.pack("<q", sp["cost"] if sp["accepted"] else -1))
        for k, sp in enumerate(subproblems)
    ]

    def pick(key, values):
        costs = [c for c in (struct.unpack("<q", v)[0] for v in values) if c >= 0]
        yield KeyValue(key, struct.pack("<q", min(costs) if costs else -1))

    out, final = run_round(
        lambda kv: [KeyValue(pack_key("min"), kv.value)], pick, final_inputs, cfg, round_index=rounds, label="combine"
    )
    best = struct.unpack("<q", out[0].value)[0]
    traces = [t for sp in subproblems for t in sp["traces"]] + [final]
    snapshot = {
        "rounds": rounds + 1,
        "max_machine_mem": max(t.max_mem for t in traces),
        "mem_cap": cfg.mem_per_machine,
        "machines": cfg.machines,
        "subproblems": [{k: v for k, v in sp.items() if k != "traces"} for sp in subproblems],
        "traces": [t.to_dict() for t in traces],
    }
    return ApproxResult(None if best < 0 else best, None, 3 + eps, snapshot, best < 0, 0, "mapreduce")
