"""Exact edit distance, the diagonal-band bounded algorithm, and edit scripts.

Strings are handled as byte sequences. ``str`` inputs are accepted everywhere
and encoded as latin-1, so every code point below 256 maps to one byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

INSERT = "insert"
DELETE = "delete"
SUBSTITUTE = "substitute"

_KINDS = (INSERT, DELETE, SUBSTITUTE)


class MalformedScriptError(ValueError):
    pass


def as_bytes(s: bytes | bytearray | str | Sequence[int]) -> bytes:
    if isinstance(s, bytes):
        return s
    if isinstance(s, str):
        return s.encode("latin-1")
    return bytes(s)


def _as_char(ch: int | str | bytes) -> int:
    if isinstance(ch, int):
        return ch
    b = as_bytes(ch)
    if len(b) != 1:
        raise ValueError(f"expected a single symbol, got {ch!r}")
    return b[0]


@dataclass(frozen=True)
class EditOp:
    kind: str
    position: int
    char: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if (self.kind == DELETE) != (self.char is None):
            raise ValueError("delete carries no symbol; insert/substitute need one")


def Insert(position: int, char: int | str | bytes) -> EditOp:
    return EditOp(INSERT, position, _as_char(char))


def Delete(position: int) -> EditOp:
    return EditOp(DELETE, position)


def Substitute(position: int, char: int | str | bytes) -> EditOp:
    return EditOp(SUBSTITUTE, position, _as_char(char))


@dataclass
class TransformationScript:
    ops: list[EditOp] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[EditOp]:
        return iter(self.ops)

    def extend(self, other: "TransformationScript | Sequence[EditOp]") -> None:
        self.ops.extend(other)


def _ops(script) -> Sequence[EditOp]:
    return script.ops if isinstance(script, TransformationScript) else script


def apply_script(s, script) -> bytes:
    """Apply ``script`` to ``s`` op by op; positions index the current string."""
    buf = bytearray(as_bytes(s))
    for k, op in enumerate(_ops(script)):
        p = op.position
        if op.kind == INSERT:
            if not 0 <= p <= len(buf):
                raise MalformedScriptError(f"op {k}: insert at {p} outside [0, {len(buf)}]")
            buf.insert(p, op.char)
        else:
            if not 0 <= p < len(buf):
                raise MalformedScriptError(f"op {k}: {op.kind} at {p} outside [0, {len(buf)})")
            if op.kind == DELETE:
                del buf[p]
            else:
                buf[p] = op.char
    return bytes(buf)


def validate_script(s1, s2, script) -> bool:
    try:
        return apply_script(s1, script) == as_bytes(s2)
    except MalformedScriptError:
        return False


# -- dynamic programming -------------------------------------------------------


def _codes(s) -> np.ndarray:
    return np.frombuffer(as_bytes(s), dtype=np.uint8)


def _next_row(prev: np.ndarray, ch: int, b: np.ndarray, first: int) -> np.ndarray:
    # row[j] = min_k<=j (tmp[k] + j - k) resolves the left-neighbour dependency
    tmp = np.empty_like(prev)
    tmp[0] = first
    np.minimum(prev[1:] + 1, prev[:-1] + (b != ch), out=tmp[1:])
    idx = np.arange(prev.shape[0], dtype=prev.dtype)
    return np.minimum.accumulate(tmp - idx) + idx


def dp_table(s1, s2) -> np.ndarray:
    """Full (|s1|+1) x (|s2|+1) table of prefix distances."""
    a, b = _codes(s1), _codes(s2)
    table = np.empty((len(a) + 1, len(b) + 1), dtype=np.int32)
    table[0] = np.arange(len(b) + 1)
    for i in range(1, len(a) + 1):
        table[i] = _next_row(table[i - 1], a[i - 1], b, i)
    return table


def edit_distance(s1, s2) -> int:
    a, b = _codes(s1), _codes(s2)
    if len(a) < len(b):
        a, b = b, a
    row = np.arange(len(b) + 1, dtype=np.int64)
    for i in range(1, len(a) + 1):
        row = _next_row(row, a[i - 1], b, i)
    return int(row[-1])


def script_from_steps(steps: Sequence[str], b: bytes) -> TransformationScript:
    # steps run left to right; the intermediate string's cursor equals the
    # number of target symbols already produced
    ops = []
    j = 0
    for step in steps:
        if step == "M":
            j += 1
        elif step == "S":
            ops.append(EditOp(SUBSTITUTE, j, b[j]))
            j += 1
        elif step == "D":
            ops.append(EditOp(DELETE, j))
        else:
            ops.append(EditOp(INSERT, j, b[j]))
            j += 1
    return TransformationScript(ops)


def edit_steps(s1, s2) -> tuple[int, list[str]]:
    """Distance plus an optimal alignment as a left-to-right list of M/S/D/I steps."""
    a, b = as_bytes(s1), as_bytes(s2)
    table = dp_table(a, b)
    i, j = len(a), len(b)
    steps = []
    while i or j:
        here = table[i, j]
        if i and j and a[i - 1] == b[j - 1] and table[i - 1, j - 1] == here:
            steps.append("M")
            i, j = i - 1, j - 1
        elif i and j and table[i - 1, j - 1] + 1 == here:
            steps.append("S")
            i, j = i - 1, j - 1
        elif i and table[i - 1, j] + 1 == here:
            steps.append("D")
            i -= 1
        else:
            steps.append("I")
            j -= 1
    steps.reverse()
    return int(table[-1, -1]), steps


def edit_exact(s1, s2) -> tuple[int, TransformationScript]:
    d, steps = edit_steps(s1, s2)
    return d, script_from_steps(steps, as_bytes(s2))


def batch_edit(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise edit distances between two stacks of equal-length strings.

    ``x`` has shape (k, la) and ``y`` shape (k, lb); returns shape (k,).
    """
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    k, la = x.shape
    lb = y.shape[1]
    idx = np.arange(lb + 1, dtype=np.int32)
    row = np.broadcast_to(idx, (k, lb + 1)).copy()
    tmp = np.empty_like(row)
    for i in range(1, la + 1):
        tmp[:, 0] = i
        np.minimum(row[:, 1:] + 1, row[:, :-1] + (y != x[:, i - 1 : i]), out=tmp[:, 1:])
        row = np.minimum.accumulate(tmp - idx, axis=1) + idx
    return row[:, lb].copy()


# -- furthest-reaching diagonals ------------------------------------------------


def _furthest_reaching(a: bytes, b: bytes, d_max: int):
    """Per-edit-count maps from diagonal (j - i) to the furthest reachable row.

    Returns the list of maps and the distance, or ``None`` for the distance when
    it exceeds ``d_max``.
    """
    n, m = len(a), len(b)
    target = m - n

    def slide(i: int, k: int) -> int:
        j = i + k
        while i < n and j < m and a[i] == b[j]:
            i += 1
            j += 1
        return i

    levels = [{0: slide(0, 0)}]
    if levels[0].get(target) == n:
        return levels, 0
    if abs(target) > d_max:
        return levels, None
    for e in range(1, d_max + 1):
        prev = levels[-1]
        cur = {}
        for k in range(max(-e, -n), min(e, m) + 1):
            best = -1
            if k in prev:
                best = prev[k] + 1
            if k - 1 in prev and prev[k - 1] > best:
                best = prev[k - 1]
            if k + 1 in prev and prev[k + 1] + 1 > best:
                best = prev[k + 1] + 1
            if best < 0:
                continue
            cur[k] = slide(min(best, n, m - k), k)
        levels.append(cur)
        if cur.get(target, -1) >= n:
            return levels, e
    return levels, None


def edit_bounded(s1, s2, d_max: int) -> int | None:
    """Exact distance if it is at most ``d_max``, else ``None``.

    Suffix extension is a direct symbol scan, so the worst case is O(n * d_max)
    rather than O(n + d_max**2).
    """
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    _, d = _furthest_reaching(as_bytes(s1), as_bytes(s2), d_max)
    return d


def edit_bounded_script(s1, s2, d_max: int) -> tuple[int, TransformationScript] | None:
    """Like :func:`edit_bounded`, also returning an optimal script."""
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    a, b = as_bytes(s1), as_bytes(s2)
    levels, d = _furthest_reaching(a, b, d_max)
    if d is None:
        return None

    def within(i: int, j: int, e: int) -> bool:
        # prefix distance at (i, j) is <= e iff i is no further than the
        # furthest reaching point of its diagonal
        if e < 0:
            return False
        reach = levels[min(e, d)].get(j - i)
        return reach is not None and i <= reach

    i, j, c = len(a), len(b), d
    steps = []
    while i or j:
        if i and j and a[i - 1] == b[j - 1] and within(i - 1, j - 1, c):
            steps.append("M")
            i, j = i - 1, j - 1
        elif i and j and within(i - 1, j - 1, c - 1):
            steps.append("S")
            i, j, c = i - 1, j - 1, c - 1
        elif i and within(i - 1, j, c - 1):
            steps.append("D")
            i, c = i - 1, c - 1
        else:
            steps.append("I")
            j, c = j - 1, c - 1
    steps.reverse()
    return d, script_from_steps(steps, b)
