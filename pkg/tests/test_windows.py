import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_window_matching
from subquad.instances import gen_pair
from subquad.strings import edit_distance, validate_script
from subquad.windows import (
    MalformedMatchingError,
    WindowDistanceSource,
    WindowParameterError,
    band_mask,
    band_width,
    build_windows,
    exact_window_source,
    reconstruct_script,
    useful_pairs,
    window_dp,
    windows_explicit,
)


def test_explicit_example():
    assert windows_explicit(10, 5, 2).windows == [(1, 5), (3, 7), (5, 9)]


def test_single_window():
    w = windows_explicit(4, 4, 1)
    assert w.windows == [(1, 4)] and not w.degenerate


def test_degenerate_fallback():
    w = windows_explicit(3, 5, 1)
    assert w.degenerate and w.windows == [(1, 3)]


def test_bad_parameters():
    with pytest.raises(WindowParameterError):
        windows_explicit(10, 0, 1)
    with pytest.raises(WindowParameterError):
        windows_explicit(10, 3, 0)
    with pytest.raises(ValueError):
        build_windows(10, 0.5, 0)


def test_large_n_window_count():
    n = 2**14
    w = build_windows(n, 6 / 7, 4)
    # n**(1/7) = 4.0 exactly, so l = 4 and g = 1
    assert (w.l, w.g) == (4, 1)
    assert len(w) == (n - 4) // 1 + 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 60), st.integers(1, 12), st.integers(1, 6))
def test_window_set_invariants(n, l, g):
    w = windows_explicit(n, l, g)
    if w.degenerate:
        return
    assert all(e - s + 1 == l for s, e in w.windows)
    assert all(s == i * g + 1 for i, (s, _) in enumerate(w.windows))
    assert w.windows[-1][1] <= n and w.windows[-1][1] + g > n
    assert list(w.ends) == sorted(w.ends)


# -- the DP ---------------------------------------------------------------------------


def test_one_cell_recurrence():
    w = windows_explicit(6, 6, 6)
    for dval in (0, 5, 11, 12, 30):
        cost, _ = window_dp(w, w, [[dval]])
        assert cost == min(dval, 12)


def test_identical_strings_only_residue():
    s = b"ACGTACGTACGTAC"
    w = windows_explicit(len(s), 4, 2)
    src = exact_window_source(s, s, w, w)
    cost, matching = window_dp(w, w, src)
    assert cost == brute_window_matching(w, w, src.matrix) == 4
    # windows at 1, 5, 9 cover twelve characters; two per side are left over
    script = reconstruct_script(s, s, matching, w, w)
    assert validate_script(s, s, script)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 3),
    st.integers(1, 12),
    st.integers(1, 12),
    st.integers(0, 2**31),
)
def test_dp_matches_brute_force(l, g, k1, k2, seed):
    rng = np.random.default_rng(seed)
    n1, n2 = l + (k1 - 1) * g, l + (k2 - 1) * g
    w1, w2 = windows_explicit(n1, l, g), windows_explicit(n2, l, g)
    dist = rng.integers(0, 2 * l + 2, size=(len(w1), len(w2)))
    cost, matching = window_dp(w1, w2, dist)
    assert cost == brute_window_matching(w1, w2, dist)
    # the traced matching realises the cost
    used = sum(int(dist[i, j]) for i, j in matching)
    residue = n1 + n2 - len(matching) * 2 * l
    assert used + residue == cost


def test_eight_by_eight_fixture():
    rng = np.random.default_rng(8)
    w = windows_explicit(3 + 7 * 2, 3, 2)
    dist = rng.integers(0, 7, size=(8, 8))
    assert window_dp(w, w, WindowDistanceSource.from_matrix(dist))[0] == brute_window_matching(w, w, dist)


@settings(max_examples=60, deadline=None)
@given(st.integers(8, 60), st.integers(0, 12), st.integers(0, 10_000), st.integers(2, 6), st.integers(1, 3))
def test_cost_bounds_and_valid_script(n, ops, seed, l, g):
    s1, s2 = gen_pair(n, min(ops, n), seed)
    w1, w2 = windows_explicit(len(s1), l, g), windows_explicit(len(s2), l, g)
    if w1.degenerate or w2.degenerate:
        return
    cost, matching = window_dp(w1, w2, exact_window_source(s1, s2, w1, w2))
    assert cost >= edit_distance(s1, s2)
    script = reconstruct_script(s1, s2, matching, w1, w2)
    assert validate_script(s1, s2, script)
    assert len(script) <= cost


# -- reconstruction -------------------------------------------------------------------------


def test_full_cover_zero_script():
    s = b"abcdefgh"
    w = windows_explicit(8, 4, 4)
    assert len(reconstruct_script(s, s, [(0, 0), (1, 1)], w, w)) == 0


def test_empty_matching_forced():
    s1, s2 = b"abcdef", b"xyz"
    w1, w2 = windows_explicit(6, 3, 3), windows_explicit(3, 3, 3)
    script = reconstruct_script(s1, s2, [], w1, w2)
    assert len(script) == 9 and validate_script(s1, s2, script)


def test_one_matched_window_fixture():
    s1, s2 = b"xxabcdyy", b"zabedw"
    w1, w2 = windows_explicit(8, 4, 2), windows_explicit(6, 4, 1)
    script = reconstruct_script(s1, s2, [(1, 1)], w1, w2)
    assert validate_script(s1, s2, script)
    # 2 + 2 deletions, 1 + 1 insertions, one substitution inside the window
    assert len(script) == 7


@pytest.mark.parametrize("matching", [[(1, 1), (1, 2)], [(0, 3), (1, 2)], [(5, 0)], [(0, -1)]])
def test_malformed_matching(matching):
    w = windows_explicit(8, 4, 2)
    with pytest.raises(MalformedMatchingError):
        reconstruct_script(b"a" * 8, b"a" * 8, matching, w, w)


def test_wrong_strings_rejected():
    w = windows_explicit(8, 4, 2)
    with pytest.raises(MalformedMatchingError):
        reconstruct_script(b"a" * 7, b"a" * 8, [], w, w)


# -- useful pairs ----------------------------------------------------------------------------


def test_useful_all_and_diagonal():
    w = windows_explicit(20, 4, 2)
    k = len(w)
    assert len(useful_pairs(w, w, 1.0)) == k * k
    assert useful_pairs(w, w, 0.0) == [(i, i) for i in range(k)]


def test_useful_band_two_enumerated():
    w = windows_explicit(22, 4, 2)  # ten windows
    assert len(w) == 10
    # delta * 44 / 2 = 2 exactly
    pairs = useful_pairs(w, w, 2 / 22)
    assert band_width(w, w, 2 / 22) == 2
    want = [(i, j) for i in range(10) for j in range(10) if abs(i - j) <= 2]
    assert pairs == want and len(pairs) == 10 * 5 - 6


def test_useful_rejects_bad_delta():
    w = windows_explicit(10, 2, 1)
    with pytest.raises(ValueError):
        useful_pairs(w, w, 1.5)


@settings(max_examples=60, deadline=None)
@given(st.integers(16, 80), st.integers(0, 6), st.integers(0, 10_000), st.integers(2, 5))
def test_band_keeps_optimum_on_planted(n, ops, seed, l):
    s1, s2 = gen_pair(n, ops, seed)
    g = 1
    w1, w2 = windows_explicit(len(s1), l, g), windows_explicit(len(s2), l, g)
    if w1.degenerate or w2.degenerate:
        return
    total = len(s1) + len(s2)
    delta = max(edit_distance(s1, s2), 1) / total
    src = exact_window_source(s1, s2, w1, w2)
    full, _ = window_dp(w1, w2, src)
    mask = band_mask(len(w1), len(w2), band_width(w1, w2, delta, g))
    banded, _ = window_dp(w1, w2, src, allowed=mask)
    assert banded == full
