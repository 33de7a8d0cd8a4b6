import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import recursive_edit
from subquad.strings import (
    Delete,
    Insert,
    MalformedScriptError,
    Substitute,
    TransformationScript,
    apply_script,
    batch_edit,
    dp_table,
    edit_bounded,
    edit_bounded_script,
    edit_distance,
    edit_exact,
    validate_script,
)

small = st.binary(max_size=20).map(lambda b: bytes(x % 4 + 97 for x in b))


def test_empty_pair():
    d, script = edit_exact("", "")
    assert d == 0 and len(script) == 0


def test_equal_strings():
    assert edit_exact("abc", "abc")[0] == 0


def test_kitten_sitting():
    # frozen from the recursive oracle
    assert recursive_edit(b"kitten", b"sitting") == 3
    d, script = edit_exact("kitten", "sitting")
    assert d == 3 and len(script) == 3
    assert validate_script("kitten", "sitting", script)


def test_bounded_examples():
    assert edit_bounded("abc", "abc", 0) == 0
    assert edit_bounded("abcd", "abed", 1) == 1
    assert edit_bounded("abc", "xyz", 1) is None
    assert edit_exact("abc", "xyz")[0] == 3


def test_bounded_rejects_negative():
    with pytest.raises(ValueError):
        edit_bounded("a", "b", -1)


def test_apply_examples():
    assert apply_script("ab", [Insert(2, "c")]) == b"abc"
    assert apply_script("abc", []) == b"abc"
    assert apply_script("abc", [Substitute(0, "x"), Delete(2)]) == b"xb"


@pytest.mark.parametrize(
    "ops",
    [[Insert(4, "z")], [Delete(3)], [Substitute(-1, "a")], [Delete(0), Delete(0), Delete(0), Delete(0)]],
)
def test_apply_out_of_bounds(ops):
    with pytest.raises(MalformedScriptError):
        apply_script("abc", ops)


def test_validate_examples():
    assert validate_script("a", "a", TransformationScript())
    assert validate_script("a", "b", [Substitute(0, "b")])
    assert not validate_script("a", "b", [])
    assert not validate_script("a", "b", [Delete(5)])


def test_dp_table_shape_and_edges():
    t = dp_table("ab", "xyz")
    assert t.shape == (3, 4)
    assert list(t[0]) == [0, 1, 2, 3] and list(t[:, 0]) == [0, 1, 2]


@settings(max_examples=300, deadline=None)
@given(small, small)
def test_exact_matches_recursive_oracle(a, b):
    d, script = edit_exact(a, b)
    assert d == recursive_edit(a, b) == edit_distance(a, b)
    assert len(script) == d
    assert validate_script(a, b, script)


@settings(max_examples=300, deadline=None)
@given(small, small, st.integers(0, 25))
def test_bounded_agrees_with_exact(a, b, d_max):
    exact = edit_distance(a, b)
    got = edit_bounded(a, b, d_max)
    assert got == (exact if exact <= d_max else None)
    scripted = edit_bounded_script(a, b, d_max)
    if exact <= d_max:
        assert scripted[0] == exact and len(scripted[1]) == exact
        assert validate_script(a, b, scripted[1])
    else:
        assert scripted is None


@settings(max_examples=100, deadline=None)
@given(small, small, small)
def test_metric_axioms(a, b, c):
    ab, bc, ac = edit_distance(a, b), edit_distance(b, c), edit_distance(a, c)
    assert ab == edit_distance(b, a)
    assert ac <= ab + bc
    assert (ab == 0) == (a == b)


@settings(max_examples=50, deadline=None)
@given(small, small)
def test_dp_table_row_steps(a, b):
    t = dp_table(a, b).astype(int)
    assert (np.abs(np.diff(t, axis=0)) <= 1).all()
    assert (np.abs(np.diff(t, axis=1)) <= 1).all()


def test_batch_edit_matches_scalar():
    rng = np.random.default_rng(3)
    x = rng.integers(0, 3, size=(40, 7), dtype=np.uint8)
    y = rng.integers(0, 3, size=(40, 5), dtype=np.uint8)
    got = batch_edit(x, y)
    want = [recursive_edit(bytes(p), bytes(q)) for p, q in zip(x, y)]
    assert got.tolist() == want


def test_str_and_bytes_agree():
    assert edit_exact("héllo", "hello")[0] == edit_exact("héllo".encode("latin-1"), b"hello")[0] == 1
