import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapembed import (
    BinarySequence,
    EmbeddingPath,
    ReachFrontier,
    brute_force_reachable,
    check_embedding,
    compose_embeddings,
    embeddable_prefix,
    extract_embedding,
    frontier_step,
    rect_reachable,
)
from gapembed.engine import _window_or
from gapembed.errors import CompositionError, InputBoundsError, OracleSizeError

from conftest import binary_sequences


def naive_window_or(mask: int, step: int) -> int:
    out = 0
    for d in range(1, step + 1):
        out |= mask << d
    return out


@given(st.integers(0, (1 << 200) - 1), st.integers(1, 40))
def test_window_or_matches_naive(mask, step):
    assert _window_or(mask, step) == naive_window_or(mask, step)


def test_window_or_fragmented_fallback():
    # More than 48 runs pushes the doubling branch.
    mask = int("01" * 80, 2)
    for step in (2, 5, 17):
        assert _window_or(mask, step) == naive_window_or(mask, step)


def test_frontier_step_examples():
    empty = frontier_step(ReachFrontier(0, 0), (1 << 30) - 2, 3)
    assert empty.is_empty()

    forced = frontier_step(ReachFrontier(0, 1), (1 << 10) - 2, 1)
    assert forced.positions() == [1]

    X = BinarySequence.from_string("0110100110")
    out = frontier_step(ReachFrontier(0, 1), X.match_mask(1), 3)
    assert out.positions() == [2, 3]
    assert out.row == 1


def test_embeddable_trivial_cases():
    X = BinarySequence.from_string("000000")
    Y = BinarySequence.from_string("1")
    ok, frontier = embeddable_prefix(X, Y, 3, 0)
    assert ok and frontier.positions() == [0]
    ok, frontier = embeddable_prefix(X, Y, 3, 1)
    assert not ok and frontier.is_empty()
    with pytest.raises(InputBoundsError):
        embeddable_prefix(X, Y, 3, 2)


def test_extract_trivial_cases():
    X = BinarySequence.from_string("10")
    Y = BinarySequence.from_string("1")
    assert extract_embedding(X, Y, 2, 0).steps == ()
    path = extract_embedding(X, Y, 2, 1)
    assert path.steps == (1,)
    assert extract_embedding(BinarySequence.from_string("00"), Y, 2, 1) is None


def test_check_embedding_cases():
    X = BinarySequence.from_string("01")
    Y = BinarySequence.from_string("1")
    assert check_embedding(X, Y, EmbeddingPath((), 1))
    assert check_embedding(X, Y, EmbeddingPath((2,), 2))
    # gap 2 exceeds bound 1
    assert not check_embedding(X, Y, EmbeddingPath((2,), 1))
    # symbol mismatch
    assert not check_embedding(BinarySequence.from_string("00"), Y, EmbeddingPath((2,), 2))
    # non-increasing step sequences cannot even be constructed
    with pytest.raises(InputBoundsError):
        EmbeddingPath((2, 2), 3)


def test_compose_examples():
    identity = EmbeddingPath(tuple(range(1, 5)), 2)
    out = compose_embeddings(identity, identity)
    assert out.steps == identity.steps and out.gap_bound == 4

    p1 = EmbeddingPath((2, 4), 2)
    p2 = EmbeddingPath((1, 2, 4, 5), 2)
    out = compose_embeddings(p1, p2)
    assert out.steps == (2, 5) and out.gap_bound == 4

    with pytest.raises(CompositionError):
        compose_embeddings(EmbeddingPath((1, 2, 3), 2), EmbeddingPath((2, 4), 2))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_compose_random_triples(data):
    # Feasible Z->X then Y->Z paths compose to a valid Y->X path at bound m*m.
    rng = random.Random(data.draw(st.integers(0, 10**9)))
    m = data.draw(st.integers(1, 3))
    X = BinarySequence(rng.getrandbits(18), 18)
    Z = BinarySequence(rng.getrandbits(9), 9)
    p2 = extract_embedding(X, Z, m)
    if p2 is None:
        return
    Y = BinarySequence(rng.getrandbits(4), 4)
    p1 = extract_embedding(Z, Y, m)
    if p1 is None:
        return
    composed = compose_embeddings(p1, p2)
    assert composed.gap_bound == m * m
    assert check_embedding(X, Y, composed)


def test_brute_force_examples_and_guard():
    X = BinarySequence.from_string("11")
    Y = BinarySequence.from_string("11")
    assert brute_force_reachable(X, Y, 1, 0) == [{0}]
    assert brute_force_reachable(X, Y, 1, 2) == [{0}, {1}, {2}]
    with pytest.raises(OracleSizeError):
        brute_force_reachable(BinarySequence(0, 21), Y, 1, 1)
    with pytest.raises(OracleSizeError):
        brute_force_reachable(X, Y, 1, 11)


@settings(max_examples=150, deadline=None)
@given(
    binary_sequences(max_length=12),
    binary_sequences(max_length=6),
    st.integers(1, 3),
)
def test_oracle_equivalence(X, Y, m):
    L = min(len(Y), 5)
    reach = brute_force_reachable(X, Y, m, L)
    for row in range(L + 1):
        _, frontier = embeddable_prefix(X, Y, m, row)
        assert set(frontier.positions()) == reach[row]


@settings(max_examples=120, deadline=None)
@given(
    binary_sequences(min_length=1, max_length=14),
    binary_sequences(min_length=1, max_length=7),
    st.integers(1, 3),
)
def test_monotonicity(X, Y, m):
    L = len(Y)
    ok_m, _ = embeddable_prefix(X, Y, m, L)
    ok_m1, _ = embeddable_prefix(X, Y, m + 1, L)
    if ok_m:
        assert ok_m1
    if L >= 1:
        ok_shorter, _ = embeddable_prefix(X, Y, m, L - 1)
        if ok_m:
            assert ok_shorter


@settings(max_examples=80, deadline=None)
@given(
    binary_sequences(min_length=1, max_length=16),
    binary_sequences(min_length=1, max_length=8),
    st.integers(1, 4),
)
def test_frontier_slope_bound(X, Y, m):
    # Any reachable position p in row j satisfies j <= p <= j*m.
    for L in range(len(Y) + 1):
        _, frontier = embeddable_prefix(X, Y, m, L)
        for p in frontier.positions():
            assert L <= p <= L * m


@settings(max_examples=100, deadline=None)
@given(
    binary_sequences(min_length=1, max_length=14),
    binary_sequences(min_length=1, max_length=7),
    st.integers(1, 3),
)
def test_round_trip(X, Y, m):
    ok, _ = embeddable_prefix(X, Y, m)
    path = extract_embedding(X, Y, m)
    assert (path is not None) == ok
    if path is not None:
        assert check_embedding(X, Y, path)


def test_determinism():
    rng = random.Random(4)
    for _ in range(30):
        X = BinarySequence(rng.getrandbits(20), 20)
        Y = BinarySequence(rng.getrandbits(6), 6)
        first = extract_embedding(X, Y, 3)
        second = extract_embedding(X, Y, 3)
        assert first == second


def test_truncation_at_end_of_x():
    # Reachability past len(X) is false, not an error.
    X = BinarySequence.from_string("11")
    Y = BinarySequence.from_string("111")
    ok, frontier = embeddable_prefix(X, Y, 5, 3)
    assert not ok and frontier.is_empty()


def test_rect_reachable_clipping():
    X = BinarySequence.from_string("0110")
    Y = BinarySequence.from_string("11")
    # <0,0> -> <2,1> -> <3,2> inside x-range ]0,3]
    assert rect_reachable(X, Y, (0, 0), (3, 2), 2)
    # forbidding x=2 cuts the only route to <3,2> with step 1
    assert not rect_reachable(X, Y, (0, 0), (3, 2), 1, x_lo=3, x_hi=3)
    assert rect_reachable(X, Y, (1, 1), (1, 1), 3)
    assert not rect_reachable(X, Y, (2, 1), (1, 2), 3)


def test_frontier_json_shapes():
    _, frontier = embeddable_prefix(
        BinarySequence.from_string("10"), BinarySequence.from_string("1"), 2, 1
    )
    assert frontier.to_json() == {"row": 1, "positions": [1]}
    path = EmbeddingPath((1, 3), 2)
    assert path.to_json() == {"m": 2, "steps": [1, 3]}
