"""Shared strategies and helpers for the test suite."""

import random

from hypothesis import strategies as st

from gapembed import BinarySequence


@st.composite
def binary_sequences(draw, min_length=0, max_length=16):
    n = draw(st.integers(min_length, max_length))
    bits = draw(st.integers(0, (1 << n) - 1)) if n else 0
    return BinarySequence(bits, n)


def run_capped_sequence(rng: random.Random, n: int, max_run: int) -> BinarySequence:
    """Uniform-ish sequence whose constant runs never reach max_run + 1."""
    bits = 0
    prev = None
    run = 0
    for i in range(n):
        if run == max_run:
            sym = 1 - prev
        else:
            sym = rng.getrandbits(1)
        run = run + 1 if sym == prev else 1
        prev = sym
        bits |= sym << i
    return BinarySequence(bits, n)
