"""Counter-based random streams for reproducible Monte Carlo runs.

Every draw is a pure function of (seed, stream coordinates): the Philox-4x64
generator is keyed by the 64-bit seed and positioned by a 256-bit counter
whose upper three words hold the coordinates.  Identical inputs give
identical bits on every platform and under any parallel schedule.
"""

from __future__ import annotations

import numpy as np

RNG_ID = "numpy-philox4x64-10"

_MASK64 = (1 << 64) - 1


def stream_bytes(seed: int, coords: tuple[int, int, int], nbytes: int) -> bytes:
    """Deterministic bytes for one stream; coords index disjoint blocks."""
    c1, c2, c3 = (c & _MASK64 for c in coords)
    bitgen = np.random.Philox(counter=[0, c1, c2, c3], key=[seed & _MASK64, 0])
    return np.random.Generator(bitgen).bytes(nbytes)


def stream_bits(seed: int, coords: tuple[int, int, int], nbits: int) -> int:
    """Deterministic nonnegative int with `nbits` uniform bits."""
    if nbits <= 0:
        return 0
    raw = stream_bytes(seed, coords, (nbits + 7) // 8)
    return int.from_bytes(raw, "little") & ((1 << nbits) - 1)
