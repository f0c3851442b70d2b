"""Base-level combinatorial structures of one hierarchy level over {0,1} sequences.

Level-1 semantics throughout this module:

* a wall of a sequence is a right-closed interval ]i, i+l] with m <= l < 2m on
  which the sequence is constant, of rank 2m;
* there are no traps;
* every point is strongly clean in all one-dimensional senses, every point is
  upper-right trap-clean, and a point <i,j> is lower-left trap-clean iff
  X(i) = Y(j) (the origin row/column, where a symbol is undefined, counts as
  clean).

Intervals follow the right-closed convention ]a, b] with a >= -1; a closed
interval [a, b] is marked by the `closed` flag.  Containment and intersection
use real-line semantics, so ]i, i+l] lies inside [u, v] iff u <= i and
i+l <= v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Literal, Optional, Sequence

from .engine import rect_reachable
from .errors import InputBoundsError, StructureError
from .sequences import BinarySequence

Point = tuple[int, int]
Openness = Literal["closed", "left-open", "bottom-open"]


@dataclass(frozen=True)
class Interval:
    """Interval with endpoints on the integer grid; right-closed unless `closed`."""

    left: int
    right: int
    closed: bool = False

    def __post_init__(self):
        if self.left < -1:
            raise InputBoundsError("interval left end must be >= -1")
        if self.right < self.left:
            raise InputBoundsError("interval must satisfy left <= right")

    @property
    def size(self) -> int:
        return self.right - self.left

    def integers(self) -> range:
        """Integer points of the interval."""
        start = self.left if self.closed else self.left + 1
        return range(start, self.right + 1)

    def intersects(self, other: "Interval") -> bool:
        lo, lo_open = max(
            (self.left, not self.closed), (other.left, not other.closed)
        )
        hi = min(self.right, other.right)
        return lo < hi or (lo == hi and not lo_open)

    def contains_interval(self, other: "Interval") -> bool:
        if other.right > self.right:
            return False
        if self.closed or not other.closed:
            return self.left <= other.left
        return self.left < other.left

    def contains_point(self, x) -> bool:
        if self.closed:
            return self.left <= x <= self.right
        return self.left < x <= self.right


@dataclass(frozen=True)
class WallValue:
    """A wall or barrier value: right-closed body plus rank."""

    body: Interval
    rank: Rational
    orientation: Literal["v", "h"] = "v"
    kind: Literal["base-run", "emerging", "compound"] = "base-run"

    def __post_init__(self):
        if self.body.closed:
            raise InputBoundsError("wall bodies are right-closed intervals")

    @property
    def size(self) -> int:
        return self.body.size

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation,
            "left": self.body.left,
            "right": self.body.right,
            "rank": self.rank if isinstance(self.rank, int) else float(self.rank),
            "kind": self.kind,
        }


@dataclass(frozen=True)
class CleannessReport:
    """Level-1 cleanness flags of a grid point."""

    point: Point
    lower_left_trap_clean: bool
    upper_right_trap_clean: bool
    x_left_clean: bool
    x_right_clean: bool
    y_left_clean: bool
    y_right_clean: bool

    @property
    def one_dim_clean(self) -> bool:
        return (
            self.x_left_clean
            and self.x_right_clean
            and self.y_left_clean
            and self.y_right_clean
        )


@dataclass(frozen=True)
class Hole:
    """An interval of one sequence through which a wall of the other is crossed."""

    interval: Interval
    wall: WallValue
    entry: Point
    exit: Point


def level1_cleanness(X: BinarySequence, Y: BinarySequence, point: Point) -> CleannessReport:
    """Cleanness report of a point at level 1.

    One-dimensional cleanness and upper-right trap-cleanness always hold;
    lower-left trap-cleanness means the point's symbols agree.  Points on the
    axes (coordinate 0) have no symbol and count as trap-clean.
    """
    i, j = point
    if i == 0 or j == 0:
        ll = True
    else:
        ll = X.symbol(i) == Y.symbol(j)
    return CleannessReport(point, ll, True, True, True, True, True)


def find_walls(
    seq: BinarySequence, m: int, orientation: Literal["v", "h"] = "v"
) -> list[WallValue]:
    """Every wall value of the sequence: all constant right-closed intervals
    ]i, i+l] with m <= l < 2m, rank 2m, sorted by (left endpoint, size).

    All qualifying sub-intervals are listed, not only maximal runs; canonical
    covers come from `spanning_sequence`.
    """
    if m < 1:
        raise InputBoundsError("m must be >= 1")
    n = len(seq)
    walls = []
    run_start = 1
    for pos in range(1, n + 2):
        if pos <= n and pos > 1 and seq.symbol(pos) == seq.symbol(pos - 1):
            continue
        if pos > 1:
            run_len = pos - run_start
            for l in range(m, min(2 * m - 1, run_len) + 1):
                for i in range(run_start - 1, pos - 1 - l + 1):
                    walls.append(
                        WallValue(Interval(i, i + l), 2 * m, orientation, "base-run")
                    )
        run_start = pos
    walls.sort(key=lambda w: (w.body.left, w.size))
    return walls


def is_external(interval: Interval, walls: Sequence[WallValue]) -> bool:
    """True iff the interval intersects no wall body."""
    return not any(interval.intersects(w.body) for w in walls)


def _adjacent_external(
    wall: WallValue, walls: Sequence[WallValue], length: Optional[int]
) -> tuple[Optional[Interval], Optional[Interval], bool]:
    """Maximal external intervals flanking a wall body (None where another
    wall straddles the body's end, leaving no adjacent external interval)
    plus a flag marking an unbounded right flank."""
    a, b = wall.body.left, wall.body.right
    left_cap = -1
    right_cap = length
    left = right = None
    blocked_left = blocked_right = False
    for w in walls:
        c, d = w.body.left, w.body.right
        if c < a < d:
            blocked_left = True
        elif d <= a:
            left_cap = max(left_cap, d)
        if c < b < d:
            blocked_right = True
        elif c >= b:
            right_cap = c if right_cap is None else min(right_cap, c)
    if not blocked_left:
        left = Interval(left_cap, a)
    right_unbounded = not blocked_right and right_cap is None
    if not blocked_right and right_cap is not None:
        right = Interval(b, max(right_cap, b))
    return left, right, right_unbounded


def find_dominant_walls(
    walls: Sequence[WallValue], delta, length: Optional[int] = None
) -> list[WallValue]:
    """Walls surrounded by external intervals of size >= delta (or at the
    start of the half-line).

    With `length` given, the right flank must show size >= delta inside the
    visible window; without it the line is treated as unbounded, so a flank
    with no wall beyond it qualifies.  Every returned wall contains all walls
    intersecting it; that consequence of the definition is asserted.
    """
    dominant = []
    for w in walls:
        left, right, right_unbounded = _adjacent_external(w, walls, length)
        if left is None or (right is None and not right_unbounded):
            continue
        if (left.size >= delta or left.left == -1) and (
            right_unbounded or right.size >= delta
        ):
            dominant.append(w)
    for w in dominant:
        for other in walls:
            if w.body.intersects(other.body):
                assert w.body.contains_interval(other.body), (
                    f"dominant wall {w.body} does not contain intersecting {other.body}"
                )
    return dominant


def spanning_sequence(
    interval: Interval, walls: Sequence[WallValue], seq: BinarySequence, m: int
) -> list[WallValue]:
    """Cover `interval` by disjoint size-m walls separated by hops.

    Requires the interval to begin and end with a size-m wall (the shape an
    interval surrounded by maximal external intervals necessarily has).  The
    cover starts with the wall at the left end and repeatedly takes the
    closest size-m wall that stays disjoint from its predecessor and at
    distance >= m from the right end, then closes with the wall at the right
    end.  Gaps between consecutive chosen walls contain no wall.
    """
    A, B = interval.left, interval.right
    if interval.size < m:
        raise StructureError(f"interval {interval} shorter than m={m}")
    bodies = {(w.body.left, w.body.right) for w in walls}

    def wall_at(i: int) -> bool:
        return (i, i + m) in bodies

    if not wall_at(A):
        raise StructureError(f"no size-{m} wall at the left end of {interval}")
    if not wall_at(B - m):
        raise StructureError(f"no size-{m} wall at the right end of {interval}")
    if interval.size < 2 * m:
        if not seq.constant_on(A, B):
            raise StructureError(f"short interval {interval} is not itself a wall")
        return [WallValue(Interval(A, B), 2 * m, walls[0].orientation if walls else "v")]

    orientation = walls[0].orientation if walls else "v"
    chosen = [WallValue(Interval(A, A + m), 2 * m, orientation)]
    end = A + m
    while True:
        nxt = None
        for t in range(end, B - 2 * m + 1):
            if wall_at(t):
                nxt = t
                break
        if nxt is None:
            break
        chosen.append(WallValue(Interval(nxt, nxt + m), 2 * m, orientation))
        end = nxt + m
    chosen.append(WallValue(Interval(B - m, B), 2 * m, orientation))
    return chosen


def _projection_contains_wall(lo: int, hi: int, walls: Sequence[WallValue]) -> bool:
    # A right-closed body ]c, d] sits inside [lo, hi] iff lo <= c and d <= hi;
    # the left-open projection ]lo, hi] gives the same condition.
    return any(lo <= w.body.left and w.body.right <= hi for w in walls)


def hop_check(
    rect: tuple[Point, Point, Openness], X: BinarySequence, Y: BinarySequence, m: int
) -> bool:
    """Is the rectangle a hop at level 1?

    True iff its x-projection contains no vertical wall, its y-projection no
    horizontal wall, and both corners are clean in it.  There are no traps at
    this level.  Empty rectangles (left-open with zero width, bottom-open with
    zero height) are hops.
    """
    (u0, u1), (v0, v1), openness = rect
    if v0 < u0 or v1 < u1:
        raise InputBoundsError("rectangle corners must be ordered")
    if v0 > len(X) or v1 > len(Y):
        raise InputBoundsError("rectangle exceeds the sequences")
    if openness == "left-open" and u0 == v0:
        return True
    if openness == "bottom-open" and u1 == v1:
        return True
    if _projection_contains_wall(u0, v0, find_walls(X, m, "v")):
        return False
    if _projection_contains_wall(u1, v1, find_walls(Y, m, "h")):
        return False
    # Inner cleanness: the lower-left corner is automatic; the upper-right
    # corner needs matching symbols (axis points have no symbol and pass).
    return level1_cleanness(X, Y, (v0, v1)).lower_left_trap_clean


def slope_condition(u: Point, v: Point, sigma_x, sigma_y) -> bool:
    """Does some real point v' in the half-open unit box below-left of v
    satisfy sigma_x <= slope(u, v') <= 1/sigma_y?

    Exact rational test: over the box ]v0-1, v0] x ]v1-1, v1] the achievable
    slopes form the open interval between (v1-1-u1)/(v0-u0) and
    (v1-u1)/(v0-1-u0) (unbounded when v0-1 = u0), and every slope strictly
    inside is attained.
    """
    (u0, u1), (v0, v1) = u, v
    if not (u0 < v0 and u1 < v1):
        raise InputBoundsError("slope condition requires u < v coordinatewise")
    sigma_x = Fraction(sigma_x)
    sigma_y = Fraction(sigma_y)
    if sigma_x <= 0 or sigma_y <= 0:
        raise InputBoundsError("slope bounds must be positive")
    s_max = 1 / sigma_y
    if sigma_x > s_max:
        return False
    lo = Fraction(v1 - 1 - u1, v0 - u0)
    if s_max <= lo:
        return False
    if v0 - 1 > u0:
        hi = Fraction(v1 - u1, v0 - 1 - u0)
        if sigma_x >= hi:
            return False
    return True


def construct_base_path(
    u: Point, v: Point, X: BinarySequence, Y: BinarySequence, m: int
) -> list[Point]:
    """Explicit path from u to v through a hop rectangle, one row per step.

    Preconditions (checked, failures name the clause): no vertical wall in the
    x-projection, no horizontal wall in the y-projection, matching corner
    symbols, and the slope condition with sigma_x = 1/2m, sigma_y = m.

    Row j is entered inside the window ]s_j, s_j + m] where the anchors s_j
    start from the all-minimal schedule s_j = m(j-1) and the tail is raised
    minimally so that the last window still reaches v; every increment lies in
    [1, 3m].  The returned list starts at u and ends at v.
    """
    (u0, u1), (v0, v1) = u, v
    if not (u0 < v0 and u1 < v1):
        raise InputBoundsError("construct_base_path requires u < v coordinatewise")
    a, b = v0 - u0, v1 - u1
    if _projection_contains_wall(u0, v0, find_walls(X, m, "v")):
        raise StructureError("vertical wall inside the x-projection")
    if _projection_contains_wall(u1, v1, find_walls(Y, m, "h")):
        raise StructureError("horizontal wall inside the y-projection")
    if X.symbol(v0) != Y.symbol(v1):
        raise StructureError("corner symbol mismatch: X(v0) != Y(v1)")
    if not slope_condition(u, v, Fraction(1, 2 * m), Fraction(m)):
        raise StructureError("slope condition fails for sigma_x=1/2m, sigma_y=m")
    # The slope condition pins m(b-1) < a <= 2mb.
    assert m * (b - 1) < a <= 2 * m * b

    anchors = [max(m * (j - 1), a - 2 * m * (b - j)) for j in range(1, b)]
    path = [u]
    for j, s in enumerate(anchors, start=1):
        assert s + m < a
        chosen = None
        for x in range(u0 + s + 1, u0 + s + m + 1):
            if X.symbol(x) == Y.symbol(u1 + j):
                chosen = x
                break
        if chosen is None:
            # A full window of identical mismatches would be a vertical wall.
            raise StructureError("no matching symbol in a step window")
        path.append((chosen, u1 + j))
    path.append(v)
    prev = u0
    for x, _ in path[1:]:
        assert 1 <= x - prev <= 3 * m, "increment outside [1, 3m]"
        prev = x
    return path


def find_fitting_hole(
    wall: WallValue,
    start_range: Interval,
    X: BinarySequence,
    Y: BinarySequence,
    slb,
    step_max: Optional[int] = None,
) -> Optional[Hole]:
    """First hole (smallest left endpoint, then smallest size) crossing `wall`.

    A hole through a vertical wall is an interval ]a, a+s] of the other axis
    such that the far corner of ]a, a+s] x [body] is reachable from the near
    one inside the rectangle, with s <= |body| / slb.  The graph step bound
    defaults to 3m derived from slb = 1/2m.
    """
    slb = Fraction(slb)
    if step_max is None:
        three_m = 3 / (2 * slb)
        if three_m.denominator != 1:
            raise InputBoundsError("cannot derive step bound from slb; pass step_max")
        step_max = int(three_m)
    body = wall.body
    max_size = int(Fraction(body.size) / slb)
    through_len = len(Y) if wall.orientation == "v" else len(X)
    for a in start_range.integers():
        if a < 0:
            continue
        for s in range(1, max_size + 1):
            if a + s > through_len:
                break
            if wall.orientation == "v":
                entry, exit_ = (body.left, a), (body.right, a + s)
                ok = rect_reachable(
                    X, Y, entry, exit_, step_max, x_lo=body.left, x_hi=body.right
                )
            else:
                entry, exit_ = (a, body.left), (a + s, body.right)
                ok = rect_reachable(X, Y, entry, exit_, step_max, x_lo=a + 1, x_hi=a + s)
            if ok:
                return Hole(Interval(a, a + s), wall, entry, exit_)
    return None
