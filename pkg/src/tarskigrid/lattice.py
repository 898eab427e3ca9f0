"""Integer-grid lattice primitives.

Points are plain tuples of ints with 1-based coordinate values, boxes are
products of closed integer intervals, and sign vectors are tuples over
{-1, 0, +1}. All arithmetic is exact integer arithmetic on immutable values;
everything here is safe to share between threads.

Coordinate *values* are 1-based (a full grid has ``lo = (1, ..., 1)``), but
dimension *indices* in this API are 0-based like any other Python sequence
index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import UsageError

Point = tuple  # tuple[int, ...]
SignVector = tuple  # tuple[int, ...] over {-1, 0, +1}

# Side lengths beyond 2**40 could push index arithmetic past 64 bits in a
# fixed-width port of this code, so boxes refuse them outright.
MAX_SIDE = 1 << 40


def sgn(d: int) -> int:
    """Exact three-valued sign of an integer."""
    return (d > 0) - (d < 0)


def _check_same_dim(a: Point, b: Point) -> None:
    if len(a) != len(b):
        raise UsageError(f"dimension mismatch: {len(a)} vs {len(b)}")


def leq(a: Point, b: Point) -> bool:
    """Componentwise partial order: a ⪯ b iff a_i <= b_i for every i.

    This is only a partial order; ``leq(a, b)`` and ``leq(b, a)`` may both be
    false for incomparable points.
    """
    _check_same_dim(a, b)
    return all(x <= y for x, y in zip(a, b))


def lub(points: Iterable[Point]) -> Point:
    """Least upper bound (componentwise maximum) of a nonempty set of points."""
    it = iter(points)
    try:
        first = next(it)
    except StopIteration:
        raise UsageError("lub of empty set (callers must supply a seed element)")
    out = list(first)
    for p in it:
        _check_same_dim(first, p)
        for i, v in enumerate(p):
            if v > out[i]:
                out[i] = v
    return tuple(out)


def glb(points: Iterable[Point]) -> Point:
    """Greatest lower bound (componentwise minimum) of a nonempty set of points."""
    it = iter(points)
    try:
        first = next(it)
    except StopIteration:
        raise UsageError("glb of empty set (callers must supply a seed element)")
    out = list(first)
    for p in it:
        _check_same_dim(first, p)
        for i, v in enumerate(p):
            if v < out[i]:
                out[i] = v
    return tuple(out)


def insert_coord(p: Point, dim: int, value: int) -> Point:
    return p[:dim] + (value,) + p[dim:]


def drop_coord(p: Point, dim: int) -> Point:
    return p[:dim] + p[dim + 1 :]


def is_sign_vector(v) -> bool:
    return isinstance(v, tuple) and all(s in (-1, 0, 1) for s in v)


def uniform_nonneg(v: SignVector) -> bool:
    """True iff every sign is >= 0."""
    return all(s >= 0 for s in v)


def uniform_nonpos(v: SignVector) -> bool:
    """True iff every sign is <= 0."""
    return all(s <= 0 for s in v)


def is_uniform(v: SignVector) -> bool:
    return uniform_nonneg(v) or uniform_nonpos(v)


@dataclass(frozen=True)
class Box:
    """A product of integer intervals ``[lo_i, hi_i]``; every interval nonempty."""

    lo: Point
    hi: Point

    def __post_init__(self):
        _check_same_dim(self.lo, self.hi)
        for i, (a, b) in enumerate(zip(self.lo, self.hi)):
            if a > b:
                raise UsageError(f"empty interval in dimension {i}: [{a}, {b}]")
            if b - a + 1 > MAX_SIDE:
                raise UsageError(f"side {b - a + 1} exceeds cap {MAX_SIDE}")

    @classmethod
    def grid(cls, n: int, k: int) -> "Box":
        """The full k-dimensional grid {1, ..., n}^k."""
        if n < 1 or k < 0:
            raise UsageError(f"grid needs n >= 1, k >= 0, got n={n}, k={k}")
        return cls((1,) * k, (n,) * k)

    @classmethod
    def from_sides(cls, sides) -> "Box":
        sides = tuple(sides)
        if any(s < 1 for s in sides):
            raise UsageError(f"sides must be positive, got {sides}")
        return cls((1,) * len(sides), sides)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def side(self, i: int) -> int:
        return self.hi[i] - self.lo[i] + 1

    @property
    def sides(self) -> Point:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> int:
        v = 1
        for s in self.sides:
            v *= s
        return v

    def contains(self, p: Point) -> bool:
        return len(p) == self.dim and all(
            a <= x <= b for x, a, b in zip(p, self.lo, self.hi)
        )

    def contains_box(self, other: "Box") -> bool:
        return (
            other.dim == self.dim
            and leq(self.lo, other.lo)
            and leq(other.hi, self.hi)
        )

    def without_dim(self, i: int) -> "Box":
        if not 0 <= i < self.dim:
            raise UsageError(f"dimension {i} out of range for {self.dim}-dim box")
        return Box(drop_coord(self.lo, i), drop_coord(self.hi, i))

    def prefix(self, a: int) -> "Box":
        return Box(self.lo[:a], self.hi[:a])

    def suffix(self, a: int) -> "Box":
        return Box(self.lo[a:], self.hi[a:])

    def index_of(self, p: Point) -> int:
        """Row-major rank of ``p``: the last coordinate varies fastest."""
        if not self.contains(p):
            raise UsageError(f"point {p} outside box")
        idx = 0
        for x, a, s in zip(p, self.lo, self.sides):
            idx = idx * s + (x - a)
        return idx


def enumerate_box(box: Box) -> Iterator[Point]:
    """Yield every point of ``box`` exactly once in row-major order.

    The LAST coordinate varies fastest, matching ``Box.index_of``.
    A 0-dimensional box yields the single empty tuple.
    """
    k = box.dim
    if k == 0:
        yield ()
        return
    cur = list(box.lo)
    lo, hi = box.lo, box.hi
    while True:
        yield tuple(cur)
        d = k - 1
        while d >= 0 and cur[d] == hi[d]:
            cur[d] = lo[d]
            d -= 1
        if d < 0:
            return
        cur[d] += 1
